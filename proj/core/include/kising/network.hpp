// Copyright 2025 kising contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KISING_NETWORK_HPP_
#define KISING_NETWORK_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kising/tensor.hpp"

namespace kising {

inline constexpr int64_t kDefaultMemCapBytes = int64_t{8} << 30;  // 8 GiB

/// One shared index between two tensor legs. Tensors are addressed by their
/// position in the input list; legs by position within the tensor.
struct NetworkBond {
  int tensor_a;
  int leg_a;
  int tensor_b;
  int leg_b;
};

/// Contraction schedule: each step contracts the two named nodes over all
/// bonds currently between them. Initial nodes are 0..N-1; each step's
/// result becomes node N, N+1, ... in order.
using ContractionOrder = std::vector<std::pair<int, int>>;

/// Contracts the whole network. Legs not referenced by any bond stay open
/// and appear in the result ordered by (original tensor index, leg index)
/// as merging proceeds. A closed network yields a rank-0 tensor.
///
/// Without an explicit order, a greedy schedule is used: repeatedly contract
/// the bonded pair whose result has the fewest entries, ties broken by
/// smallest node indices. Any intermediate larger than mem_cap_bytes raises
/// ResourceLimitError.
Tensor contract_network(std::vector<Tensor> tensors,
                        const std::vector<NetworkBond>& bonds,
                        const std::optional<ContractionOrder>& order = std::nullopt,
                        int64_t mem_cap_bytes = kDefaultMemCapBytes);

}  // namespace kising

#endif  // KISING_NETWORK_HPP_
