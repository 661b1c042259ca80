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

#ifndef KISING_PEPO_HPP_
#define KISING_PEPO_HPP_

#include <memory>
#include <string>
#include <vector>

#include "kising/circuit.hpp"
#include "kising/lattice.hpp"
#include "kising/network.hpp"
#include "kising/pauli.hpp"
#include "kising/tensor.hpp"

namespace kising {

struct LayerStats {
  std::string kind;  // "rzz" or "rx"
  double max_discarded = 0.0;
  double sum_discarded = 0.0;
  double wall_seconds = 0.0;
};

struct EvolutionReport {
  std::vector<LayerStats> layers;
  std::vector<int64_t> final_bond_dims;

  double max_discarded() const {
    double mx = 0.0;
    for (const auto& l : layers) mx = std::max(mx, l.max_discarded);
    return mx;
  }
  double sum_discarded() const {
    double s = 0.0;
    for (const auto& l : layers) s += l.sum_discarded;
    return s;
  }
};

/// Heisenberg-picture operator as one tensor per lattice site: a physical
/// leg of dimension 4 (operator basis I, X, Y, Z) plus one virtual leg per
/// incident edge, with per-edge singular-value weights lambda and a global
/// log-magnitude accumulator. Site tensor legs are ordered [physical,
/// incident edges by ascending edge id].
class Pepo {
 public:
  /// Product operator for a single unit-coefficient Pauli string: every
  /// bond has dimension 1, every site holds its letter's basis vector.
  static Pepo init(std::shared_ptr<const Lattice> lattice, const PauliSum& obs);

  const Lattice& lattice() const { return *lattice_; }
  const Tensor& site_tensor(int site) const {
    return sites_[static_cast<size_t>(site)];
  }
  const std::vector<double>& bond_weights(int edge) const {
    return lambda_[static_cast<size_t>(edge)];
  }
  int64_t bond_dim(int edge) const {
    return static_cast<int64_t>(lambda_[static_cast<size_t>(edge)].size());
  }
  int64_t max_bond_dim() const;
  double log_scale() const { return log_scale_; }

  /// Conjugation by R_x(theta) on every site; bond dimensions unchanged.
  void apply_rx_layer(double theta);

  /// Simple-update conjugation by R_zz on a vertex-disjoint edge set,
  /// truncating each bond to chi (relative squared singular-value floor
  /// eps). Returns the discarded weight per edge, in input order.
  std::vector<double> apply_rzz_layer(std::span<const int> edge_ids, int64_t chi,
                                      double eps);

  /// Full Heisenberg evolution: trailing extra R_x first when present,
  /// then per step all R_zz layers followed by R_x.
  EvolutionReport evolve(const CircuitSpec& circuit, int64_t chi, double eps = 0.0);

  /// Closes every physical leg with <0|.|0> = (1,0,0,1), reinstates the
  /// bond weights and the accumulated scale, and contracts the remaining
  /// closed network exactly.
  double close_and_contract(int64_t mem_cap_bytes = kDefaultMemCapBytes) const;

  /// Versioned JSON checkpoint (resume/debug only).
  std::string checkpoint_json() const;
  static Pepo from_checkpoint_json(const std::string& text);

 private:
  Pepo() = default;
  void update_edge(int edge_id, int64_t chi, double eps, double* discarded);

  std::shared_ptr<const Lattice> lattice_;
  std::vector<Tensor> sites_;
  std::vector<std::vector<double>> lambda_;
  double log_scale_ = 0.0;
};

}  // namespace kising

#endif  // KISING_PEPO_HPP_
