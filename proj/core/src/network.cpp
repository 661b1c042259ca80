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

#include "kising/network.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace kising {

namespace {

struct Node {
  Tensor tensor;
  // bond id per leg, -1 for open legs
  std::vector<int> leg_bonds;
  bool alive = false;
};

struct State {
  std::vector<Node> nodes;
  // bond id -> the two (node, leg) endpoints, kept current as nodes merge
  std::vector<std::array<int, 4>> ends;  // {node_a, leg_a, node_b, leg_b}
  std::vector<bool> bond_alive;
  int64_t mem_cap;

  int64_t pair_result_entries(int na, int nb) const {
    int64_t entries = 1;
    const Node& a = nodes[na];
    const Node& b = nodes[nb];
    for (int l = 0; l < a.tensor.rank(); ++l) {
      const int bid = a.leg_bonds[l];
      const bool shared = bid >= 0 && bond_alive[bid] &&
                          ((ends[bid][0] == na && ends[bid][2] == nb) ||
                           (ends[bid][0] == nb && ends[bid][2] == na));
      if (!shared) entries *= a.tensor.dim(l);
    }
    for (int l = 0; l < b.tensor.rank(); ++l) {
      const int bid = b.leg_bonds[l];
      const bool shared = bid >= 0 && bond_alive[bid] &&
                          ((ends[bid][0] == na && ends[bid][2] == nb) ||
                           (ends[bid][0] == nb && ends[bid][2] == na));
      if (!shared) entries *= b.tensor.dim(l);
    }
    return entries;
  }

  // Contract nodes na, nb over all shared bonds; result appended as new node.
  int contract_pair(int na, int nb) {
    if (na == nb)
      throw std::invalid_argument("contract_network: self-contraction");
    Node& a = nodes[na];
    Node& b = nodes[nb];
    if (!a.alive || !b.alive)
      throw std::invalid_argument("contract_network: node already consumed");

    std::vector<std::pair<int, int>> pairs;
    for (int l = 0; l < a.tensor.rank(); ++l) {
      const int bid = a.leg_bonds[l];
      if (bid < 0 || !bond_alive[bid]) continue;
      const auto& e = ends[bid];
      if (e[0] == na && e[2] == nb)
        pairs.emplace_back(l, e[3]);
      else if (e[0] == nb && e[2] == na)
        pairs.emplace_back(l, e[1]);
    }

    const int64_t entries = pair_result_entries(na, nb);
    if (entries > mem_cap / static_cast<int64_t>(sizeof(double)))
      throw ResourceLimitError(
          "contract_network: intermediate of " + std::to_string(entries) +
          " entries exceeds the memory cap");

    Tensor result = contract(a.tensor, b.tensor, pairs);

    // Remaining legs of the result, in (a free legs, b free legs) order.
    std::vector<int> result_bonds;
    std::vector<bool> a_contracted(a.tensor.rank(), false),
        b_contracted(b.tensor.rank(), false);
    for (const auto& [la, lb] : pairs) {
      a_contracted[la] = true;
      b_contracted[lb] = true;
      const int bid = a.leg_bonds[la];
      bond_alive[bid] = false;
    }
    const int new_id = static_cast<int>(nodes.size());
    for (int l = 0; l < a.tensor.rank(); ++l)
      if (!a_contracted[l]) result_bonds.push_back(a.leg_bonds[l]);
    for (int l = 0; l < b.tensor.rank(); ++l)
      if (!b_contracted[l]) result_bonds.push_back(b.leg_bonds[l]);
    for (size_t l = 0; l < result_bonds.size(); ++l) {
      const int bid = result_bonds[l];
      if (bid < 0) continue;
      auto& e = ends[bid];
      if (e[0] == na || e[0] == nb) {
        e[0] = new_id;
        e[1] = static_cast<int>(l);
      } else {
        e[2] = new_id;
        e[3] = static_cast<int>(l);
      }
    }

    a.alive = false;
    b.alive = false;
    a.tensor = Tensor();
    b.tensor = Tensor();
    nodes.push_back(Node{std::move(result), std::move(result_bonds), true});
    return new_id;
  }
};

}  // namespace

Tensor contract_network(std::vector<Tensor> tensors,
                        const std::vector<NetworkBond>& bonds,
                        const std::optional<ContractionOrder>& order,
                        int64_t mem_cap_bytes) {
  if (tensors.empty())
    throw std::invalid_argument("contract_network: empty network");

  State st;
  st.mem_cap = mem_cap_bytes;
  st.nodes.reserve(tensors.size() * 2);
  for (auto& t : tensors) {
    Node n;
    n.leg_bonds.assign(t.rank(), -1);
    n.tensor = std::move(t);
    n.alive = true;
    st.nodes.push_back(std::move(n));
  }
  for (const auto& b : bonds) {
    const int bid = static_cast<int>(st.ends.size());
    auto check = [&](int tn, int leg) {
      if (tn < 0 || tn >= static_cast<int>(tensors.size()))
        throw std::invalid_argument("contract_network: bad tensor index");
      if (leg < 0 || leg >= st.nodes[tn].tensor.rank())
        throw std::invalid_argument("contract_network: bad leg index");
      if (st.nodes[tn].leg_bonds[leg] != -1)
        throw std::invalid_argument("contract_network: leg bonded twice");
    };
    check(b.tensor_a, b.leg_a);
    check(b.tensor_b, b.leg_b);
    if (b.tensor_a == b.tensor_b)
      throw std::invalid_argument("contract_network: self-bond unsupported");
    if (st.nodes[b.tensor_a].tensor.dim(b.leg_a) !=
        st.nodes[b.tensor_b].tensor.dim(b.leg_b))
      throw std::invalid_argument("contract_network: bond dimension mismatch");
    st.nodes[b.tensor_a].leg_bonds[b.leg_a] = bid;
    st.nodes[b.tensor_b].leg_bonds[b.leg_b] = bid;
    st.ends.push_back({b.tensor_a, b.leg_a, b.tensor_b, b.leg_b});
    st.bond_alive.push_back(true);
  }

  if (order.has_value()) {
    for (const auto& [i, j] : *order) st.contract_pair(i, j);
  } else {
    // Greedy: contract the bonded pair with the smallest result.
    for (;;) {
      int best_a = -1, best_b = -1;
      int64_t best_entries = std::numeric_limits<int64_t>::max();
      for (size_t bid = 0; bid < st.ends.size(); ++bid) {
        if (!st.bond_alive[bid]) continue;
        int na = st.ends[bid][0], nb = st.ends[bid][2];
        if (na > nb) std::swap(na, nb);
        const int64_t entries = st.pair_result_entries(na, nb);
        if (entries < best_entries ||
            (entries == best_entries &&
             (na < best_a || (na == best_a && nb < best_b)))) {
          best_entries = entries;
          best_a = na;
          best_b = nb;
        }
      }
      if (best_a < 0) break;
      st.contract_pair(best_a, best_b);
    }
  }

  // Combine whatever is left (disconnected components, open-leg pieces)
  // by outer products in index order.
  int acc = -1;
  for (int i = 0; i < static_cast<int>(st.nodes.size()); ++i) {
    if (!st.nodes[i].alive) continue;
    if (acc < 0) {
      acc = i;
      continue;
    }
    acc = st.contract_pair(acc, i);
  }
  return std::move(st.nodes[acc].tensor);
}

}  // namespace kising
