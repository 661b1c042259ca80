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

#ifndef KISING_LATTICE_HPP_
#define KISING_LATTICE_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kising/errors.hpp"

namespace kising {

struct LightCone;

/// Undirected degree-<=3 interaction graph with its edges partitioned into
/// vertex-disjoint gate layers. Immutable after construction; safe to share
/// across threads.
class Lattice {
 public:
  using Edge = std::pair<int, int>;  // stored with first < second

  /// Validates sites/edges (max degree 3, no duplicates or self-loops) and
  /// the layer partition; recomputes layers greedily when absent.
  Lattice(int num_sites, std::vector<Edge> edges,
          std::optional<std::vector<std::vector<int>>> layers = std::nullopt);

  int num_sites() const { return num_sites_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }
  const std::vector<std::vector<int>>& layers() const { return layers_; }
  const std::vector<int>& neighbors(int site) const {
    return adjacency_[static_cast<size_t>(site)];
  }
  const std::vector<int>& incident_edges(int site) const {
    return incident_[static_cast<size_t>(site)];
  }
  int degree(int site) const {
    return static_cast<int>(adjacency_[static_cast<size_t>(site)].size());
  }

  /// Sites within graph distance t of the support, sorted ascending.
  std::vector<int> ball(std::span<const int> support, int t) const;

  /// Induced subgraph on ball(support, t). to_parent[new_site] = old_site
  /// (sorted ascending, so relabeling is order-preserving).
  LightCone extract_lightcone(std::span<const int> support, int t) const;

  std::string to_json() const;
  static Lattice from_json(const std::string& text);
  static Lattice from_json_file(const std::string& path);

  /// The bundled 127-qubit heavy-hexagon instance. Validated at load time
  /// against the documented site-62 neighborhood facts; any mismatch is a
  /// fatal ConfigError.
  static Lattice ibm127();

  /// Heavy-hexagon patch of rows x cols hexagonal plaquettes, each bounded
  /// by 6 corner sites and 6 edge-bisecting sites. Deterministic layout:
  /// rows+1 horizontal chains of 4*cols+1 sites, bridged by rung sites at
  /// columns 0,4,8,... below even chains and 2,6,10,... below odd chains.
  /// A (1,1) patch is a single 12-site, 12-edge plaquette.
  static Lattice heavy_hex_patch(int rows, int cols);

 private:
  int num_sites_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> layers_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> incident_;
};

struct LightCone {
  Lattice lattice;
  std::vector<int> to_parent;
};

/// Greedy edge coloring with deterministic edge ordering; at most 4 layers
/// on heavy-hex graphs (no two degree-3 sites are adjacent).
std::vector<std::vector<int>> edge_layers(int num_sites,
                                          std::span<const Lattice::Edge> edges);

}  // namespace kising

#endif  // KISING_LATTICE_HPP_
