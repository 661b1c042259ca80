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

#include "kising/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#ifndef KISING_BUNDLED_DATA_DIR
#define KISING_BUNDLED_DATA_DIR ""
#endif

namespace kising {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace

std::vector<std::vector<int>> edge_layers(
    int num_sites, std::span<const Lattice::Edge> edges) {
  std::vector<std::vector<int>> site_edges(static_cast<size_t>(num_sites));
  for (size_t e = 0; e < edges.size(); ++e) {
    site_edges[static_cast<size_t>(edges[e].first)].push_back(static_cast<int>(e));
    site_edges[static_cast<size_t>(edges[e].second)].push_back(static_cast<int>(e));
  }
  std::vector<int> color(edges.size(), -1);
  int max_color = -1;
  for (size_t e = 0; e < edges.size(); ++e) {
    std::set<int> used;
    for (int site : {edges[e].first, edges[e].second})
      for (int other : site_edges[static_cast<size_t>(site)])
        if (color[static_cast<size_t>(other)] >= 0)
          used.insert(color[static_cast<size_t>(other)]);
    int c = 0;
    while (used.count(c)) ++c;
    color[e] = c;
    max_color = std::max(max_color, c);
  }
  std::vector<std::vector<int>> layers(static_cast<size_t>(max_color + 1));
  for (size_t e = 0; e < edges.size(); ++e)
    layers[static_cast<size_t>(color[e])].push_back(static_cast<int>(e));
  return layers;
}

Lattice::Lattice(int num_sites, std::vector<Edge> edges,
                 std::optional<std::vector<std::vector<int>>> layers)
    : num_sites_(num_sites), edges_(std::move(edges)) {
  require(num_sites_ > 0, "lattice: need at least one site");
  std::set<Edge> seen;
  for (auto& e : edges_) {
    if (e.first > e.second) std::swap(e.first, e.second);
    require(e.first >= 0 && e.second < num_sites_, "lattice: site out of range");
    require(e.first != e.second, "lattice: self-loop");
    require(seen.insert(e).second, "lattice: duplicate edge");
  }
  adjacency_.resize(static_cast<size_t>(num_sites_));
  incident_.resize(static_cast<size_t>(num_sites_));
  for (size_t id = 0; id < edges_.size(); ++id) {
    const auto& [a, b] = edges_[id];
    adjacency_[static_cast<size_t>(a)].push_back(b);
    adjacency_[static_cast<size_t>(b)].push_back(a);
    incident_[static_cast<size_t>(a)].push_back(static_cast<int>(id));
    incident_[static_cast<size_t>(b)].push_back(static_cast<int>(id));
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    require(nbrs.size() <= 3, "lattice: degree exceeds 3");
  }
  for (auto& inc : incident_)
    std::sort(inc.begin(), inc.end(), [&](int x, int y) {
      return edges_[static_cast<size_t>(x)] < edges_[static_cast<size_t>(y)];
    });

  if (layers.has_value()) {
    layers_ = std::move(*layers);
    std::vector<bool> covered(edges_.size(), false);
    for (const auto& layer : layers_) {
      std::set<int> touched;
      for (int id : layer) {
        require(id >= 0 && id < num_edges(), "lattice: layer edge out of range");
        require(!covered[static_cast<size_t>(id)],
                "lattice: edge appears in two layers");
        covered[static_cast<size_t>(id)] = true;
        const auto& [a, b] = edges_[static_cast<size_t>(id)];
        require(touched.insert(a).second && touched.insert(b).second,
                "lattice: layer edges share a site");
      }
    }
    require(std::all_of(covered.begin(), covered.end(), [](bool c) { return c; }),
            "lattice: layers do not cover all edges");
  } else {
    layers_ = edge_layers(num_sites_, edges_);
  }
}

std::vector<int> Lattice::ball(std::span<const int> support, int t) const {
  require(!support.empty(), "ball: empty support");
  std::vector<bool> in(static_cast<size_t>(num_sites_), false);
  std::vector<int> frontier;
  for (int s : support) {
    require(s >= 0 && s < num_sites_, "ball: site out of range");
    if (!in[static_cast<size_t>(s)]) {
      in[static_cast<size_t>(s)] = true;
      frontier.push_back(s);
    }
  }
  for (int step = 0; step < t && !frontier.empty(); ++step) {
    std::vector<int> next;
    for (int s : frontier)
      for (int n : neighbors(s))
        if (!in[static_cast<size_t>(n)]) {
          in[static_cast<size_t>(n)] = true;
          next.push_back(n);
        }
    frontier = std::move(next);
  }
  std::vector<int> out;
  for (int s = 0; s < num_sites_; ++s)
    if (in[static_cast<size_t>(s)]) out.push_back(s);
  return out;
}

LightCone Lattice::extract_lightcone(std::span<const int> support,
                                              int t) const {
  std::vector<int> sites = ball(support, t);
  std::vector<int> to_new(static_cast<size_t>(num_sites_), -1);
  for (size_t i = 0; i < sites.size(); ++i)
    to_new[static_cast<size_t>(sites[i])] = static_cast<int>(i);

  std::vector<Edge> sub_edges;
  std::vector<int> edge_to_new(edges_.size(), -1);
  for (size_t id = 0; id < edges_.size(); ++id) {
    const auto& [a, b] = edges_[id];
    const int na = to_new[static_cast<size_t>(a)];
    const int nb = to_new[static_cast<size_t>(b)];
    if (na >= 0 && nb >= 0) {
      edge_to_new[id] = static_cast<int>(sub_edges.size());
      sub_edges.emplace_back(na, nb);
    }
  }
  // project the parent layer partition onto the surviving edges
  std::vector<std::vector<int>> sub_layers;
  for (const auto& layer : layers_) {
    std::vector<int> l;
    for (int id : layer)
      if (edge_to_new[static_cast<size_t>(id)] >= 0)
        l.push_back(edge_to_new[static_cast<size_t>(id)]);
    if (!l.empty()) sub_layers.push_back(std::move(l));
  }
  return LightCone{Lattice(static_cast<int>(sites.size()), std::move(sub_edges),
                           std::move(sub_layers)),
                   std::move(sites)};
}

std::string Lattice::to_json() const {
  nlohmann::json j;
  j["sites"] = num_sites_;
  auto& je = j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : edges_) je.push_back({a, b});
  j["layers"] = layers_;
  return j.dump();
}

Lattice Lattice::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("lattice JSON parse failure: ") + e.what());
  }
  try {
    const int sites = j.at("sites").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    std::optional<std::vector<std::vector<int>>> layers;
    if (j.contains("layers") && !j["layers"].is_null())
      layers = j["layers"].get<std::vector<std::vector<int>>>();
    return Lattice(sites, std::move(edges), std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("lattice JSON schema failure: ") + e.what());
  }
}

Lattice Lattice::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lattice file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

Lattice Lattice::ibm127() {
  std::vector<std::string> candidates;
  if (const char* dir = std::getenv("KISING_DATA_DIR"))
    candidates.push_back(std::string(dir) + "/ibm127.json");
  if (std::string bundled = KISING_BUNDLED_DATA_DIR; !bundled.empty())
    candidates.push_back(bundled + "/ibm127.json");
  candidates.push_back("core/data/ibm127.json");
  candidates.push_back("data/ibm127.json");

  std::string found;
  for (const auto& path : candidates)
    if (std::ifstream probe(path); probe) {
      found = path;
      break;
    }
  require(!found.empty(),
          "ibm127: bundled coupling map not found (set KISING_DATA_DIR)");

  Lattice l = from_json_file(found);
  // The coupling map file is data, not code: re-verify the documented
  // neighborhood facts of site 62 every load.
  require(l.num_sites() == 127, "ibm127: expected 127 sites");
  require(l.num_edges() == 144, "ibm127: expected 144 edges");
  require(l.neighbors(62) == std::vector<int>({61, 63, 72}),
          "ibm127: neighbors of site 62 mismatch");
  const int support[] = {62};
  require(l.ball(support, 2) ==
              std::vector<int>({60, 61, 62, 63, 64, 72, 81}),
          "ibm127: radius-2 ball around site 62 mismatch");
  require(l.ball(support, 3) ==
              std::vector<int>({53, 54, 59, 60, 61, 62, 63, 64, 65, 72, 80, 81,
                                82}),
          "ibm127: radius-3 ball around site 62 mismatch");
  return l;
}

Lattice Lattice::heavy_hex_patch(int rows, int cols) {
  require(rows >= 1 && cols >= 1, "heavy_hex_patch: need rows,cols >= 1");
  const int chain_len = 4 * cols + 1;
  // chain sites first (row-major), then rung sites row gap by row gap
  auto chain_site = [&](int r, int c) { return r * chain_len + c; };
  int next = (rows + 1) * chain_len;

  std::vector<Lattice::Edge> edges;
  for (int r = 0; r <= rows; ++r)
    for (int c = 0; c + 1 < chain_len; ++c)
      edges.emplace_back(chain_site(r, c), chain_site(r, c + 1));
  for (int r = 0; r < rows; ++r) {
    const int offset = (r % 2 == 0) ? 0 : 2;
    for (int c = offset; c < chain_len; c += 4) {
      const int rung = next++;
      edges.emplace_back(chain_site(r, c), rung);
      edges.emplace_back(rung, chain_site(r + 1, c));
    }
  }
  return Lattice(next, std::move(edges));
}

}  // namespace kising
