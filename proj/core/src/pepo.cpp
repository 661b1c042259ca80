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

#include "kising/pepo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

namespace kising {

namespace {

// lambda entries below this are not inverted at full strength
constexpr double kLambdaFloor = 1e-12;

int leg_position(const std::vector<int>& incident, int edge_id) {
  const auto it = std::find(incident.begin(), incident.end(), edge_id);
  return static_cast<int>(it - incident.begin());
}

}  // namespace

Pepo Pepo::init(std::shared_ptr<const Lattice> lattice, const PauliSum& obs) {
  if (!lattice) throw std::invalid_argument("Pepo: null lattice");
  if (obs.size() != 1)
    throw std::invalid_argument(
        "Pepo: only a single-string observable can seed a product operator");
  const PauliTerm& term = obs.terms().front();
  if (std::abs(term.coeff - 1.0) > 1e-12)
    throw std::invalid_argument("Pepo: observable coefficient must be 1");
  if (term.string.max_site() >= lattice->num_sites())
    throw std::invalid_argument("Pepo: observable support outside the lattice");

  Pepo p;
  p.lattice_ = std::move(lattice);
  const Lattice& lat = *p.lattice_;
  p.sites_.reserve(static_cast<size_t>(lat.num_sites()));
  for (int s = 0; s < lat.num_sites(); ++s) {
    std::vector<int64_t> shape(1 + lat.degree(s), 1);
    shape[0] = 4;
    Tensor t(std::move(shape));
    const Pauli letter =
        s < PauliString::kMaxSites ? term.string.get(s) : Pauli::I;
    t[static_cast<int64_t>(letter)] = 1.0;
    p.sites_.push_back(std::move(t));
  }
  p.lambda_.assign(static_cast<size_t>(lat.num_edges()), {1.0});
  return p;
}

int64_t Pepo::max_bond_dim() const {
  int64_t mx = 0;
  for (const auto& l : lambda_) mx = std::max(mx, static_cast<int64_t>(l.size()));
  return mx;
}

void Pepo::apply_rx_layer(double theta) {
  const Tensor sup = gates::rx_superop(theta);
  for (Tensor& t : sites_) {
    const auto shape = t.shape();
    const Tensor mat = t.reshaped({4, t.size() / 4});
    t = contract(sup, mat, {{1, 0}}).reshaped(shape);
  }
}

std::vector<double> Pepo::apply_rzz_layer(std::span<const int> edge_ids,
                                          int64_t chi, double eps) {
  if (chi < 1) throw std::invalid_argument("apply_rzz_layer: chi must be >= 1");
  std::vector<bool> touched(static_cast<size_t>(lattice_->num_sites()), false);
  for (int id : edge_ids) {
    const auto& [a, b] = lattice_->edge(id);
    if (touched[static_cast<size_t>(a)] || touched[static_cast<size_t>(b)])
      throw std::invalid_argument("apply_rzz_layer: edges share a site");
    touched[static_cast<size_t>(a)] = true;
    touched[static_cast<size_t>(b)] = true;
  }
  std::vector<double> discarded(edge_ids.size(), 0.0);
  for (size_t k = 0; k < edge_ids.size(); ++k)
    update_edge(edge_ids[k], chi, eps, &discarded[k]);
  return discarded;
}

void Pepo::update_edge(int edge_id, int64_t chi, double eps, double* discarded) {
  const auto [si, sj] = lattice_->edge(edge_id);
  const std::vector<int>& legs_i = lattice_->incident_edges(si);
  const std::vector<int>& legs_j = lattice_->incident_edges(sj);
  const int pos_i = leg_position(legs_i, edge_id);
  const int pos_j = leg_position(legs_j, edge_id);
  const int deg_i = static_cast<int>(legs_i.size());
  const int deg_j = static_cast<int>(legs_j.size());
  const int64_t m = bond_dim(edge_id);

  // absorb the environment bond weights into both gate tensors
  Tensor ti = sites_[static_cast<size_t>(si)];
  Tensor tj = sites_[static_cast<size_t>(sj)];
  std::vector<std::vector<double>> inv_i, inv_j;
  auto absorb = [&](Tensor& t, const std::vector<int>& legs, int pos,
                    std::vector<std::vector<double>>& inv) {
    for (int l = 0; l < static_cast<int>(legs.size()); ++l) {
      if (l == pos) continue;
      const auto& lam = lambda_[static_cast<size_t>(legs[l])];
      std::vector<double> fwd(lam.size()), bwd(lam.size());
      for (size_t k = 0; k < lam.size(); ++k) {
        fwd[k] = lam[k];
        bwd[k] = 1.0 / std::max(lam[k], kLambdaFloor);
      }
      t.scale_leg(1 + l, fwd);
      inv.push_back(std::move(bwd));
    }
  };
  absorb(ti, legs_i, pos_i, inv_i);
  absorb(tj, legs_j, pos_j, inv_j);

  // reduced update: QR off the environment legs so the gate+SVD core stays
  // (4m x 4m)-sized and the per-edge cost O(chi^4)
  std::vector<int> perm_i, perm_j;
  std::vector<int64_t> env_i_dims, env_j_dims;
  for (int l = 0; l < deg_i; ++l)
    if (l != pos_i) {
      perm_i.push_back(1 + l);
      env_i_dims.push_back(ti.dim(1 + l));
    }
  perm_i.push_back(0);
  perm_i.push_back(1 + pos_i);
  perm_j.push_back(1 + pos_j);
  perm_j.push_back(0);
  for (int l = 0; l < deg_j; ++l)
    if (l != pos_j) {
      perm_j.push_back(1 + l);
      env_j_dims.push_back(tj.dim(1 + l));
    }

  int64_t env_i = 1, env_j = 1;
  for (int64_t d : env_i_dims) env_i *= d;
  for (int64_t d : env_j_dims) env_j *= d;

  auto [qi, ri] = qr_thin(ti.permuted(perm_i).reshaped({env_i, 4 * m}));
  auto [lj, qj] = lq_thin(tj.permuted(perm_j).reshaped({m * 4, env_j}));
  const int64_t rank_i = ri.dim(0);
  const int64_t rank_j = lj.dim(1);

  // core with the bond weight in the middle: (rank_i*4, m) x (m, 4*rank_j)
  Tensor left = ri.reshaped({rank_i * 4, m});
  {
    const auto& lam = lambda_[static_cast<size_t>(edge_id)];
    left.scale_leg(1, lam);
  }
  Tensor core = contract(left, lj.reshaped({m, 4 * rank_j}), {{1, 0}});

  // conjugate the two physical legs by the R_zz superoperator
  Tensor k4 = core.reshaped({rank_i, 4, 4, rank_j}).permuted({1, 2, 0, 3});
  Tensor gk = contract(gates::rzz_superop(),
                       k4.reshaped({16, rank_i * rank_j}), {{1, 0}});
  Tensor theta = gk.reshaped({4, 4, rank_i, rank_j})
                     .permuted({2, 0, 1, 3})
                     .reshaped({rank_i * 4, 4 * rank_j});

  TruncatedSvd svd = svd_truncate(theta, chi, eps);
  *discarded = svd.discarded_weight;
  const int64_t kept = static_cast<int64_t>(svd.s.size());
  const double s0 = svd.s[0];

  auto& lam_new = lambda_[static_cast<size_t>(edge_id)];
  lam_new.resize(static_cast<size_t>(kept));
  if (s0 > 0.0) {
    for (int64_t k = 0; k < kept; ++k) lam_new[static_cast<size_t>(k)] = svd.s[static_cast<size_t>(k)] / s0;
    log_scale_ += std::log(s0);
  } else {
    // operator content vanished numerically; keep a null bond
    lam_new.assign(1, 1.0);
    svd.u.scale(0.0);
  }

  // site i: fold Q back, restore leg order, divide the environment out
  {
    Tensor folded = contract(qi, svd.u.reshaped({rank_i, 4 * kept}), {{1, 0}});
    std::vector<int64_t> shape = env_i_dims;
    shape.push_back(4);
    shape.push_back(kept);
    Tensor t = folded.reshaped(std::move(shape));
    std::vector<int> inv_perm;
    const int n_env = deg_i - 1;
    inv_perm.push_back(n_env);  // physical
    for (int l = 0; l < deg_i; ++l)
      inv_perm.push_back(l == pos_i ? n_env + 1 : (l < pos_i ? l : l - 1));
    t = t.permuted(inv_perm);
    int idx = 0;
    for (int l = 0; l < deg_i; ++l)
      if (l != pos_i) t.scale_leg(1 + l, inv_i[static_cast<size_t>(idx++)]);
    sites_[static_cast<size_t>(si)] = std::move(t);
  }
  // site j: same on the right factor
  {
    Tensor folded = contract(svd.v.reshaped({4, rank_j, kept}), qj, {{1, 0}});
    // legs now [phys, e, env...]
    std::vector<int64_t> shape = {4, kept};
    for (int64_t d : env_j_dims) shape.push_back(d);
    Tensor t = folded.reshaped(std::move(shape));
    std::vector<int> inv_perm;
    inv_perm.push_back(0);
    for (int l = 0; l < deg_j; ++l)
      inv_perm.push_back(l == pos_j ? 1 : (l < pos_j ? 2 + l : 1 + l));
    t = t.permuted(inv_perm);
    int idx = 0;
    for (int l = 0; l < deg_j; ++l)
      if (l != pos_j) t.scale_leg(1 + l, inv_j[static_cast<size_t>(idx++)]);
    sites_[static_cast<size_t>(sj)] = std::move(t);
  }
}

EvolutionReport Pepo::evolve(const CircuitSpec& circuit, int64_t chi, double eps) {
  circuit.validate();
  EvolutionReport report;
  using clock = std::chrono::steady_clock;

  auto record_rzz = [&](std::span<const int> edges) {
    const auto t0 = clock::now();
    const std::vector<double> dws = apply_rzz_layer(edges, chi, eps);
    LayerStats st;
    st.kind = "rzz";
    for (double w : dws) {
      st.max_discarded = std::max(st.max_discarded, w);
      st.sum_discarded += w;
    }
    st.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    report.layers.push_back(std::move(st));
  };
  auto record_rx = [&] {
    const auto t0 = clock::now();
    apply_rx_layer(circuit.theta_h);
    LayerStats st;
    st.kind = "rx";
    st.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    report.layers.push_back(std::move(st));
  };

  if (circuit.extra_rx) record_rx();
  for (int t = 0; t < circuit.steps; ++t) {
    for (const auto& layer : lattice_->layers()) record_rzz(layer);
    record_rx();
  }
  report.final_bond_dims.reserve(static_cast<size_t>(lattice_->num_edges()));
  for (int e = 0; e < lattice_->num_edges(); ++e)
    report.final_bond_dims.push_back(bond_dim(e));
  return report;
}

double Pepo::close_and_contract(int64_t mem_cap_bytes) const {
  const Lattice& lat = *lattice_;
  Tensor closure({4});
  for (int p = 0; p < 4; ++p) closure[p] = gates::kZeroClosure[static_cast<size_t>(p)];

  std::vector<Tensor> nodes;
  nodes.reserve(static_cast<size_t>(lat.num_sites()));
  for (int s = 0; s < lat.num_sites(); ++s)
    nodes.push_back(contract(closure, sites_[static_cast<size_t>(s)], {{0, 0}}));

  // reinstate each bond weight once, on the lower endpoint
  for (int e = 0; e < lat.num_edges(); ++e) {
    const auto& [a, b] = lat.edge(e);
    const auto& lam = lambda_[static_cast<size_t>(e)];
    nodes[static_cast<size_t>(a)].scale_leg(
        leg_position(lat.incident_edges(a), e), lam);
  }

  std::vector<NetworkBond> bonds;
  bonds.reserve(static_cast<size_t>(lat.num_edges()));
  for (int e = 0; e < lat.num_edges(); ++e) {
    const auto& [a, b] = lat.edge(e);
    bonds.push_back(NetworkBond{a, leg_position(lat.incident_edges(a), e), b,
                                leg_position(lat.incident_edges(b), e)});
  }
  const Tensor result =
      contract_network(std::move(nodes), bonds, std::nullopt, mem_cap_bytes);
  if (result.rank() != 0)
    throw NumericError("close_and_contract: network did not close");
  return result.data()[0] * std::exp(log_scale_);
}

std::string Pepo::checkpoint_json() const {
  nlohmann::json j;
  j["format"] = "kising-pepo-checkpoint";
  j["version"] = 1;
  j["log_scale"] = log_scale_;
  j["lattice"] = nlohmann::json::parse(lattice_->to_json());
  auto& sites = j["sites"] = nlohmann::json::array();
  for (const Tensor& t : sites_) {
    nlohmann::json s;
    s["shape"] = t.shape();
    s["data"] = t.data();
    sites.push_back(std::move(s));
  }
  j["bond_weights"] = lambda_;
  return j.dump();
}

Pepo Pepo::from_checkpoint_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("checkpoint parse failure: ") + e.what());
  }
  if (j.value("format", "") != "kising-pepo-checkpoint" || j.value("version", 0) != 1)
    throw ConfigError("checkpoint: unknown format or version");
  Pepo p;
  p.lattice_ = std::make_shared<Lattice>(Lattice::from_json(j.at("lattice").dump()));
  p.log_scale_ = j.at("log_scale").get<double>();
  for (const auto& s : j.at("sites")) {
    auto shape = s.at("shape").get<std::vector<int64_t>>();
    auto data = s.at("data").get<std::vector<double>>();
    p.sites_.emplace_back(std::move(shape), std::move(data));
  }
  p.lambda_ = j.at("bond_weights").get<std::vector<std::vector<double>>>();
  const Lattice& lat = *p.lattice_;
  if (static_cast<int>(p.sites_.size()) != lat.num_sites() ||
      static_cast<int>(p.lambda_.size()) != lat.num_edges())
    throw ConfigError("checkpoint: site/edge count mismatch");
  for (int s = 0; s < lat.num_sites(); ++s) {
    const Tensor& t = p.sites_[static_cast<size_t>(s)];
    if (t.rank() != 1 + lat.degree(s) || t.dim(0) != 4)
      throw ConfigError("checkpoint: site tensor rank mismatch");
    const auto& inc = lat.incident_edges(s);
    for (size_t l = 0; l < inc.size(); ++l)
      if (t.dim(1 + static_cast<int>(l)) !=
          static_cast<int64_t>(p.lambda_[static_cast<size_t>(inc[l])].size()))
        throw ConfigError("checkpoint: bond dimension mismatch");
  }
  return p;
}

}  // namespace kising
