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

#include "kising/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace kising {

namespace {

int string_site_count(const Lattice& lattice) {
  if (lattice.num_sites() > PauliString::kMaxSites)
    throw ResourceLimitError(
        "pauli engine supports lattices up to " +
        std::to_string(PauliString::kMaxSites) + " sites, got " +
        std::to_string(lattice.num_sites()));
  return lattice.num_sites();
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<int> PauliString::bits(const std::array<uint64_t, 2>& words) {
  std::vector<int> out;
  for (int w = 0; w < 2; ++w) {
    uint64_t m = words[static_cast<size_t>(w)];
    while (m) {
      const int b = __builtin_ctzll(m);
      out.push_back(w * 64 + b);
      m &= m - 1;
    }
  }
  return out;
}

int PauliString::max_site() const {
  int mx = -1;
  for (int w = 1; w >= 0; --w) {
    const uint64_t m = x_[static_cast<size_t>(w)] | z_[static_cast<size_t>(w)];
    if (m) {
      mx = w * 64 + 63 - __builtin_clzll(m);
      break;
    }
  }
  return mx;
}

bool PauliString::operator<(const PauliString& o) const {
  for (int w = 0; w < 2; ++w) {
    const uint64_t diff = (x_[static_cast<size_t>(w)] ^ o.x_[static_cast<size_t>(w)]) |
                          (z_[static_cast<size_t>(w)] ^ o.z_[static_cast<size_t>(w)]);
    if (!diff) continue;
    const int b = __builtin_ctzll(diff);
    const int site = w * 64 + b;
    const auto code = [&](const PauliString& s) {
      return ((s.z_[static_cast<size_t>(w)] >> b & 1) << 1) |
             (s.x_[static_cast<size_t>(w)] >> b & 1);
    };
    return code(*this) < code(o);
  }
  return false;
}

std::string PauliString::str() const {
  std::string out;
  for (Pauli letter : {Pauli::X, Pauli::Y, Pauli::Z})
    for (int site : support())
      if (get(site) == letter) {
        if (!out.empty()) out += ' ';
        out += kPauliChar[static_cast<int>(letter)];
        out += std::to_string(site);
      }
  return out;
}

void PauliSum::assign(std::vector<PauliTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  terms_.clear();
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().string == t.string) {
      terms_.back().coeff += t.coeff;
      terms_.back().order = std::min(terms_.back().order, t.order);
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const PauliTerm& t) {
    return std::abs(t.coeff) < kMergeEpsilon;
  });
}

const PauliTerm* PauliSum::find(const PauliString& s) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), s,
      [](const PauliTerm& t, const PauliString& key) { return t.string < key; });
  if (it != terms_.end() && it->string == s) return &*it;
  return nullptr;
}

double PauliSum::coeff_of(const PauliString& s) const {
  const PauliTerm* t = find(s);
  return t ? t->coeff : 0.0;
}

int PauliSum::max_site() const {
  int mx = -1;
  for (const auto& t : terms_) mx = std::max(mx, t.string.max_site());
  return mx;
}

TruncationPolicy TruncationPolicy::order_cap(int k) {
  if (k < 0) throw std::invalid_argument("MaxOrder: negative order");
  TruncationPolicy p;
  p.kind = Kind::MaxOrder;
  p.max_order = k;
  return p;
}

TruncationPolicy TruncationPolicy::coeff_cap(double eps) {
  if (eps < 0.0) throw std::invalid_argument("CoeffThreshold: negative threshold");
  TruncationPolicy p;
  p.kind = Kind::CoeffThreshold;
  p.coeff_threshold = eps;
  return p;
}

TruncationPolicy TruncationPolicy::term_cap(int64_t m) {
  if (m < 1) throw std::invalid_argument("MaxTerms: need at least one term");
  TruncationPolicy p;
  p.kind = Kind::MaxTerms;
  p.max_terms = m;
  return p;
}

PauliTerm conjugate_rzz(const PauliTerm& term, std::pair<int, int> edge) {
  if (edge.first == edge.second)
    throw std::invalid_argument("conjugate_rzz: degenerate edge");
  const auto& rules = gates::rzz_pair_rules();
  PauliTerm out = term;
  const Pauli a = out.string.get(edge.first);
  const Pauli b = out.string.get(edge.second);
  const auto& rule = rules[(static_cast<int>(a) << 2) | static_cast<int>(b)];
  out.string.set(edge.first, rule.out_a);
  out.string.set(edge.second, rule.out_b);
  out.coeff *= rule.sign;
  return out;
}

PauliSum conjugate_rx(const PauliTerm& term, double theta) {
  const Tensor sup = gates::rx_superop(theta);
  const double cos_f = sup[2 * 4 + 2];   // Y -> Y and Z -> Z
  const double sin_yz = sup[3 * 4 + 2];  // Y -> Z
  const double sin_zy = sup[2 * 4 + 3];  // Z -> Y

  std::vector<PauliTerm> out;
  const std::vector<int> sites = term.string.yz_sites();
  // depth-first over cosine/sine branch choices, pruning zero factors
  std::function<void(size_t, PauliTerm)> walk = [&](size_t k, PauliTerm cur) {
    if (k == sites.size()) {
      out.push_back(cur);
      return;
    }
    const int site = sites[k];
    const Pauli letter = cur.string.get(site);
    if (cos_f != 0.0) {
      PauliTerm keep = cur;
      keep.coeff *= cos_f;
      walk(k + 1, keep);
    }
    const double sin_f = letter == Pauli::Y ? sin_yz : sin_zy;
    if (sin_f != 0.0) {
      cur.coeff *= sin_f;
      cur.order += 1;
      cur.string.flip_yz(site);
      walk(k + 1, cur);
    }
  };
  walk(0, term);
  return PauliSum(std::move(out));
}

namespace {

using TermMap =
    std::unordered_map<PauliString, std::pair<double, int>, PauliStringHash>;

void accumulate(TermMap& map, const PauliString& s, double coeff, int order,
                int64_t hard_cap) {
  auto [it, inserted] = map.try_emplace(s, coeff, order);
  if (!inserted) {
    it->second.first += coeff;
    it->second.second = std::min(it->second.second, order);
  } else if (static_cast<int64_t>(map.size()) > hard_cap) {
    throw ResourceLimitError("pauli expansion exceeded the hard cap of " +
                             std::to_string(hard_cap) + " live terms");
  }
}

std::vector<PauliTerm> to_terms(TermMap&& map) {
  std::vector<PauliTerm> out;
  out.reserve(map.size());
  for (auto& [s, cv] : map) out.push_back(PauliTerm{cv.first, cv.second, s});
  return out;
}

void apply_policy(std::vector<PauliTerm>& terms, const TruncationPolicy& policy) {
  switch (policy.kind) {
    case TruncationPolicy::Kind::None:
      return;
    case TruncationPolicy::Kind::MaxOrder:
      std::erase_if(terms, [&](const PauliTerm& t) {
        return t.order > policy.max_order;
      });
      return;
    case TruncationPolicy::Kind::CoeffThreshold:
      std::erase_if(terms, [&](const PauliTerm& t) {
        return std::abs(t.coeff) < policy.coeff_threshold;
      });
      return;
    case TruncationPolicy::Kind::MaxTerms:
      if (static_cast<int64_t>(terms.size()) > policy.max_terms) {
        std::sort(terms.begin(), terms.end(),
                  [](const PauliTerm& a, const PauliTerm& b) {
                    const double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
                    if (ma != mb) return ma > mb;
                    return a.string < b.string;
                  });
        terms.resize(static_cast<size_t>(policy.max_terms));
      }
      return;
  }
}

}  // namespace

PauliSum layerwise_conjugate(
    const PauliSum& obs, std::span<const LayerOp> layers, const Lattice& lattice,
    const TruncationPolicy& policy, int64_t hard_cap,
    const std::function<void(int, const PauliSum&)>& observer) {
  const int n = string_site_count(lattice);
  if (obs.max_site() >= n)
    throw std::invalid_argument("observable support outside the lattice");

  PauliSum current = obs;
  int layer_index = 0;
  for (const LayerOp& op : layers) {
    TermMap map;
    map.reserve(current.size() * 2);
    if (op.kind == LayerOp::Kind::Rzz) {
      for (const PauliTerm& t : current.terms()) {
        // only edges seeing an X or Y can act; all gates in the block commute
        std::vector<int> edge_ids;
        for (int site : t.string.xy_sites())
          for (int id : lattice.incident_edges(site)) edge_ids.push_back(id);
        std::sort(edge_ids.begin(), edge_ids.end());
        edge_ids.erase(std::unique(edge_ids.begin(), edge_ids.end()),
                       edge_ids.end());
        PauliTerm cur = t;
        for (int id : edge_ids) cur = conjugate_rzz(cur, lattice.edge(id));
        accumulate(map, cur.string, cur.coeff, cur.order, hard_cap);
      }
    } else {
      for (const PauliTerm& t : current.terms()) {
        const PauliSum branched = conjugate_rx(t, op.theta);
        for (const PauliTerm& b : branched.terms())
          accumulate(map, b.string, b.coeff, b.order, hard_cap);
      }
    }
    std::vector<PauliTerm> terms = to_terms(std::move(map));
    std::erase_if(terms, [](const PauliTerm& t) {
      return std::abs(t.coeff) < kMergeEpsilon;
    });
    apply_policy(terms, policy);
    current = PauliSum(std::move(terms));
    if (observer) observer(layer_index, current);
    ++layer_index;
  }
  return current;
}

PauliSum back_propagate(
    const PauliSum& obs, const CircuitSpec& circuit, const Lattice& lattice,
    const TruncationPolicy& policy, int64_t hard_cap,
    const std::function<void(int, const PauliSum&)>& observer) {
  circuit.validate();
  std::vector<LayerOp> layers;
  if (circuit.extra_rx) layers.push_back(LayerOp::rx(circuit.theta_h));
  for (int t = 0; t < circuit.steps; ++t) {
    layers.push_back(LayerOp::rzz());
    layers.push_back(LayerOp::rx(circuit.theta_h));
  }
  return layerwise_conjugate(obs, layers, lattice, policy, hard_cap, observer);
}

double zero_state_expectation(const PauliSum& sum) {
  double value = 0.0;
  for (const auto& t : sum.terms())
    if (t.string.diagonal()) value += t.coeff;
  return value;
}

PauliSum observable_library(const std::string& name) {
  auto make = [](std::initializer_list<int> xs, std::initializer_list<int> ys,
                 std::initializer_list<int> zs) {
    PauliString s;
    for (int i : xs) s.set(i, Pauli::X);
    for (int i : ys) s.set(i, Pauli::Y);
    for (int i : zs) s.set(i, Pauli::Z);
    return PauliSum::single(s);
  };
  if (name == "Z62") return make({}, {}, {62});
  if (name == "W10") return make({13, 29, 31}, {9, 30}, {8, 12, 17, 28, 32});
  if (name == "W17")
    return make({37, 41, 52, 56, 57, 58, 62, 79}, {75},
                {38, 40, 42, 63, 72, 80, 90, 91});
  if (name == "W17tilde")
    return make({37, 41, 52, 56, 57, 58, 62, 79},
                {38, 40, 42, 63, 72, 80, 90, 91}, {75});
  throw std::invalid_argument("unknown observable: " + name);
}

PauliSum parse_observable_spec(const std::string& spec) {
  PauliString s;
  std::stringstream blocks(spec);
  std::string block;
  bool any = false;
  while (std::getline(blocks, block, ';')) {
    if (block.empty()) continue;
    Pauli letter;
    switch (block[0]) {
      case 'X': letter = Pauli::X; break;
      case 'Y': letter = Pauli::Y; break;
      case 'Z': letter = Pauli::Z; break;
      default:
        throw std::invalid_argument("observable spec: block must start with X/Y/Z");
    }
    const char* p = block.data() + 1;
    const char* end = block.data() + block.size();
    while (p < end) {
      int site = -1;
      auto [next, ec] = std::from_chars(p, end, site);
      if (ec != std::errc{} || site < 0)
        throw std::invalid_argument("observable spec: bad site list in '" + block + "'");
      if (s.get(site) != Pauli::I)
        throw std::invalid_argument("observable spec: repeated site " +
                                    std::to_string(site));
      s.set(site, letter);
      any = true;
      p = next;
      if (p < end) {
        if (*p != ',')
          throw std::invalid_argument("observable spec: expected ',' in '" + block + "'");
        ++p;
      }
    }
  }
  if (!any) throw std::invalid_argument("observable spec: empty");
  return PauliSum::single(s);
}

std::string dump_terms_csv(const PauliSum& sum) {
  std::string out = "coeff,order,string\n";
  for (const auto& t : sum.terms()) {
    out += fmt17(t.coeff);
    out += ',';
    out += std::to_string(t.order);
    out += ',';
    out += t.string.str();
    out += '\n';
  }
  return out;
}

}  // namespace kising
