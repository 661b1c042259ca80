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

#ifndef KISING_PAULI_HPP_
#define KISING_PAULI_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kising/circuit.hpp"
#include "kising/gates.hpp"
#include "kising/lattice.hpp"

namespace kising {

/// Sparse Pauli string over up to 128 sites, stored as X/Z bit masks
/// (a Y carries both bits). Sites not set are identity.
class PauliString {
 public:
  static constexpr int kMaxSites = 128;

  PauliString() : x_{0, 0}, z_{0, 0} {}

  Pauli get(int site) const {
    check_site(site);
    const int x = static_cast<int>((x_[word(site)] >> bit(site)) & 1);
    const int z = static_cast<int>((z_[word(site)] >> bit(site)) & 1);
    static constexpr Pauli decode[4] = {Pauli::I, Pauli::X, Pauli::Z, Pauli::Y};
    return decode[(z << 1) | x];
  }

  void set(int site, Pauli p) {
    check_site(site);
    const uint64_t m = uint64_t{1} << bit(site);
    x_[word(site)] &= ~m;
    z_[word(site)] &= ~m;
    if (p == Pauli::X || p == Pauli::Y) x_[word(site)] |= m;
    if (p == Pauli::Z || p == Pauli::Y) z_[word(site)] |= m;
  }

  bool is_identity() const { return !x_[0] && !x_[1] && !z_[0] && !z_[1]; }

  /// True when the string contains only I and Z: exactly the strings with
  /// nonzero expectation in |0...0>.
  bool diagonal() const { return !x_[0] && !x_[1]; }

  /// Sites carrying Y or Z (the branching sites of an X-rotation layer).
  std::vector<int> yz_sites() const { return bits(z_); }
  /// Sites carrying X or Y.
  std::vector<int> xy_sites() const { return bits(x_); }

  std::vector<int> support() const {
    const std::array<uint64_t, 2> both = {x_[0] | z_[0], x_[1] | z_[1]};
    return bits(both);
  }
  int weight() const {
    return __builtin_popcountll(x_[0] | z_[0]) +
           __builtin_popcountll(x_[1] | z_[1]);
  }
  int max_site() const;

  /// Toggle Y<->Z at a site that carries one of them.
  void flip_yz(int site) { x_[word(site)] ^= uint64_t{1} << bit(site); }

  bool operator==(const PauliString& o) const {
    return x_ == o.x_ && z_ == o.z_;
  }
  /// Canonical total order: lowest differing site decides, letters in
  /// (I, X, Z, Y) bit-code order there.
  bool operator<(const PauliString& o) const;

  size_t hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint64_t w : {x_[0], x_[1], z_[0], z_[1]}) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<size_t>(h);
  }

  /// Letter-major text form ("X13 Y9 Z8"): X sites ascending, then Y,
  /// then Z. Identity is "".
  std::string str() const;

 private:
  static void check_site(int site) {
    if (site < 0 || site >= kMaxSites)
      throw std::invalid_argument("PauliString: site out of range");
  }
  static int word(int site) { return site >> 6; }
  static int bit(int site) { return site & 63; }
  static std::vector<int> bits(const std::array<uint64_t, 2>& words);

  std::array<uint64_t, 2> x_, z_;

  friend struct PauliStringHash;
};

struct PauliStringHash {
  size_t operator()(const PauliString& s) const { return s.hash(); }
};

/// One signed term of a Pauli expansion. `order` counts the sine-branch
/// choices accumulated through X-rotation layers (the perturbative order
/// knob used by MaxOrder truncation).
struct PauliTerm {
  double coeff = 0.0;
  int order = 0;
  PauliString string;
};

/// Merged collection of terms, canonically sorted by string; no two terms
/// share a string. Coefficients below 1e-15 after merging are rounding
/// noise and dropped (distinct from user truncation).
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::vector<PauliTerm> terms) { assign(std::move(terms)); }

  static PauliSum single(PauliString s, double coeff = 1.0, int order = 0) {
    return PauliSum({PauliTerm{coeff, order, s}});
  }

  const std::vector<PauliTerm>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of a string, 0 if absent.
  double coeff_of(const PauliString& s) const;
  const PauliTerm* find(const PauliString& s) const;

  double norm_squared() const {
    double n = 0.0;
    for (const auto& t : terms_) n += t.coeff * t.coeff;
    return n;
  }

  int max_site() const;

 private:
  void assign(std::vector<PauliTerm> terms);
  std::vector<PauliTerm> terms_;
};

inline constexpr double kMergeEpsilon = 1e-15;

/// What gets discarded after every conjugated layer.
struct TruncationPolicy {
  enum class Kind { None, MaxOrder, CoeffThreshold, MaxTerms };
  Kind kind = Kind::None;
  int max_order = 0;
  double coeff_threshold = 0.0;
  int64_t max_terms = 0;

  static TruncationPolicy none() { return {}; }
  static TruncationPolicy order_cap(int k);
  static TruncationPolicy coeff_cap(double eps);
  static TruncationPolicy term_cap(int64_t m);
};

inline constexpr int64_t kDefaultTermHardCap = 10'000'000;

/// One conjugation layer: all R_zz gates (they commute, so one block), or
/// the full R_x(theta) layer.
struct LayerOp {
  enum class Kind { Rzz, Rx };
  Kind kind;
  double theta = 0.0;  // used by Rx

  static LayerOp rzz() { return {Kind::Rzz, 0.0}; }
  static LayerOp rx(double theta) { return {Kind::Rx, theta}; }
};

/// R_zz^dag . term . R_zz on one edge: always a single signed string.
PauliTerm conjugate_rzz(const PauliTerm& term, std::pair<int, int> edge);

/// R_x(theta)^dag . term . R_x(theta) on every site: each Y or Z site
/// splits into a cosine branch (order kept) and a sine branch (order + 1).
PauliSum conjugate_rx(const PauliTerm& term, double theta);

/// Conjugates by exactly the given layers in order, merging duplicates and
/// applying the truncation policy after each layer. The optional observer
/// sees the merged sum after every layer. Exceeding hard_cap live terms
/// raises ResourceLimitError.
PauliSum layerwise_conjugate(
    const PauliSum& obs, std::span<const LayerOp> layers, const Lattice& lattice,
    const TruncationPolicy& policy = TruncationPolicy::none(),
    int64_t hard_cap = kDefaultTermHardCap,
    const std::function<void(int, const PauliSum&)>& observer = nullptr);

/// Heisenberg operator after the whole circuit: the trailing extra R_x
/// layer first when present, then per Trotter step R_zz then R_x.
PauliSum back_propagate(
    const PauliSum& obs, const CircuitSpec& circuit, const Lattice& lattice,
    const TruncationPolicy& policy = TruncationPolicy::none(),
    int64_t hard_cap = kDefaultTermHardCap,
    const std::function<void(int, const PauliSum&)>& observer = nullptr);

/// <0...0| sum |0...0>: the sum of coefficients of I/Z-only strings.
double zero_state_expectation(const PauliSum& sum);

/// Named observables: Z62, W10, W17, W17tilde.
PauliSum observable_library(const std::string& name);

/// Parses "X13,29,31;Y9,30;Z8,12,17,28,32" into a unit single-string sum.
PauliSum parse_observable_spec(const std::string& spec);

/// CSV dump, columns coeff,order,string (17 significant digits).
std::string dump_terms_csv(const PauliSum& sum);

}  // namespace kising

#endif  // KISING_PAULI_HPP_
