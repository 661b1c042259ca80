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

#include <cmath>
#include <random>
#include <set>

#include <doctest.h>

#include "fixtures.hpp"
#include "kising/oracle.hpp"

using namespace kising;
namespace kt = kising::testing;

namespace {

PauliString z_at(int site) {
  PauliString s;
  s.set(site, Pauli::Z);
  return s;
}

double closed_form_t3(double th) {
  const double c = std::cos(th), s = std::sin(th);
  return c * c * c * (1.0 + s * s);
}

double closed_form_t4(double th) {
  const double c = std::cos(th), s = std::sin(th);
  return std::pow(c, 4) * (1.0 + 2 * s * s - 3 * c * c * std::pow(s, 10));
}

}  // namespace

TEST_CASE("pauli string storage and canonical text form") {
  PauliString s;
  s.set(13, Pauli::X);
  s.set(9, Pauli::Y);
  s.set(8, Pauli::Z);
  CHECK(s.get(13) == Pauli::X);
  CHECK(s.get(9) == Pauli::Y);
  CHECK(s.get(8) == Pauli::Z);
  CHECK(s.get(0) == Pauli::I);
  CHECK(s.str() == "X13 Y9 Z8");
  CHECK(s.weight() == 3);
  CHECK(s.support() == std::vector<int>({8, 9, 13}));
  s.set(9, Pauli::I);
  CHECK(s.weight() == 2);
  CHECK_THROWS_AS(s.set(128, Pauli::X), std::invalid_argument);
}

TEST_CASE("conjugate_rzz: commuting inputs are fixed points") {
  PauliTerm zi{1.0, 0, z_at(3)};
  const PauliTerm out = conjugate_rzz(zi, {3, 4});
  CHECK(out.string == zi.string);
  CHECK(out.coeff == 1.0);

  PauliTerm id{0.5, 0, PauliString{}};
  const PauliTerm out2 = conjugate_rzz(id, {0, 1});
  CHECK(out2.string.is_identity());
  CHECK(out2.coeff == 0.5);
}

TEST_CASE("conjugate_rzz: X on one endpoint matches the dense oracle") {
  PauliTerm x{1.0, 0, PauliString{}};
  x.string.set(5, Pauli::X);
  const PauliTerm out = conjugate_rzz(x, {5, 6});
  CHECK(out.string.get(5) == Pauli::Y);
  CHECK(out.string.get(6) == Pauli::Z);
  const kt::CMat gate = kt::pauli_exp2(M_PI / 4, Pauli::Z, Pauli::Z);
  const double sign = kt::conj_coeff(
      gate, kt::mat_kron(kt::pauli_mat(Pauli::X), kt::pauli_mat(Pauli::I)),
      kt::mat_kron(kt::pauli_mat(Pauli::Y), kt::pauli_mat(Pauli::Z)));
  CHECK(out.coeff == doctest::Approx(sign));
  CHECK(std::abs(out.coeff) == 1.0);
}

TEST_CASE("conjugate_rzz: exhaustive pairs match the dense oracle") {
  const kt::CMat gate = kt::pauli_exp2(M_PI / 4, Pauli::Z, Pauli::Z);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      PauliTerm t{1.0, 0, PauliString{}};
      t.string.set(0, static_cast<Pauli>(a));
      t.string.set(1, static_cast<Pauli>(b));
      const PauliTerm out = conjugate_rzz(t, {0, 1});
      const kt::CMat in_op = kt::mat_kron(kt::pauli_mat(static_cast<Pauli>(a)),
                                          kt::pauli_mat(static_cast<Pauli>(b)));
      const kt::CMat out_op = kt::mat_kron(kt::pauli_mat(out.string.get(0)),
                                           kt::pauli_mat(out.string.get(1)));
      CHECK(out.coeff == doctest::Approx(kt::conj_coeff(gate, in_op, out_op)));
    }
}

TEST_CASE("conjugate_rx: Z becomes cos Z + sin Y") {
  const double th = 0.9;
  PauliTerm z{1.0, 0, z_at(2)};
  const PauliSum out = conjugate_rx(z, th);
  REQUIRE(out.size() == 2);
  PauliString y;
  y.set(2, Pauli::Y);
  CHECK(out.coeff_of(z_at(2)) == doctest::Approx(std::cos(th)));
  CHECK(out.coeff_of(y) == doctest::Approx(std::sin(th)));
  // sine branch carries order + 1
  CHECK(out.find(y)->order == 1);
  CHECK(out.find(z_at(2))->order == 0);
}

TEST_CASE("conjugate_rx: X passes through; pi/2 collapses to a single term") {
  PauliTerm x{1.0, 0, PauliString{}};
  x.string.set(4, Pauli::X);
  const PauliSum keep = conjugate_rx(x, 1.234);
  REQUIRE(keep.size() == 1);
  CHECK(keep.terms()[0].string == x.string);
  CHECK(keep.terms()[0].coeff == 1.0);

  PauliTerm z{1.0, 0, z_at(4)};
  const PauliSum clifford = conjugate_rx(z, M_PI / 2);
  REQUIRE(clifford.size() == 1);
  CHECK(clifford.terms()[0].string.get(4) == Pauli::Y);
  CHECK(clifford.terms()[0].coeff == 1.0);
}

TEST_CASE("back_propagate: zero steps returns the observable") {
  const Lattice l = Lattice::ibm127();
  const PauliSum out = back_propagate(observable_library("Z62"), {0.7, 0, false}, l);
  REQUIRE(out.size() == 1);
  CHECK(out.terms()[0].coeff == 1.0);
  CHECK(out.terms()[0].string == z_at(62));
}

TEST_CASE("back_propagate reproduces the depth-3 and depth-4 closed forms") {
  const Lattice l = Lattice::ibm127();
  for (int k = 0; k <= 32; ++k) {
    const double th = (M_PI / 2) * k / 32.0;
    const double v3 = zero_state_expectation(
        back_propagate(observable_library("Z62"), {th, 3, false}, l));
    CHECK(std::abs(v3 - closed_form_t3(th)) < 1e-12);
    const double v4 = zero_state_expectation(
        back_propagate(observable_library("Z62"), {th, 4, false}, l));
    CHECK(std::abs(v4 - closed_form_t4(th)) < 1e-12);
  }
}

TEST_CASE("back_propagate at the Clifford point keeps a single string") {
  const Lattice l = Lattice::ibm127();
  size_t max_terms = 0;
  const PauliSum out = back_propagate(
      observable_library("Z62"), {M_PI / 2, 20, false}, l,
      TruncationPolicy::none(), kDefaultTermHardCap,
      [&](int, const PauliSum& s) { max_terms = std::max(max_terms, s.size()); });
  CHECK(max_terms == 1);
  CHECK(out.size() == 1);
  CHECK(std::abs(out.terms()[0].coeff) == 1.0);
}

TEST_CASE("norm is conserved after every exact layer") {
  const Lattice l = Lattice::ibm127();
  for (double th : {0.37, 1.1}) {
    back_propagate(observable_library("Z62"), {th, 4, false}, l,
                   TruncationPolicy::none(), kDefaultTermHardCap,
                   [&](int, const PauliSum& s) {
                     CHECK(std::abs(s.norm_squared() - 1.0) <= 1e-12);
                   });
  }
}

TEST_CASE("operator support stays inside the light cone") {
  const Lattice l = Lattice::ibm127();
  for (int t = 1; t <= 4; ++t) {
    const PauliSum out =
        back_propagate(observable_library("Z62"), {0.77, t, false}, l);
    const int support[] = {62};
    const std::vector<int> ball = l.ball(support, t);
    const std::set<int> allowed(ball.begin(), ball.end());
    for (const auto& term : out.terms())
      for (int s : term.string.support()) CHECK(allowed.count(s) == 1);
  }
}

TEST_CASE("zero_state_expectation counts only I/Z strings") {
  PauliSum a = PauliSum::single(z_at(5));
  CHECK(zero_state_expectation(a) == 1.0);
  PauliTerm t{0.7, 0, PauliString{}};
  t.string.set(3, Pauli::X);
  t.string.set(4, Pauli::Z);
  CHECK(zero_state_expectation(PauliSum({t})) == 0.0);
}

TEST_CASE("observable library strings") {
  const PauliSum w10 = observable_library("W10");
  REQUIRE(w10.size() == 1);
  const PauliString& s = w10.terms()[0].string;
  for (int i : {13, 29, 31}) CHECK(s.get(i) == Pauli::X);
  for (int i : {9, 30}) CHECK(s.get(i) == Pauli::Y);
  for (int i : {8, 12, 17, 28, 32}) CHECK(s.get(i) == Pauli::Z);
  CHECK(s.weight() == 10);

  const PauliString& z62 = observable_library("Z62").terms()[0].string;
  CHECK(z62.get(62) == Pauli::Z);
  CHECK(z62.weight() == 1);

  const PauliString& w17t = observable_library("W17tilde").terms()[0].string;
  for (int i : {37, 41, 52, 56, 57, 58, 62, 79}) CHECK(w17t.get(i) == Pauli::X);
  for (int i : {38, 40, 42, 63, 72, 80, 90, 91}) CHECK(w17t.get(i) == Pauli::Y);
  CHECK(w17t.get(75) == Pauli::Z);
  CHECK(w17t.weight() == 17);

  CHECK(observable_library("W17").terms()[0].string.weight() == 17);
  CHECK_THROWS_AS((void)observable_library("W11"), std::invalid_argument);
}

TEST_CASE("observable spec string parsing") {
  const PauliSum sum = parse_observable_spec("X13,29,31;Y9,30;Z8,12,17,28,32");
  REQUIRE(sum.size() == 1);
  CHECK(sum.terms()[0].string == observable_library("W10").terms()[0].string);
  CHECK_THROWS_AS((void)parse_observable_spec(""), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_observable_spec("Q1"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_observable_spec("X1;Z1"), std::invalid_argument);
}

TEST_CASE("layerwise_conjugate basics") {
  const Lattice l = Lattice::ibm127();
  const PauliSum obs = observable_library("Z62");
  const PauliSum same = layerwise_conjugate(obs, {}, l);
  CHECK(same.size() == 1);
  CHECK(same.terms()[0].string == z_at(62));

  const LayerOp rzz[] = {LayerOp::rzz()};
  const PauliSum still = layerwise_conjugate(obs, rzz, l);
  CHECK(still.size() == 1);
  CHECK(still.terms()[0].string == z_at(62));
  CHECK(still.terms()[0].coeff == 1.0);
}

TEST_CASE("W10 bracket matches the transcribed expansion term for term") {
  const Lattice l = Lattice::ibm127();
  for (double th : {0.3, 0.7, 1.1, M_PI / 2 - 0.2}) {
    const LayerOp seq[] = {LayerOp::rzz(), LayerOp::rx(th), LayerOp::rzz()};
    const PauliSum got = layerwise_conjugate(observable_library("W10"), seq, l);
    const auto fixture = kt::w10_bracket_fixture(th);
    CHECK(got.size() == fixture.size());
    for (const auto& ft : fixture) {
      const double coeff = got.coeff_of(kt::string_of(ft.ops));
      CHECK(coeff == doctest::Approx(ft.coeff).epsilon(1e-12));
    }
  }
}

TEST_CASE("truncation policies") {
  const Lattice l = Lattice::ibm127();
  const PauliSum obs = observable_library("Z62");
  const CircuitSpec c4{0.9, 4, false};
  const PauliSum exact = back_propagate(obs, c4, l);
  const double exact_value = zero_state_expectation(exact);

  SUBCASE("MaxOrder(0) keeps only the pure cosine path") {
    const PauliSum out = back_propagate(obs, c4, l, TruncationPolicy::order_cap(0));
    REQUIRE(out.size() == 1);
    CHECK(out.terms()[0].string == z_at(62));
    CHECK(out.terms()[0].coeff == doctest::Approx(std::pow(std::cos(0.9), 4)));
  }

  SUBCASE("MaxOrder grows toward the exact value") {
    double prev_err = 1e9;
    for (int k : {1, 3, 5, 9}) {
      const PauliSum out = back_propagate(obs, c4, l, TruncationPolicy::order_cap(k));
      const double err = std::abs(zero_state_expectation(out) - exact_value);
      CHECK(err <= prev_err + 1e-12);
      prev_err = err;
    }
    const PauliSum all = back_propagate(obs, c4, l, TruncationPolicy::order_cap(100));
    CHECK(zero_state_expectation(all) == doctest::Approx(exact_value).epsilon(1e-12));
  }

  SUBCASE("MaxTerms error is monotone in the budget (non-strict)") {
    double err_small = 0.0, err_large = 0.0;
    for (auto [m, err] : {std::pair<int64_t, double*>{8, &err_small},
                          {24, &err_large}}) {
      const PauliSum out = back_propagate(obs, c4, l, TruncationPolicy::term_cap(m));
      *err = std::abs(zero_state_expectation(out) - exact_value);
    }
    CHECK(err_large <= err_small + 1e-15);
  }

  SUBCASE("CoeffThreshold drops small terms") {
    const PauliSum out =
        back_propagate(obs, c4, l, TruncationPolicy::coeff_cap(0.05));
    CHECK(out.size() < exact.size());
    for (const auto& t : out.terms()) CHECK(std::abs(t.coeff) >= 0.05);
  }

  SUBCASE("hard cap raises a resource error") {
    CHECK_THROWS_AS((void)back_propagate(obs, c4, l, TruncationPolicy::none(), 10),
                    ResourceLimitError);
  }
}

TEST_CASE("CET agrees with the statevector oracle on small lattices") {
  const Lattice full = Lattice::ibm127();
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> theta_dist(0.05, M_PI / 2 - 0.05);

  const int support[] = {62};
  for (int radius : {2, 3}) {
    const LightCone cone = full.extract_lightcone(support, radius);
    REQUIRE(cone.lattice.num_sites() <= 14);
    int new62 = -1;
    for (size_t i = 0; i < cone.to_parent.size(); ++i)
      if (cone.to_parent[i] == 62) new62 = static_cast<int>(i);
    const PauliSum obs = PauliSum::single(z_at(new62));
    for (int trial = 0; trial < 3; ++trial) {
      const double th = theta_dist(rng);
      for (int t = 1; t <= radius; ++t) {
        const CircuitSpec circ{th, t, trial % 2 == 1};
        const double sv = statevector_expectation(cone.lattice, circ, obs);
        const double cet =
            zero_state_expectation(back_propagate(obs, circ, cone.lattice));
        CHECK(std::abs(sv - cet) < 1e-10);
      }
    }
  }

  const Lattice patch = Lattice::heavy_hex_patch(1, 1);
  const PauliSum obs = PauliSum::single(z_at(0));
  for (int trial = 0; trial < 3; ++trial) {
    const double th = theta_dist(rng);
    const CircuitSpec circ{th, 4, false};
    CHECK(std::abs(statevector_expectation(patch, circ, obs) -
                   zero_state_expectation(back_propagate(obs, circ, patch))) <
          1e-10);
  }
}

TEST_CASE("light-cone soundness: evolution commutes with extraction") {
  const Lattice full = Lattice::ibm127();
  std::mt19937 rng(103);
  for (int trial = 0; trial < 3; ++trial) {
    const int site = static_cast<int>(rng() % 127);
    const int t = 1 + static_cast<int>(rng() % 2);
    const double th = 0.3 + 0.2 * trial;
    const CircuitSpec circ{th, t, false};

    const PauliSum on_full =
        back_propagate(PauliSum::single(z_at(site)), circ, full);

    const int support[] = {site};
    const LightCone cone = full.extract_lightcone(support, t);
    std::vector<int> to_new(static_cast<size_t>(full.num_sites()), -1);
    for (size_t i = 0; i < cone.to_parent.size(); ++i)
      to_new[static_cast<size_t>(cone.to_parent[i])] = static_cast<int>(i);
    const PauliSum on_cone = back_propagate(
        PauliSum::single(z_at(to_new[static_cast<size_t>(site)])), circ,
        cone.lattice);

    REQUIRE(on_full.size() == on_cone.size());
    for (const auto& term : on_full.terms()) {
      PauliString relabeled;
      for (int s : term.string.support())
        relabeled.set(to_new[static_cast<size_t>(s)], term.string.get(s));
      CHECK(on_cone.coeff_of(relabeled) == doctest::Approx(term.coeff).epsilon(1e-12));
    }
  }
}

TEST_CASE("back_propagate is deterministic") {
  const Lattice l = Lattice::ibm127();
  const PauliSum a = back_propagate(observable_library("Z62"), {0.6, 4, false}, l);
  const PauliSum b = back_propagate(observable_library("Z62"), {0.6, 4, false}, l);
  CHECK(dump_terms_csv(a) == dump_terms_csv(b));
}

TEST_CASE("pauli engine rejects oversized lattices") {
  const Lattice big = Lattice::heavy_hex_patch(5, 8);
  REQUIRE(big.num_sites() > PauliString::kMaxSites);
  CHECK_THROWS_AS((void)back_propagate(PauliSum::single(z_at(0)), {0.3, 1, false}, big),
                  ResourceLimitError);
}

TEST_CASE("terms dump uses 17 significant digits and merges duplicates") {
  PauliTerm a{1.0 / 3.0, 0, z_at(1)};
  PauliTerm b{1.0 / 3.0, 2, z_at(1)};
  const PauliSum sum(std::vector<PauliTerm>{a, b});
  REQUIRE(sum.size() == 1);
  CHECK(sum.terms()[0].coeff == doctest::Approx(2.0 / 3.0));
  CHECK(sum.terms()[0].order == 0);  // merged order is the minimum
  const std::string csv = dump_terms_csv(sum);
  CHECK(csv.find("0.66666666666666663") != std::string::npos);
  CHECK(csv.find("Z1") != std::string::npos);
}
