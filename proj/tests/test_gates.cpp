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

#include "kising/gates.hpp"

#include <cmath>

#include <doctest.h>

#include "fixtures.hpp"

using namespace kising;
namespace kt = kising::testing;

TEST_CASE("rx_unitary(0) is the identity") {
  const CTensor u = gates::rx_unitary(0.0);
  CHECK(std::abs(u[0] - 1.0) < 1e-15);
  CHECK(std::abs(u[1]) < 1e-15);
  CHECK(std::abs(u[2]) < 1e-15);
  CHECK(std::abs(u[3] - 1.0) < 1e-15);
}

TEST_CASE("ryy maps |00> to (|00> - i|11>)/sqrt(2)") {
  const CTensor u = gates::ryy_unitary();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u[0 * 4 + 0] - r) < 1e-12);
  CHECK(std::abs(u[1 * 4 + 0]) < 1e-12);
  CHECK(std::abs(u[2 * 4 + 0]) < 1e-12);
  CHECK(std::abs(u[3 * 4 + 0] - std::complex<double>(0.0, -r)) < 1e-12);
}

TEST_CASE("rx(pi/2) rzz equals ryy rx(pi/2)") {
  const auto kron = [](const CTensor& a, const CTensor& b) {
    CTensor out({4, 4});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            out[(i * 2 + k) * 4 + (j * 2 + l)] = a[i * 2 + j] * b[k * 2 + l];
    return out;
  };
  const CTensor rx2 = kron(gates::rx_unitary(M_PI / 2), gates::rx_unitary(M_PI / 2));
  const CTensor lhs = contract(rx2, gates::rzz_unitary(), {{1, 0}});
  const CTensor rhs = contract(gates::ryy_unitary(), rx2, {{1, 0}});
  for (int64_t i = 0; i < 16; ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12);
}

TEST_CASE("rx superoperator columns carry the expected rotation") {
  const double theta = 0.7123;
  const double c = std::cos(theta), s = std::sin(theta);
  const Tensor m = gates::rx_superop(theta);
  // I -> I, X -> X
  for (int q : {0, 1})
    for (int p = 0; p < 4; ++p)
      CHECK(m[p * 4 + q] == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-14));
  // Z -> c Z + s Y
  CHECK(m[2 * 4 + 3] == doctest::Approx(s));
  CHECK(m[3 * 4 + 3] == doctest::Approx(c));
  CHECK(m[0 * 4 + 3] == 0.0);
  CHECK(m[1 * 4 + 3] == 0.0);
  // Y -> c Y - s Z
  CHECK(m[2 * 4 + 2] == doctest::Approx(c));
  CHECK(m[3 * 4 + 2] == doctest::Approx(-s));
}

TEST_CASE("rx superoperator at pi/2 is an exact signed permutation") {
  const Tensor m = gates::rx_superop(M_PI / 2);
  for (int64_t i = 0; i < 16; ++i) {
    const double x = m[i];
    CHECK((x == 0.0 || x == 1.0 || x == -1.0));
  }
}

TEST_CASE("rzz superoperator matches an independent dense conjugation") {
  const Tensor sup = gates::rzz_superop();
  const kt::CMat gate = kt::pauli_exp2(M_PI / 4, Pauli::Z, Pauli::Z);
  for (int q = 0; q < 16; ++q) {
    const kt::CMat op = kt::mat_kron(kt::pauli_mat(static_cast<Pauli>(q >> 2)),
                                     kt::pauli_mat(static_cast<Pauli>(q & 3)));
    for (int p = 0; p < 16; ++p) {
      const kt::CMat basis =
          kt::mat_kron(kt::pauli_mat(static_cast<Pauli>(p >> 2)),
                       kt::pauli_mat(static_cast<Pauli>(p & 3)));
      const double expected = kt::conj_coeff(gate, op, basis);
      CHECK(sup[p * 16 + q] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("rx superoperator matches an independent dense conjugation") {
  for (double theta : {0.0, 0.3, 1.1, M_PI / 2}) {
    const Tensor sup = gates::rx_superop(theta);
    const kt::CMat gate = kt::pauli_exp1(-theta / 2, Pauli::X);
    for (int q = 0; q < 4; ++q)
      for (int p = 0; p < 4; ++p) {
        const double expected =
            kt::conj_coeff(gate, kt::pauli_mat(static_cast<Pauli>(q)),
                           kt::pauli_mat(static_cast<Pauli>(p)));
        CHECK(sup[p * 4 + q] == doctest::Approx(expected).epsilon(1e-12));
      }
  }
}

TEST_CASE("rzz pair rules are signed permutations with the documented cases") {
  const auto& rules = gates::rzz_pair_rules();
  // Z (x) I and I (x) I commute with the gate
  const auto& zi = rules[(3 << 2) | 0];
  CHECK(zi.out_a == Pauli::Z);
  CHECK(zi.out_b == Pauli::I);
  CHECK(zi.sign == 1.0);
  const auto& ii = rules[0];
  CHECK(ii.out_a == Pauli::I);
  CHECK(ii.out_b == Pauli::I);
  CHECK(ii.sign == 1.0);
  // X (x) I maps to a single signed Y (x) Z; the sign comes from the
  // independent dense oracle
  const auto& xi = rules[(1 << 2) | 0];
  CHECK(xi.out_a == Pauli::Y);
  CHECK(xi.out_b == Pauli::Z);
  const kt::CMat gate = kt::pauli_exp2(M_PI / 4, Pauli::Z, Pauli::Z);
  const double oracle_sign = kt::conj_coeff(
      gate, kt::mat_kron(kt::pauli_mat(Pauli::X), kt::pauli_mat(Pauli::I)),
      kt::mat_kron(kt::pauli_mat(Pauli::Y), kt::pauli_mat(Pauli::Z)));
  CHECK(xi.sign == doctest::Approx(oracle_sign));
}
