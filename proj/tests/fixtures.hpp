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

#ifndef KISING_TESTS_FIXTURES_HPP_
#define KISING_TESTS_FIXTURES_HPP_

#include <cmath>
#include <complex>
#include <vector>

#include "kising/pauli.hpp"

namespace kising::testing {

// ---------------------------------------------------------------------------
// Independent dense-conjugation oracle. Deliberately separate from the
// production derivation: unitaries are built from the series form
// exp(i a A) = cos(a) I + i sin(a) A (valid for A^2 = I), and coefficients
// extracted by trace against explicit Pauli matrices.
// ---------------------------------------------------------------------------

using CMat = std::vector<std::vector<std::complex<double>>>;

inline CMat pauli_mat(Pauli p) {
  const std::complex<double> i{0.0, 1.0};
  switch (p) {
    case Pauli::I: return {{1, 0}, {0, 1}};
    case Pauli::X: return {{0, 1}, {1, 0}};
    case Pauli::Y: return {{0, -i}, {i, 0}};
    case Pauli::Z: return {{1, 0}, {0, -1}};
  }
  return {};
}

inline CMat mat_mul(const CMat& a, const CMat& b) {
  const size_t n = a.size(), m = b[0].size(), k = b.size();
  CMat c(n, std::vector<std::complex<double>>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline CMat mat_dagger(const CMat& a) {
  CMat c(a[0].size(), std::vector<std::complex<double>>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) c[j][i] = std::conj(a[i][j]);
  return c;
}

inline CMat mat_kron(const CMat& a, const CMat& b) {
  const size_t n = a.size(), m = b.size();
  CMat c(n * m, std::vector<std::complex<double>>(n * m));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < m; ++k)
        for (size_t l = 0; l < m; ++l) c[i * m + k][j * m + l] = a[i][j] * b[k][l];
  return c;
}

/// exp(i angle * P1 (x) P2) for a two-site Pauli product (squares to 1).
inline CMat pauli_exp2(double angle, Pauli p1, Pauli p2) {
  const CMat a = mat_kron(pauli_mat(p1), pauli_mat(p2));
  CMat out(4, std::vector<std::complex<double>>(4));
  const std::complex<double> i{0.0, 1.0};
  for (size_t r = 0; r < 4; ++r) {
    out[r][r] += std::cos(angle);
    for (size_t c = 0; c < 4; ++c) out[r][c] += i * std::sin(angle) * a[r][c];
  }
  return out;
}

/// exp(i angle * P) on one site.
inline CMat pauli_exp1(double angle, Pauli p) {
  const CMat a = pauli_mat(p);
  CMat out(2, std::vector<std::complex<double>>(2));
  const std::complex<double> i{0.0, 1.0};
  for (size_t r = 0; r < 2; ++r) {
    out[r][r] += std::cos(angle);
    for (size_t c = 0; c < 2; ++c) out[r][c] += i * std::sin(angle) * a[r][c];
  }
  return out;
}

/// Pauli coefficients of G^dag O G for a dense n-site operator.
inline double conj_coeff(const CMat& gate, const CMat& op, const CMat& basis) {
  const CMat conj = mat_mul(mat_mul(mat_dagger(gate), op), gate);
  std::complex<double> tr{};
  for (size_t i = 0; i < conj.size(); ++i)
    for (size_t k = 0; k < conj.size(); ++k) tr += basis[i][k] * conj[k][i];
  return (tr / static_cast<double>(conj.size())).real();
}

// ---------------------------------------------------------------------------
// The weight-10 stabilizer after the conjugation sequence [R_zz, R_x, R_zz]:
// a 32-term product expansion, transcribed factor by factor. c = cos(theta),
// s = sin(theta).
// ---------------------------------------------------------------------------

struct FixtureTerm {
  double coeff;
  std::vector<std::pair<int, Pauli>> ops;
};

inline std::vector<FixtureTerm> w10_bracket_fixture(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  using P = Pauli;
  struct Factor {
    double coeff;
    std::vector<std::pair<int, P>> ops;
  };
  const std::vector<Factor> f1 = {
      {c, {{13, P::X}, {12, P::Z}}},
      {s, {{13, P::Z}}},
  };
  const std::vector<Factor> f2 = {
      {c * c, {{9, P::Y}, {8, P::Z}}},
      {c * s, {{9, P::Z}, {10, P::Z}}},
      {-s * s, {{10, P::Y}, {11, P::Z}}},
      {-c * s, {{9, P::X}, {10, P::X}, {8, P::Z}, {11, P::Z}}},
  };
  const std::vector<Factor> f3 = {
      {c * c, {{29, P::X}, {31, P::X}, {30, P::Y}, {28, P::Z}, {32, P::Z}}},
      {-c * s, {{29, P::X}, {30, P::X}, {28, P::Z}}},
      {-c * s, {{30, P::X}, {31, P::X}, {32, P::Z}}},
      {-s * s, {{30, P::Y}}},
  };
  std::vector<FixtureTerm> out;
  for (const auto& a : f1)
    for (const auto& b : f2)
      for (const auto& d : f3) {
        FixtureTerm t;
        t.coeff = a.coeff * b.coeff * d.coeff;
        t.ops = {{17, P::Z}};
        t.ops.insert(t.ops.end(), a.ops.begin(), a.ops.end());
        t.ops.insert(t.ops.end(), b.ops.begin(), b.ops.end());
        t.ops.insert(t.ops.end(), d.ops.begin(), d.ops.end());
        out.push_back(std::move(t));
      }
  return out;
}

inline PauliString string_of(const std::vector<std::pair<int, Pauli>>& ops) {
  PauliString s;
  for (const auto& [site, p] : ops) s.set(site, p);
  return s;
}

}  // namespace kising::testing

#endif  // KISING_TESTS_FIXTURES_HPP_
