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
#include <mutex>

namespace kising::gates {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

CTensor dagger(const CTensor& m) {
  const int64_t r = m.dim(0), c = m.dim(1);
  CTensor out({c, r});
  for (int64_t i = 0; i < r; ++i)
    for (int64_t j = 0; j < c; ++j) out[j * r + i] = std::conj(m[i * c + j]);
  return out;
}

CTensor matmul(const CTensor& a, const CTensor& b) {
  return contract(a, b, {{1, 0}});
}

CTensor kron(const CTensor& a, const CTensor& b) {
  const int64_t ar = a.dim(0), ac = a.dim(1), br = b.dim(0), bc = b.dim(1);
  CTensor out({ar * br, ac * bc});
  for (int64_t i = 0; i < ar; ++i)
    for (int64_t j = 0; j < ac; ++j)
      for (int64_t k = 0; k < br; ++k)
        for (int64_t l = 0; l < bc; ++l)
          out[(i * br + k) * (ac * bc) + j * bc + l] =
              a[i * ac + j] * b[k * bc + l];
  return out;
}

/// n-site Pauli basis element indexed base-4, first site most significant.
CTensor pauli_basis(int n_sites, int index) {
  CTensor m = pauli_matrix(static_cast<Pauli>((index >> (2 * (n_sites - 1))) & 3));
  for (int s = n_sites - 2; s >= 0; --s)
    m = kron(m, pauli_matrix(static_cast<Pauli>((index >> (2 * s)) & 3)));
  return m;
}

}  // namespace

CTensor pauli_matrix(Pauli p) {
  CTensor m({2, 2});
  switch (p) {
    case Pauli::I:
      m[0] = 1.0;
      m[3] = 1.0;
      break;
    case Pauli::X:
      m[1] = 1.0;
      m[2] = 1.0;
      break;
    case Pauli::Y:
      m[1] = -kI;
      m[2] = kI;
      break;
    case Pauli::Z:
      m[0] = 1.0;
      m[3] = -1.0;
      break;
  }
  return m;
}

CTensor rx_unitary(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  CTensor m({2, 2});
  m[0] = c;
  m[1] = -kI * s;
  m[2] = -kI * s;
  m[3] = c;
  return m;
}

CTensor rzz_unitary() {
  const cd plus = std::exp(kI * (M_PI / 4.0));
  const cd minus = std::exp(-kI * (M_PI / 4.0));
  CTensor m({4, 4});
  m[0 * 4 + 0] = plus;   // |00>
  m[1 * 4 + 1] = minus;  // |01>
  m[2 * 4 + 2] = minus;  // |10>
  m[3 * 4 + 3] = plus;   // |11>
  return m;
}

CTensor ryy_unitary() {
  const CTensor rx2 = kron(rx_unitary(M_PI / 2.0), rx_unitary(M_PI / 2.0));
  return matmul(matmul(rx2, rzz_unitary()), dagger(rx2));
}

Tensor conjugation_superop(const CTensor& gate) {
  const int64_t dim = gate.dim(0);
  int n_sites = 0;
  for (int64_t d = dim; d > 1; d >>= 1) ++n_sites;
  if (dim != (int64_t{1} << n_sites) || gate.dim(1) != dim)
    throw std::invalid_argument("conjugation_superop: gate must be 2^n x 2^n");

  const int basis = 1 << (2 * n_sites);
  const CTensor gd = dagger(gate);
  Tensor out({basis, basis});
  for (int q = 0; q < basis; ++q) {
    const CTensor conj = matmul(matmul(gd, pauli_basis(n_sites, q)), gate);
    for (int p = 0; p < basis; ++p) {
      const CTensor pb = pauli_basis(n_sites, p);
      cd tr = 0.0;
      for (int64_t i = 0; i < dim; ++i)
        for (int64_t k = 0; k < dim; ++k)
          tr += pb[i * dim + k] * conj[k * dim + i];
      const cd coeff = tr / static_cast<double>(dim);
      if (std::abs(coeff.imag()) > 1e-12)
        throw NumericError("conjugation_superop: non-real coefficient");
      out[p * basis + q] = coeff.real();
    }
  }
  // snap rounding noise so Clifford points stay exactly single-string
  double mx = 0.0;
  for (double x : out.data()) mx = std::max(mx, std::abs(x));
  for (auto& x : out.data())
    if (std::abs(x) <= 1e-15 * mx) x = 0.0;
  return out;
}

Tensor rx_superop(double theta) { return conjugation_superop(rx_unitary(theta)); }

const Tensor& rzz_superop() {
  static const Tensor cached = conjugation_superop(rzz_unitary());
  return cached;
}

const std::array<RzzPairRule, 16>& rzz_pair_rules() {
  static const std::array<RzzPairRule, 16> rules = [] {
    const Tensor& sup = rzz_superop();
    std::array<RzzPairRule, 16> r{};
    for (int q = 0; q < 16; ++q) {
      int hits = 0;
      for (int p = 0; p < 16; ++p) {
        const double x = sup[p * 16 + q];
        if (x == 0.0) continue;
        ++hits;
        r[q] = RzzPairRule{static_cast<Pauli>(p >> 2),
                           static_cast<Pauli>(p & 3), x};
      }
      if (hits != 1 || std::abs(std::abs(r[q].sign) - 1.0) > 1e-12)
        throw NumericError("rzz_pair_rules: conjugation is not a signed map");
      r[q].sign = r[q].sign > 0 ? 1.0 : -1.0;
    }
    return r;
  }();
  return rules;
}

}  // namespace kising::gates
