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

#include "kising/tensor.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace kising {

namespace {

// Relative level below which a singular value is indistinguishable from
// rounding noise of the decomposition itself.
constexpr double kSingularNoise = 1e-15;

void gemm(int64_t m, int64_t n, int64_t k, const double* a, const double* b,
          double* c) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    std::fill(c, c + m * n, 0.0);
    return;
  }
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(m),
              static_cast<int>(n), static_cast<int>(k), 1.0, a,
              static_cast<int>(k), b, static_cast<int>(n), 0.0, c,
              static_cast<int>(n));
}

void gemm(int64_t m, int64_t n, int64_t k, const std::complex<double>* a,
          const std::complex<double>* b, std::complex<double>* c) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    std::fill(c, c + m * n, std::complex<double>{});
    return;
  }
  const std::complex<double> one{1.0, 0.0};
  const std::complex<double> zero{0.0, 0.0};
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(m),
              static_cast<int>(n), static_cast<int>(k), &one, a,
              static_cast<int>(k), b, static_cast<int>(n), &zero, c,
              static_cast<int>(n));
}

template <typename T>
basic_tensor<T> contract_impl(const basic_tensor<T>& a, const basic_tensor<T>& b,
                              std::span<const std::pair<int, int>> pairs) {
  std::vector<bool> a_used(a.rank(), false), b_used(b.rank(), false);
  for (const auto& [la, lb] : pairs) {
    if (la < 0 || la >= a.rank() || lb < 0 || lb >= b.rank())
      throw std::invalid_argument("contract: leg index out of range");
    if (a_used[la] || b_used[lb])
      throw std::invalid_argument("contract: repeated leg in axis pairs");
    if (a.dim(la) != b.dim(lb))
      throw std::invalid_argument("contract: paired leg dimensions differ");
    a_used[la] = true;
    b_used[lb] = true;
  }

  std::vector<int> a_perm, b_perm;
  std::vector<int64_t> out_shape;
  int64_t m = 1, n = 1, k = 1;
  for (int l = 0; l < a.rank(); ++l)
    if (!a_used[l]) {
      a_perm.push_back(l);
      out_shape.push_back(a.dim(l));
      m *= a.dim(l);
    }
  for (const auto& [la, lb] : pairs) {
    a_perm.push_back(la);
    k *= a.dim(la);
  }
  for (const auto& [la, lb] : pairs) b_perm.push_back(lb);
  for (int l = 0; l < b.rank(); ++l)
    if (!b_used[l]) {
      b_perm.push_back(l);
      out_shape.push_back(b.dim(l));
      n *= b.dim(l);
    }

  const basic_tensor<T> ap = a.permuted(a_perm);
  const basic_tensor<T> bp = b.permuted(b_perm);
  basic_tensor<T> out(std::move(out_shape));
  gemm(m, n, k, ap.data().data(), bp.data().data(), out.data().data());
  return out;
}

}  // namespace

Tensor contract(const Tensor& a, const Tensor& b,
                std::span<const std::pair<int, int>> axis_pairs) {
  return contract_impl(a, b, axis_pairs);
}

CTensor contract(const CTensor& a, const CTensor& b,
                 std::span<const std::pair<int, int>> axis_pairs) {
  return contract_impl(a, b, axis_pairs);
}

TruncatedSvd svd_truncate(const Tensor& m, int64_t chi, double eps) {
  if (m.rank() != 2) throw std::invalid_argument("svd_truncate: need 2 legs");
  if (chi < 1) throw std::invalid_argument("svd_truncate: chi must be >= 1");
  if (eps < 0.0) throw std::invalid_argument("svd_truncate: eps must be >= 0");
  for (double x : m.data())
    if (!std::isfinite(x)) throw NumericError("svd_truncate: non-finite input");

  const lapack_int rows = static_cast<lapack_int>(m.dim(0));
  const lapack_int cols = static_cast<lapack_int>(m.dim(1));
  const lapack_int k = std::min(rows, cols);

  std::vector<double> a = m.data();
  std::vector<double> s(static_cast<size_t>(k));
  std::vector<double> u(static_cast<size_t>(rows) * k);
  std::vector<double> vt(static_cast<size_t>(k) * cols);

  lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'S', rows, cols, a.data(),
                                   cols, s.data(), u.data(), k, vt.data(), cols);
  if (info != 0) {
    // dgesdd occasionally fails to converge; dgesvd is slower but sturdier.
    a = m.data();
    info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'S', 'S', rows, cols, a.data(),
                          cols, s.data(), u.data(), k, vt.data(), cols,
                          nullptr);
    if (info != 0) throw NumericError("svd_truncate: SVD did not converge");
  }

  const double noise = s.empty() ? 0.0 : kSingularNoise * s[0];
  lapack_int rank = 0;
  double total = 0.0;
  for (auto& x : s) {
    if (x <= noise) x = 0.0;
    if (x > 0.0) ++rank;
    total += x * x;
  }

  int64_t keep = std::min<int64_t>(chi, rank);
  if (keep == 0) keep = 1;  // zero matrix: keep one null direction
  if (eps > 0.0 && total > 0.0)
    while (keep > 1 && s[keep - 1] * s[keep - 1] < eps * total) --keep;

  double dropped = 0.0;
  for (int64_t i = keep; i < k; ++i) dropped += s[i] * s[i];

  TruncatedSvd out;
  out.s.assign(s.begin(), s.begin() + keep);
  out.discarded_weight = total > 0.0 ? dropped / total : 0.0;
  out.u = Tensor({rows, keep});
  out.v = Tensor({cols, keep});
  for (int64_t j = 0; j < keep; ++j) {
    // canonical sign: the largest-magnitude entry of each left vector is
    // made positive so repeated runs and exact Clifford structure are stable
    int64_t arg = 0;
    double best = -1.0;
    for (int64_t i = 0; i < rows; ++i) {
      const double mag = std::abs(u[i * k + j]);
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    const double sgn = u[arg * k + j] < 0.0 ? -1.0 : 1.0;
    for (int64_t i = 0; i < rows; ++i) out.u[i * keep + j] = sgn * u[i * k + j];
    for (int64_t i = 0; i < cols; ++i) out.v[i * keep + j] = sgn * vt[j * cols + i];
  }
  return out;
}

std::pair<Tensor, Tensor> qr_thin(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("qr_thin: need 2 legs");
  const lapack_int rows = static_cast<lapack_int>(m.dim(0));
  const lapack_int cols = static_cast<lapack_int>(m.dim(1));
  const lapack_int k = std::min(rows, cols);

  std::vector<double> a = m.data();
  std::vector<double> tau(static_cast<size_t>(k));
  lapack_int info =
      LAPACKE_dgeqrf(LAPACK_ROW_MAJOR, rows, cols, a.data(), cols, tau.data());
  if (info != 0) throw NumericError("qr_thin: dgeqrf failed");

  Tensor r({k, cols});
  for (lapack_int i = 0; i < k; ++i)
    for (lapack_int j = i; j < cols; ++j) r[i * cols + j] = a[i * cols + j];

  info = LAPACKE_dorgqr(LAPACK_ROW_MAJOR, rows, k, k, a.data(), cols, tau.data());
  if (info != 0) throw NumericError("qr_thin: dorgqr failed");
  Tensor q({rows, k});
  for (lapack_int i = 0; i < rows; ++i)
    for (lapack_int j = 0; j < k; ++j) q[i * k + j] = a[i * cols + j];
  return {std::move(q), std::move(r)};
}

std::pair<Tensor, Tensor> lq_thin(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("lq_thin: need 2 legs");
  const lapack_int rows = static_cast<lapack_int>(m.dim(0));
  const lapack_int cols = static_cast<lapack_int>(m.dim(1));
  const lapack_int k = std::min(rows, cols);

  std::vector<double> a = m.data();
  std::vector<double> tau(static_cast<size_t>(k));
  lapack_int info =
      LAPACKE_dgelqf(LAPACK_ROW_MAJOR, rows, cols, a.data(), cols, tau.data());
  if (info != 0) throw NumericError("lq_thin: dgelqf failed");

  Tensor l({rows, k});
  for (lapack_int i = 0; i < rows; ++i)
    for (lapack_int j = 0; j <= std::min<lapack_int>(i, k - 1); ++j)
      l[i * k + j] = a[i * cols + j];

  info = LAPACKE_dorglq(LAPACK_ROW_MAJOR, k, cols, k, a.data(), cols, tau.data());
  if (info != 0) throw NumericError("lq_thin: dorglq failed");
  Tensor q({k, cols});
  for (lapack_int i = 0; i < k; ++i)
    for (lapack_int j = 0; j < cols; ++j) q[i * cols + j] = a[i * cols + j];
  return {std::move(l), std::move(q)};
}

}  // namespace kising
