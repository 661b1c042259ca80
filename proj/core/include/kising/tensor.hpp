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

#ifndef KISING_TENSOR_HPP_
#define KISING_TENSOR_HPP_

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "kising/errors.hpp"

namespace kising {

/// Dense multiway array. Entries are stored row-major: the last leg runs
/// fastest. Legs are indexed 0..rank-1.
template <typename T>
class basic_tensor {
 public:
  basic_tensor() = default;

  explicit basic_tensor(std::vector<int64_t> shape)
      : shape_(std::move(shape)), data_(checked_size(shape_), T{}) {}

  basic_tensor(std::vector<int64_t> shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (static_cast<int64_t>(data_.size()) != checked_size(shape_))
      throw std::invalid_argument("tensor: data size does not match shape");
  }

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int64_t>& shape() const { return shape_; }
  int64_t dim(int leg) const { return shape_.at(static_cast<size_t>(leg)); }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  T& operator[](int64_t flat) { return data_[static_cast<size_t>(flat)]; }
  const T& operator[](int64_t flat) const {
    return data_[static_cast<size_t>(flat)];
  }

  /// Multi-index access (convenience path, not for hot loops).
  T& at(std::span<const int64_t> idx) { return data_[flatten(idx)]; }
  const T& at(std::span<const int64_t> idx) const { return data_[flatten(idx)]; }
  T& at(std::initializer_list<int64_t> idx) {
    return at(std::span<const int64_t>(idx.begin(), idx.size()));
  }
  const T& at(std::initializer_list<int64_t> idx) const {
    return at(std::span<const int64_t>(idx.begin(), idx.size()));
  }

  /// Reinterpret with a new shape of identical total size.
  basic_tensor reshaped(std::vector<int64_t> new_shape) const {
    if (checked_size(new_shape) != size())
      throw std::invalid_argument("reshape: total size mismatch");
    basic_tensor out;
    out.shape_ = std::move(new_shape);
    out.data_ = data_;
    return out;
  }

  /// Permute legs: out leg k is input leg perm[k].
  basic_tensor permuted(std::span<const int> perm) const {
    const int r = rank();
    if (static_cast<int>(perm.size()) != r)
      throw std::invalid_argument("permute: rank mismatch");
    std::vector<int64_t> out_shape(r);
    for (int k = 0; k < r; ++k) out_shape[k] = shape_[perm[k]];
    basic_tensor out(std::move(out_shape));
    if (size() == 0) return out;

    std::vector<int64_t> in_strides(r, 1);
    for (int k = r - 2; k >= 0; --k)
      in_strides[k] = in_strides[k + 1] * shape_[k + 1];
    // stride in the input for each output leg
    std::vector<int64_t> strides(r);
    for (int k = 0; k < r; ++k) strides[k] = in_strides[perm[k]];

    std::vector<int64_t> idx(r, 0);
    const int64_t n = size();
    int64_t src = 0;
    for (int64_t dst = 0; dst < n; ++dst) {
      out.data_[dst] = data_[src];
      for (int k = r - 1; k >= 0; --k) {
        if (++idx[k] < out.shape_[k]) {
          src += strides[k];
          break;
        }
        idx[k] = 0;
        src -= strides[k] * (out.shape_[k] - 1);
      }
    }
    return out;
  }

  basic_tensor permuted(std::initializer_list<int> perm) const {
    return permuted(std::span<const int>(perm.begin(), perm.size()));
  }

  void scale(T factor) {
    for (auto& x : data_) x *= factor;
  }

  /// Multiply every slice along `leg` by a per-index factor.
  void scale_leg(int leg, std::span<const T> factors) {
    if (static_cast<int64_t>(factors.size()) != dim(leg))
      throw std::invalid_argument("scale_leg: factor count mismatch");
    int64_t inner = 1;
    for (int k = leg + 1; k < rank(); ++k) inner *= shape_[k];
    const int64_t d = dim(leg);
    const int64_t outer = size() / (inner * d);
    for (int64_t o = 0; o < outer; ++o)
      for (int64_t i = 0; i < d; ++i) {
        T* p = data_.data() + (o * d + i) * inner;
        const T f = factors[static_cast<size_t>(i)];
        for (int64_t k = 0; k < inner; ++k) p[k] *= f;
      }
  }

 private:
  static int64_t checked_size(const std::vector<int64_t>& shape) {
    int64_t n = 1;
    for (int64_t d : shape) {
      if (d < 0) throw std::invalid_argument("tensor: negative dimension");
      n *= d;
    }
    return n;
  }

  int64_t flatten(std::span<const int64_t> idx) const {
    if (static_cast<int>(idx.size()) != rank())
      throw std::invalid_argument("tensor index rank mismatch");
    int64_t flat = 0;
    for (int k = 0; k < rank(); ++k) flat = flat * shape_[k] + idx[k];
    return flat;
  }

  std::vector<int64_t> shape_;
  std::vector<T> data_;
};

using Tensor = basic_tensor<double>;
using CTensor = basic_tensor<std::complex<double>>;

/// Pairwise contraction over the given (leg of a, leg of b) pairs.
/// Remaining legs are ordered (a's free legs, then b's free legs).
Tensor contract(const Tensor& a, const Tensor& b,
                std::span<const std::pair<int, int>> axis_pairs);
CTensor contract(const CTensor& a, const CTensor& b,
                 std::span<const std::pair<int, int>> axis_pairs);

inline Tensor contract(const Tensor& a, const Tensor& b,
                       std::initializer_list<std::pair<int, int>> pairs) {
  return contract(a, b,
                  std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}
inline CTensor contract(const CTensor& a, const CTensor& b,
                        std::initializer_list<std::pair<int, int>> pairs) {
  return contract(a, b,
                  std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

/// Result of a rank-revealing truncated SVD of a matrix (2-leg tensor):
/// m ~ u * diag(s) * v^T with orthonormal columns in u and v.
struct TruncatedSvd {
  Tensor u;               // rows(m) x kept
  std::vector<double> s;  // kept singular values, descending
  Tensor v;               // cols(m) x kept
  double discarded_weight = 0.0;  // sum of squared dropped values / total
};

/// Keeps min(chi, numerical rank) singular values, then drops trailing
/// values with s_i^2 / sum(s^2) < eps. Singular values at or below
/// 1e-15 * s_max are rounding noise and are snapped to exact zero before
/// rank counting, so exactly-low-rank inputs report discarded weight 0.
TruncatedSvd svd_truncate(const Tensor& m, int64_t chi, double eps);

/// Thin QR of a 2-leg tensor: m = q * r, q orthonormal columns,
/// q: rows x k, r: k x cols with k = min(rows, cols).
std::pair<Tensor, Tensor> qr_thin(const Tensor& m);

/// Thin LQ: m = l * q, q orthonormal rows, l: rows x k, q: k x cols.
std::pair<Tensor, Tensor> lq_thin(const Tensor& m);

}  // namespace kising

#endif  // KISING_TENSOR_HPP_
