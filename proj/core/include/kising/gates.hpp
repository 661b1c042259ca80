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

#ifndef KISING_GATES_HPP_
#define KISING_GATES_HPP_

#include <array>
#include <cstdint>

#include "kising/tensor.hpp"

namespace kising {

/// Single-site Pauli letter; doubles as an index into the 4-dimensional
/// operator basis (I, X, Y, Z) used throughout.
enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr char kPauliChar[4] = {'I', 'X', 'Y', 'Z'};

namespace gates {

// Convention table (shared contract between all engines):
//
//   One Trotter step is U = R_zz * R_x(theta): the X rotations act on the
//   state first, then the ZZ rotations on every edge. A circuit with a
//   trailing extra X layer applies it after the last step.
//
//     R_zz(edge i,j) = exp(+i pi/4 Z_i Z_j)
//     R_x(theta)     = exp(-i theta/2 X),  per site
//
//   Schrodinger engines apply gates in circuit order. Heisenberg engines
//   conjugate the observable by O -> G^dag O G, walking the circuit from
//   its last gate to its first: the trailing extra X layer first, then per
//   step R_zz followed by R_x.
//
//   Superoperators act on the operator basis (I, X, Y, Z) per site; all
//   are real there. <0|.|0> closes a physical leg with (1, 0, 0, 1).

inline constexpr std::array<double, 4> kZeroClosure = {1.0, 0.0, 0.0, 1.0};

/// 2x2 Pauli matrix.
CTensor pauli_matrix(Pauli p);

/// exp(-i theta/2 X), 2x2.
CTensor rx_unitary(double theta);

/// exp(+i pi/4 Z (x) Z), 4x4.
CTensor rzz_unitary();

/// The unique two-site unitary with R_x(pi/2) R_zz = R_yy R_x(pi/2)
/// (equals exp(+i pi/4 Y (x) Y)), 4x4.
CTensor ryy_unitary();

/// Heisenberg conjugation superoperator of an n-site gate (2^n x 2^n
/// unitary) in the n-site Pauli operator basis: column q holds the real
/// expansion of G^dag P_q G. Entries at rounding level (|x| <= 1e-15 of
/// the max) are snapped to exact zero so Clifford structure is exact.
Tensor conjugation_superop(const CTensor& gate);

/// Single-site R_x conjugation superoperator, 4x4.
Tensor rx_superop(double theta);

/// Two-site R_zz conjugation superoperator, 16x16 (cached). Row/column
/// index is 4*p_first + p_second.
const Tensor& rzz_superop();

/// R_zz conjugation maps each two-site Pauli pair to one signed pair.
struct RzzPairRule {
  Pauli out_a;
  Pauli out_b;
  double sign;  // +1 or -1
};

/// Rule table indexed by 4*a + b, derived from rzz_superop().
const std::array<RzzPairRule, 16>& rzz_pair_rules();

}  // namespace gates
}  // namespace kising

#endif  // KISING_GATES_HPP_
