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

#ifndef KISING_ORACLE_HPP_
#define KISING_ORACLE_HPP_

#include <complex>
#include <vector>

#include "kising/circuit.hpp"
#include "kising/gates.hpp"
#include "kising/lattice.hpp"
#include "kising/pauli.hpp"

namespace kising {

inline constexpr int kDefaultQubitCap = 24;

/// Brute-force statevector over up to ~24 qubits. Ground truth for the
/// tensor-network and Pauli-propagation engines.
class StateVector {
 public:
  /// |0...0>
  explicit StateVector(int num_qubits, int qubit_cap = kDefaultQubitCap);

  int num_qubits() const { return num_qubits_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

  void apply_rx(int site, double theta);
  /// Diagonal exp(+i pi/4 Z_a Z_b).
  void apply_rzz(int a, int b);

  /// All gates in circuit order: per step R_x on every site then R_zz on
  /// every edge; the extra R_x layer last.
  void apply_circuit(const Lattice& lattice, const CircuitSpec& circuit);

  double norm() const;
  std::complex<double> pauli_expectation(const PauliString& s) const;

 private:
  int num_qubits_;
  std::vector<std::complex<double>> amp_;
};

enum class GateKind { Rzz, Rx, Ryy };

/// Dense unitary of a named gate (2x2 for Rx, 4x4 otherwise). R_yy is the
/// unique two-site unitary with R_x(pi/2) R_zz = R_yy R_x(pi/2).
CTensor gate_unitary(GateKind kind, double theta = 0.0);

/// <psi(t)| obs |psi(t)> with |psi(0)> = |0...0>. The result is real up to
/// rounding; an imaginary residue above 1e-10 is an internal error.
double statevector_expectation(const Lattice& lattice, const CircuitSpec& circuit,
                               const PauliSum& obs,
                               int qubit_cap = kDefaultQubitCap);

}  // namespace kising

#endif  // KISING_ORACLE_HPP_
