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

#include "kising/oracle.hpp"

#include <cmath>

namespace kising {

namespace {
using cd = std::complex<double>;
}

StateVector::StateVector(int num_qubits, int qubit_cap)
    : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("StateVector: need a qubit");
  if (num_qubits > qubit_cap)
    throw ResourceLimitError("statevector: " + std::to_string(num_qubits) +
                             " qubits exceeds the cap of " +
                             std::to_string(qubit_cap));
  amp_.assign(size_t{1} << num_qubits, cd{});
  amp_[0] = 1.0;
}

void StateVector::apply_rx(int site, double theta) {
  const cd c = std::cos(theta / 2.0);
  const cd ms{0.0, -std::sin(theta / 2.0)};
  const size_t stride = size_t{1} << site;
  const size_t n = amp_.size();
  for (size_t base = 0; base < n; base += 2 * stride)
    for (size_t k = base; k < base + stride; ++k) {
      const cd a0 = amp_[k];
      const cd a1 = amp_[k + stride];
      amp_[k] = c * a0 + ms * a1;
      amp_[k + stride] = ms * a0 + c * a1;
    }
}

void StateVector::apply_rzz(int a, int b) {
  const cd plus = std::exp(cd{0.0, M_PI / 4.0});
  const cd minus = std::conj(plus);
  const size_t ma = size_t{1} << a;
  const size_t mb = size_t{1} << b;
  const size_t n = amp_.size();
  for (size_t k = 0; k < n; ++k) {
    const bool parity = ((k & ma) != 0) != ((k & mb) != 0);
    amp_[k] *= parity ? minus : plus;
  }
}

void StateVector::apply_circuit(const Lattice& lattice,
                                const CircuitSpec& circuit) {
  circuit.validate();
  for (int t = 0; t < circuit.steps; ++t) {
    for (int s = 0; s < lattice.num_sites(); ++s) apply_rx(s, circuit.theta_h);
    for (const auto& layer : lattice.layers())
      for (int id : layer) {
        const auto& [a, b] = lattice.edge(id);
        apply_rzz(a, b);
      }
  }
  if (circuit.extra_rx)
    for (int s = 0; s < lattice.num_sites(); ++s) apply_rx(s, circuit.theta_h);
}

double StateVector::norm() const {
  double n = 0.0;
  for (const cd& a : amp_) n += std::norm(a);
  return std::sqrt(n);
}

std::complex<double> StateVector::pauli_expectation(const PauliString& s) const {
  uint64_t x_mask = 0, z_mask = 0;
  int y_count = 0;
  for (int site = 0; site < num_qubits_; ++site) {
    const Pauli p = s.get(site);
    if (p == Pauli::X || p == Pauli::Y) x_mask |= uint64_t{1} << site;
    if (p == Pauli::Z || p == Pauli::Y) z_mask |= uint64_t{1} << site;
    if (p == Pauli::Y) ++y_count;
  }
  if (s.max_site() >= num_qubits_)
    throw std::invalid_argument("pauli_expectation: support outside register");

  // P|b> = i^{#Y} (-1)^{popcount(b & z_mask)} |b ^ x_mask>
  static constexpr cd i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cd global = i_pow[y_count & 3];
  cd acc{};
  const size_t n = amp_.size();
  for (size_t b = 0; b < n; ++b) {
    const int sign = __builtin_popcountll(b & z_mask) & 1 ? -1 : 1;
    acc += std::conj(amp_[b ^ x_mask]) * (static_cast<double>(sign) * amp_[b]);
  }
  return global * acc;
}

CTensor gate_unitary(GateKind kind, double theta) {
  switch (kind) {
    case GateKind::Rx: return gates::rx_unitary(theta);
    case GateKind::Rzz: return gates::rzz_unitary();
    case GateKind::Ryy: return gates::ryy_unitary();
  }
  throw std::invalid_argument("gate_unitary: unknown gate");
}

double statevector_expectation(const Lattice& lattice, const CircuitSpec& circuit,
                               const PauliSum& obs, int qubit_cap) {
  if (obs.max_site() >= lattice.num_sites())
    throw std::invalid_argument("observable support outside the lattice");
  StateVector psi(lattice.num_sites(), qubit_cap);
  psi.apply_circuit(lattice, circuit);
  cd acc{};
  for (const auto& t : obs.terms())
    acc += t.coeff * psi.pauli_expectation(t.string);
  if (std::abs(acc.imag()) > 1e-10)
    throw NumericError("statevector_expectation: non-real expectation");
  return acc.real();
}

}  // namespace kising
