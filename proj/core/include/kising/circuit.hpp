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

#ifndef KISING_CIRCUIT_HPP_
#define KISING_CIRCUIT_HPP_

#include <cmath>
#include <stdexcept>

namespace kising {

/// The Trotterized kicked-Ising circuit [R_zz R_x(theta_h)]^T, optionally
/// followed by one more R_x layer (the "extra" setting).
struct CircuitSpec {
  double theta_h = 0.0;
  int steps = 0;
  bool extra_rx = false;

  void validate() const {
    if (steps < 0) throw std::invalid_argument("CircuitSpec: steps < 0");
    if (!std::isfinite(theta_h))
      throw std::invalid_argument("CircuitSpec: theta_h not finite");
  }
};

}  // namespace kising

#endif  // KISING_CIRCUIT_HPP_
