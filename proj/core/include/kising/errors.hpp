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

#ifndef KISING_ERRORS_HPP_
#define KISING_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace kising {

/// Bad or missing configuration: unreadable data files, invalid lattices,
/// inconsistent run parameters.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A computation would exceed a configured resource bound (term cap,
/// per-intermediate memory cap, qubit cap). Always raised eagerly, never
/// silently truncated.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Numerical failure: non-finite input, SVD non-convergence.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A value series that the extrapolation model cannot represent
/// (mixed signs or values at rounding level).
struct UnfitDataError : std::runtime_error {
  explicit UnfitDataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kising

#endif  // KISING_ERRORS_HPP_
