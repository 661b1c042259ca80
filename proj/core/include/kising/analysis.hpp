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

#ifndef KISING_ANALYSIS_HPP_
#define KISING_ANALYSIS_HPP_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kising/results.hpp"

namespace kising {

struct FitResult {
  double a = 0.0;         // decay parameter
  double b = 0.0;         // asymptote: the chi -> infinity estimate
  double residual = 0.0;  // root-mean-square fit error
};

/// Fits value = b * exp(-a / chi) to (chi, value) points: log-linear
/// regression seeds a damped Gauss-Newton refinement on the original scale.
/// Needs >= 3 points with distinct chi and values of one strict sign;
/// anything else raises UnfitDataError (callers typically fall back to the
/// largest-chi value).
FitResult fit_chi_extrapolation(std::span<const std::pair<double, double>> points);

/// One compared point: |candidate - reference|.
struct ErrorPoint {
  ResultKey key;
  std::string method;
  std::string param;
  double value = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
};

struct MethodErrorSummary {
  std::string method;
  std::string param;
  double max_error = 0.0;
  double mean_error = 0.0;
  int points = 0;
};

struct ErrorReport {
  std::vector<ErrorPoint> points;
  std::vector<MethodErrorSummary> summaries;

  std::string points_csv() const;
  std::string summary_csv() const;
};

/// Absolute errors of every candidate row against the reference rows with
/// the same (theta, observable, steps, extra_rx) key. A candidate key with
/// no reference raises ConfigError.
ErrorReport error_report(std::span<const ResultRow> reference,
                         std::span<const ResultRow> candidates);

}  // namespace kising

#endif  // KISING_ANALYSIS_HPP_
