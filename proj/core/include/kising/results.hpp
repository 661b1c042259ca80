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

#ifndef KISING_RESULTS_HPP_
#define KISING_RESULTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kising {

/// Identifies one measured point across engines.
struct ResultKey {
  double theta = 0.0;
  std::string observable;
  int steps = 0;
  bool extra_rx = false;

  friend bool operator<(const ResultKey& a, const ResultKey& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    if (a.observable != b.observable) return a.observable < b.observable;
    if (a.steps != b.steps) return a.steps < b.steps;
    return a.extra_rx < b.extra_rx;
  }
  friend bool operator==(const ResultKey& a, const ResultKey& b) {
    return a.theta == b.theta && a.observable == b.observable &&
           a.steps == b.steps && a.extra_rx == b.extra_rx;
  }
};

/// One row of the shared results table. Optional fields are engine
/// specific and serialize as empty cells.
struct ResultRow {
  double theta = 0.0;
  std::string method;   // pepo | cet | oracle
  std::string param;    // chi for pepo, truncation policy for cet
  std::string observable;
  int steps = 0;
  bool extra_rx = false;
  double value = 0.0;
  std::optional<double> discarded_weight;
  std::optional<int64_t> num_terms;
  double runtime_s = 0.0;

  ResultKey key() const { return {theta, observable, steps, extra_rx}; }
};

inline constexpr const char* kResultsCsvHeader =
    "theta,method,param,observable,steps,extra_rx,value,discarded_weight,"
    "num_terms,runtime_s";

/// 17-significant-digit decimal form, round-trip exact for doubles.
std::string fmt17(double x);

/// CSV with the fixed header; provenance entries become leading '#'
/// comment lines, which the reader skips.
std::string results_to_csv(const std::vector<ResultRow>& rows,
                           const std::vector<std::string>& provenance = {});
std::vector<ResultRow> results_from_csv(const std::string& text);

std::string results_to_json(const std::vector<ResultRow>& rows,
                            const std::vector<std::string>& provenance = {});

}  // namespace kising

#endif  // KISING_RESULTS_HPP_
