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

#ifndef KISING_RUNNER_HPP_
#define KISING_RUNNER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kising/network.hpp"
#include "kising/pauli.hpp"
#include "kising/results.hpp"

namespace kising {

enum class Method { Pepo, Cet, Oracle };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// One batch run: one method over a theta grid for one observable.
struct RunConfig {
  std::string lattice_source = "ibm127";  // ibm127 | patch:RxC | <json path>
  std::vector<double> thetas;             // radians
  int steps = 0;
  bool extra_rx = false;
  std::string observable = "Z62";  // library name or X..;Y..;Z.. spec
  Method method = Method::Cet;

  // pepo parameters
  int64_t chi = 1;
  double eps = 0.0;

  // cet truncation policy (exact when none set)
  std::optional<int> trunc_order;
  std::optional<int64_t> trunc_terms;
  std::optional<double> trunc_coeff;
  int64_t term_hard_cap = kDefaultTermHardCap;

  // oracle
  int qubit_cap = 24;

  int workers = 1;
  int64_t mem_cap_bytes = kDefaultMemCapBytes;
  uint64_t seed = 0;  // reserved

  std::string output_path;         // empty: caller decides
  std::string format = "csv";      // csv | json
  std::string dump_terms_path;     // cet: final Pauli sum CSV
  std::string dump_pepo_path;      // pepo: final checkpoint JSON

  void validate() const;
};

/// Parses "start:stop:count" (in units of pi, endpoints included) or a
/// comma list in units of pi, into radians.
std::vector<double> parse_theta_grid(const std::string& text);

Lattice resolve_lattice(const std::string& source);
PauliSum resolve_observable(const std::string& name_or_spec);

/// Runs the configured experiment: one row per theta, in theta order.
/// Rows are deterministic for workers == 1 (and value-identical for any
/// worker count). Engine failures propagate as exceptions.
std::vector<ResultRow> run(const RunConfig& config);

/// Provenance comment lines for emitted files.
std::vector<std::string> run_provenance(const RunConfig& config);

}  // namespace kising

#endif  // KISING_RUNNER_HPP_
