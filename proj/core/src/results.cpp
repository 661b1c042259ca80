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

#include "kising/results.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "kising/errors.hpp"

namespace kising {

std::string fmt17(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("results CSV: bad ") + what + " value '" + s + "'");
  }
}

}  // namespace

std::string results_to_csv(const std::vector<ResultRow>& rows,
                           const std::vector<std::string>& provenance) {
  std::string out;
  for (const auto& p : provenance) out += "# " + p + "\n";
  out += kResultsCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += fmt17(r.theta);
    out += ',' + r.method;
    out += ',' + r.param;
    out += ',' + r.observable;
    out += ',' + std::to_string(r.steps);
    out += ',';
    out += r.extra_rx ? '1' : '0';
    out += ',' + fmt17(r.value);
    out += ',';
    if (r.discarded_weight) out += fmt17(*r.discarded_weight);
    out += ',';
    if (r.num_terms) out += std::to_string(*r.num_terms);
    out += ',' + fmt17(r.runtime_s);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> results_from_csv(const std::string& text) {
  std::vector<ResultRow> rows;
  std::stringstream ss(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kResultsCsvHeader)
        throw ConfigError("results CSV: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 10)
      throw ConfigError("results CSV: expected 10 fields, got " +
                        std::to_string(f.size()));
    ResultRow r;
    r.theta = parse_double(f[0], "theta");
    r.method = f[1];
    r.param = f[2];
    r.observable = f[3];
    r.steps = static_cast<int>(parse_double(f[4], "steps"));
    r.extra_rx = f[5] == "1" || f[5] == "true";
    r.value = parse_double(f[6], "value");
    if (!f[7].empty()) r.discarded_weight = parse_double(f[7], "discarded_weight");
    if (!f[8].empty()) r.num_terms = static_cast<int64_t>(parse_double(f[8], "num_terms"));
    r.runtime_s = parse_double(f[9], "runtime_s");
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ConfigError("results CSV: missing header");
  return rows;
}

std::string results_to_json(const std::vector<ResultRow>& rows,
                            const std::vector<std::string>& provenance) {
  nlohmann::json j;
  j["provenance"] = provenance;
  auto& arr = j["results"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["theta"] = r.theta;
    row["method"] = r.method;
    row["param"] = r.param;
    row["observable"] = r.observable;
    row["steps"] = r.steps;
    row["extra_rx"] = r.extra_rx;
    row["value"] = r.value;
    if (r.discarded_weight) row["discarded_weight"] = *r.discarded_weight;
    if (r.num_terms) row["num_terms"] = *r.num_terms;
    row["runtime_s"] = r.runtime_s;
    arr.push_back(std::move(row));
  }
  return j.dump(2);
}

}  // namespace kising
