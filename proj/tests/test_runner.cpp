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

#include "kising/runner.hpp"

#include <cmath>

#include <doctest.h>

#include "kising/analysis.hpp"

using namespace kising;

TEST_CASE("theta grid parsing in units of pi") {
  const auto grid = parse_theta_grid("0:0.5:17");
  REQUIRE(grid.size() == 17);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(M_PI / 2));
  CHECK(grid[8] == doctest::Approx(M_PI / 4));

  const auto single = parse_theta_grid("0.25:0.25:1");
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(M_PI / 4));

  const auto list = parse_theta_grid("0.1,0.2");
  REQUIRE(list.size() == 2);
  CHECK(list[0] == doctest::Approx(0.1 * M_PI));

  CHECK_THROWS_AS((void)parse_theta_grid("0:0.5"), ConfigError);
  CHECK_THROWS_AS((void)parse_theta_grid("abc"), ConfigError);
  CHECK_THROWS_AS((void)parse_theta_grid("0:0.5:0"), ConfigError);
}

TEST_CASE("lattice and observable resolution") {
  CHECK(resolve_lattice("ibm127").num_sites() == 127);
  CHECK(resolve_lattice("patch:1x1").num_sites() == 12);
  CHECK_THROWS_AS((void)resolve_lattice("patch:0x0"), ConfigError);
  CHECK_THROWS_AS((void)resolve_lattice("/no/such/file.json"), ConfigError);
  CHECK(resolve_observable("W10").terms()[0].string.weight() == 10);
  CHECK(resolve_observable("Z5;X3").terms()[0].string.weight() == 2);
}

TEST_CASE("run: cet over a grid matches the depth-3 closed form") {
  RunConfig cfg;
  cfg.method = Method::Cet;
  cfg.steps = 3;
  cfg.thetas = parse_theta_grid("0:0.5:17");
  const auto rows = run(cfg);
  REQUIRE(rows.size() == 17);
  for (const auto& r : rows) {
    const double c = std::cos(r.theta), s = std::sin(r.theta);
    CHECK(std::abs(r.value - c * c * c * (1 + s * s)) < 1e-12);
    CHECK(r.method == "cet");
    CHECK(r.param == "none");
    CHECK(r.num_terms.has_value());
  }
}

TEST_CASE("run: pepo at the Clifford point reports zero discarded weight") {
  RunConfig cfg;
  cfg.method = Method::Pepo;
  cfg.chi = 1;
  cfg.steps = 20;
  cfg.thetas = {M_PI / 2};
  const auto rows = run(cfg);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].discarded_weight.has_value());
  CHECK(*rows[0].discarded_weight == 0.0);
  CHECK(rows[0].param == "1");
}

TEST_CASE("run: oracle beyond the qubit cap is a resource error") {
  RunConfig cfg;
  cfg.method = Method::Oracle;
  cfg.lattice_source = "patch:3x3";
  cfg.observable = "Z0";
  cfg.steps = 12;  // light cone covers the whole patch
  cfg.thetas = {0.3};
  CHECK_THROWS_AS((void)run(cfg), ResourceLimitError);
}

TEST_CASE("run: oracle light-cone restriction matches cet on ibm127") {
  RunConfig oracle_cfg;
  oracle_cfg.method = Method::Oracle;
  oracle_cfg.steps = 3;
  oracle_cfg.thetas = {0.4, 1.1};
  const auto oracle_rows = run(oracle_cfg);

  RunConfig cet_cfg = oracle_cfg;
  cet_cfg.method = Method::Cet;
  const auto cet_rows = run(cet_cfg);
  for (size_t k = 0; k < oracle_rows.size(); ++k)
    CHECK(std::abs(oracle_rows[k].value - cet_rows[k].value) < 1e-10);
}

TEST_CASE("run twice gives byte-identical rows apart from runtime") {
  RunConfig cfg;
  cfg.method = Method::Pepo;
  cfg.chi = 4;
  cfg.steps = 3;
  cfg.observable = "W10";
  cfg.thetas = parse_theta_grid("0.05:0.45:5");
  auto strip = [](std::vector<ResultRow> rows) {
    for (auto& r : rows) r.runtime_s = 0.0;
    return results_to_csv(rows);
  };
  CHECK(strip(run(cfg)) == strip(run(cfg)));
}

TEST_CASE("worker pool reproduces single-worker values") {
  RunConfig cfg;
  cfg.method = Method::Cet;
  cfg.steps = 4;
  cfg.thetas = parse_theta_grid("0.05:0.45:7");
  const auto serial = run(cfg);
  cfg.workers = 3;
  const auto parallel = run(cfg);
  REQUIRE(serial.size() == parallel.size());
  for (size_t k = 0; k < serial.size(); ++k) {
    CHECK(parallel[k].theta == serial[k].theta);  // theta order preserved
    CHECK(std::abs(parallel[k].value - serial[k].value) < 1e-12);
  }
}

TEST_CASE("results CSV round trip preserves the error report") {
  RunConfig cfg;
  cfg.method = Method::Cet;
  cfg.steps = 3;
  cfg.thetas = parse_theta_grid("0:0.5:9");
  const auto ref_rows = run(cfg);

  RunConfig pepo_cfg = cfg;
  pepo_cfg.method = Method::Pepo;
  pepo_cfg.chi = 2;
  const auto cand_rows = run(pepo_cfg);

  const ErrorReport direct = error_report(ref_rows, cand_rows);
  const auto ref_round = results_from_csv(results_to_csv(ref_rows, {"prov line"}));
  const auto cand_round = results_from_csv(results_to_csv(cand_rows));
  const ErrorReport round = error_report(ref_round, cand_round);
  CHECK(direct.points_csv() == round.points_csv());
  CHECK(direct.summary_csv() == round.summary_csv());
}

TEST_CASE("results CSV header is bit-exact and fields round trip") {
  ResultRow r;
  r.theta = M_PI / 3;
  r.method = "pepo";
  r.param = "64";
  r.observable = "W17tilde";
  r.steps = 5;
  r.extra_rx = true;
  r.value = -0.123456789012345678;
  r.discarded_weight = 1e-9;
  r.runtime_s = 2.5;
  const std::string csv = results_to_csv({r});
  CHECK(csv.find("theta,method,param,observable,steps,extra_rx,value,"
                 "discarded_weight,num_terms,runtime_s\n") == 0);
  const auto back = results_from_csv(csv);
  REQUIRE(back.size() == 1);
  CHECK(back[0].theta == r.theta);  // 17 digits round trip exactly
  CHECK(back[0].value == r.value);
  CHECK(back[0].extra_rx == true);
  CHECK(back[0].discarded_weight == r.discarded_weight);
  CHECK(!back[0].num_terms.has_value());

  CHECK_THROWS_AS((void)results_from_csv("bad header\n1,2\n"), ConfigError);
}

TEST_CASE("json output carries the same values") {
  RunConfig cfg;
  cfg.method = Method::Cet;
  cfg.steps = 2;
  cfg.thetas = {0.3};
  const auto rows = run(cfg);
  const std::string json = results_to_json(rows, run_provenance(cfg));
  CHECK(json.find("\"method\": \"cet\"") != std::string::npos);
  CHECK(json.find("\"value\"") != std::string::npos);
}

TEST_CASE("config validation rejects contradictions") {
  RunConfig cfg;
  cfg.thetas = {0.3};
  cfg.trunc_order = 3;
  cfg.trunc_terms = 100;
  CHECK_THROWS_AS((void)run(cfg), ConfigError);
  RunConfig no_theta;
  CHECK_THROWS_AS((void)run(no_theta), ConfigError);
}
