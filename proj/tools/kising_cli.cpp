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

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kising/analysis.hpp"
#include "kising/errors.hpp"
#include "kising/runner.hpp"
#include "kising/version.hpp"

namespace {

using namespace kising;

int64_t parse_mem_cap(const std::string& text) {
  double value = 0.0;
  char suffix = 0;
  const int got = std::sscanf(text.c_str(), "%lf%c", &value, &suffix);
  if (got < 1 || value <= 0.0) throw ConfigError("bad --mem-cap '" + text + "'");
  double mult = 1.0;
  switch (got == 2 ? suffix : 'B') {
    case 'B': mult = 1.0; break;
    case 'K': case 'k': mult = double{1 << 10}; break;
    case 'M': case 'm': mult = double{1 << 20}; break;
    case 'G': case 'g': mult = double{1 << 30}; break;
    default: throw ConfigError("bad --mem-cap suffix in '" + text + "'");
  }
  return static_cast<int64_t>(value * mult);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// JSON config file: same keys as the long options, overridden by explicit
// command-line flags.
struct RunCli {
  std::string lattice = "ibm127";
  std::string theta = "0:0.5:17";
  int steps = 1;
  bool extra_rx = false;
  std::string observable = "Z62";
  std::string method = "cet";
  int64_t chi = 1;
  double eps = 0.0;
  std::optional<int> trunc_order;
  std::optional<int64_t> trunc_terms;
  std::optional<double> trunc_coeff;
  int workers = 1;
  std::string mem_cap = "8G";
  std::string output;
  std::string format = "csv";
  std::string dump_terms;
  std::string dump_pepo;
  uint64_t seed = 0;
  int qubit_cap = 24;

  void load_config(const std::string& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    auto get = [&](const char* key, auto& slot) {
      using T = std::decay_t<decltype(slot)>;
      if (j.contains(key)) slot = j.at(key).get<T>();
    };
    get("lattice", lattice);
    get("theta", theta);
    get("steps", steps);
    get("extra_rx", extra_rx);
    get("observable", observable);
    get("method", method);
    get("chi", chi);
    get("eps", eps);
    if (j.contains("trunc_order")) trunc_order = j.at("trunc_order").get<int>();
    if (j.contains("trunc_terms")) trunc_terms = j.at("trunc_terms").get<int64_t>();
    if (j.contains("trunc_coeff")) trunc_coeff = j.at("trunc_coeff").get<double>();
    get("workers", workers);
    get("mem_cap", mem_cap);
    get("output", output);
    get("format", format);
    get("seed", seed);
    get("qubit_cap", qubit_cap);
  }

  RunConfig to_config() const {
    RunConfig c;
    c.lattice_source = lattice;
    c.thetas = parse_theta_grid(theta);
    c.steps = steps;
    c.extra_rx = extra_rx;
    c.observable = observable;
    c.method = parse_method(method);
    c.chi = chi;
    c.eps = eps;
    c.trunc_order = trunc_order;
    c.trunc_terms = trunc_terms;
    c.trunc_coeff = trunc_coeff;
    c.workers = workers;
    c.mem_cap_bytes = parse_mem_cap(mem_cap);
    c.output_path = output;
    c.format = format;
    c.dump_terms_path = dump_terms;
    c.dump_pepo_path = dump_pepo;
    c.seed = seed;
    c.qubit_cap = qubit_cap;
    return c;
  }
};

int cmd_run(const RunCli& cli) {
  const RunConfig config = cli.to_config();
  const std::vector<ResultRow> rows = run(config);
  const auto provenance = run_provenance(config);
  emit(config.output_path, config.format == "json"
                               ? results_to_json(rows, provenance)
                               : results_to_csv(rows, provenance));
  return 0;
}

int cmd_extrapolate(const std::string& input, const std::string& output) {
  const auto rows = results_from_csv(read_file(input));
  // group by key; points are (chi taken from param, value)
  std::map<ResultKey, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : rows) {
    double chi = 0.0;
    try {
      chi = std::stod(r.param);
    } catch (const std::exception&) {
      throw ConfigError("extrapolate: row param '" + r.param +
                        "' is not a bond dimension");
    }
    groups[r.key()].emplace_back(chi, r.value);
  }
  std::string out =
      "theta,observable,steps,extra_rx,points,status,a,b,residual\n";
  for (auto& [key, pts] : groups) {
    std::sort(pts.begin(), pts.end());
    out += fmt17(key.theta) + ',' + key.observable + ',' +
           std::to_string(key.steps) + ',' + (key.extra_rx ? "1" : "0") + ',' +
           std::to_string(pts.size()) + ',';
    try {
      const FitResult fit = fit_chi_extrapolation(pts);
      out += "ok," + fmt17(fit.a) + ',' + fmt17(fit.b) + ',' +
             fmt17(fit.residual) + '\n';
    } catch (const UnfitDataError&) {
      // fall back to the largest-chi value
      out += "fallback_largest_chi,," + fmt17(pts.back().second) + ",\n";
    }
  }
  emit(output, out);
  return 0;
}

int cmd_compare(const std::string& reference,
                const std::vector<std::string>& candidates,
                const std::string& output, const std::string& summary) {
  const auto ref = results_from_csv(read_file(reference));
  std::vector<ResultRow> cand;
  for (const auto& path : candidates) {
    const auto rows = results_from_csv(read_file(path));
    cand.insert(cand.end(), rows.begin(), rows.end());
  }
  const ErrorReport report = error_report(ref, cand);
  emit(output, report.points_csv());
  if (!summary.empty())
    emit(summary, report.summary_csv());
  else
    std::cerr << report.summary_csv();
  return 0;
}

int cmd_lattice_info(const std::string& source, int site,
                     const std::string& format) {
  const Lattice l = resolve_lattice(source);
  if (format == "json") {
    std::cout << l.to_json() << "\n";
    return 0;
  }
  std::cout << "sites:  " << l.num_sites() << "\n";
  std::cout << "edges:  " << l.num_edges() << "\n";
  std::cout << "layers: " << l.layers().size() << " (sizes:";
  for (const auto& layer : l.layers()) std::cout << ' ' << layer.size();
  std::cout << ")\n";
  std::map<int, int> degree_histogram;
  for (int s = 0; s < l.num_sites(); ++s) ++degree_histogram[l.degree(s)];
  std::cout << "degrees:";
  for (const auto& [d, n] : degree_histogram)
    std::cout << ' ' << d << "x" << n;
  std::cout << "\n";
  if (site >= 0) {
    std::cout << "neighbors(" << site << "):";
    for (int n : l.neighbors(site)) std::cout << ' ' << n;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kicked-Ising circuit engines on heavy-hexagon lattices"};
  app.set_version_flag("--version", std::string("kising ") + kising::kVersion);
  app.require_subcommand(1);

  RunCli cli;
  std::string config_path;

  auto* run_cmd = app.add_subcommand("run", "run one engine over a theta grid");
  run_cmd->add_option("--config", config_path, "JSON config file (flags win)");
  auto* opt_lattice = run_cmd->add_option("--lattice", cli.lattice,
                                          "ibm127 | patch:RxC | lattice JSON path");
  auto* opt_theta = run_cmd->add_option(
      "--theta", cli.theta, "grid start:stop:count or comma list, units of pi");
  auto* opt_steps = run_cmd->add_option("--steps", cli.steps, "Trotter steps T");
  auto* opt_extra = run_cmd->add_flag("--extra-rx", cli.extra_rx,
                                      "append one more X-rotation layer");
  auto* opt_obs = run_cmd->add_option("--observable", cli.observable,
                                      "library name or X..;Y..;Z.. spec");
  auto* opt_method =
      run_cmd->add_option("--method", cli.method, "pepo | cet | oracle");
  auto* opt_chi = run_cmd->add_option("--chi", cli.chi, "pepo bond dimension");
  auto* opt_eps = run_cmd->add_option(
      "--eps", cli.eps, "pepo relative squared singular value floor");
  auto* opt_torder =
      run_cmd->add_option("--trunc-order", "cet: drop terms above this order");
  auto* opt_tterms =
      run_cmd->add_option("--trunc-terms", "cet: keep at most this many terms");
  auto* opt_tcoeff = run_cmd->add_option(
      "--trunc-coeff", "cet: drop terms with |coeff| below this");
  auto* opt_workers =
      run_cmd->add_option("--workers", cli.workers, "theta-point worker threads");
  auto* opt_memcap = run_cmd->add_option(
      "--mem-cap", cli.mem_cap, "per-intermediate memory cap, e.g. 8G");
  auto* opt_output = run_cmd->add_option("--output", cli.output,
                                         "output path ('-' for stdout)");
  auto* opt_format = run_cmd->add_option("--format", cli.format, "csv | json");
  run_cmd->add_option("--dump-terms", cli.dump_terms,
                      "cet: write the final Pauli sum CSV here");
  run_cmd->add_option("--dump-pepo", cli.dump_pepo,
                      "pepo: write a checkpoint JSON here");
  auto* opt_seed = run_cmd->add_option("--seed", cli.seed, "reserved");
  auto* opt_qcap =
      run_cmd->add_option("--qubit-cap", cli.qubit_cap, "oracle qubit cap");

  std::string extrap_in, extrap_out;
  auto* extrap_cmd = app.add_subcommand(
      "extrapolate", "fit b*exp(-a/chi) per (theta, observable) group");
  extrap_cmd->add_option("--input", extrap_in, "results CSV (param = chi)")
      ->required();
  extrap_cmd->add_option("--output", extrap_out, "fit table CSV path");

  std::string cmp_ref, cmp_out, cmp_summary;
  std::vector<std::string> cmp_cands;
  auto* cmp_cmd =
      app.add_subcommand("compare", "absolute errors against a reference table");
  cmp_cmd->add_option("--reference", cmp_ref, "reference results CSV")->required();
  cmp_cmd->add_option("--candidate", cmp_cands, "candidate results CSV(s)")
      ->required();
  cmp_cmd->add_option("--output", cmp_out, "per-point error CSV path");
  cmp_cmd->add_option("--summary", cmp_summary, "per-method summary CSV path");

  std::string info_lattice = "ibm127", info_format = "text";
  int info_site = -1;
  auto* info_cmd = app.add_subcommand("lattice-info", "describe a lattice");
  info_cmd->add_option("--lattice", info_lattice, "lattice source");
  info_cmd->add_option("--site", info_site, "also print this site's neighbors");
  info_cmd->add_option("--format", info_format, "text | json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      // config file first, explicit flags win
      if (!config_path.empty()) {
        RunCli defaults;
        defaults.load_config(config_path);
        if (opt_lattice->count() == 0) cli.lattice = defaults.lattice;
        if (opt_theta->count() == 0) cli.theta = defaults.theta;
        if (opt_steps->count() == 0) cli.steps = defaults.steps;
        if (opt_extra->count() == 0) cli.extra_rx = defaults.extra_rx;
        if (opt_obs->count() == 0) cli.observable = defaults.observable;
        if (opt_method->count() == 0) cli.method = defaults.method;
        if (opt_chi->count() == 0) cli.chi = defaults.chi;
        if (opt_eps->count() == 0) cli.eps = defaults.eps;
        if (opt_torder->count() == 0) cli.trunc_order = defaults.trunc_order;
        if (opt_tterms->count() == 0) cli.trunc_terms = defaults.trunc_terms;
        if (opt_tcoeff->count() == 0) cli.trunc_coeff = defaults.trunc_coeff;
        if (opt_workers->count() == 0) cli.workers = defaults.workers;
        if (opt_memcap->count() == 0) cli.mem_cap = defaults.mem_cap;
        if (opt_output->count() == 0) cli.output = defaults.output;
        if (opt_format->count() == 0) cli.format = defaults.format;
        if (opt_seed->count() == 0) cli.seed = defaults.seed;
        if (opt_qcap->count() == 0) cli.qubit_cap = defaults.qubit_cap;
      }
      if (opt_torder->count() > 0) cli.trunc_order = opt_torder->as<int>();
      if (opt_tterms->count() > 0) cli.trunc_terms = opt_tterms->as<int64_t>();
      if (opt_tcoeff->count() > 0) cli.trunc_coeff = opt_tcoeff->as<double>();
      return cmd_run(cli);
    }
    if (extrap_cmd->parsed()) return cmd_extrapolate(extrap_in, extrap_out);
    if (cmp_cmd->parsed())
      return cmd_compare(cmp_ref, cmp_cands, cmp_out, cmp_summary);
    if (info_cmd->parsed())
      return cmd_lattice_info(info_lattice, info_site, info_format);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"]["type"] = typeid(e).name();
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
