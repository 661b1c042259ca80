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

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "kising/circuit.hpp"
#include "kising/oracle.hpp"
#include "kising/pepo.hpp"
#include "kising/version.hpp"

namespace kising {

std::string method_name(Method m) {
  switch (m) {
    case Method::Pepo: return "pepo";
    case Method::Cet: return "cet";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "pepo") return Method::Pepo;
  if (name == "cet") return Method::Cet;
  if (name == "oracle") return Method::Oracle;
  throw ConfigError("unknown method '" + name + "' (pepo|cet|oracle)");
}

void RunConfig::validate() const {
  if (thetas.empty()) throw ConfigError("run: no theta values");
  for (double t : thetas)
    if (!std::isfinite(t)) throw ConfigError("run: non-finite theta");
  if (steps < 0) throw ConfigError("run: negative step count");
  if (chi < 1) throw ConfigError("run: chi must be >= 1");
  if (eps < 0.0) throw ConfigError("run: eps must be >= 0");
  if (workers < 1) throw ConfigError("run: workers must be >= 1");
  if (format != "csv" && format != "json")
    throw ConfigError("run: format must be csv or json");
  const int set = (trunc_order ? 1 : 0) + (trunc_terms ? 1 : 0) +
                  (trunc_coeff ? 1 : 0);
  if (set > 1) throw ConfigError("run: at most one cet truncation policy");
}

std::vector<double> parse_theta_grid(const std::string& text) {
  std::vector<double> out;
  const auto in_pi = [](double x) { return x * M_PI; };
  if (text.find(':') != std::string::npos) {
    double start = 0, stop = 0;
    int count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &start, &stop, &count) != 3 ||
        count < 1)
      throw ConfigError("theta grid must be start:stop:count (units of pi)");
    if (count == 1) {
      out.push_back(in_pi(start));
    } else {
      for (int k = 0; k < count; ++k)
        out.push_back(in_pi(start + (stop - start) * k / (count - 1)));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(in_pi(v));
    } catch (const std::exception&) {
      throw ConfigError("bad theta value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty theta list");
  return out;
}

Lattice resolve_lattice(const std::string& source) {
  if (source == "ibm127") return Lattice::ibm127();
  if (source.rfind("patch:", 0) == 0) {
    int rows = 0, cols = 0;
    if (std::sscanf(source.c_str(), "patch:%dx%d", &rows, &cols) != 2)
      throw ConfigError("patch lattice must be patch:RxC, e.g. patch:2x3");
    return Lattice::heavy_hex_patch(rows, cols);
  }
  return Lattice::from_json_file(source);
}

PauliSum resolve_observable(const std::string& name_or_spec) {
  try {
    return observable_library(name_or_spec);
  } catch (const std::invalid_argument&) {
    return parse_observable_spec(name_or_spec);
  }
}

namespace {

std::string policy_param(const RunConfig& c) {
  if (c.trunc_order) return "order:" + std::to_string(*c.trunc_order);
  if (c.trunc_terms) return "terms:" + std::to_string(*c.trunc_terms);
  if (c.trunc_coeff) return "coeff:" + fmt17(*c.trunc_coeff);
  return "none";
}

TruncationPolicy policy_of(const RunConfig& c) {
  if (c.trunc_order) return TruncationPolicy::order_cap(*c.trunc_order);
  if (c.trunc_terms) return TruncationPolicy::term_cap(*c.trunc_terms);
  if (c.trunc_coeff) return TruncationPolicy::coeff_cap(*c.trunc_coeff);
  return TruncationPolicy::none();
}

ResultRow run_point(const RunConfig& config, const Lattice& lattice,
                    const PauliSum& obs, double theta,
                    std::string* dump_terms, std::string* dump_pepo) {
  const auto t0 = std::chrono::steady_clock::now();
  const CircuitSpec circuit{theta, config.steps, config.extra_rx};

  ResultRow row;
  row.theta = theta;
  row.method = method_name(config.method);
  row.observable = config.observable;
  row.steps = config.steps;
  row.extra_rx = config.extra_rx;

  switch (config.method) {
    case Method::Cet: {
      const PauliSum evolved = back_propagate(obs, circuit, lattice,
                                              policy_of(config),
                                              config.term_hard_cap);
      row.value = zero_state_expectation(evolved);
      row.num_terms = static_cast<int64_t>(evolved.size());
      row.param = policy_param(config);
      if (dump_terms) *dump_terms = dump_terms_csv(evolved);
      break;
    }
    case Method::Pepo: {
      auto shared = std::make_shared<const Lattice>(lattice);
      Pepo pepo = Pepo::init(shared, obs);
      const EvolutionReport report = pepo.evolve(circuit, config.chi, config.eps);
      row.value = pepo.close_and_contract(config.mem_cap_bytes);
      row.discarded_weight = report.max_discarded();
      row.param = std::to_string(config.chi);
      if (dump_pepo) *dump_pepo = pepo.checkpoint_json();
      break;
    }
    case Method::Oracle: {
      // restrict to the light cone of the observable so desk-scale circuits
      // stay within the qubit cap; expectation is unchanged
      std::vector<int> support;
      for (const auto& t : obs.terms())
        for (int s : t.string.support()) support.push_back(s);
      const auto cone = lattice.extract_lightcone(support, config.steps);
      std::vector<int> to_new(static_cast<size_t>(lattice.num_sites()), -1);
      for (size_t i = 0; i < cone.to_parent.size(); ++i)
        to_new[static_cast<size_t>(cone.to_parent[i])] = static_cast<int>(i);
      std::vector<PauliTerm> relabeled;
      for (const auto& t : obs.terms()) {
        PauliTerm nt{t.coeff, t.order, PauliString{}};
        for (int s : t.string.support())
          nt.string.set(to_new[static_cast<size_t>(s)], t.string.get(s));
        relabeled.push_back(std::move(nt));
      }
      row.value = statevector_expectation(cone.lattice, circuit,
                                          PauliSum(std::move(relabeled)),
                                          config.qubit_cap);
      break;
    }
  }
  row.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

std::vector<ResultRow> run(const RunConfig& config) {
  config.validate();
  const Lattice lattice = resolve_lattice(config.lattice_source);
  const PauliSum obs = resolve_observable(config.observable);
  if (obs.max_site() >= lattice.num_sites())
    throw ConfigError("observable support outside the lattice");

  std::vector<ResultRow> rows(config.thetas.size());
  std::vector<std::string> dumps_terms(config.thetas.size());
  std::vector<std::string> dumps_pepo(config.thetas.size());

  const int workers =
      std::min<int>(config.workers, static_cast<int>(config.thetas.size()));
  if (workers <= 1) {
    for (size_t k = 0; k < config.thetas.size(); ++k)
      rows[k] = run_point(config, lattice, obs, config.thetas[k],
                          &dumps_terms[k], &dumps_pepo[k]);
  } else {
    std::atomic<size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto work = [&] {
      for (;;) {
        const size_t k = next.fetch_add(1);
        if (k >= config.thetas.size()) return;
        try {
          rows[k] = run_point(config, lattice, obs, config.thetas[k],
                              &dumps_terms[k], &dumps_pepo[k]);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  // the last theta's artifacts win, matching the single-point use case
  if (!config.dump_terms_path.empty() && config.method == Method::Cet) {
    std::ofstream out(config.dump_terms_path);
    if (!out) throw ConfigError("cannot write " + config.dump_terms_path);
    out << dumps_terms.back();
  }
  if (!config.dump_pepo_path.empty() && config.method == Method::Pepo) {
    std::ofstream out(config.dump_pepo_path);
    if (!out) throw ConfigError("cannot write " + config.dump_pepo_path);
    out << dumps_pepo.back();
  }
  return rows;
}

std::vector<std::string> run_provenance(const RunConfig& config) {
  std::vector<std::string> p;
  p.push_back(std::string("kising ") + kVersion);
  std::string line = "method=" + method_name(config.method) +
                     " lattice=" + config.lattice_source +
                     " observable=" + config.observable +
                     " steps=" + std::to_string(config.steps) +
                     " extra_rx=" + (config.extra_rx ? "1" : "0");
  if (config.method == Method::Pepo)
    line += " chi=" + std::to_string(config.chi) + " eps=" + fmt17(config.eps);
  if (config.method == Method::Cet) line += " policy=" + policy_param(config);
  p.push_back(std::move(line));
  return p;
}

}  // namespace kising
