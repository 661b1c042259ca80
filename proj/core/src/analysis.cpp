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

#include "kising/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kising/errors.hpp"

namespace kising {

FitResult fit_chi_extrapolation(
    std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw UnfitDataError("fit: need at least 3 points");
  std::set<double> chis;
  for (const auto& [chi, v] : points) {
    if (chi <= 0.0) throw UnfitDataError("fit: chi must be positive");
    if (!chis.insert(chi).second) throw UnfitDataError("fit: duplicate chi");
  }
  double vmax = 0.0;
  for (const auto& [chi, v] : points) vmax = std::max(vmax, std::abs(v));
  const double sign = points[0].second > 0.0 ? 1.0 : -1.0;
  for (const auto& [chi, v] : points) {
    if (v == 0.0 || std::abs(v) < 1e-13 * vmax || v * sign <= 0.0)
      throw UnfitDataError("fit: values must share one strict sign");
  }

  // linear regression of log|v| against 1/chi seeds (a, b)
  const size_t n = points.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [chi, v] : points) {
    const double x = 1.0 / chi;
    const double y = std::log(std::abs(v));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = static_cast<double>(n) * sxx - sx * sx;
  double a = det != 0.0 ? -(static_cast<double>(n) * sxy - sx * sy) / det : 0.0;
  double b = std::exp((sy + a * sx) / static_cast<double>(n));

  // damped Gauss-Newton on the original scale
  auto chi2 = [&](double aa, double bb) {
    double s = 0.0;
    for (const auto& [chi, v] : points) {
      const double r = bb * std::exp(-aa / chi) - std::abs(v);
      s += r * r;
    }
    return s;
  };
  double damping = 1e-10;
  double cost = chi2(a, b);
  for (int iter = 0; iter < 200; ++iter) {
    double jaa = 0, jab = 0, jbb = 0, ga = 0, gb = 0;
    for (const auto& [chi, v] : points) {
      const double e = std::exp(-a / chi);
      const double r = b * e - std::abs(v);
      const double da = -b * e / chi;
      const double db = e;
      jaa += da * da;
      jab += da * db;
      jbb += db * db;
      ga += da * r;
      gb += db * r;
    }
    const double aa = jaa + damping * (1.0 + jaa);
    const double bb = jbb + damping * (1.0 + jbb);
    const double d = aa * bb - jab * jab;
    if (d == 0.0) break;
    const double step_a = (bb * ga - jab * gb) / d;
    const double step_b = (aa * gb - jab * ga) / d;
    const double na = a - step_a;
    const double nb = b - step_b;
    const double nc = (nb > 0.0) ? chi2(na, nb) : cost + 1.0;
    if (nc < cost) {
      a = na;
      b = nb;
      cost = nc;
      damping = std::max(damping * 0.3, 1e-12);
      if (std::abs(step_a) < 1e-15 * (1.0 + std::abs(a)) &&
          std::abs(step_b) < 1e-15 * (1.0 + std::abs(b)))
        break;
    } else {
      damping *= 10.0;
      if (damping > 1e12) break;
    }
  }

  FitResult out;
  out.a = a;
  out.b = sign * b;
  out.residual = std::sqrt(cost / static_cast<double>(n));
  return out;
}

std::string ErrorReport::points_csv() const {
  std::string out =
      "theta,observable,steps,extra_rx,method,param,value,reference,abs_error\n";
  for (const auto& p : points) {
    out += fmt17(p.key.theta);
    out += ',' + p.key.observable;
    out += ',' + std::to_string(p.key.steps);
    out += ',';
    out += p.key.extra_rx ? '1' : '0';
    out += ',' + p.method;
    out += ',' + p.param;
    out += ',' + fmt17(p.value);
    out += ',' + fmt17(p.reference);
    out += ',' + fmt17(p.abs_error);
    out += '\n';
  }
  return out;
}

std::string ErrorReport::summary_csv() const {
  std::string out = "method,param,points,max_error,mean_error\n";
  for (const auto& s : summaries) {
    out += s.method + ',' + s.param + ',' + std::to_string(s.points) + ',' +
           fmt17(s.max_error) + ',' + fmt17(s.mean_error) + '\n';
  }
  return out;
}

ErrorReport error_report(std::span<const ResultRow> reference,
                         std::span<const ResultRow> candidates) {
  std::map<ResultKey, double> ref;
  for (const auto& r : reference) ref[r.key()] = r.value;

  ErrorReport report;
  std::map<std::pair<std::string, std::string>, MethodErrorSummary> summaries;
  for (const auto& c : candidates) {
    const auto it = ref.find(c.key());
    if (it == ref.end())
      throw ConfigError("error_report: no reference for theta=" +
                        fmt17(c.theta) + " observable=" + c.observable +
                        " steps=" + std::to_string(c.steps));
    ErrorPoint p;
    p.key = c.key();
    p.method = c.method;
    p.param = c.param;
    p.value = c.value;
    p.reference = it->second;
    p.abs_error = std::abs(c.value - it->second);
    auto& s = summaries[{c.method, c.param}];
    s.method = c.method;
    s.param = c.param;
    s.max_error = std::max(s.max_error, p.abs_error);
    s.mean_error += p.abs_error;
    s.points += 1;
    report.points.push_back(std::move(p));
  }
  for (auto& [key, s] : summaries) {
    s.mean_error /= std::max(1, s.points);
    report.summaries.push_back(s);
  }
  return report;
}

}  // namespace kising
