// Copyright 2026 The sesim Authors
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

#include "sesim/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sesim {

Matrix sample_k(Eigen::Index n, Rng& rng) {
  if (n < 1) throw ValidationError("sample_k: n must be >= 1");
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = rng.uniform(-1.0, 1.0);
      k(i, j) = v;
      k(j, i) = v;
    }
  return k;
}

void EnsembleSpec::validate() const {
  if (n < 1) throw ValidationError("ensemble: n must be >= 1");
  if (trials < 1) throw ValidationError("ensemble: trials must be >= 1");
}

namespace {

SpectralSummary run_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  SpectralSummary s;
  s.n = spec.n;
  s.trials = spec.trials;
  double sum = 0.0, sum2 = 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  for (std::int64_t k = 0; k < spec.trials; ++k) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(k));
    const Matrix K = sample_k(spec.n, rng);
    es.compute(K, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("ensemble: eigensolver did not converge");
    const double w = es.eigenvalues()(spec.n - 1) - es.eigenvalues()(0);
    sum += w;
    sum2 += w * w;
  }
  const double t = static_cast<double>(spec.trials);
  s.mean_bandwidth = sum / t;
  const double var = spec.trials > 1 ? std::max(0.0, (sum2 - sum * sum / t) / (t - 1.0)) : 0.0;
  s.se_bandwidth = std::sqrt(var / t);
  if (spec.n >= 2) {
    // Adjacent gaps telescope, so the mean gap of a sample is its bandwidth / (n - 1).
    const double d = static_cast<double>(spec.n - 1);
    s.mean_spacing = s.mean_bandwidth / d;
    s.se_spacing = s.se_bandwidth / d;
  }
  return s;
}

}  // namespace

SpectralSummary bandwidth_stats(const EnsembleSpec& spec) { return run_ensemble(spec); }

SpectralSummary level_spacing_stats(const EnsembleSpec& spec) {
  if (spec.n < 2) throw ValidationError("level_spacing_stats: n must be >= 2");
  return run_ensemble(spec);
}

double PowerLawFit::operator()(double n) const { return a * std::pow(n, b); }

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ValidationError("fit_power_law: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, v] : points) {
    if (!(n > 0) || !(v > 0)) throw ValidationError("fit_power_law: all n and values must be positive");
    const double x = std::log(n), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  const double den = m * sxx - sx * sx;
  if (!(std::abs(den) > 1e-300)) throw ValidationError("fit_power_law: need at least two distinct n");
  PowerLawFit fit;
  fit.b = (m * sxy - sx * sy) / den;
  fit.a = std::exp((sy - fit.b * sx) / m);
  return fit;
}

std::vector<Eigen::Index> log_spaced(Eigen::Index lo, Eigen::Index hi, int count) {
  if (lo < 1 || hi < lo || count < 1) throw ValidationError("log_spaced: need 1 <= lo <= hi and count >= 1");
  std::vector<Eigen::Index> out;
  if (count == 1 || lo == hi) {
    out.push_back(lo);
    if (hi != lo) out.push_back(hi);
    return out;
  }
  const double r = std::log(static_cast<double>(hi) / static_cast<double>(lo));
  for (int k = 0; k < count; ++k) {
    const auto v = static_cast<Eigen::Index>(std::llround(static_cast<double>(lo) * std::exp(r * k / (count - 1))));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

}  // namespace sesim
