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

#include "sesim/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sesim/linalg.hpp"

namespace sesim {

namespace {

struct Shift {
  double c;
  double lambda;
};

Shift gauge(const Matrix& h, double g_max) {
  Shift s{h.diagonal().mean(), 1.0};
  Matrix shifted = h;
  shifted.diagonal().array() -= s.c;
  const double m = max_abs_entry(shifted);
  if (m > 0.0) s.lambda = m / g_max;
  return s;
}

Matrix apply_shift(const Matrix& h, double c, double lambda) {
  Matrix out = h;
  out.diagonal().array() -= c;
  out /= lambda;
  return symmetrize_upper(out);
}

}  // namespace

StaticRescale rescale_static(const Matrix& H, double g_max) {
  if (!(g_max > 0)) throw ValidationError("rescale_static: g_max must be positive");
  if (H.rows() < 1 || !is_exactly_symmetric(H)) throw ValidationError("rescale_static: H must be symmetric");
  const Shift s = gauge(H, g_max);
  return {SesHamiltonian(apply_shift(H, s.c, s.lambda)), s.lambda, s.c};
}

std::size_t RescalePlan::segment(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  return std::min(k, times.size() - 2);
}

double RescalePlan::lambda_at(double t) const {
  t = std::clamp(t, times.front(), times.back());
  const std::size_t k = segment(t);
  const double w = (t - times[k]) / (times[k + 1] - times[k]);
  return (1.0 - w) * lambda[k] + w * lambda[k + 1];
}

double RescalePlan::device_time(double t) const {
  t = std::clamp(t, times.front(), times.back());
  const std::size_t k = segment(t);
  const double h = times[k + 1] - times[k];
  const double s = t - times[k];
  return t_qc[k] + lambda[k] * s + 0.5 * (lambda[k + 1] - lambda[k]) * s * s / h;
}

double RescalePlan::model_time(double tq) const {
  tq = std::clamp(tq, 0.0, t_qc.back());
  auto it = std::upper_bound(t_qc.begin(), t_qc.end(), tq);
  std::size_t k = it == t_qc.begin() ? 0 : static_cast<std::size_t>(it - t_qc.begin()) - 1;
  k = std::min(k, t_qc.size() - 2);
  const double h = times[k + 1] - times[k];
  const double d = tq - t_qc[k];
  const double slope = (lambda[k + 1] - lambda[k]) / h;
  // Root of lambda_k s + slope s^2 / 2 = d in the cancellation-free form.
  const double s = 2.0 * d / (lambda[k] + std::sqrt(std::max(0.0, lambda[k] * lambda[k] + 2.0 * slope * d)));
  return std::min(times[k] + s, times[k + 1]);
}

Matrix RescalePlan::scaled_at_model_time(double t) const {
  const Matrix h = model_.at(t);
  return apply_shift(h, h.diagonal().mean(), lambda_at(t));
}

double largest_lambda_step(const TimeDependentHamiltonian& model, double g_max) {
  if (!(g_max > 0)) throw ValidationError("largest_lambda_step: g_max must be positive");
  double worst = 0.0;
  double prev = gauge(model.samples()[0], g_max).lambda;
  for (std::size_t k = 1; k < model.size(); ++k) {
    const double cur = gauge(model.samples()[k], g_max).lambda;
    worst = std::max(worst, std::abs(cur - prev) / std::min(cur, prev));
    prev = cur;
  }
  return worst;
}

RescalePlan rescale_td(const TimeDependentHamiltonian& model, double g_max, const RescaleOptions& opts) {
  if (!(g_max > 0)) throw ValidationError("rescale_td: g_max must be positive");
  if (!(opts.max_lambda_step > 0)) throw ValidationError("rescale_td: max_lambda_step must be positive");
  const std::size_t m = model.size();
  std::vector<double> c(m), lambda(m), tq(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const Shift s = gauge(model.samples()[k], g_max);
    c[k] = s.c;
    lambda[k] = s.lambda;
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double rel = std::abs(lambda[k + 1] - lambda[k]) / std::min(lambda[k], lambda[k + 1]);
    if (rel > opts.max_lambda_step) {
      std::ostringstream os;
      os << "rescale_td: lambda changes by " << 100.0 * rel << "% between t = " << model.times()[k] << " and t = "
         << model.times()[k + 1] << " (limit " << 100.0 * opts.max_lambda_step
         << "%); resample the model Hamiltonian more densely there";
      throw ValidationError(os.str());
    }
  }
  for (std::size_t k = 0; k + 1 < m; ++k)
    tq[k + 1] = tq[k] + 0.5 * (lambda[k] + lambda[k + 1]) * (model.times()[k + 1] - model.times()[k]);

  const std::size_t grid = opts.device_samples > 1 ? opts.device_samples : std::max<std::size_t>(8 * m, 2049);
  // Placeholder device Hamiltonian, replaced once the time map exists.
  RescalePlan plan(model, TimeDependentHamiltonian::constant(Matrix::Zero(model.dim(), model.dim()), 0.0, 1.0));
  plan.g_max = g_max;
  plan.times = model.times();
  plan.c = std::move(c);
  plan.lambda = std::move(lambda);
  plan.t_qc = std::move(tq);

  const double total = plan.t_qc.back();
  std::vector<double> grid_t(grid);
  std::vector<Matrix> grid_h(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const double tqj = j + 1 == grid ? total : total * static_cast<double>(j) / static_cast<double>(grid - 1);
    grid_t[j] = tqj;
    grid_h[j] = plan.scaled_at_model_time(plan.model_time(tqj));
  }
  plan.scaled = TimeDependentHamiltonian(std::move(grid_t), std::move(grid_h));
  return plan;
}

SampledMap invert_time_map(const RescalePlan& plan) {
  SampledMap out;
  out.x = plan.scaled.times();
  out.y.reserve(out.x.size());
  for (double tq : out.x) out.y.push_back(plan.model_time(tq));
  return out;
}

double interpolate(const SampledMap& map, double x) {
  if (map.x.size() != map.y.size() || map.x.empty()) throw ValidationError("interpolate: malformed map");
  if (x <= map.x.front()) return map.y.front();
  if (x >= map.x.back()) return map.y.back();
  auto it = std::upper_bound(map.x.begin(), map.x.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - map.x.begin()) - 1;
  const double w = (x - map.x[k]) / (map.x[k + 1] - map.x[k]);
  return (1.0 - w) * map.y[k] + w * map.y[k + 1];
}

}  // namespace sesim
