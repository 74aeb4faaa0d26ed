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

// Mapping model Hamiltonians onto hardware-compatible SES Hamiltonians.
//
// A model H is shifted by c = mean(diag H) and divided by the smallest
// lambda > 0 that brings every entry into [-g_max, g_max]. The device then
// runs for t_qc = lambda t. For a time-dependent model, c and lambda are
// per-sample and the device clock is t_qc(t) = integral of lambda.

#pragma once

#include <vector>

#include "sesim/core.hpp"

namespace sesim {

struct StaticRescale {
  SesHamiltonian H;
  double lambda = 1.0;
  double c = 0.0;

  /// Device time that reproduces a model evolution of length t.
  double device_time(double t) const { return lambda * t; }
};

/// (H - c I) / lambda. H - c I = 0 gives lambda = 1 and H = 0.
StaticRescale rescale_static(const Matrix& H, double g_max);

struct RescalePlan {
  double g_max = 0.0;
  std::vector<double> times;   // model sample times
  std::vector<double> c;       // gauge shift per sample (model units)
  std::vector<double> lambda;  // scale per sample
  std::vector<double> t_qc;    // device clock at each sample, t_qc[0] = 0
  /// Device Hamiltonian sampled on a uniform device-time grid starting at 0.
  TimeDependentHamiltonian scaled;

  /// Device time at model time t. lambda is linear between samples, so the
  /// map is piecewise quadratic and agrees with the trapezoid sums at nodes.
  double device_time(double t) const;
  /// Model time at device time tq (exact inverse of device_time).
  double model_time(double tq) const;
  double lambda_at(double t) const;
  /// (H(t) - c(t) I) / lambda(t) at a model time.
  Matrix scaled_at_model_time(double t) const;
  double total_device_time() const { return t_qc.back(); }
  bool compression(std::size_t k) const { return lambda[k] > 1.0; }

  const TimeDependentHamiltonian& model() const { return model_; }

  RescalePlan(TimeDependentHamiltonian model, TimeDependentHamiltonian scaled_h)
      : scaled(std::move(scaled_h)), model_(std::move(model)) {}

 private:
  std::size_t segment(double t) const;
  TimeDependentHamiltonian model_;
};

struct RescaleOptions {
  /// Size of the uniform device-time grid; 0 selects max(8 x samples, 2049).
  std::size_t device_samples = 0;
  /// Largest allowed relative change of lambda between adjacent samples.
  double max_lambda_step = 0.10;
};

/// max_k |lambda_{k+1} - lambda_k| / min(lambda_k, lambda_{k+1}).
double largest_lambda_step(const TimeDependentHamiltonian& model, double g_max);

/// Throws ValidationError when lambda changes by more than
/// max_lambda_step between adjacent samples (the grid is too coarse).
RescalePlan rescale_td(const TimeDependentHamiltonian& model, double g_max, const RescaleOptions& opts = {});

struct SampledMap {
  std::vector<double> x;
  std::vector<double> y;
};

/// Model time t as a function of device time, on the plan's device grid.
SampledMap invert_time_map(const RescalePlan& plan);

/// Monotone piecewise-linear interpolation of a sampled map; clamps outside.
double interpolate(const SampledMap& map, double x);

}  // namespace sesim
