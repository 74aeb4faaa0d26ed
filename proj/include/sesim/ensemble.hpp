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

// Random standard-form ensemble: K symmetric with the diagonal and upper
// triangle drawn i.i.d. uniform on [-1, 1]. Each entry has standard
// deviation 1/sqrt(3).

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sesim/random.hpp"
#include "sesim/types.hpp"

namespace sesim {

inline constexpr double kSigmaK = 0.57735026918962576;  // 1/sqrt(3)

Matrix sample_k(Eigen::Index n, Rng& rng);

struct EnsembleSpec {
  Eigen::Index n = 1;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SpectralSummary {
  Eigen::Index n = 0;
  std::int64_t trials = 0;
  double mean_bandwidth = 0.0;
  double se_bandwidth = 0.0;
  double mean_spacing = 0.0;  // zero when n = 1
  double se_spacing = 0.0;
};

/// Mean of lambda_max - lambda_min over trials. Trial k uses
/// Rng::stream(seed, k).
SpectralSummary bandwidth_stats(const EnsembleSpec& spec);

/// Same draws as bandwidth_stats; rejects n < 2.
SpectralSummary level_spacing_stats(const EnsembleSpec& spec);

struct PowerLawFit {
  double a = 0.0;
  double b = 0.0;

  double operator()(double n) const;
};

/// Least squares of log v = log a + b log n. Needs >= 2 points with
/// positive n and v, and at least two distinct n.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

/// Roughly log-spaced integers in [lo, hi] (both included, duplicates removed).
std::vector<Eigen::Index> log_spaced(Eigen::Index lo, Eigen::Index hi, int count);

}  // namespace sesim
