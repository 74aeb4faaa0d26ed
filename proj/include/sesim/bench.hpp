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

// Wall-clock benchmarks of the propagation kernels on the random ensemble.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sesim/ensemble.hpp"
#include "sesim/propagate.hpp"

namespace sesim {

enum class BenchMode { Const, TimeDependent };

struct BenchOptions {
  std::vector<Eigen::Index> n_list;
  int trials = 10;
  std::vector<PropagatorKind> kernels;
  std::uint64_t seed = 0;
  double t_qc = 100e-9;
  double g_max = mhz_to_rad_per_s(50.0);
  int warmup = 1;
  /// Groups for the median-of-means estimate.
  int groups = 3;
  /// Time-dependent mode: spacing of the sampled Hamiltonian.
  double sample_spacing = 1e-9;
  /// Discard a timing sample whose state differs from the reference by more.
  double gate_tol = 1e-6;
  /// Time-dependent mode: largest n checked against a tight RK reference.
  Eigen::Index td_reference_max_n = 64;

  void validate() const;
};

struct BenchSample {
  std::string kernel;
  Eigen::Index n = 0;
  double mean_s = 0.0;
  double std_s = 0.0;
  double mom_s = 0.0;  // median of group means
  int kept = 0;
  int discarded = 0;
  double max_error = 0.0;
};

struct Breakeven {
  double parallel_factor = 1e-6;
  double t_qu = 200e-9;
  double n_star = 0.0;
  double reference = 0.0;  // published single-core comparison value
};

struct BenchReport {
  BenchMode mode = BenchMode::Const;
  std::vector<BenchSample> samples;
  std::map<std::string, PowerLawFit> fits;
  std::map<std::string, Breakeven> breakeven;
  std::map<std::string, double> spearman;

  std::vector<BenchSample> for_kernel(const std::string& kernel) const;
};

BenchReport bench_const(const BenchOptions& opts);
BenchReport bench_td(const BenchOptions& opts);

/// g_max K(t): an independent ensemble draw at every sample time, linearly
/// interpolated in between. Trial k uses Rng::stream(seed, k).
TimeDependentHamiltonian bench_td_model(Eigen::Index n, double duration, double spacing, double g_max,
                                        std::uint64_t seed, std::uint64_t trial);

/// n* with a n*^b * parallel_factor = t_qu.
double breakeven_dimension(const PowerLawFit& fit, double parallel_factor, double t_qu);

/// Rank correlation with average ranks for ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

/// Median of the means of `groups` contiguous chunks.
double median_of_means(const std::vector<double>& v, int groups);

struct SliceRatio {
  Eigen::Index n = 0;
  double sliced_s = 0.0;
  double single_slice_s = 0.0;
  double rk_s = 0.0;
  std::int64_t slices = 0;

  double ratio() const { return sliced_s / single_slice_s; }
  double rk_ratio() const { return sliced_s / rk_s; }
};

/// Times TimeSliced against one slice of its inner kernel and against RK
/// on the same bench model.
SliceRatio time_slice_ratio(Eigen::Index n, const BenchOptions& opts, const TimeSliced& sliced = {});

std::string format_bench_csv(const BenchReport& report);

}  // namespace sesim
