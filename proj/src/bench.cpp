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

#include "sesim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sesim/random.hpp"

namespace sesim {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_once(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

void summarize(BenchSample& s, const std::vector<double>& times, int groups) {
  s.kept = static_cast<int>(times.size());
  if (times.empty()) return;
  const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
  double ss = 0.0;
  for (double t : times) ss += (t - mean) * (t - mean);
  s.mean_s = mean;
  s.std_s = times.size() > 1 ? std::sqrt(ss / static_cast<double>(times.size() - 1)) : 0.0;
  s.mom_s = median_of_means(times, groups);
}

void fit_all(BenchReport& rep, double reference) {
  std::map<std::string, std::vector<std::pair<double, double>>> pts;
  for (const auto& s : rep.samples)
    if (s.kept > 0) pts[s.kernel].emplace_back(static_cast<double>(s.n), s.mom_s);
  for (const auto& [kernel, p] : pts) {
    std::vector<double> x, y;
    for (const auto& [n, t] : p) {
      x.push_back(n);
      y.push_back(t);
    }
    if (p.size() >= 2) rep.spearman[kernel] = spearman_rho(x, y);
    if (p.size() < 4) {
      warn("bench: fewer than 4 points for " + kernel + "; no power-law fit");
      continue;
    }
    const PowerLawFit f = fit_power_law(p);
    rep.fits[kernel] = f;
    Breakeven be;
    be.n_star = breakeven_dimension(f, be.parallel_factor, be.t_qu);
    be.reference = reference;
    rep.breakeven[kernel] = be;
  }
}

}  // namespace

void BenchOptions::validate() const {
  if (n_list.empty()) throw ValidationError("bench: empty n list");
  for (auto n : n_list)
    if (n < 1) throw ValidationError("bench: n must be positive");
  if (trials < 3) throw ValidationError("bench: trials must be >= 3");
  if (kernels.empty()) throw ValidationError("bench: no kernels selected");
  for (const auto& k : kernels) sesim::validate(k);
  if (!(t_qc > 0.0) || !(g_max > 0.0) || !(sample_spacing > 0.0))
    throw ValidationError("bench: t_qc, g_max and sample spacing must be positive");
  if (warmup < 0 || groups < 1) throw ValidationError("bench: invalid warmup or group count");
}

std::vector<BenchSample> BenchReport::for_kernel(const std::string& kernel) const {
  std::vector<BenchSample> out;
  for (const auto& s : samples)
    if (s.kernel == kernel) out.push_back(s);
  return out;
}

double median_of_means(const std::vector<double>& v, int groups) {
  if (v.empty()) return 0.0;
  const auto g = static_cast<std::size_t>(std::clamp<int>(groups, 1, static_cast<int>(v.size())));
  std::vector<double> means;
  for (std::size_t k = 0; k < g; ++k) {
    const std::size_t lo = k * v.size() / g, hi = (k + 1) * v.size() / g;
    means.push_back(std::accumulate(v.begin() + lo, v.begin() + hi, 0.0) / static_cast<double>(hi - lo));
  }
  std::sort(means.begin(), means.end());
  const std::size_t m = means.size();
  return m % 2 ? means[m / 2] : 0.5 * (means[m / 2 - 1] + means[m / 2]);
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("spearman_rho: need two equal-length series");
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double breakeven_dimension(const PowerLawFit& fit, double parallel_factor, double t_qu) {
  if (!(fit.a > 0.0) || !(fit.b > 0.0)) throw ValidationError("breakeven: fit must have positive a and b");
  return std::pow(t_qu / (fit.a * parallel_factor), 1.0 / fit.b);
}

TimeDependentHamiltonian bench_td_model(Eigen::Index n, double duration, double spacing, double g_max,
                                        std::uint64_t seed, std::uint64_t trial) {
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(duration / spacing - 1e-9)));
  Rng rng = Rng::stream(seed, trial);
  std::vector<double> times(intervals + 1);
  std::vector<Matrix> samples(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    times[k] = duration * static_cast<double>(k) / static_cast<double>(intervals);
    samples[k] = g_max * sample_k(n, rng);
  }
  return TimeDependentHamiltonian(std::move(times), std::move(samples));
}

BenchReport bench_const(const BenchOptions& opts) {
  opts.validate();
  BenchReport rep;
  rep.mode = BenchMode::Const;
  for (Eigen::Index n : opts.n_list) {
    std::vector<std::vector<double>> times(opts.kernels.size());
    std::vector<BenchSample> samples(opts.kernels.size());
    for (int trial = -opts.warmup; trial < opts.trials; ++trial) {
      // Warm-up draws reuse the first workload and are never recorded.
      Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(std::max(trial, 0)));
      const SesHamiltonian h(opts.g_max * sample_k(n, rng));
      const SesState psi = SesState::basis(n, 0);
      PropagationStats st;
      const CVector ref = kernels::diagonalization(h.matrix(), opts.t_qc, psi.amplitudes(), st);
      for (std::size_t k = 0; k < opts.kernels.size(); ++k) {
        CVector out;
        const double dt = time_once([&] { out = propagate_const(h, opts.t_qc, psi, opts.kernels[k]).final_state.amplitudes(); });
        if (trial < 0) continue;
        const double err = (out - ref).norm();
        samples[k].max_error = std::max(samples[k].max_error, err);
        if (err > opts.gate_tol) {
          ++samples[k].discarded;
          warn("bench: discarded " + kind_name(opts.kernels[k]) + " sample at n = " + std::to_string(n) +
               " (error " + std::to_string(err) + ")");
          continue;
        }
        times[k].push_back(dt);
      }
    }
    for (std::size_t k = 0; k < opts.kernels.size(); ++k) {
      samples[k].kernel = kind_name(opts.kernels[k]);
      samples[k].n = n;
      summarize(samples[k], times[k], opts.groups);
      rep.samples.push_back(samples[k]);
    }
  }
  fit_all(rep, 630.0);
  return rep;
}

BenchReport bench_td(const BenchOptions& opts) {
  opts.validate();
  BenchReport rep;
  rep.mode = BenchMode::TimeDependent;
  const RungeKutta tight{1e-12, 1e-14};
  for (Eigen::Index n : opts.n_list) {
    std::vector<std::vector<double>> times(opts.kernels.size());
    std::vector<BenchSample> samples(opts.kernels.size());
    for (int trial = -opts.warmup; trial < opts.trials; ++trial) {
      const auto tr = static_cast<std::uint64_t>(std::max(trial, 0));
      const auto h = bench_td_model(n, opts.t_qc, opts.sample_spacing, opts.g_max, opts.seed, tr);
      const SesState psi = SesState::basis(n, 0);
      std::optional<CVector> ref;
      if (trial >= 0 && n <= opts.td_reference_max_n)
        ref = propagate_td(h, 0.0, opts.t_qc, psi, tight).final_state.amplitudes();
      for (std::size_t k = 0; k < opts.kernels.size(); ++k) {
        CVector out;
        const double dt = time_once([&] { out = propagate_td(h, 0.0, opts.t_qc, psi, opts.kernels[k]).final_state.amplitudes(); });
        if (trial < 0) continue;
        // Time slicing carries its own discretization error, so only the
        // norm is gated for it; RK is checked against the tight reference.
        double err = std::abs(out.norm() - 1.0);
        if (ref && std::holds_alternative<RungeKutta>(opts.kernels[k])) err = std::max(err, (out - *ref).norm());
        samples[k].max_error = std::max(samples[k].max_error, err);
        if (err > opts.gate_tol) {
          ++samples[k].discarded;
          warn("bench: discarded " + kind_name(opts.kernels[k]) + " sample at n = " + std::to_string(n));
          continue;
        }
        times[k].push_back(dt);
      }
    }
    for (std::size_t k = 0; k < opts.kernels.size(); ++k) {
      samples[k].kernel = kind_name(opts.kernels[k]);
      samples[k].n = n;
      summarize(samples[k], times[k], opts.groups);
      rep.samples.push_back(samples[k]);
    }
  }
  fit_all(rep, 50.0);
  return rep;
}

SliceRatio time_slice_ratio(Eigen::Index n, const BenchOptions& opts, const TimeSliced& sliced) {
  SliceRatio r;
  r.n = n;
  r.slices = static_cast<std::int64_t>(std::llround(opts.t_qc / sliced.dt));
  std::vector<double> ts, one, rk;
  const SesState psi = SesState::basis(n, 0);
  const RungeKutta rk_opts{};
  const PropagatorKind inner = std::visit([](const auto& k) -> PropagatorKind { return k; }, sliced.inner);
  for (int trial = -opts.warmup; trial < opts.trials; ++trial) {
    const auto tr = static_cast<std::uint64_t>(std::max(trial, 0));
    const auto h = bench_td_model(n, opts.t_qc, opts.sample_spacing, opts.g_max, opts.seed, tr);
    const SesHamiltonian mid(h.at(0.5 * sliced.dt));
    const double a = time_once([&] { (void)propagate_td(h, 0.0, opts.t_qc, psi, sliced); });
    const double b = time_once([&] { (void)propagate_const(mid, sliced.dt, psi, inner); });
    const double c = time_once([&] { (void)propagate_td(h, 0.0, opts.t_qc, psi, rk_opts); });
    if (trial < 0) continue;
    ts.push_back(a);
    one.push_back(b);
    rk.push_back(c);
  }
  r.sliced_s = median_of_means(ts, opts.groups);
  r.single_slice_s = median_of_means(one, opts.groups);
  r.rk_s = median_of_means(rk, opts.groups);
  return r;
}

std::string format_bench_csv(const BenchReport& report) {
  std::ostringstream os;
  os.precision(9);
  os << "kernel,n,mean_s,std_s\n";
  for (const auto& s : report.samples) os << s.kernel << ',' << s.n << ',' << s.mean_s << ',' << s.std_s << '\n';
  return os.str();
}

}  // namespace sesim
