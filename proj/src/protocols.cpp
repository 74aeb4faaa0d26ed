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

#include "sesim/protocols.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sesim/linalg.hpp"

namespace sesim {

namespace {

constexpr double kPulseTol = 1e-12;

Matrix block_diag_first(const Matrix& a) {
  const Eigen::Index N = a.rows();
  Matrix out = Matrix::Zero(2 * N, 2 * N);
  out.topLeftCorner(N, N) = a;
  return out;
}

void require_symmetric(const Matrix& a, const char* who) {
  if (a.rows() < 1 || !is_exactly_symmetric(a)) throw ValidationError(std::string(who) + ": matrix must be symmetric");
}

Vector ground_state(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("ground_state: eigensolver did not converge");
  return es.eigenvectors().col(0);
}

}  // namespace

// ------------------------------------------------------------ K matrices

Matrix k_star(Eigen::Index n) {
  if (n < 2) throw ValidationError("k_star: n must be >= 2");
  Matrix k = Matrix::Zero(n, n);
  k(0, 0) = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) k(0, i) = k(i, 0) = 0.5;
  return k;
}

Matrix k_full(Eigen::Index n) {
  if (n < 2) throw ValidationError("k_full: n must be >= 2");
  Matrix k = Matrix::Ones(n, n);
  k.diagonal().setZero();
  return k;
}

Matrix k_z(Eigen::Index N) {
  if (N < 1) throw ValidationError("k_z: N must be >= 1");
  Vector d(2 * N);
  d.head(N).setOnes();
  d.tail(N).setConstant(-1.0);
  return d.asDiagonal();
}

// ------------------------------------------------------------ schedules

void PulseStep::validate() const {
  if (K.rows() < 1 || !is_exactly_symmetric(K)) throw ValidationError("PulseStep '" + label + "': K must be symmetric");
  if (max_abs_entry(K) > 1.0 + kPulseTol) throw ValidationError("PulseStep '" + label + "': |K_ij| exceeds 1");
  if (!(duration >= 0.0)) throw ValidationError("PulseStep '" + label + "': negative duration");
  if (!std::isfinite(g0)) throw ValidationError("PulseStep '" + label + "': non-finite g0");
}

PulseSchedule::PulseSchedule(Eigen::Index n) : n_(n) {
  if (n < 1) throw ValidationError("PulseSchedule: dimension must be >= 1");
}

PulseSchedule& PulseSchedule::add(PulseStep step) {
  step.validate();
  if (step.dim() != n_) throw ValidationError("PulseSchedule: step '" + step.label + "' has the wrong dimension");
  steps_.emplace_back(std::move(step));
  return *this;
}

PulseSchedule& PulseSchedule::add(PhaseFlip flip) {
  if (flip.index < 0 || flip.index >= n_) throw ValidationError("PulseSchedule: phase flip index out of range");
  if (!(flip.duration >= 0.0)) throw ValidationError("PulseSchedule: negative phase flip duration");
  steps_.emplace_back(flip);
  return *this;
}

double PulseSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& s : steps_) t += std::visit([](const auto& x) { return x.duration; }, s);
  return t;
}

SesState execute(const PulseSchedule& schedule, const SesState& psi, const PropagatorKind& kind) {
  if (psi.dim() != schedule.dim()) throw ValidationError("execute: state dimension does not match schedule");
  CVector a = psi.amplitudes();
  PropagationStats stats;
  for (const auto& step : schedule.steps()) {
    if (const auto* p = std::get_if<PulseStep>(&step)) {
      a = kernels::evolve_const(p->hamiltonian(), p->duration, a, kind, stats);
    } else {
      a[std::get<PhaseFlip>(step).index] *= -1.0;
    }
  }
  return SesState::unchecked(std::move(a));
}

CMatrix step_unitary(const ScheduleStep& step, Eigen::Index n) {
  if (const auto* p = std::get_if<PulseStep>(&step)) return unitary_from_eigen(p->hamiltonian(), p->duration);
  CMatrix u = CMatrix::Identity(n, n);
  const auto i = std::get<PhaseFlip>(step).index;
  u(i, i) = -1.0;
  return u;
}

CMatrix schedule_unitary(const PulseSchedule& schedule) {
  CMatrix u = CMatrix::Identity(schedule.dim(), schedule.dim());
  for (const auto& step : schedule.steps()) u = step_unitary(step, schedule.dim()) * u;
  return u;
}

// ------------------------------------------------------------ state prep

PulseStep uniform_prep_pulse(Eigen::Index n, double g0) {
  if (!(g0 > 0)) throw ValidationError("uniform_prep_pulse: g0 must be positive");
  return PulseStep{k_star(n), g0, kPi / (std::sqrt(static_cast<double>(n)) * g0), "uniform-prep"};
}

SesState apply_area_theorem(const std::vector<double>& times, const std::vector<double>& g, const Matrix& K,
                            const SesState& psi, const RungeKutta& opts) {
  if (times.size() != g.size()) throw ValidationError("apply_area_theorem: times and envelope differ in length");
  require_symmetric(K, "apply_area_theorem");
  std::vector<Matrix> samples;
  samples.reserve(g.size());
  for (double gk : g) {
    if (!(gk >= 0.0)) throw ValidationError("apply_area_theorem: envelope must be non-negative");
    samples.push_back(gk * K);
  }
  const TimeDependentHamiltonian h(times, std::move(samples));
  return propagate_td(h, h.t_begin(), h.t_end(), psi, opts).final_state;
}

// ------------------------------------------------------------ Grover

double phase_flip_duration(double g_max) { return kPi / g_max; }

int grover_iterations(Eigen::Index n) {
  return static_cast<int>(std::floor(kPi / 4.0 * std::sqrt(static_cast<double>(n))));
}

double grover_success_probability(Eigen::Index n) {
  const double theta = 2.0 * std::asin(1.0 / std::sqrt(static_cast<double>(n)));
  const double s = std::sin((2.0 * grover_iterations(n) + 1.0) * theta / 2.0);
  return s * s;
}

Matrix grover_inversion(Eigen::Index n) {
  if (n < 1) throw ValidationError("grover_inversion: n must be >= 1");
  return Matrix::Constant(n, n, 2.0 / static_cast<double>(n)) - Matrix::Identity(n, n);
}

PulseSchedule grover_schedule(Eigen::Index n, Eigen::Index marked, double g_max, bool timed_flip) {
  if (n < 2) throw ValidationError("grover_schedule: n must be >= 2");
  if (marked < 0 || marked >= n) throw ValidationError("grover_schedule: marked index out of range");
  if (!(g_max > 0)) throw ValidationError("grover_schedule: g_max must be positive");
  PulseSchedule s(n);
  s.add(uniform_prep_pulse(n, g_max));
  const PulseStep w{k_full(n), g_max, kPi / (static_cast<double>(n) * g_max), "inversion"};
  const double flip_t = timed_flip ? phase_flip_duration(g_max) : 0.0;
  for (int r = 0; r < grover_iterations(n); ++r) {
    s.add(PhaseFlip{marked, flip_t});
    s.add(w);
  }
  return s;
}

// ------------------------------------------------------------ controlled-U

SesHamiltonian embed_controlled_hamiltonian(const Matrix& A) {
  require_symmetric(A, "embed_controlled_hamiltonian");
  const Eigen::Index N = A.rows();
  Matrix h = Matrix::Zero(2 * N, 2 * N);
  h.bottomRightCorner(N, N) = A;
  return SesHamiltonian(std::move(h));
}

PulseStep hadamard_pulse(Eigen::Index N, double g_max) {
  if (N < 1) throw ValidationError("hadamard_pulse: N must be >= 1");
  const double s = std::sin(kPi / 8.0), c = std::cos(kPi / 8.0);
  const Matrix id = Matrix::Identity(N, N);
  Matrix k(2 * N, 2 * N);
  k << s * s * id, -c * s * id, -c * s * id, c * c * id;
  return PulseStep{std::move(k), g_max, kPi / g_max, "hadamard"};
}

PulseStep rz_pulse(double omega, Eigen::Index N, double g_max) {
  if (!(omega >= 0.0 && omega < 4.0 * kPi)) throw ValidationError("rz_pulse: omega must lie in [0, 4 pi)");
  return PulseStep{k_z(N), g_max, omega / (2.0 * g_max), "rz"};
}

PulseStep ancilla_flip_pulse(Eigen::Index N, double g_max) {
  if (N < 1) throw ValidationError("ancilla_flip_pulse: N must be >= 1");
  Matrix k = Matrix::Zero(2 * N, 2 * N);
  k.topRightCorner(N, N).setIdentity();
  k.bottomLeftCorner(N, N).setIdentity();
  return PulseStep{std::move(k), g_max, kPi / (2.0 * g_max), "ancilla-flip"};
}

double controlled_scale(const Matrix& H, double g_max) {
  const double m = max_abs_entry(H);
  if (!(m > 0)) throw ValidationError("controlled_scale: model Hamiltonian is zero");
  if (!(g_max > 0)) throw ValidationError("controlled_scale: g_max must be positive");
  return m / g_max;
}

// ------------------------------------------------------------ adiabatic prep

AdiabaticResult adiabatic_prep(const Matrix& H_model, double t_prep, double g_max, const RungeKutta& opts) {
  require_symmetric(H_model, "adiabatic_prep");
  if (!(t_prep > 0)) throw ValidationError("adiabatic_prep: t_prep must be positive");
  const Eigen::Index N = H_model.rows();
  if (N < 2) throw ValidationError("adiabatic_prep: model dimension must be >= 2");
  const double lambda = controlled_scale(H_model, g_max);

  PulseSchedule half(2 * N);
  half.add(PulseStep{block_diag_first(k_star(N)), g_max, kPi / (std::sqrt(static_cast<double>(N)) * g_max),
                     "half-uniform-prep"});
  const SesState start = execute(half, SesState::basis(2 * N, 0));

  const Matrix h0 = block_diag_first(-g_max * k_full(N));
  const Matrix h1 = block_diag_first(H_model / lambda);
  const TimeDependentHamiltonian sweep({0.0, t_prep}, {h0, h1});
  SesState out = propagate_td(sweep, 0.0, t_prep, start, opts).final_state;

  CVector ground = CVector::Zero(2 * N);
  ground.head(N) = ground_state(H_model).cast<Complex>();
  const double overlap = std::norm(ground.dot(out.amplitudes()));
  if (overlap < 0.5) {
    std::ostringstream os;
    os << "adiabatic_prep: ground-state overlap " << overlap << " < 0.5; increase t_prep";
    warn(os.str());
  }
  return {std::move(out), overlap, lambda};
}

// ------------------------------------------------------------ measurement

namespace {

Eigen::Index sample_index(const Vector& p, Eigen::Index lo, Eigen::Index hi, Rng& rng) {
  const double total = p.segment(lo, hi - lo).sum();
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (Eigen::Index i = lo; i < hi; ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  // Rounding can leave u at the top of the range; return the last populated index.
  for (Eigen::Index i = hi - 1; i > lo; --i)
    if (p[i] > 0.0) return i;
  return lo;
}

SesState half_projection(const CVector& a, Eigen::Index N, int half) {
  CVector out = CVector::Zero(a.size());
  out.segment(half * N, N) = a.segment(half * N, N);
  const double norm = out.norm();
  if (norm == 0.0) throw NumericalError("measure: projection onto an empty half");
  return SesState::unchecked(out / norm);
}

}  // namespace

MeasurementRecord measure(const SesState& state, MeasurementProtocol protocol, Rng& rng, std::int64_t repetition) {
  const Eigen::Index n = state.dim();
  const Vector p = state.probabilities();
  MeasurementRecord rec;
  rec.protocol = protocol;
  rec.repetition = repetition;
  if (protocol == MeasurementProtocol::FullCollapse) {
    const Eigen::Index i = sample_index(p, 0, n, rng);
    rec.index = i;
    rec.bit = (n % 2 == 0 && i >= n / 2) ? 1 : 0;
    rec.collapsed = true;
    rec.post_state = SesState::basis(n, i);
    return rec;
  }
  if (n % 2 != 0) throw ValidationError("measure: half-space protocols need an even dimension");
  const Eigen::Index N = n / 2;
  const double lower = p.head(N).sum();
  const double total = p.sum();
  const bool first = rng.uniform() * total < lower;
  rec.bit = first ? 0 : 1;
  if (protocol == MeasurementProtocol::FirstHalf && first) {
    const Eigen::Index i = sample_index(p, 0, N, rng);
    rec.index = i;
    rec.collapsed = true;
    rec.post_state = SesState::basis(n, i);
  } else {
    rec.post_state = half_projection(state.amplitudes(), N, rec.bit);
  }
  return rec;
}

double sampling_standard_error(double p, std::int64_t repetitions) {
  if (repetitions < 1) throw ValidationError("sampling_standard_error: repetitions must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("sampling_standard_error: p must lie in [0, 1]");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(repetitions));
}

std::int64_t repetitions_for_error(double target) {
  if (!(target > 0)) throw ValidationError("repetitions_for_error: target must be positive");
  const double n = 1.0 / (4.0 * target * target);
  return static_cast<std::int64_t>(std::ceil(n * (1.0 - 1e-12)));
}

// ------------------------------------------------------------ phase estimation

double ipe_feedback_angle(const std::vector<int>& bits, int m) {
  const int M = static_cast<int>(bits.size());
  if (m < 1 || m > M) throw ValidationError("ipe_feedback_angle: m out of range");
  double w = 0.0;
  for (int j = m + 1; j <= M; ++j) w += bits[static_cast<std::size_t>(j - 1)] * std::ldexp(1.0, -(j - m));
  return kPi * w;
}

PulseSchedule ipe_iteration_schedule(const Matrix& H_model, double t, int m, double omega, double g_max) {
  require_symmetric(H_model, "ipe_iteration_schedule");
  if (m < 1) throw ValidationError("ipe_iteration_schedule: m must be >= 1");
  const Eigen::Index N = H_model.rows();
  const double lambda = controlled_scale(H_model, g_max);
  Matrix kc = Matrix::Zero(2 * N, 2 * N);
  kc.bottomRightCorner(N, N) = H_model / (lambda * g_max);
  PulseSchedule s(2 * N);
  s.add(hadamard_pulse(N, g_max));
  s.add(PulseStep{std::move(kc), g_max, lambda * std::ldexp(1.0, m - 1) * t, "controlled-evolution"});
  s.add(rz_pulse(omega, N, g_max));
  s.add(hadamard_pulse(N, g_max));
  return s;
}

IpeResult ipe_run(const Matrix& H_model, double t, const IpeOptions& opts, Rng& rng) {
  require_symmetric(H_model, "ipe_run");
  if (opts.bits < 1) throw ValidationError("ipe_run: need at least one bit");
  if (opts.shots_per_bit < 1) throw ValidationError("ipe_run: shots_per_bit must be >= 1");
  if (!(t > 0)) throw ValidationError("ipe_run: t must be positive");
  const Eigen::Index N = H_model.rows();
  const Eigen::Index n = 2 * N;

  Eigen::SelfAdjointEigenSolver<Matrix> es(H_model);
  if (es.info() != Eigen::Success) throw NumericalError("ipe_run: eigensolver did not converge");
  const double e0 = es.eigenvalues()(0);
  if (!(e0 > 0)) throw ValidationError("ipe_run: the ground energy must be positive");
  if (!(t < kTwoPi / e0)) warn("ipe_run: t >= 2 pi / E, the phase wraps");

  IpeResult res;
  res.bits.assign(static_cast<std::size_t>(opts.bits), 0);

  auto prepare = [&]() -> SesState {
    if (opts.t_prep) {
      if (N < 2) throw ValidationError("ipe_run: adiabatic preparation needs N >= 2");
      AdiabaticResult a = adiabatic_prep(H_model, *opts.t_prep, opts.g_max);
      return a.state;
    }
    CVector a = CVector::Zero(n);
    a.head(N) = es.eigenvectors().col(0).cast<Complex>();
    return SesState::unchecked(std::move(a));
  };

  std::optional<SesState> reg = prepare();
  {
    CVector ground = CVector::Zero(n);
    ground.head(N) = es.eigenvectors().col(0).cast<Complex>();
    res.prep_overlap = std::norm(ground.dot(reg->amplitudes()));
    res.prep_failed = res.prep_overlap < opts.prep_overlap_threshold;
  }
  const PulseStep flip = ancilla_flip_pulse(N, opts.g_max);

  for (int m = opts.bits; m >= 1; --m) {
    const double omega = ipe_feedback_angle(res.bits, m);
    const CMatrix u = schedule_unitary(ipe_iteration_schedule(H_model, t, m, omega, opts.g_max));
    int ones = 0;
    for (int shot = 0; shot < opts.shots_per_bit; ++shot) {
      if (!reg) {
        reg = prepare();
        ++res.repreparations;
      }
      const SesState out = SesState::unchecked(u * reg->amplitudes());
      MeasurementRecord rec = measure(out, opts.protocol, rng, shot);
      ones += rec.bit;
      res.shots.push_back({m, shot, rec.bit, rec.collapsed});
      if (rec.collapsed) {
        reg.reset();
      } else if (rec.bit == 1) {
        PropagationStats st;
        reg = SesState::unchecked(
            kernels::diagonalization(flip.hamiltonian(), flip.duration, rec.post_state->amplitudes(), st));
      } else {
        reg = std::move(rec.post_state);
      }
    }
    res.bits[static_cast<std::size_t>(m - 1)] = 2 * ones > opts.shots_per_bit ? 1 : 0;
  }
  for (int j = 1; j <= opts.bits; ++j) res.phase += res.bits[static_cast<std::size_t>(j - 1)] * std::ldexp(1.0, -j);
  res.energy = kTwoPi * res.phase / t;
  return res;
}

}  // namespace sesim
