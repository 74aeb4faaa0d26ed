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

// Pulse-level SES protocols.
//
// A protocol is a PulseSchedule: a list of single-step operations, each a
// constant SES Hamiltonian g0 K held for a fixed duration, or a phase flip on
// one basis state. Two-block layouts of dimension 2N use the control-qubit
// map |0>|k> -> |k), |1>|k> -> |N + k) (0-based k).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sesim/core.hpp"
#include "sesim/propagate.hpp"
#include "sesim/random.hpp"

namespace sesim {

Matrix k_star(Eigen::Index n);
Matrix k_full(Eigen::Index n);
/// diag(+1 x N, -1 x N).
Matrix k_z(Eigen::Index N);

struct PulseStep {
  Matrix K;
  double g0 = 0.0;        // rad/s
  double duration = 0.0;  // s
  std::string label;

  void validate() const;
  Matrix hamiltonian() const { return g0 * K; }
  Eigen::Index dim() const { return K.rows(); }
};

/// Sign flip of basis state `index` (a 2 pi z rotation on that qubit).
struct PhaseFlip {
  Eigen::Index index = 0;
  double duration = 0.0;
};

using ScheduleStep = std::variant<PulseStep, PhaseFlip>;

class PulseSchedule {
 public:
  explicit PulseSchedule(Eigen::Index n);

  PulseSchedule& add(PulseStep step);
  PulseSchedule& add(PhaseFlip flip);

  Eigen::Index dim() const { return n_; }
  const std::vector<ScheduleStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  double total_duration() const;

 private:
  Eigen::Index n_;
  std::vector<ScheduleStep> steps_;
};

SesState execute(const PulseSchedule& schedule, const SesState& psi,
                 const PropagatorKind& kind = Diagonalization{});
CMatrix schedule_unitary(const PulseSchedule& schedule);
CMatrix step_unitary(const ScheduleStep& step, Eigen::Index n);

/// K_star for pi / (sqrt(n) g0); maps |0) to the uniform state.
PulseStep uniform_prep_pulse(Eigen::Index n, double g0);

/// Evolves psi under g(t) K for a sampled non-negative envelope g.
SesState apply_area_theorem(const std::vector<double>& times, const std::vector<double>& g, const Matrix& K,
                            const SesState& psi, const RungeKutta& opts = RungeKutta{1e-11, 1e-13});

/// Duration of the phase-flip oracle when timed: pi / g_max.
double phase_flip_duration(double g_max);

/// Uniform prep, then floor(pi sqrt(n) / 4) rounds of [flip(marked), K_full
/// for pi / (n g_max)]. `marked` is 0-based.
PulseSchedule grover_schedule(Eigen::Index n, Eigen::Index marked, double g_max, bool timed_flip = true);
int grover_iterations(Eigen::Index n);
/// sin^2((2 beta + 1) theta / 2) with theta = 2 asin(1 / sqrt(n)).
double grover_success_probability(Eigen::Index n);
/// 2 |unif><unif| - I.
Matrix grover_inversion(Eigen::Index n);

/// [[0, 0], [0, A]] on 2N states.
SesHamiltonian embed_controlled_hamiltonian(const Matrix& A);

/// Realizes H (x) I_N exactly: g_max K for pi / g_max.
PulseStep hadamard_pulse(Eigen::Index N, double g_max);
/// Realizes R_z(omega) (x) I_N: g_max K_z for omega / (2 g_max).
PulseStep rz_pulse(double omega, Eigen::Index N, double g_max);
/// Swaps the two halves up to a phase: g_max [[0, I], [I, 0]] for pi / (2 g_max).
PulseStep ancilla_flip_pulse(Eigen::Index N, double g_max);

/// max |H_ij| / g_max; rejects H = 0.
double controlled_scale(const Matrix& H, double g_max);

struct AdiabaticResult {
  SesState state;
  double ground_overlap = 0.0;
  double lambda = 0.0;
};

/// Half-uniform prep followed by the linear sweep from [[-g_max K_full, 0],
/// [0, 0]] to [[H / lambda, 0], [0, 0]] over t_prep.
AdiabaticResult adiabatic_prep(const Matrix& H_model, double t_prep, double g_max,
                               const RungeKutta& opts = RungeKutta{});

enum class MeasurementProtocol { FullCollapse, FirstHalf, ParityAncilla };

struct MeasurementRecord {
  MeasurementProtocol protocol = MeasurementProtocol::FullCollapse;
  int bit = 0;                        // 0: first half, 1: second half
  std::optional<Eigen::Index> index;  // observed basis state, when the excitation was located
  bool collapsed = false;             // true when the encoded eigenstate is lost
  std::optional<SesState> post_state;
  std::int64_t repetition = 0;
};

MeasurementRecord measure(const SesState& state, MeasurementProtocol protocol, Rng& rng,
                          std::int64_t repetition = 0);

/// sqrt(p (1 - p) / N).
double sampling_standard_error(double p, std::int64_t repetitions);
/// Smallest N with 1 / (2 sqrt(N)) <= target.
std::int64_t repetitions_for_error(double target);

struct IpeOptions {
  int bits = 4;
  int shots_per_bit = 25;
  MeasurementProtocol protocol = MeasurementProtocol::FirstHalf;
  /// Adiabatic sweep time; nullopt loads the exact ground state.
  std::optional<double> t_prep;
  double g_max = mhz_to_rad_per_s(50.0);
  double prep_overlap_threshold = 0.9;
};

struct IpeShot {
  int m = 0;
  int shot = 0;
  int outcome = 0;
  bool collapsed = false;
};

struct IpeResult {
  std::vector<int> bits;  // x_1 (most significant) ... x_M
  double phase = 0.0;
  double energy = 0.0;  // 2 pi phase / t
  std::int64_t repreparations = 0;
  double prep_overlap = 1.0;
  bool prep_failed = false;
  std::vector<IpeShot> shots;
};

/// pi sum_{j > m} x_j / 2^{j - m}; `bits` holds x_1..x_M and m is 1-based.
double ipe_feedback_angle(const std::vector<int>& bits, int m);

/// Iterative phase estimation of the ground state of H_model (rad/s) with
/// evolution time t (s). The ground energy must be positive.
IpeResult ipe_run(const Matrix& H_model, double t, const IpeOptions& opts, Rng& rng);

/// Single-iteration unitary for bit m on the 2N states: Hadamard,
/// controlled e^{-i H 2^{m-1} t}, R_z(omega), Hadamard.
PulseSchedule ipe_iteration_schedule(const Matrix& H_model, double t, int m, double omega, double g_max);

}  // namespace sesim
