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

#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "sesim/ensemble.hpp"
#include "sesim/protocols.hpp"

using namespace sesim;

namespace {

const double kGmax = mhz_to_rad_per_s(50.0);

CMatrix hadamard_tensor(Eigen::Index N) {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return oracle::kron(h / std::sqrt(2.0), CMatrix::Identity(N, N));
}

CMatrix controlled(const CMatrix& u) {
  const Eigen::Index N = u.rows();
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return oracle::kron(p0, CMatrix::Identity(N, N)) + oracle::kron(p1, u);
}

CMatrix pulse_unitary(const PulseStep& p) { return oracle::expm(p.hamiltonian(), p.duration); }

}  // namespace

TEST(KMatrices, ExplicitForms) {
  Matrix star(2, 2);
  star << 1, 0.5, 0.5, 0;
  EXPECT_EQ(k_star(2), star);
  const Matrix full = k_full(3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(full.row(i).sum(), 2.0);
  EXPECT_EQ(full.diagonal(), Vector::Zero(3));
  Vector z(4);
  z << 1, 1, -1, -1;
  EXPECT_EQ(k_z(2), Matrix(z.asDiagonal()));
  EXPECT_THROW(k_star(1), ValidationError);
}

TEST(UniformPrep, StarSpectrumContainsPredictedPair) {
  for (Eigen::Index n : {2, 5, 9, 64}) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(kGmax * k_star(n));
    const double rn = std::sqrt(double(n));
    for (double target : {kGmax * (1 + rn) / 2, kGmax * (1 - rn) / 2}) {
      double best = 1e300;
      for (Eigen::Index k = 0; k < n; ++k) best = std::min(best, std::abs(es.eigenvalues()[k] - target));
      EXPECT_LT(best, 1e-10 * kGmax) << n;
    }
  }
}

TEST(UniformPrep, PreparesUniformState) {
  for (Eigen::Index n : {2, 9, 64}) {
    const PulseStep p = uniform_prep_pulse(n, kGmax);
    EXPECT_DOUBLE_EQ(p.duration, kPi / (std::sqrt(double(n)) * kGmax));
    const CVector out = pulse_unitary(p) * SesState::basis(n, 0).amplitudes();
    EXPECT_GT(std::norm(SesState::uniform(n).amplitudes().dot(out)), 1 - 1e-10) << n;
  }
}

TEST(UniformPrep, TwoStateAnalyticResult) {
  const PulseStep p = uniform_prep_pulse(2, 0.3 * kGmax);
  const CVector out = pulse_unitary(p) * SesState::basis(2, 0).amplitudes();
  EXPECT_NEAR(std::abs(out[0]), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(out[1]), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::arg(out[1] / out[0]), 0.0, 1e-12);
}

TEST(AreaTheorem, RectangularEnvelopeReducesToConstantPulse) {
  const Matrix K = k_full(4);
  const SesState psi = SesState::basis(4, 1);
  const double g0 = 0.7 * kGmax, T = 20e-9;
  const SesState a = apply_area_theorem({0.0, T}, {g0, g0}, K, psi);
  const CVector ref = oracle::expm(g0 * K, T) * psi.amplitudes();
  EXPECT_LT((a.amplitudes() - ref).norm(), 1e-7);
}

TEST(AreaTheorem, TriangularEnvelopeWithEqualArea) {
  const Matrix K = k_star(5);
  const SesState psi = SesState::basis(5, 0);
  const double g0 = kGmax, T = 10e-9;
  // Triangle of base 2T and peak g0 has the area of a g0 pulse of length T.
  const SesState tri = apply_area_theorem({0.0, T, 2 * T}, {0.0, g0, 0.0}, K, psi);
  const CVector ref = oracle::expm(g0 * K, T) * psi.amplitudes();
  EXPECT_LT((tri.amplitudes() - ref).norm(), 1e-7);
}

TEST(AreaTheorem, ZeroAreaIsIdentity) {
  const SesState psi(oracle::random_state(3));
  const SesState out = apply_area_theorem({0.0, 1e-8, 2e-8}, {0.0, 0.0, 0.0}, k_full(3), psi);
  EXPECT_LT((out.amplitudes() - psi.amplitudes()).norm(), 1e-14);
  EXPECT_THROW(apply_area_theorem({0.0, 1.0}, {1.0, -1.0}, k_full(3), psi), ValidationError);
}

TEST(Grover, FourStatesSingleIterationIsCertain) {
  for (Eigen::Index marked = 0; marked < 4; ++marked) {
    const PulseSchedule s = grover_schedule(4, marked, kGmax);
    EXPECT_EQ(grover_iterations(4), 1);
    // Dense brute force: product of the step unitaries built here.
    CVector v = SesState::basis(4, 0).amplitudes();
    for (const auto& step : s.steps()) {
      if (const auto* p = std::get_if<PulseStep>(&step))
        v = pulse_unitary(*p) * v;
      else
        v[std::get<PhaseFlip>(step).index] *= -1.0;
    }
    EXPECT_NEAR(std::norm(v[marked]), 1.0, 1e-9);
    EXPECT_NEAR(execute(s, SesState::basis(4, 0)).probabilities()[marked], 1.0, 1e-9);
  }
}

TEST(Grover, TwoStatesMatchesDirectOperatorProduct) {
  const PulseSchedule s = grover_schedule(2, 1, kGmax);
  const double p = execute(s, SesState::basis(2, 0)).probabilities()[1];
  Matrix W(2, 2), O = Matrix::Identity(2, 2);
  W << 0, 1, 1, 0;  // 2|u><u| - I for n = 2
  O(1, 1) = -1;
  Vector u(2);
  u << 1, 1;
  u /= std::sqrt(2.0);
  const Vector v = W * O * u;
  EXPECT_NEAR(p, v[1] * v[1], 1e-10);
}

TEST(Grover, WPulseEqualsInversionUpToPhase) {
  for (Eigen::Index n : {2, 4, 16, 64}) {
    const CMatrix u = oracle::expm(kGmax * k_full(n), kPi / (double(n) * kGmax));
    EXPECT_LT(oracle::aligned_distance(u, CMatrix(grover_inversion(n).cast<Complex>())), 1e-10) << n;
  }
}

TEST(Grover, SuccessMatchesTextbookFormula) {
  for (Eigen::Index n = 2; n <= 64; n = n < 8 ? n + 1 : 2 * n) {
    const double beta = std::floor(kPi / 4 * std::sqrt(double(n)));
    const double theta = 2 * std::asin(1 / std::sqrt(double(n)));
    const double expected = std::pow(std::sin((2 * beta + 1) * theta / 2), 2);
    EXPECT_NEAR(grover_success_probability(n), expected, 1e-14);
    const double p = execute(grover_schedule(n, n / 2, kGmax), SesState::basis(n, 0)).probabilities()[n / 2];
    EXPECT_NEAR(p, expected, 1e-8) << n;
  }
  EXPECT_THROW(grover_schedule(4, 4, kGmax), ValidationError);
}

TEST(Grover, TimedFlipAddsDuration) {
  const double timed = grover_schedule(16, 0, kGmax, true).total_duration();
  const double ideal = grover_schedule(16, 0, kGmax, false).total_duration();
  EXPECT_NEAR(timed - ideal, 3 * kPi / kGmax, 1e-20);
}

TEST(ControlledEmbedding, ZeroIsIdentity) {
  const SesHamiltonian h = embed_controlled_hamiltonian(Matrix::Zero(3, 3));
  EXPECT_LT((oracle::expm(h.matrix(), 1.0) - CMatrix::Identity(6, 6)).norm(), 1e-15);
}

TEST(ControlledEmbedding, PiPhaseOnControlledBlock) {
  const SesHamiltonian h = embed_controlled_hamiltonian(kPi * Matrix::Identity(2, 2));
  const CMatrix u = oracle::expm(h.matrix(), 1.0);
  EXPECT_NEAR(u(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(u(1, 1).real(), 1.0, 1e-14);
  EXPECT_NEAR(u(2, 2).real(), -1.0, 1e-14);
  EXPECT_NEAR(u(3, 3).real(), -1.0, 1e-14);
}

TEST(ControlledEmbedding, MatchesTensorProductOracle) {
  for (Eigen::Index N = 2; N <= 8; ++N) {
    const Matrix A = oracle::random_symmetric(N, 2.0);
    const CMatrix ses = unitary_from_eigen(embed_controlled_hamiltonian(A).matrix(), 1.0);
    EXPECT_LT((ses - controlled(oracle::expm(A, 1.0))).cwiseAbs().maxCoeff(), 1e-10) << N;
  }
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(embed_controlled_hamiltonian(bad), ValidationError);
}

TEST(HadamardPulse, RealizesHadamardTensorIdentity) {
  for (Eigen::Index N : {1, 2, 5}) {
    const PulseStep p = hadamard_pulse(N, kGmax);
    EXPECT_DOUBLE_EQ(p.duration, kPi / kGmax);
    EXPECT_LE(p.K.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_LT(oracle::aligned_distance(pulse_unitary(p), hadamard_tensor(N)), 1e-10) << N;
  }
}

TEST(RzPulse, RotationsAndIdentity) {
  EXPECT_LT((pulse_unitary(rz_pulse(0.0, 2, kGmax)) - CMatrix::Identity(4, 4)).norm(), 1e-15);
  for (double w : {0.3, 2.0, kTwoPi, 3.5 * kPi}) {
    CMatrix rz = CMatrix::Zero(2, 2);
    rz(0, 0) = std::exp(Complex(0, -w / 2));
    rz(1, 1) = std::exp(Complex(0, w / 2));
    const CMatrix u = pulse_unitary(rz_pulse(w, 3, kGmax));
    EXPECT_LT((u - oracle::kron(rz, CMatrix::Identity(3, 3))).norm(), 1e-10) << w;
  }
  // A 2 pi rotation is -I.
  EXPECT_LT((pulse_unitary(rz_pulse(kTwoPi, 1, kGmax)) + CMatrix::Identity(2, 2)).norm(), 1e-10);
  EXPECT_THROW(rz_pulse(4 * kPi, 1, kGmax), ValidationError);
  EXPECT_THROW(rz_pulse(-0.1, 1, kGmax), ValidationError);
}

TEST(AncillaFlip, SwapsHalvesUpToPhase) {
  const CMatrix u = pulse_unitary(ancilla_flip_pulse(3, kGmax));
  CMatrix x = CMatrix::Zero(2, 2);
  x << 0, 1, 1, 0;
  EXPECT_LT(oracle::aligned_distance(u, oracle::kron(x, CMatrix::Identity(3, 3))), 1e-10);
}

TEST(AdiabaticPrep, ReferenceHamiltonianSpectrum) {
  const Eigen::Index N = 6;
  Eigen::SelfAdjointEigenSolver<Matrix> es(-kGmax * k_full(N));
  EXPECT_NEAR(es.eigenvalues()[0], -(N - 1) * kGmax, 1e-6);
  for (Eigen::Index k = 1; k < N; ++k) EXPECT_NEAR(es.eigenvalues()[k], kGmax, 1e-6);
}

TEST(AdiabaticPrep, HalfUniformPulse) {
  const Eigen::Index N = 4;
  Matrix K = Matrix::Zero(2 * N, 2 * N);
  K.topLeftCorner(N, N) = k_star(N);
  const CVector out = oracle::expm(kGmax * K, kPi / (2.0 * kGmax)) * SesState::basis(2 * N, 0).amplitudes();
  CVector expected = CVector::Zero(2 * N);
  expected.head(N).setConstant(1.0 / std::sqrt(double(N)));
  EXPECT_LT(oracle::aligned_distance(out, expected), 1e-10);
}

TEST(AdiabaticPrep, SelfTargetStaysInGroundState) {
  for (double t : {1e-9, 50e-9}) {
    const AdiabaticResult r = adiabatic_prep(-kGmax * k_full(4), t, kGmax);
    EXPECT_GE(r.ground_overlap, 1 - 1e-6) << t;
    EXPECT_NEAR(r.lambda, 1.0, 1e-12);
  }
}

TEST(AdiabaticPrep, OverlapApproachesOneWithSlowerSweeps) {
  Rng rng(21);
  const Matrix H = kGmax * sample_k(4, rng) + 3 * kGmax * Matrix::Identity(4, 4);
  std::vector<double> overlaps;
  std::vector<std::string> warnings;
  set_warning_handler([&](const std::string& m) { warnings.push_back(m); });
  for (double t : {10e-9, 100e-9, 1e-6, 10e-6}) overlaps.push_back(adiabatic_prep(H, t, kGmax).ground_overlap);
  set_warning_handler(nullptr);
  for (std::size_t k = 1; k < overlaps.size(); ++k) EXPECT_GT(overlaps[k], overlaps[k - 1] - 1e-3);
  EXPECT_GT(overlaps.back(), 0.99);
}

TEST(Measure, FullCollapseOnBasisState) {
  Rng rng(1);
  const MeasurementRecord r = measure(SesState::basis(6, 4), MeasurementProtocol::FullCollapse, rng);
  ASSERT_TRUE(r.index.has_value());
  EXPECT_EQ(*r.index, 4);
  EXPECT_TRUE(r.collapsed);
}

TEST(Measure, FirstHalfOnUniformState) {
  Rng rng(3);
  int not_found = 0;
  const int shots = 20000;
  for (int k = 0; k < shots; ++k) {
    const MeasurementRecord r = measure(SesState::uniform(4), MeasurementProtocol::FirstHalf, rng, k);
    if (r.bit == 1) {
      ++not_found;
      EXPECT_FALSE(r.collapsed);
      EXPECT_FALSE(r.index.has_value());
      EXPECT_NEAR(std::abs((*r.post_state)[2]), 1 / std::sqrt(2.0), 1e-12);
      EXPECT_NEAR(std::abs((*r.post_state)[3]), 1 / std::sqrt(2.0), 1e-12);
      EXPECT_EQ(std::abs((*r.post_state)[0]), 0.0);
    } else {
      EXPECT_TRUE(r.collapsed);
      EXPECT_LT(*r.index, 2);
    }
  }
  EXPECT_NEAR(double(not_found) / shots, 0.5, 3 * 0.5 / std::sqrt(double(shots)));
}

TEST(Measure, ParityKeepsBothHalvesCoherent) {
  Rng rng(4);
  const SesState psi(oracle::random_state(6));
  const MeasurementRecord r = measure(psi, MeasurementProtocol::ParityAncilla, rng);
  EXPECT_FALSE(r.collapsed);
  const CVector& post = r.post_state->amplitudes();
  const CVector half = psi.amplitudes().segment(3 * r.bit, 3);
  EXPECT_LT(oracle::aligned_distance(CVector(post.segment(3 * r.bit, 3)), CVector(half / half.norm())), 1e-12);
  EXPECT_THROW(measure(SesState::uniform(5), MeasurementProtocol::FirstHalf, rng), ValidationError);
}

TEST(Measure, FrequenciesPassChiSquare) {
  Rng rng(99);
  const SesState psi(oracle::random_state(6));
  const Vector p = psi.probabilities();
  const int shots = 30000;
  std::vector<int> counts(6, 0);
  for (int k = 0; k < shots; ++k) ++counts[*measure(psi, MeasurementProtocol::FullCollapse, rng).index];
  double chi2 = 0.0;
  for (int i = 0; i < 6; ++i) chi2 += std::pow(counts[i] - shots * p[i], 2) / (shots * p[i]);
  // Upper 0.1% point of chi-square with five degrees of freedom.
  EXPECT_LT(chi2, 20.515);
}

TEST(Sampling, StandardErrorBounds) {
  for (double p : {0.01, 0.3, 0.5}) EXPECT_LE(sampling_standard_error(p, 400), 1 / (2 * std::sqrt(400.0)) + 1e-15);
  EXPECT_EQ(repetitions_for_error(0.01), 2500);
}

TEST(Ipe, FeedbackAngle) {
  const std::vector<int> bits{0, 1, 1, 0};
  EXPECT_DOUBLE_EQ(ipe_feedback_angle(bits, 4), 0.0);
  EXPECT_DOUBLE_EQ(ipe_feedback_angle(bits, 3), 0.0);
  EXPECT_DOUBLE_EQ(ipe_feedback_angle(bits, 2), kPi * 0.5);
  EXPECT_DOUBLE_EQ(ipe_feedback_angle(bits, 1), kPi * (0.5 + 0.25));
}

TEST(Ipe, IterationScheduleMatchesCircuitOracle) {
  const Eigen::Index N = 3;
  const Matrix H = oracle::random_symmetric(N, kGmax) + 4 * kGmax * Matrix::Identity(N, N);
  const double t = 3e-9, omega = 0.7;
  for (int m : {1, 3}) {
    const CMatrix u = schedule_unitary(ipe_iteration_schedule(H, t, m, omega, kGmax));
    CMatrix rz = CMatrix::Zero(2, 2);
    rz(0, 0) = std::exp(Complex(0, -omega / 2));
    rz(1, 1) = std::exp(Complex(0, omega / 2));
    const CMatrix expected = hadamard_tensor(N) * oracle::kron(rz, CMatrix::Identity(N, N)) *
                             controlled(oracle::expm(H, std::ldexp(t, m - 1))) * hadamard_tensor(N);
    EXPECT_LT(oracle::aligned_distance(u, expected), 1e-9) << m;
  }
}

TEST(Ipe, DyadicPhaseIsExactAndDeterministic) {
  const double E0 = mhz_to_rad_per_s(10.0);
  Vector d(3);
  d << E0, 2.3 * E0, 3.1 * E0;
  const double phi = 0.375;  // 0.0110 in binary
  const double t = kTwoPi * phi / E0;
  for (auto proto : {MeasurementProtocol::FullCollapse, MeasurementProtocol::FirstHalf,
                     MeasurementProtocol::ParityAncilla}) {
    IpeOptions o;
    o.bits = 4;
    o.protocol = proto;
    o.shots_per_bit = 1;
    Rng rng(5);
    const IpeResult r = ipe_run(Matrix(d.asDiagonal()), t, o, rng);
    EXPECT_EQ(r.bits, (std::vector<int>{0, 1, 1, 0}));
    EXPECT_DOUBLE_EQ(r.phase, phi);
    EXPECT_NEAR(r.energy, E0, 1e-9 * E0);
  }
}

TEST(Ipe, NonDyadicPhaseWithinResolution) {
  const double E0 = mhz_to_rad_per_s(10.0);
  Rng hrng(8);
  Matrix H = 0.2 * E0 * sample_k(3, hrng);
  H += (2 * E0 - Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues()[0]) * Matrix::Identity(3, 3);
  const double e0 = Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues()[0];
  const double phi = 0.3;
  const double t = kTwoPi * phi / e0;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    IpeOptions o;
    o.bits = 6;
    Rng rng(seed);
    const IpeResult r = ipe_run(H, t, o, rng);
    double diff = std::abs(r.phase - phi);
    diff = std::min(diff, 1.0 - diff);
    if (diff <= std::ldexp(1.0, -6)) ++good;
  }
  EXPECT_GE(good, 16);
}

TEST(Ipe, AdiabaticPreparationIsReported) {
  const double E0 = mhz_to_rad_per_s(10.0);
  Vector d(2);
  d << E0, 3 * E0;
  IpeOptions o;
  o.bits = 3;
  o.t_prep = 400e-9;
  Rng rng(1);
  const IpeResult r = ipe_run(Matrix(d.asDiagonal()), kTwoPi * 0.25 / E0, o, rng);
  EXPECT_GT(r.prep_overlap, 0.9);
  EXPECT_FALSE(r.prep_failed);
  o.t_prep = 1e-12;
  Rng rng2(1);
  set_warning_handler([](const std::string&) {});
  const IpeResult bad = ipe_run(Matrix(d.asDiagonal()), kTwoPi * 0.25 / E0, o, rng2);
  set_warning_handler(nullptr);
  EXPECT_TRUE(bad.prep_failed);
}

TEST(Ipe, RejectsNonPositiveGroundEnergy) {
  IpeOptions o;
  Rng rng(1);
  EXPECT_THROW(ipe_run(-Matrix::Identity(2, 2), 1e-9, o, rng), ValidationError);
}

TEST(PulseStep, BuildersEmitHardwareCompatibleK) {
  std::vector<PulseStep> steps{uniform_prep_pulse(7, kGmax), hadamard_pulse(3, kGmax), rz_pulse(1.0, 3, kGmax),
                               ancilla_flip_pulse(3, kGmax)};
  const PulseSchedule grover = grover_schedule(9, 2, kGmax);
  for (const auto& s : grover.steps())
    if (const auto* p = std::get_if<PulseStep>(&s)) steps.push_back(*p);
  const PulseSchedule ipe = ipe_iteration_schedule(oracle::random_symmetric(3, kGmax), 1e-8, 2, 0.5, kGmax);
  for (const auto& s : ipe.steps())
    if (const auto* p = std::get_if<PulseStep>(&s)) steps.push_back(*p);
  for (const auto& s : steps) {
    EXPECT_LE(s.K.cwiseAbs().maxCoeff(), 1.0 + 1e-12) << s.label;
    EXPECT_NO_THROW(s.validate());
  }
  PulseStep bad{2.0 * Matrix::Identity(2, 2), kGmax, 1e-9, "bad"};
  EXPECT_THROW(bad.validate(), ValidationError);
}
