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

#include "oracles.hpp"
#include "sesim/fullspace.hpp"
#include "sesim/linalg.hpp"

using namespace sesim;

namespace {

const double kEps = mhz_to_rad_per_s(5000.0);

Vector detuned_eps(int n) {
  Vector e(n);
  for (int i = 0; i < n; ++i) e[i] = kEps + mhz_to_rad_per_s(37.0 * i);
  return e;
}

Matrix couplings(int n, double magnitude) {
  Matrix g = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g(i, j) = g(j, i) = magnitude * oracle::uniform(0.5, 1.0) * ((i + j) % 2 ? 1 : -1);
  return g;
}

}  // namespace

TEST(FullSpace, SingleQubit) {
  Vector e(1);
  e << 2.5;
  const CMatrix h = build_full_hamiltonian(e, Matrix::Zero(1, 1));
  EXPECT_EQ(h(0, 0), Complex(0.0));
  EXPECT_EQ(h(1, 1), Complex(2.5));
  EXPECT_EQ(h(0, 1), Complex(0.0));
}

TEST(FullSpace, TwoQubitXXStructure) {
  Vector e(2);
  e << 1.0, 1.5;
  Matrix g(2, 2);
  g << 0, 0.2, 0.2, 0;
  const CMatrix h = build_full_hamiltonian(e, g);
  // |00> = 0, |01> = 1 (qubit 1 excited), |10> = 2 (qubit 0 excited), |11> = 3.
  EXPECT_NEAR(h(1, 2).real(), 0.2, 1e-15);
  EXPECT_NEAR(h(0, 3).real(), 0.2, 1e-15);
  EXPECT_NEAR(h(2, 2).real(), 1.0, 1e-15);
  EXPECT_NEAR(h(1, 1).real(), 1.5, 1e-15);
  EXPECT_NEAR(h(3, 3).real(), 2.5, 1e-15);
  EXPECT_EQ(h(0, 1), Complex(0.0));
  EXPECT_EQ(h(0, 2), Complex(0.0));
}

TEST(FullSpace, MatchesTensorProductOracle) {
  for (int n : {2, 3, 4}) {
    Vector e = Vector::NullaryExpr(n, [] { return oracle::uniform(); });
    Matrix g = oracle::random_symmetric(n);
    g.diagonal().setZero();
    Eigen::Matrix3d j = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) j(a, b) = oracle::uniform();
    FullSpaceOptions opts;
    opts.coupling.J = j;
    const CMatrix ref = oracle::full_hamiltonian(e, g, j);
    const CMatrix jsym = oracle::full_hamiltonian(e, g, 0.5 * (j + j.transpose()));
    const CMatrix h = build_full_hamiltonian(e, g, opts);
    EXPECT_LT((h - jsym).norm(), 1e-12) << n;
    EXPECT_TRUE(is_hermitian(h, 1e-14));
    // Both orderings of each pair enter the sum, so only the symmetric part of J matters.
    EXPECT_LT((ref - jsym).norm(), 1e-12) << n;
  }
}

TEST(FullSpace, ProjectionEqualsSesHamiltonian) {
  const int n = 4;
  for (int trial = 0; trial < 5; ++trial) {
    Vector e = Vector::NullaryExpr(n, [] { return oracle::uniform(0.5, 2.0); });
    Matrix g = oracle::random_symmetric(n, 0.1);
    g.diagonal().setZero();
    const CMatrix proj = project_to_ses(build_full_hamiltonian(e, g), n);
    const Matrix ses = build_ses_hamiltonian(e, g).matrix();
    EXPECT_LT((proj - ses.cast<Complex>()).norm(), 1e-14);
    EXPECT_LT(proj.imag().norm(), 1e-15);
  }
}

TEST(FullSpace, ProjectionWithGeneralCoupling) {
  const int n = 3;
  Vector e(n);
  e << 1.0, 1.3, 1.7;
  Matrix g = oracle::random_symmetric(n, 0.1);
  g.diagonal().setZero();
  FullSpaceOptions opts;
  opts.coupling.J(0, 0) = 0.7;
  opts.coupling.J(1, 1) = 0.4;
  opts.coupling.J(2, 2) = 0.5;
  const CMatrix proj = project_to_ses(build_full_hamiltonian(e, g, opts), n);
  const Matrix ses = build_ses_hamiltonian_general(e, g, opts.coupling).matrix();
  // The SES builder drops the constant (sum_{i<j} g_ij) J_zz.
  double shift = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) shift += g(i, j) * opts.coupling.zz_part();
  Matrix expect = ses;
  expect.diagonal().array() += shift;
  EXPECT_LT((proj.real() - expect).norm(), 1e-13);
}

TEST(FullSpace, BasisHelpers) {
  EXPECT_EQ(ses_basis_index(4, 0), 8u);
  EXPECT_EQ(ses_basis_index(4, 3), 1u);
  const CVector ses = oracle::random_state(5);
  const CVector full = embed_ses(ses, 5);
  EXPECT_EQ(full.size(), 32);
  EXPECT_LT((project_to_ses(full, 5) - ses).norm(), 1e-15);
  EXPECT_NEAR(excitation_number(full, 5), 1.0, 1e-14);
  EXPECT_NEAR(population_with_excitations(full, 5, 1), 1.0, 1e-14);
  const Vector d = excitation_number_diagonal(3);
  EXPECT_EQ(d[0], 0.0);
  EXPECT_EQ(d[7], 3.0);
  EXPECT_EQ(d[5], 2.0);
}

TEST(FullSpace, CapIsEnforced) {
  FullSpaceOptions opts;
  opts.cap = 3;
  EXPECT_THROW(build_full_hamiltonian(Vector::Ones(4), Matrix::Zero(4, 4), opts), ValidationError);
}

TEST(FullSpace, RotatingWaveConservesExcitationNumber) {
  const int n = 4;
  const Vector e = detuned_eps(n);
  const Matrix g = couplings(n, 0.05 * kEps);
  FullSpaceOptions rwa;
  rwa.rotating_wave = true;
  const CMatrix h_rwa = build_full_hamiltonian(e, g, rwa);
  const CMatrix h = build_full_hamiltonian(e, g);
  const Vector num = excitation_number_diagonal(n);
  const CMatrix numm = num.cast<Complex>().asDiagonal();
  EXPECT_LT((h_rwa * numm - numm * h_rwa).norm(), 1e-6 * h_rwa.norm());
  EXPECT_GT((h * numm - numm * h).norm(), 1e-3 * h.norm());

  const CVector psi0 = embed_ses(CVector::Unit(n, 1), n);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h_rwa);
  const double t = 50e-9;
  const CVector phase = (es.eigenvalues().array() * Complex(0, -t)).exp().matrix();
  const CVector psi = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * psi0;
  EXPECT_NEAR(excitation_number(psi, n), 1.0, 1e-10);
}

TEST(Leakage, VanishesWithoutCoupling) {
  const auto r = leakage_run(detuned_eps(5), Matrix::Zero(5, 5), 100e-9, 2);
  EXPECT_NEAR(r.leakage, 0.0, 1e-14);
  EXPECT_NEAR(r.triple_population, 0.0, 1e-14);
}

TEST(Leakage, SmallAtOnePercentCoupling) {
  const int n = 6;
  const auto r = leakage_run(detuned_eps(n), couplings(n, 0.01 * kEps), 100e-9, 0);
  EXPECT_LT(r.leakage, 1e-3);
  EXPECT_GT(r.leakage, 0.0);
  EXPECT_LE(r.triple_population, r.leakage + 1e-15);
  EXPECT_NEAR(r.ses_population + r.leakage, 1.0, 1e-12);
}

TEST(Leakage, GrowsWithCouplingRatio) {
  const int n = 4;
  const Matrix shape = couplings(n, 1.0);
  double prev = 0.0;
  for (double ratio : {0.002, 0.005, 0.01, 0.02, 0.05}) {
    const auto r = leakage_run(detuned_eps(n), ratio * kEps * shape, 100e-9, 0);
    EXPECT_GT(r.leakage, prev) << ratio;
    prev = r.leakage;
  }
}

TEST(CompareProtocol, StaticEvolutionAgreesInRotatingWave) {
  const int n = 5;
  FullSpaceOptions rwa;
  rwa.rotating_wave = true;
  const auto r = compare_static(detuned_eps(n), couplings(n, 0.01 * kEps), 100e-9, 1, rwa);
  EXPECT_LT(r.deviation, 1e-9);
  EXPECT_LT(r.leakage, 1e-12);
}

TEST(CompareProtocol, UniformPrepWithinLeakageScale) {
  const double g = mhz_to_rad_per_s(50.0);
  PulseSchedule s(4);
  s.add(uniform_prep_pulse(4, g));
  const auto r = compare_protocol(s, g / 0.01);
  // Counter-rotating terms shift levels by O(g^2 / eps) and leak O((g / eps)^2).
  EXPECT_LT(r.deviation, 0.05);
  EXPECT_LT(r.leakage, 1e-3);
}

TEST(CompareProtocol, GroverMarkedProbability) {
  const double g = mhz_to_rad_per_s(50.0);
  const auto s = grover_schedule(4, 2, g);
  const auto r = compare_protocol(s, g / 0.01);
  EXPECT_NEAR(std::norm(r.ses_final[2]), 1.0, 1e-9);
  EXPECT_LT(std::abs(std::norm(r.ses_final[2]) - std::norm(r.full_projected[2])), 1e-3);
}

TEST(CompareProtocol, DeviationShrinksWithCouplingRatio) {
  const double g = mhz_to_rad_per_s(50.0);
  PulseSchedule s(4);
  s.add(uniform_prep_pulse(4, g));
  double prev = 1.0;
  for (double ratio : {1e-2, 1e-3, 1e-4}) {
    const auto r = compare_protocol(s, g / ratio);
    EXPECT_LT(r.deviation, 0.5 * prev) << ratio;
    prev = r.deviation;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(CompareProtocol, RotatingWaveMatchesSesExactly) {
  const double g = mhz_to_rad_per_s(50.0);
  FullSpaceOptions rwa;
  rwa.rotating_wave = true;
  const auto r = compare_protocol(grover_schedule(4, 1, g), g / 0.01, 0, rwa);
  EXPECT_LT(r.deviation, 1e-8);
}
