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

#include "sesim/propagate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace sesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// ------------------------------------------------------------ Pade

// Coefficients and 1-norm thresholds of the diagonal Pade approximants used
// by the scaling-and-squaring method (Higham, SIAM J. Matrix Anal. Appl. 2005).
constexpr std::array<double, 4> kPade3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kPade5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kPade7 = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
constexpr std::array<double, 10> kPade9 = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                           2162160.,     110880.,      3960.,       90.,         1.};
constexpr std::array<double, 14> kPade13 = {64764752532480000., 32382376266240000., 7771770303897600.,
                                            1187353796428800.,  129060195264000.,   10559470521600.,
                                            670442572800.,      33522128640.,       1323241920.,
                                            40840800.,          960960.,            16380.,
                                            182.,               1.};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

// With B = -iA the even powers of B are real: B^2 = -A^2. The Pade numerator
// and denominator split as V(B) = Ve (real) and U(B) = -i A Wo (Wo real), so
// all polynomial work is done in real arithmetic.
template <std::size_t N>
void pade_low(const Matrix& a, const std::array<double, N>& b, Matrix& ve, Matrix& wo) {
  const Eigen::Index n = a.rows();
  const Matrix a2 = -(a * a);  // B^2
  Matrix power = Matrix::Identity(n, n);
  ve = Matrix::Zero(n, n);
  wo = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < N; k += 2) {
    ve += b[k] * power;
    if (k + 1 < N) wo += b[k + 1] * power;
    if (k + 2 < N) power = power * a2;
  }
}

void pade13(const Matrix& a, Matrix& ve, Matrix& wo) {
  const Eigen::Index n = a.rows();
  const auto& b = kPade13;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = -(a * a);
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix w1 = b[13] * a6 + b[11] * a4 + b[9] * a2;
  wo = a6 * w1 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix z1 = b[12] * a6 + b[10] * a4 + b[8] * a2;
  ve = a6 * z1 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

// ------------------------------------------------------------ Runge-Kutta

struct Tableau {
  int stages;
  int order;  // order of the propagated solution
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> b_err;  // b - b_hat
  bool fsal;
};

const Tableau& tableau(RkScheme scheme) {
  static const Tableau dp54 = [] {
    Tableau t;
    t.stages = 7;
    t.order = 5;
    t.fsal = true;
    t.c = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    t.a = {{},
           {1.0 / 5},
           {3.0 / 40, 9.0 / 40},
           {44.0 / 45, -56.0 / 15, 32.0 / 9},
           {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
           {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
           {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    t.b = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
    const std::vector<double> bh = {5179.0 / 57600,    0.0,           7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
    for (int i = 0; i < 7; ++i) t.b_err.push_back(t.b[i] - bh[i]);
    return t;
  }();
  static const Tableau bs32 = [] {
    Tableau t;
    t.stages = 4;
    t.order = 3;
    t.fsal = true;
    t.c = {0.0, 0.5, 0.75, 1.0};
    t.a = {{}, {0.5}, {0.0, 0.75}, {2.0 / 9, 1.0 / 3, 4.0 / 9}};
    t.b = {2.0 / 9, 1.0 / 3, 4.0 / 9, 0.0};
    const std::vector<double> bh = {7.0 / 24, 0.25, 1.0 / 3, 0.125};
    for (int i = 0; i < 4; ++i) t.b_err.push_back(t.b[i] - bh[i]);
    return t;
  }();
  return scheme == RkScheme::DormandPrince54 ? dp54 : bs32;
}

// Integrates y' = -i H(t) y over [ta, tb] where apply(t, y, out) sets
// out = H(t) y. `h` carries the step size between calls.
template <typename Apply>
void rk_integrate(Apply&& apply, double ta, double tb, CVector& y, const RungeKutta& opts, double& h,
                  PropagationStats& stats) {
  const Tableau& tab = tableau(opts.scheme);
  const Eigen::Index n = y.size();
  const double span = tb - ta;
  if (span <= 0.0) return;
  if (!(h > 0.0) || h > span) h = span;

  std::vector<CVector> k(static_cast<std::size_t>(tab.stages), CVector(n));
  CVector tmp(n), y_new(n), err(n), hy(n);
  auto deriv = [&](double t, const CVector& v, CVector& out) {
    apply(t, v, hy);
    out.noalias() = -kI * hy;
    ++stats.matvecs;
  };

  double t = ta;
  bool have_k0 = false;
  const double exponent = -1.0 / static_cast<double>(tab.order);
  const double h_min = 1e-14 * std::max(std::abs(ta), std::abs(tb)) + 1e-300;

  while (t < tb) {
    bool last = false;
    if (t + h >= tb || (tb - t - h) < 1e-12 * span) {
      h = tb - t;
      last = true;
    }
    if (!have_k0) {
      deriv(t, y, k[0]);
      have_k0 = true;
    }
    for (int s = 1; s < tab.stages; ++s) {
      tmp = y;
      for (int j = 0; j < s; ++j) {
        const double a = tab.a[s][j];
        if (a != 0.0) tmp.noalias() += (h * a) * k[j];
      }
      deriv(t + tab.c[s] * h, tmp, k[s]);
    }
    // FSAL tableaus have b equal to the last row of a, so the last stage
    // argument is the new solution.
    if (tab.fsal) {
      y_new = tmp;
    } else {
      y_new = y;
      for (int s = 0; s < tab.stages; ++s) y_new.noalias() += (h * tab.b[s]) * k[s];
    }
    err.setZero();
    for (int s = 0; s < tab.stages; ++s)
      if (tab.b_err[s] != 0.0) err.noalias() += (h * tab.b_err[s]) * k[s];

    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double e = std::abs(err[i]) / scale;
      acc += e * e;
    }
    const double err_norm = std::sqrt(acc / static_cast<double>(n));

    if (err_norm <= 1.0) {
      t = last ? tb : t + h;
      y.swap(y_new);
      if (tab.fsal)
        std::swap(k[0], k[tab.stages - 1]);
      else
        have_k0 = false;
      ++stats.steps;
      const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, exponent), 0.2, 5.0);
      if (!last) h *= factor;
      else h = h * factor;
    } else {
      ++stats.rejected_steps;
      h *= std::clamp(0.9 * std::pow(err_norm, exponent), 0.1, 0.9);
      if (h < h_min) {
        std::ostringstream os;
        os << "Runge-Kutta step size underflow at t = " << t << " (h = " << h << ")";
        throw NumericalError(os.str());
      }
    }
  }
}

double initial_step(double norm_h, double span) {
  return norm_h > 0.0 ? std::min(span, 0.05 / norm_h) : span;
}

// ------------------------------------------------------------ Lanczos

struct LanczosBasis {
  std::vector<CVector> q;
  Vector alpha;
  Vector beta;      // beta[j] couples q[j] and q[j+1]
  double beta_last = 0.0;
  bool invariant = false;
};

LanczosBasis lanczos(const Matrix& h, const CVector& start, int m, PropagationStats& stats) {
  LanczosBasis lb;
  const double scale = h.cwiseAbs().rowwise().sum().maxCoeff();
  lb.q.reserve(static_cast<std::size_t>(m + 1));
  lb.q.push_back(start / start.norm());
  std::vector<double> alpha, beta;
  CVector r(start.size());
  for (int j = 0; j < m; ++j) {
    r.noalias() = h * lb.q[static_cast<std::size_t>(j)];
    ++stats.matvecs;
    const double a = lb.q[static_cast<std::size_t>(j)].dot(r).real();
    alpha.push_back(a);
    // Full re-orthogonalization, two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qk : lb.q) r -= qk.dot(r) * qk;
    const double b = r.norm();
    if (b <= 1e-13 * std::max(scale, 1e-300) || j + 1 >= start.size()) {
      lb.invariant = true;
      lb.beta_last = 0.0;
      break;
    }
    if (j + 1 == m) {
      lb.beta_last = b;
      lb.q.push_back(r / b);
      break;
    }
    beta.push_back(b);
    lb.q.push_back(r / b);
  }
  lb.alpha = Eigen::Map<Vector>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  lb.beta = Eigen::Map<Vector>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  return lb;
}

}  // namespace

// ------------------------------------------------------------ public helpers

std::string kind_name(const PropagatorKind& kind) {
  return std::visit(overloaded{
                        [](const Diagonalization&) { return std::string("diagonalization"); },
                        [](const PadeExpm&) { return std::string("pade"); },
                        [](const Krylov&) { return std::string("krylov"); },
                        [](const RungeKutta&) { return std::string("runge-kutta"); },
                        [](const TimeSliced&) { return std::string("time-sliced"); },
                    },
                    kind);
}

void validate(const PropagatorKind& kind) {
  std::visit(overloaded{
                 [](const Diagonalization&) {},
                 [](const PadeExpm&) {},
                 [](const Krylov& k) {
                   if (k.dimension < 2) throw ValidationError("Krylov subspace dimension must be >= 2");
                   if (!(k.tol > 0)) throw ValidationError("Krylov tolerance must be positive");
                 },
                 [](const RungeKutta& rk) {
                   if (!(rk.rtol > 0 && rk.atol > 0)) throw ValidationError("Runge-Kutta tolerances must be positive");
                 },
                 [](const TimeSliced& ts) {
                   if (!(ts.dt > 0)) throw ValidationError("time slice width must be positive");
                   if (const auto* k = std::get_if<Krylov>(&ts.inner))
                     validate(PropagatorKind{*k});
                 },
             },
             kind);
}

CMatrix expm_pade(const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return CMatrix(0, 0);
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  Matrix ve, wo;
  int squarings = 0;
  Matrix scaled = a;
  if (norm1 <= kTheta3) {
    pade_low(a, kPade3, ve, wo);
  } else if (norm1 <= kTheta5) {
    pade_low(a, kPade5, ve, wo);
  } else if (norm1 <= kTheta7) {
    pade_low(a, kPade7, ve, wo);
  } else if (norm1 <= kTheta9) {
    pade_low(a, kPade9, ve, wo);
  } else {
    if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    scaled = a / std::ldexp(1.0, squarings);
    pade13(scaled, ve, wo);
  }
  // U(B) = -i A Wo for the scaled A.
  const CMatrix u = -kI * (scaled * wo).cast<Complex>();
  const CMatrix v = ve.cast<Complex>();
  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

CMatrix unitary_from_eigen(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition did not converge");
  const CVector phases = (-kI * t * es.eigenvalues().cast<Complex>()).array().exp();
  const CMatrix v = es.eigenvectors().cast<Complex>();
  return v * phases.asDiagonal() * v.transpose();
}

namespace kernels {

CVector diagonalization(const Matrix& h, double t, const CVector& psi, PropagationStats& stats) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition did not converge");
  const Matrix& v = es.eigenvectors();
  CVector coeff = v.transpose().cast<Complex>() * psi;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff[k] *= std::exp(-kI * (es.eigenvalues()[k] * t));
  stats.matvecs += 2;
  stats.steps += 1;
  return v.cast<Complex>() * coeff;
}

CVector pade(const Matrix& h, double t, const CVector& psi, PropagationStats& stats) {
  stats.steps += 1;
  stats.matvecs += 1;
  return expm_pade(h * t) * psi;
}

CVector krylov(const Matrix& h, double t, const CVector& psi, const Krylov& opts, PropagationStats& stats) {
  validate(PropagatorKind{opts});
  const double total = std::abs(t);
  const double sign = t < 0 ? -1.0 : 1.0;
  CVector w = psi;
  double done = 0.0;
  double tau = total;
  const int m = static_cast<int>(std::min<Eigen::Index>(opts.dimension, psi.size()));
  while (done < total) {
    const double beta0 = w.norm();
    if (beta0 == 0.0) break;
    LanczosBasis lb = lanczos(h, w, m, stats);
    const Eigen::Index k = lb.alpha.size();
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    es.computeFromTridiagonal(lb.alpha, lb.beta, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalError("Lanczos tridiagonal eigensolver failed");
    const Matrix& s = es.eigenvectors();
    const Vector first_row = s.row(0).transpose();
    const double remaining = total - done;
    tau = std::min(tau, remaining);
    CVector y(k);
    for (;;) {
      const CVector phases = (-kI * (sign * tau) * es.eigenvalues().cast<Complex>()).array().exp();
      y = s.cast<Complex>() * (phases.array() * first_row.cast<Complex>().array()).matrix();
      if (lb.invariant) break;
      const double err = beta0 * lb.beta_last * tau * std::abs(y[k - 1]);
      if (err <= opts.tol * tau / total) break;
      tau *= 0.5;
      if (tau < 1e-14 * total) throw NumericalError("Krylov substep underflow");
    }
    CVector next = CVector::Zero(w.size());
    for (Eigen::Index j = 0; j < k; ++j) next.noalias() += y[j] * lb.q[static_cast<std::size_t>(j)];
    w = beta0 * next;
    done = lb.invariant ? total : done + tau;
    ++stats.steps;
    if (!lb.invariant) tau *= 2.0;
  }
  return w;
}

CVector runge_kutta(const Matrix& h, double t, const CVector& psi, const RungeKutta& opts,
                    PropagationStats& stats) {
  validate(PropagatorKind{opts});
  CVector y = psi;
  if (t == 0.0) return y;
  // Negative times integrate -H forward: e^{-iH(-|t|)} = e^{-i(-H)|t|}.
  const Matrix hs = t < 0 ? Matrix(-h) : h;
  const double span = std::abs(t);
  double step = initial_step(hs.cwiseAbs().rowwise().sum().maxCoeff(), span);
  rk_integrate([&](double, const CVector& v, CVector& out) { out.noalias() = hs * v; }, 0.0, span, y, opts, step,
               stats);
  return y;
}

CVector evolve_const(const Matrix& h, double t, const CVector& psi, const PropagatorKind& kind,
                     PropagationStats& stats) {
  return std::visit(overloaded{
                        [&](const Diagonalization&) { return diagonalization(h, t, psi, stats); },
                        [&](const PadeExpm&) { return pade(h, t, psi, stats); },
                        [&](const Krylov& k) { return krylov(h, t, psi, k, stats); },
                        [&](const RungeKutta& rk) { return runge_kutta(h, t, psi, rk, stats); },
                        [&](const TimeSliced&) -> CVector {
                          throw ValidationError("TimeSliced applies only to time-dependent Hamiltonians");
                        },
                    },
                    kind);
}

}  // namespace kernels

PropagationResult propagate_const(const SesHamiltonian& h, double t, const SesState& psi, const PropagatorKind& kind) {
  if (!(t >= 0.0)) throw ValidationError("propagate_const: t must be >= 0");
  if (psi.dim() != h.dim()) throw ValidationError("propagate_const: state and Hamiltonian dimensions differ");
  validate(kind);
  PropagationStats stats;
  WallTimer timer;
  CVector out = kernels::evolve_const(h.matrix(), t, psi.amplitudes(), kind, stats);
  stats.wall_seconds = timer.seconds();
  return {SesState::unchecked(std::move(out)), stats};
}

PropagationResult propagate_td(const TimeDependentHamiltonian& h, double t0, double t1, const SesState& psi,
                               const PropagatorKind& kind) {
  if (psi.dim() != h.dim()) throw ValidationError("propagate_td: state and Hamiltonian dimensions differ");
  if (!(t1 >= t0)) throw ValidationError("propagate_td: requires t0 <= t1");
  const double slack = 1e-12 * (h.t_end() - h.t_begin());
  if (t0 < h.t_begin() - slack || t1 > h.t_end() + slack)
    throw ValidationError("propagate_td: [t0, t1] lies outside the sampled range");
  validate(kind);
  PropagationStats stats;
  WallTimer timer;
  CVector y = psi.amplitudes();

  if (const auto* rk = std::get_if<RungeKutta>(&kind)) {
    // Integrate sample interval by sample interval: H(t) has kinks at the
    // nodes, which would otherwise force step rejections.
    std::vector<double> nodes{t0};
    for (double tn : h.times())
      if (tn > t0 && tn < t1) nodes.push_back(tn);
    nodes.push_back(t1);
    double step = initial_step(h.at(t0).cwiseAbs().rowwise().sum().maxCoeff(), t1 - t0);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      const double a = nodes[k];
      const double b = nodes[k + 1];
      auto apply = [&h, a, b](double t, const CVector& v, CVector& out) { h.apply(std::clamp(t, a, b), v, out); };
      rk_integrate(apply, a, b, y, *rk, step, stats);
    }
  } else if (const auto* ts = std::get_if<TimeSliced>(&kind)) {
    const double span = t1 - t0;
    const double ratio = span / ts->dt;
    std::int64_t slices = std::llround(ratio);
    if (std::abs(ratio - static_cast<double>(slices)) > 1e-9 * std::max(1.0, ratio))
      slices = static_cast<std::int64_t>(std::ceil(ratio));
    slices = std::max<std::int64_t>(slices, 1);
    const double width = span / static_cast<double>(slices);
    const PropagatorKind inner = std::visit([](const auto& k) { return PropagatorKind{k}; }, ts->inner);
    for (std::int64_t s = 0; s < slices; ++s) {
      const double mid = t0 + (static_cast<double>(s) + 0.5) * width;
      y = kernels::evolve_const(h.at(mid), width, y, inner, stats);
    }
  } else {
    throw ValidationError("propagate_td: kind must be RungeKutta or TimeSliced, got " + kind_name(kind));
  }
  stats.wall_seconds = timer.seconds();
  return {SesState::unchecked(std::move(y)), stats};
}

}  // namespace sesim
