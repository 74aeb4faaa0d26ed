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

// Small dense helpers shared by every module. They accept arbitrary Eigen
// expressions so callers can pass blocks, products and maps directly.

#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "sesim/types.hpp"

namespace sesim {

template <typename Derived>
bool is_square(const Eigen::MatrixBase<Derived>& m) {
  return m.rows() == m.cols();
}

/// Exact symmetry test (no tolerance): SES Hamiltonians are stored symmetric.
template <typename Derived>
bool is_exactly_symmetric(const Eigen::MatrixBase<Derived>& m) {
  if (!is_square(m)) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double tol) {
  return is_square(m) && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  return is_square(m) && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

/// min over alpha of ||a - e^{i alpha} b|| (Frobenius for matrices).
/// The optimal alpha is the argument of <b, a>.
template <typename DerivedA, typename DerivedB>
double phase_aligned_distance(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
  const CMatrix ac = a.template cast<Complex>();
  const CMatrix bc = b.template cast<Complex>();
  const Complex overlap = (bc.adjoint() * ac).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  return (ac - phase * bc).norm();
}

/// Symmetrizes by copying the upper triangle over the lower one, which
/// makes the result exactly symmetric.
template <typename Derived>
Matrix symmetrize_upper(const Eigen::MatrixBase<Derived>& m) {
  Matrix out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = j + 1; i < out.rows(); ++i) out(i, j) = out(j, i);
  return out;
}

}  // namespace sesim
