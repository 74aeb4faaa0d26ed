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

// Semiclassical straight-line collisions on diabatic potential tables.
//
// Everything inside this module is in atomic units (Hartree, bohr, hbar/E_h)
// except where a name says otherwise. Conversion to SI happens only when a
// run is mapped onto device hardware.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sesim/core.hpp"
#include "sesim/propagate.hpp"
#include "sesim/rescale.hpp"

namespace sesim {

inline constexpr double kAuTimeSeconds = 2.4189e-17;
inline constexpr double kHartreeJoules = 4.3597e-18;
inline constexpr double kHartreeEv = 27.211;
/// Hartree / hbar in rad/s.
inline constexpr double kHartreeRadPerSecond = 1.0 / kAuTimeSeconds;

struct PotentialCurveTable {
  std::vector<double> R;  // bohr, strictly increasing
  std::vector<Matrix> U;  // Hartree, m x m symmetric
  std::vector<std::string> labels;

  Eigen::Index channels() const { return U.empty() ? 0 : U.front().rows(); }
  void validate() const;
  /// Linear interpolation in R. Clamped to the last sample beyond the grid;
  /// R below the first sample is rejected.
  Matrix at(double r) const;
};

PotentialCurveTable load_potential_table(const std::string& path);
PotentialCurveTable parse_potential_table(const std::string& text, const std::string& source = "<string>");
void save_potential_table(const PotentialCurveTable& table, const std::string& path);
std::string format_potential_table(const PotentialCurveTable& table);

/// Three channels: Morse-like diabatic potentials with Gaussian couplings.
PotentialCurveTable synthetic_three_channel_table(std::size_t points = 400);

struct CollisionParams {
  double b = 0.5;         // impact parameter, bohr
  double v0 = 2.0;        // relative velocity, bohr / (hbar/E_h)
  double mu = 6214.35;    // reduced mass, electron masses
  double R_start = 50.0;  // initial and final separation, bohr
  /// Time of closest approach; nullopt places it so the run starts at t = 0.
  std::optional<double> t0;

  void validate() const;
  double impact_time() const;
  /// Time window [0, 2 t0] over which R <= R_start.
  double t_end() const { return 2.0 * impact_time(); }
  /// mu v0^2 / 2, Hartree.
  double collision_energy() const { return 0.5 * mu * v0 * v0; }
};

double trajectory_R(double t, const CollisionParams& p);

enum class CouplingKind { Radial, Rotational };

struct CouplingMap {
  /// kind(i, j) for i < j; Rotational couplings are multiplied by b v0 / R^2.
  std::vector<std::vector<CouplingKind>> kind;

  /// (1,2) and (2,3) rotational, (1,3) radial for three channels; all radial otherwise.
  static CouplingMap standard(Eigen::Index m);
};

struct ScatteringOptions {
  bool centrifugal = true;
  std::optional<CouplingMap> couplings;
};

Matrix scattering_hamiltonian(const PotentialCurveTable& table, const CollisionParams& params, double t,
                              const ScatteringOptions& opts = {});

/// Model Hamiltonian sampled on `points` uniform times covering [0, t_end].
TimeDependentHamiltonian scattering_series(const PotentialCurveTable& table, const CollisionParams& params,
                                           std::size_t points, const ScatteringOptions& opts = {});

enum class CollisionMode { Ideal, Hardware };

struct CollisionRunOptions {
  CollisionMode mode = CollisionMode::Ideal;
  double g_max = mhz_to_rad_per_s(30.0);
  std::size_t grid = 4096;
  /// Hardware mode: refine the grid (k -> 2k - 1) until lambda changes by at
  /// most 10% between samples, up to max_grid points.
  bool refine_grid = true;
  std::size_t max_grid = std::size_t{1} << 20;
  bool convergence_check = true;
  RungeKutta rk{1e-10, 1e-12};
  ScatteringOptions scattering;
  Eigen::Index initial_channel = 0;
};

struct CollisionResult {
  /// Trace times: model time in a.u. (ideal) or device time in s (hardware).
  std::vector<double> times;
  /// Model time in a.u. for each trace point.
  std::vector<double> model_times;
  std::vector<Vector> probabilities;
  Vector finals;
  double norm_deviation = 0.0;
  double collision_energy_hartree = 0.0;
  /// Model-time grid actually used.
  std::size_t grid = 0;
  /// max |finals(grid) - finals(2 grid)|, when the check ran.
  std::optional<double> convergence_delta;
  std::optional<RescalePlan> plan;  // hardware mode only
};

CollisionResult run_collision(const PotentialCurveTable& table, const CollisionParams& params,
                              const CollisionRunOptions& opts = {});

/// Model series in SI: energies in rad/s, times in s.
TimeDependentHamiltonian to_si(const TimeDependentHamiltonian& au);

}  // namespace sesim
