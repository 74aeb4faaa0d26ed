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

#include "sesim/collision.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sesim/linalg.hpp"

namespace sesim {

// ------------------------------------------------------------ table

void PotentialCurveTable::validate() const {
  if (R.size() < 2) throw ValidationError("potential table: need at least two R points");
  if (U.size() != R.size()) throw ValidationError("potential table: one matrix per R point is required");
  const Eigen::Index m = U.front().rows();
  if (m < 2) throw ValidationError("potential table: need at least two channels");
  for (std::size_t k = 0; k < R.size(); ++k) {
    if (k > 0 && !(R[k] > R[k - 1]))
      throw ValidationError("potential table: R must be strictly increasing (row " + std::to_string(k + 1) + ")");
    if (U[k].rows() != m || U[k].cols() != m || !is_exactly_symmetric(U[k]))
      throw ValidationError("potential table: matrix at row " + std::to_string(k + 1) + " is not m x m symmetric");
    if (!U[k].allFinite()) throw ValidationError("potential table: non-finite value at row " + std::to_string(k + 1));
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != m)
    throw ValidationError("potential table: label count does not match channel count");
}

Matrix PotentialCurveTable::at(double r) const {
  if (r < R.front()) {
    std::ostringstream os;
    os << "potential table: R = " << r << " bohr lies below the tabulated minimum " << R.front();
    throw ValidationError(os.str());
  }
  if (r >= R.back()) return U.back();
  auto it = std::upper_bound(R.begin(), R.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - R.begin()) - 1;
  const double w = (r - R[k]) / (R[k + 1] - R[k]);
  if (w == 0.0) return U[k];
  return (1.0 - w) * U[k] + w * U[k + 1];
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// "U12" or "U10_11" -> (0, 1) / (9, 10).
bool parse_column(const std::string& name, int& i, int& j) {
  if (name.size() < 3 || name[0] != 'U') return false;
  const std::string body = name.substr(1);
  const auto us = body.find('_');
  try {
    if (us == std::string::npos) {
      if (body.size() != 2 || !std::isdigit(static_cast<unsigned char>(body[0])) ||
          !std::isdigit(static_cast<unsigned char>(body[1])))
        return false;
      i = body[0] - '0';
      j = body[1] - '0';
    } else {
      std::size_t p1 = 0, p2 = 0;
      i = std::stoi(body.substr(0, us), &p1);
      j = std::stoi(body.substr(us + 1), &p2);
      if (p1 != us || p2 != body.size() - us - 1) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  if (i < 1 || j < i) return false;
  --i;
  --j;
  return true;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) throw ValidationError(where + ": cannot parse number '" + s + "'");
  return v;
}

std::string column_name(Eigen::Index i, Eigen::Index j, Eigen::Index m) {
  if (m <= 9) return "U" + std::to_string(i + 1) + std::to_string(j + 1);
  return "U" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

}  // namespace

PotentialCurveTable parse_potential_table(const std::string& text, const std::string& source) {
  PotentialCurveTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<int, int>> cols;
  Eigen::Index m = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      const std::string body = trim(s.substr(1));
      if (body.rfind("labels:", 0) == 0) {
        t.labels.clear();
        for (auto& l : split(trim(body.substr(7)), ';'))
          if (!l.empty()) t.labels.push_back(l);
      }
      continue;
    }
    if (!have_header) {
      const auto names = split(s, ',');
      if (names.empty() || names[0] != "R") throw ValidationError(where + ": header must start with 'R'");
      int max_idx = -1;
      for (std::size_t c = 1; c < names.size(); ++c) {
        int i = 0, j = 0;
        if (!parse_column(names[c], i, j)) throw ValidationError(where + ": bad column name '" + names[c] + "'");
        cols.emplace_back(i, j);
        max_idx = std::max(max_idx, j);
      }
      m = max_idx + 1;
      const std::size_t expected = static_cast<std::size_t>(m * (m + 1) / 2);
      std::map<std::pair<int, int>, int> seen;
      for (const auto& c : cols)
        if (++seen[c] > 1) throw ValidationError(where + ": duplicate column");
      if (cols.size() != expected)
        throw ValidationError(where + ": expected " + std::to_string(expected) + " U columns for " +
                              std::to_string(m) + " channels");
      have_header = true;
      continue;
    }
    const auto fields = split(s, ',');
    if (fields.size() != cols.size() + 1)
      throw ValidationError(where + ": expected " + std::to_string(cols.size() + 1) + " fields, found " +
                            std::to_string(fields.size()));
    const double r = parse_double(fields[0], where);
    if (!t.R.empty() && !(r > t.R.back())) throw ValidationError(where + ": R must be strictly increasing");
    Matrix u = Matrix::Zero(m, m);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double v = parse_double(fields[c + 1], where);
      u(cols[c].first, cols[c].second) = v;
      u(cols[c].second, cols[c].first) = v;
    }
    t.R.push_back(r);
    t.U.push_back(std::move(u));
  }
  if (!have_header) throw ValidationError(source + ": missing header line");
  t.validate();
  return t;
}

PotentialCurveTable load_potential_table(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw DataMissingError("cannot open potential table '" + path +
                           "'; expected CSV with header R,U11,U22,U33,U12,U13,U23 in atomic units");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_potential_table(ss.str(), path);
}

std::string format_potential_table(const PotentialCurveTable& table) {
  table.validate();
  const Eigen::Index m = table.channels();
  std::ostringstream os;
  os << "# diabatic potential-coupling table, atomic units\n";
  if (!table.labels.empty()) {
    os << "# labels: ";
    for (std::size_t k = 0; k < table.labels.size(); ++k) os << (k ? "; " : "") << table.labels[k];
    os << '\n';
  }
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cols;
  for (Eigen::Index i = 0; i < m; ++i) cols.emplace_back(i, i);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) cols.emplace_back(i, j);
  os << 'R';
  for (const auto& [i, j] : cols) os << ',' << column_name(i, j, m);
  os << '\n';
  char buf[40];
  for (std::size_t k = 0; k < table.R.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", table.R[k]);
    os << buf;
    for (const auto& [i, j] : cols) {
      std::snprintf(buf, sizeof buf, "%.17g", table.U[k](i, j));
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

void save_potential_table(const PotentialCurveTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write potential table '" + path + "'");
  out << format_potential_table(table);
}

PotentialCurveTable synthetic_three_channel_table(std::size_t points) {
  if (points < 2) throw ValidationError("synthetic table: need at least two points");
  PotentialCurveTable t;
  t.labels = {"ground", "excited-a", "excited-b"};
  const double r_min = 0.2, r_max = 60.0;
  auto morse = [](double r, double d, double a, double re, double asym) {
    const double x = 1.0 - std::exp(-a * (r - re));
    return asym + d * (x * x - 1.0);
  };
  auto gauss = [](double r, double amp, double rc, double w) {
    const double z = (r - rc) / w;
    return amp * std::exp(-z * z);
  };
  for (std::size_t k = 0; k < points; ++k) {
    // Quadratic spacing puts more points at small R.
    const double s = static_cast<double>(k) / static_cast<double>(points - 1);
    const double r = r_min + (r_max - r_min) * s * s;
    Matrix u(3, 3);
    u(0, 0) = morse(r, 0.004, 0.9, 6.0, 0.0);
    u(1, 1) = morse(r, 0.020, 0.8, 4.5, 0.0773);
    u(2, 2) = morse(r, 0.010, 0.7, 5.0, 0.0773);
    u(0, 1) = u(1, 0) = gauss(r, 0.30, 3.0, 1.2);
    u(0, 2) = u(2, 0) = gauss(r, 0.04, 3.5, 1.0);
    u(1, 2) = u(2, 1) = gauss(r, 0.20, 2.5, 1.5);
    t.R.push_back(r);
    t.U.push_back(std::move(u));
  }
  t.validate();
  return t;
}

// ------------------------------------------------------------ trajectory

void CollisionParams::validate() const {
  if (!(b >= 0)) throw ValidationError("collision: b must be >= 0");
  if (!(v0 > 0)) throw ValidationError("collision: v0 must be positive");
  if (!(mu > 0)) throw ValidationError("collision: mu must be positive");
  if (!(R_start > b)) throw ValidationError("collision: R_start must exceed b");
}

double CollisionParams::impact_time() const {
  return t0.value_or(std::sqrt(R_start * R_start - b * b) / v0);
}

double trajectory_R(double t, const CollisionParams& p) {
  const double dt = t - p.impact_time();
  return std::sqrt(p.b * p.b + p.v0 * p.v0 * dt * dt);
}

CouplingMap CouplingMap::standard(Eigen::Index m) {
  CouplingMap map;
  map.kind.assign(static_cast<std::size_t>(m), std::vector<CouplingKind>(static_cast<std::size_t>(m), CouplingKind::Radial));
  if (m == 3) {
    map.kind[0][1] = map.kind[1][0] = CouplingKind::Rotational;
    map.kind[1][2] = map.kind[2][1] = CouplingKind::Rotational;
  }
  return map;
}

Matrix scattering_hamiltonian(const PotentialCurveTable& table, const CollisionParams& params, double t,
                              const ScatteringOptions& opts) {
  params.validate();
  const Eigen::Index m = table.channels();
  const CouplingMap map = opts.couplings.value_or(CouplingMap::standard(m));
  if (static_cast<Eigen::Index>(map.kind.size()) != m) throw ValidationError("scattering: coupling map has wrong size");
  const double r = trajectory_R(t, params);
  Matrix h = table.at(r);
  const double bv = params.b * params.v0;
  if (opts.centrifugal) h.diagonal().array() += 0.5 * params.mu * (bv / r) * (bv / r);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      if (map.kind[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == CouplingKind::Rotational) {
        h(i, j) *= bv / (r * r);
        h(j, i) = h(i, j);
      }
  return h;
}

TimeDependentHamiltonian scattering_series(const PotentialCurveTable& table, const CollisionParams& params,
                                           std::size_t points, const ScatteringOptions& opts) {
  if (points < 2) throw ValidationError("scattering_series: need at least two points");
  params.validate();
  const double t_end = params.t_end();
  std::vector<double> ts(points);
  std::vector<Matrix> hs(points);
  for (std::size_t k = 0; k < points; ++k) {
    ts[k] = k + 1 == points ? t_end : t_end * static_cast<double>(k) / static_cast<double>(points - 1);
    hs[k] = scattering_hamiltonian(table, params, ts[k], opts);
  }
  return TimeDependentHamiltonian(std::move(ts), std::move(hs));
}

TimeDependentHamiltonian to_si(const TimeDependentHamiltonian& au) {
  std::vector<double> ts;
  std::vector<Matrix> hs;
  ts.reserve(au.size());
  hs.reserve(au.size());
  for (std::size_t k = 0; k < au.size(); ++k) {
    ts.push_back(au.times()[k] * kAuTimeSeconds);
    hs.push_back(au.samples()[k] * kHartreeRadPerSecond);
  }
  return TimeDependentHamiltonian(std::move(ts), std::move(hs));
}

// ------------------------------------------------------------ runs

namespace {

struct Traces {
  std::vector<double> times;
  std::vector<Vector> probs;
  Vector finals;
  double norm_dev = 0.0;
};

Traces trace_run(const TimeDependentHamiltonian& h, const SesState& psi0, const RungeKutta& rk) {
  Traces tr;
  SesState psi = psi0;
  tr.times.push_back(h.t_begin());
  tr.probs.push_back(psi.probabilities());
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    psi = propagate_td(h, h.times()[k], h.times()[k + 1], psi, rk).final_state;
    tr.times.push_back(h.times()[k + 1]);
    tr.probs.push_back(psi.probabilities());
    tr.norm_dev = std::max(tr.norm_dev, psi.norm_deviation());
  }
  tr.finals = tr.probs.back();
  return tr;
}

// Removes the mean diagonal at every sample. This changes only the global
// phase, and it takes the large channel-independent centrifugal term out of
// the integration.
TimeDependentHamiltonian traceless(const TimeDependentHamiltonian& h) {
  std::vector<Matrix> s = h.samples();
  for (auto& m : s) m.diagonal().array() -= m.diagonal().mean();
  return TimeDependentHamiltonian(h.times(), std::move(s));
}

Vector finals_only(const PotentialCurveTable& table, const CollisionParams& params, const CollisionRunOptions& opts,
                   std::size_t grid) {
  const auto series = scattering_series(table, params, grid, opts.scattering);
  const SesState psi0 = SesState::basis(table.channels(), opts.initial_channel);
  if (opts.mode == CollisionMode::Ideal)
    return propagate_td(traceless(series), series.t_begin(), series.t_end(), psi0, opts.rk)
        .final_state.probabilities();
  const RescalePlan plan = rescale_td(to_si(series), opts.g_max);
  return propagate_td(plan.scaled, plan.scaled.t_begin(), plan.scaled.t_end(), psi0, opts.rk)
      .final_state.probabilities();
}

}  // namespace

CollisionResult run_collision(const PotentialCurveTable& table, const CollisionParams& params,
                              const CollisionRunOptions& opts) {
  table.validate();
  params.validate();
  if (opts.grid < 2) throw ValidationError("run_collision: grid must have at least two points");
  if (opts.initial_channel < 0 || opts.initial_channel >= table.channels())
    throw ValidationError("run_collision: initial channel out of range");
  CollisionResult res;
  res.collision_energy_hartree = params.collision_energy();
  std::size_t grid = opts.grid;
  if (opts.mode == CollisionMode::Hardware && opts.refine_grid) {
    const RescaleOptions ro;
    while (grid < opts.max_grid &&
           largest_lambda_step(scattering_series(table, params, grid, opts.scattering), opts.g_max) >
               ro.max_lambda_step)
      grid = 2 * grid - 1;
  }
  res.grid = grid;
  const auto series = scattering_series(table, params, grid, opts.scattering);
  const SesState psi0 = SesState::basis(table.channels(), opts.initial_channel);

  if (opts.mode == CollisionMode::Ideal) {
    Traces tr = trace_run(traceless(series), psi0, opts.rk);
    res.times = tr.times;
    res.model_times = tr.times;
    res.probabilities = std::move(tr.probs);
    res.finals = tr.finals;
    res.norm_deviation = tr.norm_dev;
  } else {
    RescalePlan plan = rescale_td(to_si(series), opts.g_max);
    Traces tr = trace_run(plan.scaled, psi0, opts.rk);
    res.times = tr.times;
    res.model_times.reserve(tr.times.size());
    for (double tq : tr.times) res.model_times.push_back(plan.model_time(tq) / kAuTimeSeconds);
    res.probabilities = std::move(tr.probs);
    res.finals = tr.finals;
    res.norm_deviation = tr.norm_dev;
    res.plan = std::move(plan);
  }
  if (opts.convergence_check) {
    const Vector fine = finals_only(table, params, opts, 2 * grid - 1);
    res.convergence_delta = (fine - res.finals).cwiseAbs().maxCoeff();
    if (*res.convergence_delta > 1e-4) {
      std::ostringstream os;
      os << "run_collision: final probabilities change by " << *res.convergence_delta
         << " when the time grid is doubled; increase the grid";
      warn(os.str());
    }
  }
  return res;
}

}  // namespace sesim
