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

#include "sesim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sesim {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Provenance::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

Json Provenance::to_json() const {
  return Json{{"version", kVersion}, {"config_hash", config_hash()}, {"seed", seed}, {"config", config}};
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Json hamiltonian_to_json(const SesHamiltonian& h, EnergyUnits units) {
  const double scale = units == EnergyUnits::MHz ? rad_per_s_to_mhz(1.0) : 1.0;
  return Json{{"n", h.dim()},
              {"units", units == EnergyUnits::MHz ? "MHz" : "rad/s"},
              {"matrix", matrix_to_json(h.matrix() * scale)}};
}

SesHamiltonian hamiltonian_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ValidationError("hamiltonian JSON: expected an object");
    const auto n = j.at("n").get<Eigen::Index>();
    if (n < 1) throw ValidationError("hamiltonian JSON: n must be >= 1");
    const auto units = j.value("units", std::string("rad/s"));
    double scale = 1.0;
    if (units == "MHz")
      scale = mhz_to_rad_per_s(1.0);
    else if (units != "rad/s")
      throw ValidationError("hamiltonian JSON: units must be \"rad/s\" or \"MHz\", got \"" + units + "\"");
    const Json& rows = j.at("matrix");
    Matrix m(n, n);
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
      throw ValidationError("hamiltonian JSON: matrix must have n rows");
    for (Eigen::Index i = 0; i < n; ++i) {
      const Json& r = rows[static_cast<std::size_t>(i)];
      if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != n)
        throw ValidationError("hamiltonian JSON: row " + std::to_string(i) + " must have n entries");
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = scale * r[static_cast<std::size_t>(k)].get<double>();
    }
    return SesHamiltonian(m);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("hamiltonian JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataMissingError("cannot open '" + path + "'");
  try {
    Json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

SesHamiltonian load_hamiltonian(const std::string& path) { return hamiltonian_from_json(read_json_file(path)); }

TimeDependentHamiltonian td_hamiltonian_from_json(const Json& j) {
  try {
    const auto& times = j.at("times");
    const auto& samples = j.at("samples");
    if (!times.is_array() || !samples.is_array() || times.size() != samples.size())
      throw ValidationError("model JSON: times and samples must be arrays of equal length");
    std::vector<double> t;
    std::vector<Matrix> m;
    for (std::size_t k = 0; k < times.size(); ++k) {
      t.push_back(times[k].get<double>());
      Json one{{"n", samples[k].size()}, {"units", j.value("units", std::string("rad/s"))}, {"matrix", samples[k]}};
      m.push_back(hamiltonian_from_json(one).matrix());
    }
    return TimeDependentHamiltonian(std::move(t), std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model JSON: ") + e.what());
  }
}

Json td_hamiltonian_to_json(const TimeDependentHamiltonian& h) {
  Json samples = Json::array();
  for (const auto& m : h.samples()) samples.push_back(matrix_to_json(m));
  return Json{{"units", "rad/s"}, {"times", h.times()}, {"samples", std::move(samples)}};
}

void save_hamiltonian(const SesHamiltonian& h, const std::string& path, EnergyUnits units) {
  write_text(path, hamiltonian_to_json(h, units).dump(2) + "\n");
}

void CsvTable::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw ValidationError("csv: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string provenance_header(const Provenance& prov) {
  std::ostringstream os;
  os << "# sesim " << kVersion << "\n# config_hash " << prov.config_hash() << "\n# seed " << prov.seed
     << "\n# config " << prov.config.dump() << "\n";
  return os.str();
}

std::string format_csv(const CsvTable& table, const Provenance& prov) {
  std::ostringstream os;
  os << provenance_header(prov);
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << "\n";
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << fmt(r[c]);
    os << "\n";
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

void write_csv(const std::string& path, const CsvTable& table, const Provenance& prov) {
  write_text(path, format_csv(table, prov));
}

void write_json(const std::string& path, Json body, const Provenance& prov) {
  body["provenance"] = prov.to_json();
  write_text(path, body.dump(2) + "\n");
}

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("SESIM_OUTPUT_DIR"); dir && *dir) return (std::filesystem::path(dir) / p).string();
  return path;
}

Json plan_to_json(const RescalePlan& plan) {
  Json j;
  j["g_max"] = plan.g_max;
  j["times"] = plan.times;
  j["c"] = plan.c;
  j["lambda"] = plan.lambda;
  j["t_qc"] = plan.t_qc;
  j["device_times"] = plan.scaled.times();
  Json mats = Json::array();
  for (const auto& m : plan.scaled.samples()) mats.push_back(matrix_to_json(m));
  j["device_hamiltonians"] = std::move(mats);
  return j;
}

Json bench_summary_json(const BenchReport& report) {
  Json j;
  j["mode"] = report.mode == BenchMode::Const ? "const" : "td";
  Json kernels = Json::object();
  for (const auto& [name, fit] : report.fits) {
    Json k{{"a", fit.a}, {"b", fit.b}};
    if (auto it = report.breakeven.find(name); it != report.breakeven.end())
      k["breakeven"] = Json{{"parallel_factor", it->second.parallel_factor},
                            {"t_qu", it->second.t_qu},
                            {"n_star", it->second.n_star},
                            {"reference_n", it->second.reference}};
    if (auto it = report.spearman.find(name); it != report.spearman.end()) k["spearman"] = it->second;
    kernels[name] = std::move(k);
  }
  j["kernels"] = std::move(kernels);
  Json samples = Json::array();
  for (const auto& s : report.samples)
    samples.push_back(Json{{"kernel", s.kernel}, {"n", s.n}, {"mean_s", s.mean_s}, {"std_s", s.std_s},
                           {"median_of_means_s", s.mom_s}, {"kept", s.kept}, {"discarded", s.discarded},
                           {"max_error", s.max_error}});
  j["samples"] = std::move(samples);
  return j;
}

}  // namespace sesim
