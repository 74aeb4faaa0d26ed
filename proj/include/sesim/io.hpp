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

// Serialization: Hamiltonian JSON, CSV with provenance headers, result JSON.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sesim/bench.hpp"
#include "sesim/core.hpp"
#include "sesim/rescale.hpp"

namespace sesim {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

struct Provenance {
  Json config = Json::object();
  std::uint64_t seed = 0;

  /// Hash of the compact serialization of `config`, as 16 hex digits.
  std::string config_hash() const;
  Json to_json() const;
};

enum class EnergyUnits { RadPerSecond, MHz };

/// {n, units, matrix} with a row-major matrix. MHz entries are read as
/// frequencies and converted by 2 pi.
Json hamiltonian_to_json(const SesHamiltonian& h, EnergyUnits units = EnergyUnits::RadPerSecond);
SesHamiltonian hamiltonian_from_json(const Json& j);
SesHamiltonian load_hamiltonian(const std::string& path);
void save_hamiltonian(const SesHamiltonian& h, const std::string& path,
                      EnergyUnits units = EnergyUnits::RadPerSecond);

/// {units, times: [s], samples: [row-major matrix, ...]}.
TimeDependentHamiltonian td_hamiltonian_from_json(const Json& j);
Json td_hamiltonian_to_json(const TimeDependentHamiltonian& h);
Json read_json_file(const std::string& path);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

/// "# key value" comment lines: version, config hash, seed, config.
std::string provenance_header(const Provenance& prov);
/// Comment lines with version, config hash, seed and config, then the table.
std::string format_csv(const CsvTable& table, const Provenance& prov);
void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const CsvTable& table, const Provenance& prov);
/// Adds a "provenance" member and writes indented JSON.
void write_json(const std::string& path, Json body, const Provenance& prov);

/// Relative paths are placed under $SESIM_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string& path);

Json plan_to_json(const RescalePlan& plan);
Json bench_summary_json(const BenchReport& report);
Json matrix_to_json(const Matrix& m);

}  // namespace sesim
