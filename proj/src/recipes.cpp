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

#include "sesim/recipes.hpp"

#include <algorithm>
#include <filesystem>

#include "sesim/bench.hpp"
#include "sesim/collision.hpp"
#include "sesim/ensemble.hpp"
#include "sesim/io.hpp"
#include "sesim/noise.hpp"

namespace sesim {

namespace {

std::string out_path(const RecipeOptions& o, const std::string& file) {
  return (std::filesystem::path(o.out_dir) / file).string();
}

Provenance provenance(const std::string& name, const RecipeOptions& o, std::int64_t trials) {
  Provenance p;
  p.seed = o.seed;
  p.config = Json{{"recipe", name}, {"trials", trials}, {"quick", o.quick}};
  if (o.table) p.config["table"] = *o.table;
  return p;
}

std::vector<std::string> ensemble_recipe(const std::string& name, const RecipeOptions& o) {
  const bool large = name == "fig3";
  const std::int64_t trials = o.trials.value_or(o.quick ? 50 : (large ? 200 : 1000));
  std::vector<Eigen::Index> ns;
  if (large)
    ns = log_spaced(2, o.quick ? 100 : 500, o.quick ? 6 : 16);
  else
    for (Eigen::Index n = 2; n <= 100; n += (n < 10 ? 1 : (n < 30 ? 2 : 5))) ns.push_back(n);
  CsvTable t;
  const bool spacing = name == "fig4";
  t.columns = spacing ? std::vector<std::string>{"n", "mean_spacing", "se_spacing"}
                      : std::vector<std::string>{"n", "mean_bandwidth", "se_bandwidth"};
  for (Eigen::Index n : ns) {
    const EnsembleSpec spec{n, trials, o.seed};
    const SpectralSummary s = spacing ? level_spacing_stats(spec) : bandwidth_stats(spec);
    if (spacing)
      t.add({double(n), s.mean_spacing, s.se_spacing});
    else
      t.add({double(n), s.mean_bandwidth, s.se_bandwidth});
  }
  const auto path = out_path(o, name + ".csv");
  write_csv(path, t, provenance(name, o, trials));
  return {path};
}

std::vector<std::string> bench_recipe(const std::string& name, const RecipeOptions& o) {
  BenchOptions b;
  b.seed = o.seed;
  b.trials = static_cast<int>(o.trials.value_or(o.quick ? 3 : 5));
  b.n_list = log_spaced(16, o.quick ? 64 : 512, o.quick ? 4 : 6);
  BenchReport rep;
  if (name == "fig7") {
    b.kernels = {Diagonalization{}, PadeExpm{}, Krylov{}};
    rep = bench_const(b);
  } else {
    b.kernels = {RungeKutta{}};
    rep = bench_td(b);
  }
  const Provenance prov = provenance(name, o, b.trials);
  const auto csv = out_path(o, name + ".csv");
  write_text(csv, provenance_header(prov) + format_bench_csv(rep));
  const auto json = out_path(o, name + "_summary.json");
  write_json(json, bench_summary_json(rep), prov);
  return {csv, json};
}

std::vector<std::string> collision_recipe(const RecipeOptions& o) {
  if (!o.table)
    throw DataMissingError(
        "fig9..12 need a potential table: pass --table FILE, a CSV with header R,U11,U22,U33,U12,U13,U23 "
        "(R in bohr, energies in Hartree, '#' comments); data/synthetic_3ch.csv is a shipped stand-in");
  const PotentialCurveTable table = load_potential_table(*o.table);
  CollisionParams p;
  CollisionRunOptions ro;
  ro.mode = CollisionMode::Hardware;
  ro.grid = o.quick ? 1025 : 4096;
  ro.convergence_check = !o.quick;
  const CollisionResult r = run_collision(table, p, ro);
  const RescalePlan& plan = *r.plan;
  const Provenance prov = provenance("fig9..12", o, 1);
  const Eigen::Index m = table.channels();
  std::vector<std::string> files;

  CsvTable f9;
  f9.columns = {"t_au"};
  for (Eigen::Index i = 0; i < m; ++i) f9.columns.push_back("p" + std::to_string(i + 1));
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    std::vector<double> row{r.model_times[k]};
    for (Eigen::Index i = 0; i < m; ++i) row.push_back(r.probabilities[k][i]);
    f9.add(std::move(row));
  }
  files.push_back(out_path(o, "fig9.csv"));
  write_csv(files.back(), f9, prov);

  CsvTable f10, f11;
  f10.columns = {"t_s", "lambda"};
  f11.columns = {"t_qc_s", "t_s"};
  for (std::size_t k = 0; k < plan.times.size(); ++k) {
    f10.add({plan.times[k], plan.lambda[k]});
    f11.add({plan.t_qc[k], plan.times[k]});
  }
  files.push_back(out_path(o, "fig10.csv"));
  write_csv(files.back(), f10, prov);
  files.push_back(out_path(o, "fig11.csv"));
  write_csv(files.back(), f11, prov);

  CsvTable f12;
  f12.columns = {"t_qc_s"};
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) f12.columns.push_back("H" + std::to_string(i + 1) + std::to_string(j + 1) + "_MHz");
  for (std::size_t k = 0; k < plan.scaled.size(); ++k) {
    std::vector<double> row{plan.scaled.times()[k]};
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) row.push_back(rad_per_s_to_mhz(plan.scaled.samples()[k](i, j)));
    f12.add(std::move(row));
  }
  files.push_back(out_path(o, "fig12.csv"));
  write_csv(files.back(), f12, prov);
  return files;
}

std::vector<std::string> control_recipe(const std::string& name, const RecipeOptions& o) {
  const double t = name == "fig13" ? 10e-9 : 100e-9;
  std::vector<Eigen::Index> ns;
  if (name == "fig15")
    ns = log_spaced(100, o.quick ? 200 : 1000, o.quick ? 3 : 6);
  else
    ns = o.quick ? std::vector<Eigen::Index>{4, 16} : std::vector<Eigen::Index>{4, 8, 16, 32, 64, 100};
  const std::int64_t trials = o.trials.value_or(o.quick ? 20 : (name == "fig15" ? 50 : 1000));
  ControlNoiseSpec noise{mhz_to_rad_per_s(0.5)};
  ControlMcOptions mc;
  mc.trials = trials;
  mc.seed = o.seed;
  CsvTable tab;
  tab.columns = {"n", "E_mc", "se_mc", "E_perturbative"};
  for (Eigen::Index n : ns) {
    const McEstimate e = control_error_mc(n, noise, t, mc);
    // Perturbative curve on the ensemble: averaged over the same H draws.
    double pert = 0.0;
    const std::int64_t pt = std::min<std::int64_t>(trials, 100);
    for (std::int64_t k = 0; k < pt; ++k) {
      Rng rng = Rng::stream(o.seed, static_cast<std::uint64_t>(k));
      pert += control_error_perturbative(mc.g_max * sample_k(n, rng), noise.sigma(), t);
    }
    tab.add({double(n), e.mean, e.se, pert / double(pt)});
  }
  const auto path = out_path(o, name + ".csv");
  write_csv(path, tab, provenance(name, o, trials));
  return {path};
}

}  // namespace

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig7", "fig8", "fig9..12",
                                              "fig13", "fig14", "fig15"};
  return names;
}

std::vector<std::string> run_recipe(const std::string& name, const RecipeOptions& opts) {
  if (name == "fig2" || name == "fig3" || name == "fig4") return ensemble_recipe(name, opts);
  if (name == "fig7" || name == "fig8") return bench_recipe(name, opts);
  if (name == "fig9..12" || name == "fig9" || name == "fig10" || name == "fig11" || name == "fig12")
    return collision_recipe(opts);
  if (name == "fig13" || name == "fig14" || name == "fig15") return control_recipe(name, opts);
  std::string list;
  for (const auto& n : recipe_names()) list += (list.empty() ? "" : ", ") + n;
  throw ValidationError("unknown recipe '" + name + "' (expected one of: " + list + ")");
}

}  // namespace sesim
