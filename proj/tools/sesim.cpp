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

// sesim: command-line front end. Frequencies are given in MHz (divided by
// 2 pi internally), SES indices on the command line are 1-based.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sesim/bench.hpp"
#include "sesim/collision.hpp"
#include "sesim/ensemble.hpp"
#include "sesim/io.hpp"
#include "sesim/noise.hpp"
#include "sesim/protocols.hpp"
#include "sesim/recipes.hpp"
#include "sesim/rescale.hpp"

using namespace sesim;

namespace {

void emit_json(const std::string& out, Json body, const Provenance& prov) {
  if (out.empty() || out == "-") {
    body["provenance"] = prov.to_json();
    std::cout << body.dump(2) << "\n";
  } else {
    write_json(resolve_output_path(out), std::move(body), prov);
  }
}

void emit_csv(const std::string& out, const CsvTable& t, const Provenance& prov) {
  if (out.empty() || out == "-")
    std::cout << format_csv(t, prov);
  else
    write_csv(resolve_output_path(out), t, prov);
}

std::vector<Eigen::Index> to_index(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

const char* protocol_name(MeasurementProtocol p) {
  switch (p) {
    case MeasurementProtocol::FullCollapse: return "full";
    case MeasurementProtocol::FirstHalf: return "first-half";
    default: return "parity";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SES quantum processor simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // coupler
  CouplerCircuitParams cp;
  auto* coupler = app.add_subcommand("coupler", "Coupling strength of a tunable inductive coupler (SI inputs)");
  coupler->add_option("--m", cp.m, "Coupler mutual inductance fraction / mutual inductance")->required();
  coupler->add_option("--l0", cp.L0, "L0 (H)")->required();
  coupler->add_option("--l0p", cp.L0prime, "L0' (H)")->required();
  coupler->add_option("--lj", cp.Lj, "Junction inductance (H)")->required();
  coupler->add_option("--lc", cp.Lc, "Coupler inductance (H)")->required();
  coupler->add_option("--c", cp.C, "Qubit capacitance (F)")->required();

  // ensemble
  std::vector<long long> ens_n{10, 30, 100};
  std::int64_t ens_trials = 1000;
  std::uint64_t seed = 1;
  std::string out;
  auto* ensemble = app.add_subcommand("ensemble", "Bandwidth and level-spacing statistics of the random ensemble");
  ensemble->add_option("--n-list", ens_n, "Dimensions")->delimiter(',');
  ensemble->add_option("--trials", ens_trials, "Trials per n");
  ensemble->add_option("--seed", seed, "Seed");
  ensemble->add_option("--out", out, "Output CSV (default stdout)");

  // grover
  long long gr_n = 4, gr_marked = 1, gr_shots = 0;
  double gr_gmax_mhz = 50.0;
  auto* grover = app.add_subcommand("grover", "Grover search schedule");
  grover->add_option("--n", gr_n, "Dimension")->required();
  grover->add_option("--marked", gr_marked, "Marked state (1-based)")->required();
  grover->add_option("--shots", gr_shots, "Measurement shots to sample");
  grover->add_option("--gmax-mhz", gr_gmax_mhz, "g_max / 2 pi in MHz");
  grover->add_option("--seed", seed, "Seed");
  grover->add_option("--out", out, "Output JSON (default stdout)");

  // ipe
  std::string ipe_h, ipe_prep = "exact", ipe_protocol = "first-half";
  int ipe_bits = 4, ipe_shots = 25;
  double ipe_time = 0.0, ipe_gmax_mhz = 50.0;
  auto* ipe = app.add_subcommand("ipe", "Iterative phase estimation of the ground energy");
  ipe->add_option("--hamiltonian", ipe_h, "Hamiltonian JSON {n, units, matrix}")->required();
  ipe->add_option("--bits", ipe_bits, "Number of phase bits");
  ipe->add_option("--time", ipe_time, "Evolution time t in seconds")->required();
  ipe->add_option("--prep", ipe_prep, "exact | adiabatic:T (T in seconds)");
  ipe->add_option("--shots-per-bit", ipe_shots, "Shots per bit");
  ipe->add_option("--protocol", ipe_protocol, "full | first-half | parity")
      ->check(CLI::IsMember({"full", "first-half", "parity"}));
  ipe->add_option("--gmax-mhz", ipe_gmax_mhz, "g_max / 2 pi in MHz");
  ipe->add_option("--seed", seed, "Seed");
  ipe->add_option("--out", out, "Output JSON (default stdout)");

  // rescale
  std::string rs_model;
  double rs_gmax_mhz = 30.0;
  auto* rescale = app.add_subcommand("rescale", "Map a model Hamiltonian onto hardware limits");
  rescale->add_option("--model", rs_model, "Static {n, units, matrix} or sampled {units, times, samples} JSON")
      ->required();
  rescale->add_option("--gmax-mhz", rs_gmax_mhz, "g_max / 2 pi in MHz");
  rescale->add_option("--out", out, "Output JSON (default stdout)");

  // collide
  std::string cl_table, cl_mode = "ideal";
  CollisionParams cl;
  double cl_gmax_mhz = 30.0;
  std::size_t cl_grid = 4096;
  auto* collide = app.add_subcommand("collide", "Semiclassical straight-line collision");
  collide->add_option("--table", cl_table, "Potential CSV (R,U11,U22,...; atomic units)")->required();
  collide->add_option("--b", cl.b, "Impact parameter (bohr)");
  collide->add_option("--v0", cl.v0, "Velocity (atomic units)");
  collide->add_option("--mu", cl.mu, "Reduced mass (electron masses)");
  collide->add_option("--gmax-mhz", cl_gmax_mhz, "g_max / 2 pi in MHz (hardware mode)");
  collide->add_option("--mode", cl_mode, "ideal | hardware")->check(CLI::IsMember({"ideal", "hardware"}));
  collide->add_option("--grid", cl_grid, "Sample points");
  collide->add_option("--out", out, "Output CSV (default stdout)");

  // noise control
  auto* noise = app.add_subcommand("noise", "Noise models");
  noise->require_subcommand(1);
  double nc_gmax_mhz = 50.0, nc_t_ns = 100.0, nc_dv_mhz = 0.5;
  std::vector<long long> nc_n{4, 16, 64, 100};
  std::int64_t nc_trials = 1000;
  auto* control = noise->add_subcommand("control", "Control-error Monte Carlo and perturbation theory");
  control->add_option("--gmax-mhz", nc_gmax_mhz, "g_max / 2 pi in MHz");
  control->add_option("--t-ns", nc_t_ns, "Evolution time in ns");
  control->add_option("--dv-mhz", nc_dv_mhz, "Full width of the element distribution / 2 pi in MHz");
  control->add_option("--n-list", nc_n, "Dimensions")->delimiter(',');
  control->add_option("--trials", nc_trials, "Trials per n");
  control->add_option("--seed", seed, "Seed");
  control->add_option("--out", out, "Output CSV (default stdout)");

  // bench
  std::string bn_mode = "const", bn_summary;
  std::vector<long long> bn_n{16, 32, 64, 128, 256, 512};
  int bn_trials = 10;
  auto* bench = app.add_subcommand("bench", "Time the propagation kernels");
  bench->add_option("--mode", bn_mode, "const | td")->check(CLI::IsMember({"const", "td"}));
  bench->add_option("--n-list", bn_n, "Dimensions")->delimiter(',');
  bench->add_option("--trials", bn_trials, "Trials per n (>= 3)");
  bench->add_option("--seed", seed, "Seed");
  bench->add_option("--out", out, "Output CSV (default stdout)");
  bench->add_option("--summary", bn_summary, "Summary JSON with fits and breakeven");

  // table
  std::size_t tb_points = 400;
  auto* table_cmd = app.add_subcommand("table", "Write the built-in synthetic three-channel potential table");
  table_cmd->add_option("--points", tb_points, "Grid points");
  table_cmd->add_option("--out", out, "Output CSV (default stdout)");

  // figure
  std::string fig_name;
  RecipeOptions ro;
  std::int64_t fig_trials = 0;
  std::string fig_table;
  auto* figure = app.add_subcommand("figure", "Regenerate the dataset behind a figure");
  figure->add_option("name", fig_name, "Recipe name")->required()->check(CLI::IsMember(recipe_names()));
  figure->add_option("--out-dir", ro.out_dir, "Output directory");
  figure->add_option("--seed", ro.seed, "Seed");
  figure->add_option("--trials", fig_trials, "Override the trial count");
  figure->add_option("--table", fig_table, "Potential CSV for fig9..12");
  figure->add_flag("--quick", ro.quick, "Smaller grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*coupler) {
      const CouplerStrength s = coupler_strength(cp);
      std::cout.precision(10);
      std::cout << rad_per_s_to_mhz(s.g) << "\n";
    } else if (*ensemble) {
      CsvTable t;
      t.columns = {"n", "mean_bandwidth", "se_bandwidth", "mean_spacing", "se_spacing"};
      for (Eigen::Index n : to_index(ens_n)) {
        const EnsembleSpec spec{n, ens_trials, seed};
        const SpectralSummary s = n >= 2 ? level_spacing_stats(spec) : bandwidth_stats(spec);
        t.add({double(n), s.mean_bandwidth, s.se_bandwidth, s.mean_spacing, s.se_spacing});
      }
      Provenance prov{Json{{"command", "ensemble"}, {"n_list", ens_n}, {"trials", ens_trials}}, seed};
      emit_csv(out, t, prov);
    } else if (*grover) {
      if (gr_marked < 1 || gr_marked > gr_n) throw ValidationError("--marked must be in 1..n");
      const double g_max = mhz_to_rad_per_s(gr_gmax_mhz);
      const PulseSchedule sched = grover_schedule(gr_n, gr_marked - 1, g_max);
      const SesState fin = execute(sched, SesState::basis(gr_n, 0));
      Json body{{"n", gr_n},
                {"marked", gr_marked},
                {"iterations", grover_iterations(gr_n)},
                {"duration_s", sched.total_duration()},
                {"success_probability", fin.probabilities()[gr_marked - 1]},
                {"predicted_probability", grover_success_probability(gr_n)}};
      Json shots = Json::array();
      Rng rng(seed);
      for (long long k = 0; k < gr_shots; ++k) {
        const MeasurementRecord r = measure(fin, MeasurementProtocol::FullCollapse, rng, k);
        shots.push_back(Json{{"repetition", k}, {"index", *r.index + 1}, {"hit", *r.index + 1 == gr_marked}});
      }
      body["shots"] = std::move(shots);
      Provenance prov{Json{{"command", "grover"}, {"n", gr_n}, {"marked", gr_marked}, {"shots", gr_shots},
                           {"gmax_mhz", gr_gmax_mhz}},
                      seed};
      emit_json(out, std::move(body), prov);
    } else if (*ipe) {
      IpeOptions o;
      o.bits = ipe_bits;
      o.shots_per_bit = ipe_shots;
      o.g_max = mhz_to_rad_per_s(ipe_gmax_mhz);
      o.protocol = ipe_protocol == "full"         ? MeasurementProtocol::FullCollapse
                   : ipe_protocol == "first-half" ? MeasurementProtocol::FirstHalf
                                                  : MeasurementProtocol::ParityAncilla;
      if (ipe_prep.rfind("adiabatic:", 0) == 0) {
        try {
          o.t_prep = std::stod(ipe_prep.substr(10));
        } catch (const std::exception&) {
          throw ValidationError("--prep adiabatic:T needs a numeric T");
        }
      } else if (ipe_prep != "exact") {
        throw ValidationError("--prep must be 'exact' or 'adiabatic:T'");
      }
      const SesHamiltonian h = load_hamiltonian(ipe_h);
      Rng rng(seed);
      const IpeResult r = ipe_run(h.matrix(), ipe_time, o, rng);
      Json shots = Json::array();
      for (const auto& s : r.shots)
        shots.push_back(Json{{"bit", s.m}, {"shot", s.shot}, {"outcome", s.outcome}, {"collapsed", s.collapsed}});
      Json body{{"bits", r.bits},          {"phase", r.phase},
                {"energy_rad_s", r.energy}, {"energy_mhz", rad_per_s_to_mhz(r.energy)},
                {"repreparations", r.repreparations}, {"prep_overlap", r.prep_overlap},
                {"prep_failed", r.prep_failed}, {"protocol", protocol_name(o.protocol)},
                {"shots", std::move(shots)}};
      Provenance prov{Json{{"command", "ipe"}, {"hamiltonian", ipe_h}, {"bits", ipe_bits}, {"time", ipe_time},
                           {"prep", ipe_prep}, {"shots_per_bit", ipe_shots}, {"protocol", ipe_protocol},
                           {"gmax_mhz", ipe_gmax_mhz}},
                      seed};
      emit_json(out, std::move(body), prov);
    } else if (*rescale) {
      const Json model = read_json_file(rs_model);
      const double g_max = mhz_to_rad_per_s(rs_gmax_mhz);
      Json body;
      if (model.contains("times")) {
        const RescalePlan plan = rescale_td(td_hamiltonian_from_json(model), g_max);
        body = plan_to_json(plan);
      } else {
        const StaticRescale s = rescale_static(hamiltonian_from_json(model).matrix(), g_max);
        body = Json{{"g_max", g_max}, {"lambda", s.lambda}, {"c", s.c}, {"matrix", matrix_to_json(s.H.matrix())}};
      }
      Provenance prov{Json{{"command", "rescale"}, {"model", rs_model}, {"gmax_mhz", rs_gmax_mhz}}, 0};
      emit_json(out, std::move(body), prov);
    } else if (*collide) {
      const PotentialCurveTable table = load_potential_table(cl_table);
      CollisionRunOptions o;
      o.mode = cl_mode == "hardware" ? CollisionMode::Hardware : CollisionMode::Ideal;
      o.g_max = mhz_to_rad_per_s(cl_gmax_mhz);
      o.grid = cl_grid;
      const CollisionResult r = run_collision(table, cl, o);
      CsvTable t;
      t.columns = {o.mode == CollisionMode::Hardware ? "t_qc_s" : "t_au", "t_model_au"};
      for (Eigen::Index i = 0; i < table.channels(); ++i) t.columns.push_back("p" + std::to_string(i + 1));
      for (std::size_t k = 0; k < r.times.size(); ++k) {
        std::vector<double> row{r.times[k], r.model_times[k]};
        for (Eigen::Index i = 0; i < table.channels(); ++i) row.push_back(r.probabilities[k][i]);
        t.add(std::move(row));
      }
      Provenance prov{Json{{"command", "collide"}, {"table", cl_table}, {"b", cl.b}, {"v0", cl.v0}, {"mu", cl.mu},
                           {"gmax_mhz", cl_gmax_mhz}, {"mode", cl_mode}, {"grid", cl_grid},
                           {"E_cm_keV", r.collision_energy_hartree * kHartreeEv * 1e-3}},
                      0};
      emit_csv(out, t, prov);
    } else if (*control) {
      ControlNoiseSpec spec{mhz_to_rad_per_s(nc_dv_mhz)};
      ControlMcOptions mc;
      mc.trials = nc_trials;
      mc.seed = seed;
      mc.g_max = mhz_to_rad_per_s(nc_gmax_mhz);
      const double t = nc_t_ns * 1e-9;
      CsvTable tab;
      tab.columns = {"n", "E_mc", "se_mc", "E_perturbative"};
      for (Eigen::Index n : to_index(nc_n)) {
        const McEstimate e = control_error_mc(n, spec, t, mc);
        Rng rng = Rng::stream(seed, 0);
        const double pert = control_error_perturbative(mc.g_max * sample_k(n, rng), spec.sigma(), t);
        tab.add({double(n), e.mean, e.se, pert});
      }
      Provenance prov{Json{{"command", "noise control"}, {"gmax_mhz", nc_gmax_mhz}, {"t_ns", nc_t_ns},
                           {"dv_mhz", nc_dv_mhz}, {"n_list", nc_n}, {"trials", nc_trials}},
                      seed};
      emit_csv(out, tab, prov);
    } else if (*bench) {
      BenchOptions b;
      b.n_list = to_index(bn_n);
      b.trials = bn_trials;
      b.seed = seed;
      BenchReport rep;
      if (bn_mode == "const") {
        b.kernels = {Diagonalization{}, PadeExpm{}, Krylov{}, RungeKutta{}};
        rep = bench_const(b);
      } else {
        b.kernels = {RungeKutta{}, TimeSliced{}};
        rep = bench_td(b);
      }
      Provenance prov{Json{{"command", "bench"}, {"mode", bn_mode}, {"n_list", bn_n}, {"trials", bn_trials}}, seed};
      const std::string csv = provenance_header(prov) + format_bench_csv(rep);
      if (out.empty() || out == "-")
        std::cout << csv;
      else
        write_text(resolve_output_path(out), csv);
      if (!bn_summary.empty()) write_json(resolve_output_path(bn_summary), bench_summary_json(rep), prov);
    } else if (*table_cmd) {
      const PotentialCurveTable t = synthetic_three_channel_table(tb_points);
      if (out.empty() || out == "-")
        std::cout << format_potential_table(t);
      else
        save_potential_table(t, resolve_output_path(out));
    } else if (*figure) {
      if (fig_trials > 0) ro.trials = fig_trials;
      if (!fig_table.empty()) ro.table = fig_table;
      ro.out_dir = resolve_output_path(ro.out_dir);
      for (const auto& f : run_recipe(fig_name, ro)) std::cout << f << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataMissingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
