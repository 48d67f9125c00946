// Command-line front end. Uses only the C interface.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "igabeam/igabeam.h"

namespace {

int report(igab_status status) {
  if (status == IGAB_OK) return 0;
  std::cerr << "error (" << igab_status_string(status) << "): " << igab_last_error() << '\n';
  return status == IGAB_ERR_SOLVER ? 3 : 2;
}

int variant_code(const std::string& name) {
  if (name.empty()) return -1;
  igab_variant v;
  if (igab_parse_variant(name.c_str(), &v) != IGAB_OK) return -2;
  return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit isogeometric collocation dynamics of geometrically exact beams"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(igab_version()));

  std::string variant, out_dir = ".";
  bool verbose = false;

  auto* run = app.add_subcommand("run", "Run one scenario and write its time series and summary");
  std::string config_path, preset_name;
  double total_s = 0.0;
  run->add_option("config", config_path, "Scenario JSON file")->check(CLI::ExistingFile);
  run->add_option("--preset", preset_name, "Built-in scenario instead of a file")
      ->check(CLI::IsMember({"cantilever", "pendulum", "flying", "spinning", "spinning-2pi", "spinning-0.2pi"}));
  run->add_option("--total-s", total_s, "Override the simulated time (s)")->check(CLI::PositiveNumber);

  auto* converge = app.add_subcommand("converge", "Spatial convergence study");
  std::string study_path;
  converge->add_option("study", study_path, "Convergence study JSON file")->required()->check(CLI::ExistingFile);

  auto* spectral = app.add_subcommand("spectral", "Spectral radius of the lumped iteration matrix");
  std::vector<int> degrees{2, 4, 6, 8}, ns{10, 20, 40, 60, 80};
  std::vector<std::string> bcs{"dd", "dn", "nn"};
  spectral->add_option("--p", degrees, "Spline degrees")->delimiter(',');
  spectral->add_option("--n", ns, "Values of n (n+1 basis functions)")->delimiter(',');
  spectral->add_option("--bc", bcs, "Boundary pairs from {dd, dn, nn}")->delimiter(',');

  auto* bench = app.add_subcommand("bench", "CPU time per step over a (variant, p, n) matrix");
  std::string matrix_path;
  bench->add_option("matrix", matrix_path, "Benchmark matrix JSON file")->required()->check(CLI::ExistingFile);

  for (auto* sub : {run, converge, bench}) {
    sub->add_option("--variant", variant, "Solver variant override")->check(CLI::IsMember({"cn-nl", "lu-nl", "lu-l"}));
    sub->add_option("--out", out_dir, "Output directory");
  }
  spectral->add_option("--out", out_dir, "Output directory");
  for (auto* sub : {converge, bench}) sub->add_flag("-v,--verbose", verbose, "Progress on stderr");
  // Determinism does not depend on any seed; the flag is accepted for scripting convenience.
  bool seedless = true;
  app.add_flag("--seedless", seedless, "No-op: runs are always deterministic");

  CLI11_PARSE(app, argc, argv);
  const int vcode = variant_code(variant);

  if (run->parsed()) {
    if (config_path.empty() == preset_name.empty()) {
      std::cerr << "run: give either a config file or --preset\n";
      return 2;
    }
    igab_scenario* sc = nullptr;
    igab_status st = config_path.empty() ? igab_scenario_preset(preset_name.c_str(), &sc)
                                         : igab_scenario_from_file(config_path.c_str(), &sc);
    if (st != IGAB_OK) return report(st);
    if (vcode >= 0) igab_scenario_set_variant(sc, static_cast<igab_variant>(vcode));
    if (total_s > 0.0) igab_scenario_set_total_time(sc, total_s);
    igab_run_summary s{};
    st = igab_run(sc, out_dir.c_str(), &s);
    igab_scenario_free(sc);
    if (st != IGAB_OK) return report(st);
    std::printf("steps %ld  t = %.9g s  probe u = (%.9e, %.9e, %.9e) m\n", s.steps, s.final_time,
                s.final_probe_displacement[0], s.final_probe_displacement[1], s.final_probe_displacement[2]);
    std::printf("newton iterations %ld (max %d, single-iteration steps %ld)  corrector passes %ld\n",
                s.newton_iterations_total, s.newton_iterations_max, s.single_newton_steps, s.corrector_passes_total);
    std::printf("max |R^T R - I| %.3e  wall %.3f s  output in %s\n", s.max_orthonormality_error, s.wall_seconds,
                out_dir.c_str());
    return 0;
  }
  if (converge->parsed()) {
    const igab_status st = igab_converge(study_path.c_str(), vcode, out_dir.c_str(), verbose ? 1 : 0);
    if (st != IGAB_OK) return report(st);
    std::printf("wrote %s/convergence.json and convergence.csv\n", out_dir.c_str());
    return 0;
  }
  if (spectral->parsed()) {
    std::string joined;
    for (const auto& b : bcs) joined += (joined.empty() ? "" : ",") + b;
    igab_status st = igab_spectral(degrees.data(), degrees.size(), ns.data(), ns.size(), joined.c_str(), out_dir.c_str());
    if (st != IGAB_OK) return report(st);
    std::printf("%-4s %3s %4s  %s\n", "bc", "p", "n", "rho(M-I)");
    for (const auto& b : bcs)
      for (int p : degrees)
        for (int n : ns) {
          double rho = 0.0;
          st = igab_spectral_radius(p, n, b.c_str(), &rho);
          if (st != IGAB_OK) return report(st);
          std::printf("%-4s %3d %4d  %.6f\n", b.c_str(), p, n, rho);
        }
    return 0;
  }
  if (bench->parsed()) {
    const igab_status st = igab_bench(matrix_path.c_str(), vcode, out_dir.c_str(), verbose ? 1 : 0);
    if (st != IGAB_OK) return report(st);
    std::printf("wrote %s/bench.json and bench.csv\n", out_dir.c_str());
    return 0;
  }
  return 0;
}
