#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igabeam/scenario.hpp"

namespace igabeam {

struct Sample {
  double time = 0.0;
  Vec3 displacement = Vec3::Zero();  // at the probe point
  int newton_iterations = 0;  // of the step that produced this sample
  int corrector_passes = 0;
};

struct RunResult {
  std::vector<Sample> samples;
  long steps = 0;
  long total_newton_iterations = 0;
  long total_corrector_passes = 0;
  long single_newton_steps = 0;  // steps that needed exactly one Newton iteration
  int max_newton_iterations = 0;
  double max_orthonormality_error = 0.0;
  Vec3 final_probe_displacement = Vec3::Zero();
  double wall_seconds = 0.0;  // not written to deterministic outputs
};

/// Steps the scenario to its total time. `on_step(solver, stats)` is called
/// after every step when given.
RunResult run_simulation(const ScenarioConfig& config,
                         const std::function<void(const BeamSolver&, const StepStats&)>& on_step = {});

struct ConvergenceCase {
  int degree = 4;
  int n = 20;
  double time_step = 1e-6;
  bool operator==(const ConvergenceCase&) const = default;
};

struct ConvergenceStudyConfig {
  ScenarioConfig base;
  double eval_time = 1e-3;
  int grid_points = 201;
  ConvergenceCase reference{6, 80, 1e-7};
  std::vector<ConvergenceCase> cases;
  std::vector<SolverVariant> variants{SolverVariant::ConsistentNonlinear, SolverVariant::LumpedNonlinear,
                                      SolverVariant::LumpedLinear};
  /// Compare centroid positions instead of displacements.
  bool compare_positions = false;
};

ConvergenceStudyConfig parse_convergence_study(std::string_view json_text);
ConvergenceStudyConfig load_convergence_study(const std::string& path);

struct ConvergenceRow {
  SolverVariant variant;
  ConvergenceCase c;
  double error = 0.0;
};

struct ConvergenceRate {
  SolverVariant variant;
  int degree = 0;
  double rate = 0.0;  // -slope of log(err) against log(n + 1)
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceRate> rates;
};

/// Field values at `points` equally spaced parameter values.
std::vector<Vec3> sample_field(const BeamSolver& solver, int points, bool positions);
/// ||a - b|| / ||b|| in L2 with trapezoidal weights on an equally spaced grid.
double relative_l2_error(const std::vector<Vec3>& approx, const std::vector<Vec3>& reference);
/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
/// Runs `config` (with the given degree, n, h, variant) to `time` and samples the field.
std::vector<Vec3> field_at_time(ScenarioConfig config, const ConvergenceCase& c, SolverVariant variant, double time,
                                int grid_points, bool positions);

ConvergenceResult convergence_study(const ConvergenceStudyConfig& config,
                                    const std::function<void(const std::string&)>& log = {});

struct SpectralRow {
  int degree = 0;
  int n = 0;
  std::string boundary;  // "dd", "dn", "nn"
  double rho = 0.0;
};

double mass_spectral_radius(int degree, int n, const BoundarySpec& bc);
std::vector<SpectralRow> spectral_study(const std::vector<int>& degrees, const std::vector<int>& ns,
                                        const std::vector<std::string>& boundaries);

struct BenchConfig {
  ScenarioConfig base;
  std::vector<SolverVariant> variants{SolverVariant::ConsistentNonlinear, SolverVariant::LumpedNonlinear,
                                      SolverVariant::LumpedLinear};
  std::vector<int> degrees{2, 4, 6};
  std::vector<int> ns{10, 20, 30, 40, 50, 60};
  std::optional<double> time_step;  // overrides the base step
  long steps = 500;
  long warmup_steps = 20;
  int repetitions = 3;
  int corrector_passes = 30;  // fixed passes per multicorrector solve
};

BenchConfig parse_bench_config(std::string_view json_text);
BenchConfig load_bench_config(const std::string& path);

struct BenchRow {
  SolverVariant variant;
  int degree = 0;
  int n = 0;
  double seconds_per_step = 0.0;  // CPU time, minimum over repetitions
  double normalized = 0.0;  // by CN-NL at the smallest n of the same degree
};

std::vector<BenchRow> timing_bench(const BenchConfig& config, const std::function<void(const std::string&)>& log = {});

}  // namespace igabeam
