#include "igabeam/studies.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace igabeam {

using Json = nlohmann::json;

RunResult run_simulation(const ScenarioConfig& config,
                         const std::function<void(const BeamSolver&, const StepStats&)>& on_step) {
  const auto start = std::chrono::steady_clock::now();
  BeamSolver solver(config.make_problem(), config.solver, config.initial_conditions());
  RunResult r;
  const double u = config.output.probe_u;
  auto record = [&](const StepStats& st) {
    r.samples.push_back({solver.state().time, solver.displacement_at(u), st.newton_iterations, st.corrector_passes});
  };
  record(solver.initial_stats());
  const long steps = config.num_steps();
  for (long k = 1; k <= steps; ++k) {
    StepStats st;
    try {
      st = solver.step();
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " at t = " + std::to_string(solver.state().time) + " s (step " +
                            std::to_string(k) + ")",
                        k);
    }
    r.total_newton_iterations += st.newton_iterations;
    r.total_corrector_passes += st.corrector_passes;
    r.max_newton_iterations = std::max(r.max_newton_iterations, st.newton_iterations);
    if (st.newton_iterations == 1) ++r.single_newton_steps;
    if (k % config.output.stride == 0 || k == steps) {
      record(st);
      for (const Mat3& R : solver.state().config.rotation)
        r.max_orthonormality_error = std::max(r.max_orthonormality_error, rot3::orthonormality_error(R));
    }
    if (on_step) on_step(solver, st);
  }
  r.steps = steps;
  r.final_probe_displacement = solver.displacement_at(u);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Convergence

std::vector<Vec3> sample_field(const BeamSolver& solver, int points, bool positions) {
  if (points < 2) throw std::invalid_argument("need at least two grid points");
  std::vector<Vec3> out(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double u = static_cast<double>(k) / (points - 1);
    out[k] = positions ? solver.position_at(u) : solver.displacement_at(u);
  }
  return out;
}

double relative_l2_error(const std::vector<Vec3>& approx, const std::vector<Vec3>& reference) {
  if (approx.size() != reference.size() || approx.size() < 2) throw std::invalid_argument("grid size mismatch");
  double num = 0.0, den = 0.0;
  const std::size_t m = approx.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double w = (k == 0 || k + 1 == m) ? 0.5 : 1.0;
    num += w * (approx[k] - reference[k]).squaredNorm();
    den += w * reference[k].squaredNorm();
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<Vec3> field_at_time(ScenarioConfig config, const ConvergenceCase& c, SolverVariant variant, double time,
                                int grid_points, bool positions) {
  config.degree = c.degree;
  config.n = c.n;
  config.time_step = c.time_step;
  config.total_time = time;
  config.solver.variant = variant;
  const double steps = time / c.time_step;
  if (std::abs(steps - std::round(steps)) > 1e-6 * steps)
    throw std::invalid_argument("evaluation time is not a multiple of the step " + std::to_string(c.time_step));
  BeamSolver solver(config.make_problem(), config.solver, config.initial_conditions());
  const long nsteps = config.num_steps();
  for (long k = 0; k < nsteps; ++k) solver.step();
  return sample_field(solver, grid_points, positions);
}

ConvergenceResult convergence_study(const ConvergenceStudyConfig& cfg,
                                    const std::function<void(const std::string&)>& log) {
  ConvergenceResult out;
  for (SolverVariant v : cfg.variants) {
    if (log) log(std::string("reference ") + std::string(to_string(v)));
    const std::vector<Vec3> ref =
        field_at_time(cfg.base, cfg.reference, v, cfg.eval_time, cfg.grid_points, cfg.compare_positions);
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_degree;
    for (const ConvergenceCase& c : cfg.cases) {
      if (log) log(std::string(to_string(v)) + " p=" + std::to_string(c.degree) + " n=" + std::to_string(c.n));
      const std::vector<Vec3> f = field_at_time(cfg.base, c, v, cfg.eval_time, cfg.grid_points, cfg.compare_positions);
      const double err = relative_l2_error(f, ref);
      out.rows.push_back({v, c, err});
      by_degree[c.degree].first.push_back(c.n + 1.0);
      by_degree[c.degree].second.push_back(err);
    }
    for (const auto& [p, xy] : by_degree)
      if (xy.first.size() >= 2) out.rates.push_back({v, p, -loglog_slope(xy.first, xy.second)});
  }
  return out;
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) bad(path, "unknown key '" + it.key() + "'");
  }
}

ScenarioConfig base_scenario(const Json& root) {
  if (root.contains("scenario") && root.contains("preset")) bad("$", "give either scenario or preset");
  if (root.contains("scenario")) return parse_scenario(root["scenario"].dump());
  if (root.contains("preset")) {
    if (!root["preset"].is_string()) bad("$.preset", "expected a string");
    return preset(root["preset"].get<std::string>());
  }
  bad("$", "missing scenario or preset");
}

ConvergenceCase get_case(const Json& j, const std::string& path) {
  check_keys(j, path, {"degree", "n", "step_s"});
  for (const char* k : {"degree", "n", "step_s"})
    if (!j.contains(k)) bad(path, std::string("missing ") + k);
  if (!j["degree"].is_number_integer() || !j["n"].is_number_integer()) bad(path, "degree and n must be integers");
  if (!j["step_s"].is_number()) bad(path + ".step_s", "expected a number");
  ConvergenceCase c{j["degree"].get<int>(), j["n"].get<int>(), j["step_s"].get<double>()};
  if (c.degree < 1 || c.n < c.degree || !(c.time_step > 0.0)) bad(path, "invalid degree, n or step");
  return c;
}

std::vector<SolverVariant> get_variants(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "expected a non-empty array");
  std::vector<SolverVariant> v;
  for (const Json& e : j) {
    if (!e.is_string()) bad(path, "expected variant names");
    try {
      v.push_back(parse_variant(e.get<std::string>()));
    } catch (const std::invalid_argument& err) {
      bad(path, err.what());
    }
  }
  return v;
}

std::vector<int> get_ints(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "expected a non-empty array of integers");
  std::vector<int> v;
  for (const Json& e : j) {
    if (!e.is_number_integer()) bad(path, "expected integers");
    v.push_back(e.get<int>());
  }
  return v;
}

}  // namespace

ConvergenceStudyConfig parse_convergence_study(std::string_view text) {
  const Json root = parse_json(text);
  check_keys(root, "$", {"scenario", "preset", "eval_time_s", "grid_points", "reference", "cases", "variants", "compare"});
  ConvergenceStudyConfig c;
  c.base = base_scenario(root);
  if (root.contains("eval_time_s")) {
    if (!root["eval_time_s"].is_number()) bad("$.eval_time_s", "expected a number");
    c.eval_time = root["eval_time_s"].get<double>();
    if (!(c.eval_time > 0.0)) bad("$.eval_time_s", "must be positive");
  }
  if (root.contains("grid_points")) {
    if (!root["grid_points"].is_number_integer() || root["grid_points"].get<int>() < 2)
      bad("$.grid_points", "expected an integer >= 2");
    c.grid_points = root["grid_points"].get<int>();
  }
  if (root.contains("reference")) c.reference = get_case(root["reference"], "$.reference");
  if (!root.contains("cases") || !root["cases"].is_array() || root["cases"].empty())
    bad("$.cases", "expected a non-empty array");
  for (std::size_t k = 0; k < root["cases"].size(); ++k) {
    const ConvergenceCase cc = get_case(root["cases"][k], "$.cases[" + std::to_string(k) + "]");
    if (cc.n >= c.reference.n && cc.degree >= c.reference.degree)
      bad("$.cases[" + std::to_string(k) + "]", "reference must be finer than every case");
    c.cases.push_back(cc);
  }
  if (root.contains("variants")) c.variants = get_variants(root["variants"], "$.variants");
  if (root.contains("compare")) {
    const std::string s = root["compare"].is_string() ? root["compare"].get<std::string>() : "";
    if (s == "displacement")
      c.compare_positions = false;
    else if (s == "position")
      c.compare_positions = true;
    else
      bad("$.compare", "expected displacement or position");
  }
  return c;
}

ConvergenceStudyConfig load_convergence_study(const std::string& path) {
  return parse_convergence_study(read_file(path));
}

// ---------------------------------------------------------------------------
// Spectral radius

double mass_spectral_radius(int degree, int n, const BoundarySpec& bc) {
  const Discretization disc =
      make_discretization(degree, n, ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ()));
  const MassBlocks m = assemble_mass_blocks(disc.ops, bc);
  return spectral_radius(m.translational);
}

std::vector<SpectralRow> spectral_study(const std::vector<int>& degrees, const std::vector<int>& ns,
                                        const std::vector<std::string>& boundaries) {
  std::vector<SpectralRow> rows;
  for (const std::string& b : boundaries) {
    const BoundarySpec bc = parse_boundary_pair(b);
    for (int p : degrees)
      for (int n : ns) rows.push_back({p, n, b, mass_spectral_radius(p, n, bc)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Timing

BenchConfig parse_bench_config(std::string_view text) {
  const Json root = parse_json(text);
  check_keys(root, "$", {"scenario", "preset", "variants", "degrees", "ns", "step_s", "steps", "warmup_steps",
                         "repetitions", "corrector_passes"});
  BenchConfig c;
  c.base = base_scenario(root);
  if (root.contains("variants")) c.variants = get_variants(root["variants"], "$.variants");
  if (root.contains("degrees")) c.degrees = get_ints(root["degrees"], "$.degrees");
  if (root.contains("ns")) c.ns = get_ints(root["ns"], "$.ns");
  if (root.contains("step_s")) {
    if (!root["step_s"].is_number() || !(root["step_s"].get<double>() > 0.0)) bad("$.step_s", "expected a positive number");
    c.time_step = root["step_s"].get<double>();
  }
  auto positive_int = [&](const char* key, auto& field, long minimum) {
    if (!root.contains(key)) return;
    if (!root[key].is_number_integer() || root[key].get<long>() < minimum)
      bad(std::string("$.") + key, "expected an integer >= " + std::to_string(minimum));
    field = static_cast<std::remove_reference_t<decltype(field)>>(root[key].get<long>());
  };
  positive_int("steps", c.steps, 1);
  positive_int("warmup_steps", c.warmup_steps, 0);
  positive_int("repetitions", c.repetitions, 1);
  positive_int("corrector_passes", c.corrector_passes, 1);
  for (int p : c.degrees)
    for (int n : c.ns)
      if (p < 1 || n < p) bad("$", "every n must be at least every degree");
  return c;
}

BenchConfig load_bench_config(const std::string& path) { return parse_bench_config(read_file(path)); }

namespace {

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

}  // namespace

std::vector<BenchRow> timing_bench(const BenchConfig& cfg, const std::function<void(const std::string&)>& log) {
  std::vector<BenchRow> rows;
  for (int p : cfg.degrees) {
    for (int n : cfg.ns) {
      ScenarioConfig sc = cfg.base;
      sc.degree = p;
      sc.n = n;
      if (cfg.time_step) sc.time_step = *cfg.time_step;
      const auto problem = sc.make_problem();
      // Repetitions are interleaved across variants so that slow drifts in
      // machine load affect every variant alike.
      std::vector<BeamSolver> solvers;
      for (SolverVariant v : cfg.variants) {
        SolverSettings settings = sc.solver;
        settings.variant = v;
        settings.corrector.max_passes = cfg.corrector_passes;
        settings.corrector.fixed_passes = true;
        solvers.emplace_back(problem, settings, sc.initial_conditions());
        for (long k = 0; k < cfg.warmup_steps; ++k) solvers.back().step();
      }
      std::vector<double> best(cfg.variants.size(), INFINITY);
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        for (std::size_t i = 0; i < solvers.size(); ++i) {
          const double t0 = cpu_seconds();
          for (long k = 0; k < cfg.steps; ++k) solvers[i].step();
          best[i] = std::min(best[i], (cpu_seconds() - t0) / static_cast<double>(cfg.steps));
        }
      }
      for (std::size_t i = 0; i < solvers.size(); ++i) {
        rows.push_back({cfg.variants[i], p, n, best[i], 0.0});
        if (log)
          log(std::string(to_string(cfg.variants[i])) + " p=" + std::to_string(p) + " n=" + std::to_string(n) + ": " +
              std::to_string(best[i] * 1e6) + " us/step");
      }
    }
  }
  // Normalize per degree by CN-NL (or the first variant) at the smallest n.
  for (int p : cfg.degrees) {
    const SolverVariant ref_variant =
        std::find(cfg.variants.begin(), cfg.variants.end(), SolverVariant::ConsistentNonlinear) != cfg.variants.end()
            ? SolverVariant::ConsistentNonlinear
            : cfg.variants.front();
    const int n_min = *std::min_element(cfg.ns.begin(), cfg.ns.end());
    double ref = 0.0;
    for (const BenchRow& r : rows)
      if (r.degree == p && r.n == n_min && r.variant == ref_variant) ref = r.seconds_per_step;
    for (BenchRow& r : rows)
      if (r.degree == p) r.normalized = ref > 0.0 ? r.seconds_per_step / ref : 0.0;
  }
  return rows;
}

}  // namespace igabeam
