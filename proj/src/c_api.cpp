#include "igabeam/igabeam.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "igabeam/output.hpp"
#include "igabeam/scenario.hpp"
#include "igabeam/studies.hpp"

struct igab_scenario {
  igabeam::ScenarioConfig config;
};

struct igab_sim {
  std::unique_ptr<igabeam::BeamSolver> solver;
};

namespace {

thread_local std::string g_last_error;

igab_status fail(igab_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
igab_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return IGAB_OK;
  } catch (const igabeam::SolverError& e) {
    return fail(IGAB_ERR_SOLVER, e.what());
  } catch (const ParseFailure& e) {
    return fail(IGAB_ERR_PARSE, e.what());
  } catch (const IoFailure& e) {
    return fail(IGAB_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(IGAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(IGAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(IGAB_ERR_INTERNAL, "unknown error");
  }
}

std::string read_file(const char* path) {
  if (!path) throw std::invalid_argument("null path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure(std::string("cannot open ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Configuration text errors: malformed JSON becomes a parse failure, bad values stay invalid arguments.
template <class F>
auto parse_text(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    if (std::strncmp(e.what(), "invalid JSON", 12) == 0) throw ParseFailure(e.what());
    throw;
  }
}

void write(const std::filesystem::path& path, const std::string& content) {
  try {
    igabeam::write_text_file(path.string(), content);
  } catch (const std::runtime_error& e) {
    throw IoFailure(e.what());
  }
}

std::filesystem::path out_path(const char* dir) {
  return std::filesystem::path(dir && *dir ? dir : ".");
}

igabeam::SolverVariant to_variant(int v) {
  switch (v) {
    case IGAB_VARIANT_CN_NL:
      return igabeam::SolverVariant::ConsistentNonlinear;
    case IGAB_VARIANT_LU_NL:
      return igabeam::SolverVariant::LumpedNonlinear;
    case IGAB_VARIANT_LU_L:
      return igabeam::SolverVariant::LumpedLinear;
  }
  throw std::invalid_argument("unknown solver variant " + std::to_string(v));
}

void check_out(const void* p) {
  if (!p) throw std::invalid_argument("null output pointer");
}

}  // namespace

extern "C" {

const char* igab_version(void) { return "0.1.0"; }

const char* igab_last_error(void) { return g_last_error.c_str(); }

const char* igab_status_string(igab_status status) {
  switch (status) {
    case IGAB_OK:
      return "ok";
    case IGAB_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case IGAB_ERR_PARSE:
      return "parse error";
    case IGAB_ERR_IO:
      return "I/O error";
    case IGAB_ERR_SOLVER:
      return "solver failure";
    case IGAB_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case IGAB_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

igab_status igab_parse_variant(const char* name, igab_variant* out) {
  return guarded([&] {
    check_out(out);
    if (!name) throw std::invalid_argument("null variant name");
    switch (igabeam::parse_variant(name)) {
      case igabeam::SolverVariant::ConsistentNonlinear:
        *out = IGAB_VARIANT_CN_NL;
        break;
      case igabeam::SolverVariant::LumpedNonlinear:
        *out = IGAB_VARIANT_LU_NL;
        break;
      case igabeam::SolverVariant::LumpedLinear:
        *out = IGAB_VARIANT_LU_L;
        break;
    }
  });
}

igab_status igab_scenario_from_json(const char* json_text, igab_scenario** out) {
  return guarded([&] {
    check_out(out);
    if (!json_text) throw std::invalid_argument("null JSON text");
    *out = new igab_scenario{parse_text([&] { return igabeam::parse_scenario(json_text); })};
  });
}

igab_status igab_scenario_from_file(const char* path, igab_scenario** out) {
  return guarded([&] {
    check_out(out);
    const std::string text = read_file(path);
    *out = new igab_scenario{parse_text([&] { return igabeam::parse_scenario(text); })};
  });
}

igab_status igab_scenario_preset(const char* name, igab_scenario** out) {
  return guarded([&] {
    check_out(out);
    if (!name) throw std::invalid_argument("null preset name");
    *out = new igab_scenario{igabeam::preset(name)};
  });
}

igab_status igab_scenario_set_variant(igab_scenario* scenario, igab_variant variant) {
  return guarded([&] {
    check_out(scenario);
    scenario->config.solver.variant = to_variant(variant);
  });
}

igab_status igab_scenario_set_total_time(igab_scenario* scenario, double seconds) {
  return guarded([&] {
    check_out(scenario);
    if (!(seconds > 0.0)) throw std::invalid_argument("total time must be positive");
    scenario->config.total_time = seconds;
  });
}

igab_status igab_scenario_to_json(const igab_scenario* scenario, char* buf, size_t capacity, size_t* size) {
  try {
    g_last_error.clear();
    if (!scenario || !size) return fail(IGAB_ERR_INVALID_ARGUMENT, "null argument");
    const std::string text = igabeam::emit_scenario(scenario->config);
    *size = text.size() + 1;
    if (!buf || capacity < text.size() + 1)
      return fail(IGAB_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(text.size() + 1) + " bytes");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return IGAB_OK;
  } catch (const std::exception& e) {
    return fail(IGAB_ERR_INTERNAL, e.what());
  }
}

void igab_scenario_free(igab_scenario* scenario) { delete scenario; }

igab_status igab_sim_create(const igab_scenario* scenario, igab_sim** out) {
  return guarded([&] {
    check_out(out);
    check_out(scenario);
    const auto& c = scenario->config;
    *out = new igab_sim{std::make_unique<igabeam::BeamSolver>(c.make_problem(), c.solver, c.initial_conditions())};
  });
}

igab_status igab_sim_step(igab_sim* sim, long steps, igab_step_stats* last) {
  return guarded([&] {
    check_out(sim);
    if (steps < 0) throw std::invalid_argument("negative step count");
    igabeam::StepStats st;
    for (long k = 0; k < steps; ++k) st = sim->solver->step();
    if (last) *last = {st.newton_iterations, st.corrector_passes};
  });
}

igab_status igab_sim_time(const igab_sim* sim, double* time) {
  return guarded([&] {
    check_out(sim);
    check_out(time);
    *time = sim->solver->state().time;
  });
}

igab_status igab_sim_displacement(const igab_sim* sim, double u, double out[3]) {
  return guarded([&] {
    check_out(sim);
    check_out(out);
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("parameter u must lie in [0, 1]");
    const igabeam::Vec3 d = sim->solver->displacement_at(u);
    for (int k = 0; k < 3; ++k) out[k] = d[k];
  });
}

igab_status igab_sim_linear_momentum(const igab_sim* sim, double out[3]) {
  return guarded([&] {
    check_out(sim);
    check_out(out);
    const igabeam::Vec3 p = sim->solver->linear_momentum();
    for (int k = 0; k < 3; ++k) out[k] = p[k];
  });
}

igab_status igab_sim_angular_momentum(const igab_sim* sim, const double origin[3], double out[3]) {
  return guarded([&] {
    check_out(sim);
    check_out(origin);
    check_out(out);
    const igabeam::Vec3 l = sim->solver->angular_momentum(igabeam::Vec3(origin[0], origin[1], origin[2]));
    for (int k = 0; k < 3; ++k) out[k] = l[k];
  });
}

void igab_sim_free(igab_sim* sim) { delete sim; }

igab_status igab_run(const igab_scenario* scenario, const char* out_dir, igab_run_summary* summary) {
  return guarded([&] {
    check_out(scenario);
    const auto& c = scenario->config;
    const igabeam::RunResult r = igabeam::run_simulation(c);
    const auto dir = out_path(out_dir);
    write(dir / (c.name + "_timeseries.csv"), igabeam::timeseries_csv(r.samples));
    write(dir / (c.name + "_summary.json"), igabeam::run_summary_json(c, r));
    write(dir / (c.name + "_config.json"), igabeam::emit_scenario(c));
    if (summary) {
      summary->steps = r.steps;
      summary->final_time = r.samples.empty() ? 0.0 : r.samples.back().time;
      for (int k = 0; k < 3; ++k) summary->final_probe_displacement[k] = r.final_probe_displacement[k];
      summary->newton_iterations_total = r.total_newton_iterations;
      summary->single_newton_steps = r.single_newton_steps;
      summary->newton_iterations_max = r.max_newton_iterations;
      summary->corrector_passes_total = r.total_corrector_passes;
      summary->max_orthonormality_error = r.max_orthonormality_error;
      summary->wall_seconds = r.wall_seconds;
    }
  });
}

igab_status igab_converge(const char* study_path, int variant_override, const char* out_dir, int verbose) {
  return guarded([&] {
    const std::string text = read_file(study_path);
    igabeam::ConvergenceStudyConfig cfg = parse_text([&] { return igabeam::parse_convergence_study(text); });
    if (variant_override >= 0) cfg.variants = {to_variant(variant_override)};
    auto log = [&](const std::string& m) {
      if (verbose) std::cerr << "converge: " << m << '\n';
    };
    const igabeam::ConvergenceResult r = igabeam::convergence_study(cfg, log);
    const auto dir = out_path(out_dir);
    write(dir / "convergence.json", igabeam::convergence_json(cfg, r));
    write(dir / "convergence.csv", igabeam::convergence_csv(r));
  });
}

igab_status igab_spectral(const int* degrees, size_t num_degrees, const int* ns, size_t num_ns,
                          const char* boundaries, const char* out_dir) {
  return guarded([&] {
    if (!degrees || !ns || num_degrees == 0 || num_ns == 0) throw std::invalid_argument("empty degree or n list");
    std::vector<std::string> bcs;
    std::stringstream ss(boundaries ? boundaries : "dd,dn,nn");
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) bcs.push_back(item);
    if (bcs.empty()) throw std::invalid_argument("empty boundary list");
    const auto rows = igabeam::spectral_study(std::vector<int>(degrees, degrees + num_degrees),
                                              std::vector<int>(ns, ns + num_ns), bcs);
    const auto dir = out_path(out_dir);
    write(dir / "spectral.json", igabeam::spectral_json(rows));
    write(dir / "spectral.csv", igabeam::spectral_csv(rows));
  });
}

igab_status igab_spectral_radius(int degree, int n, const char* boundary, double* rho) {
  return guarded([&] {
    check_out(rho);
    if (!boundary) throw std::invalid_argument("null boundary");
    *rho = igabeam::mass_spectral_radius(degree, n, igabeam::parse_boundary_pair(boundary));
  });
}

igab_status igab_bench(const char* matrix_path, int variant_override, const char* out_dir, int verbose) {
  return guarded([&] {
    const std::string text = read_file(matrix_path);
    igabeam::BenchConfig cfg = parse_text([&] { return igabeam::parse_bench_config(text); });
    if (variant_override >= 0) cfg.variants = {to_variant(variant_override)};
    auto log = [&](const std::string& m) {
      if (verbose) std::cerr << "bench: " << m << '\n';
    };
    const auto rows = igabeam::timing_bench(cfg, log);
    const auto dir = out_path(out_dir);
    write(dir / "bench.json", igabeam::bench_json(cfg, rows));
    write(dir / "bench.csv", igabeam::bench_csv(rows));
  });
}

}  // extern "C"
