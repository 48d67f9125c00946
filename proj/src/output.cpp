#include "igabeam/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace igabeam {

using Json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

}  // namespace

void write_timeseries_csv(std::ostream& out, const std::vector<Sample>& samples) {
  out << "t,ux,uy,uz,newton_iterations,corrector_passes\n";
  for (const Sample& s : samples)
    out << num(s.time) << ',' << num(s.displacement[0]) << ',' << num(s.displacement[1]) << ','
        << num(s.displacement[2]) << ',' << s.newton_iterations << ',' << s.corrector_passes << '\n';
}

std::string timeseries_csv(const std::vector<Sample>& samples) {
  std::ostringstream out;
  write_timeseries_csv(out, samples);
  return out.str();
}

std::string run_summary_json(const ScenarioConfig& config, const RunResult& r) {
  Json j;
  j["scenario"] = Json::parse(emit_scenario(config));
  j["steps"] = r.steps;
  j["final_time_s"] = r.samples.empty() ? 0.0 : r.samples.back().time;
  j["final_probe_displacement_m"] = vec_json(r.final_probe_displacement);
  j["newton_iterations_total"] = r.total_newton_iterations;
  j["newton_iterations_max"] = r.max_newton_iterations;
  j["single_newton_steps"] = r.single_newton_steps;
  j["corrector_passes_total"] = r.total_corrector_passes;
  j["max_orthonormality_error"] = r.max_orthonormality_error;
  return j.dump(2) + "\n";
}

std::string convergence_json(const ConvergenceStudyConfig& config, const ConvergenceResult& result) {
  Json j;
  j["scenario"] = config.base.name;
  j["eval_time_s"] = config.eval_time;
  j["grid_points"] = config.grid_points;
  j["compare"] = config.compare_positions ? "position" : "displacement";
  j["reference"] = {{"degree", config.reference.degree}, {"n", config.reference.n}, {"step_s", config.reference.time_step}};
  Json variants = Json::object();
  for (SolverVariant v : config.variants) {
    const std::string name(to_string(v));
    Json cases = Json::array();
    for (const ConvergenceRow& row : result.rows)
      if (row.variant == v)
        cases.push_back({{"degree", row.c.degree}, {"n", row.c.n}, {"step_s", row.c.time_step}, {"error_l2", row.error}});
    Json rates = Json::object();
    for (const ConvergenceRate& rate : result.rates)
      if (rate.variant == v) rates["p" + std::to_string(rate.degree)] = rate.rate;
    variants[name] = {{"cases", cases}, {"rates", rates}};
  }
  j["variants"] = variants;
  return j.dump(2) + "\n";
}

std::string convergence_csv(const ConvergenceResult& result) {
  std::ostringstream out;
  out << "variant,degree,n,step_s,error_l2\n";
  for (const ConvergenceRow& r : result.rows)
    out << to_string(r.variant) << ',' << r.c.degree << ',' << r.c.n << ',' << num(r.c.time_step) << ','
        << num(r.error) << '\n';
  return out.str();
}

std::string spectral_json(const std::vector<SpectralRow>& rows) {
  Json arr = Json::array();
  for (const SpectralRow& r : rows) arr.push_back({{"degree", r.degree}, {"n", r.n}, {"boundary", r.boundary}, {"rho", r.rho}});
  Json j;
  j["spectral_radius"] = arr;
  return j.dump(2) + "\n";
}

std::string spectral_csv(const std::vector<SpectralRow>& rows) {
  std::ostringstream out;
  out << "boundary,degree,n,rho\n";
  for (const SpectralRow& r : rows) out << r.boundary << ',' << r.degree << ',' << r.n << ',' << num(r.rho) << '\n';
  return out.str();
}

std::string bench_json(const BenchConfig& config, const std::vector<BenchRow>& rows) {
  Json j;
  j["scenario"] = config.base.name;
  j["steps"] = config.steps;
  j["warmup_steps"] = config.warmup_steps;
  j["repetitions"] = config.repetitions;
  j["corrector_passes"] = config.corrector_passes;
  Json arr = Json::array();
  for (const BenchRow& r : rows)
    arr.push_back({{"variant", std::string(to_string(r.variant))},
                   {"degree", r.degree},
                   {"n", r.n},
                   {"seconds_per_step", r.seconds_per_step},
                   {"normalized", r.normalized}});
  j["results"] = arr;
  return j.dump(2) + "\n";
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "variant,degree,n,seconds_per_step,normalized\n";
  for (const BenchRow& r : rows)
    out << to_string(r.variant) << ',' << r.degree << ',' << r.n << ',' << num(r.seconds_per_step) << ','
        << num(r.normalized) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace igabeam
