// Exercises the shared library through its C interface only.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "igabeam/igabeam.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / ("igabeam_capi_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(igab_version()) == "0.1.0");
  CHECK(std::string(igab_status_string(IGAB_OK)) != "");
  CHECK(std::string(igab_status_string(IGAB_ERR_SOLVER)) != std::string(igab_status_string(IGAB_OK)));
  igab_variant v;
  CHECK(igab_parse_variant("lu-nl", &v) == IGAB_OK);
  CHECK(v == IGAB_VARIANT_LU_NL);
  CHECK(igab_parse_variant("fast", &v) == IGAB_ERR_INVALID_ARGUMENT);
  CHECK(std::string(igab_last_error()).find("fast") != std::string::npos);
  CHECK(igab_parse_variant(nullptr, &v) == IGAB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scenario handles") {
  igab_scenario* s = nullptr;
  CHECK(igab_scenario_preset("nope", &s) == IGAB_ERR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
  CHECK(igab_scenario_from_json("{broken", &s) == IGAB_ERR_PARSE);
  CHECK(igab_scenario_from_json(R"({"preset": "cantilever", "time": {"step_s": 0}})", &s) ==
        IGAB_ERR_INVALID_ARGUMENT);
  CHECK(igab_scenario_from_file("/nonexistent/config.json", &s) == IGAB_ERR_IO);

  REQUIRE(igab_scenario_preset("pendulum", &s) == IGAB_OK);
  size_t size = 0;
  CHECK(igab_scenario_to_json(s, nullptr, 0, &size) == IGAB_ERR_BUFFER_TOO_SMALL);
  REQUIRE(size > 1);
  std::vector<char> buf(size);
  CHECK(igab_scenario_to_json(s, buf.data(), buf.size(), &size) == IGAB_OK);
  CHECK(igab_scenario_set_variant(s, IGAB_VARIANT_CN_NL) == IGAB_OK);
  CHECK(igab_scenario_set_total_time(s, -1.0) == IGAB_ERR_INVALID_ARGUMENT);

  // The echo parses back to the same configuration.
  igab_scenario* t = nullptr;
  REQUIRE(igab_scenario_from_json(buf.data(), &t) == IGAB_OK);
  std::vector<char> buf2(size);
  CHECK(igab_scenario_to_json(t, buf2.data(), buf2.size(), &size) == IGAB_OK);
  CHECK(std::string(buf.data()) == std::string(buf2.data()));
  igab_scenario_free(t);
  igab_scenario_free(s);
  igab_scenario_free(nullptr);
}

TEST_CASE("stepping a simulation") {
  igab_scenario* s = nullptr;
  REQUIRE(igab_scenario_preset("cantilever", &s) == IGAB_OK);
  igab_sim* sim = nullptr;
  REQUIRE(igab_sim_create(s, &sim) == IGAB_OK);
  igab_step_stats stats{};
  CHECK(igab_sim_step(sim, 100, &stats) == IGAB_OK);
  CHECK(stats.corrector_passes > 0);
  double t = 0.0;
  CHECK(igab_sim_time(sim, &t) == IGAB_OK);
  CHECK(t == doctest::Approx(1e-4));
  double u[3];
  CHECK(igab_sim_displacement(sim, 1.0, u) == IGAB_OK);
  CHECK(u[2] < 0.0);
  CHECK(igab_sim_displacement(sim, 2.0, u) == IGAB_ERR_INVALID_ARGUMENT);
  double p[3], origin[3] = {0, 0, 0};
  CHECK(igab_sim_linear_momentum(sim, p) == IGAB_OK);
  CHECK(igab_sim_angular_momentum(sim, origin, p) == IGAB_OK);
  CHECK(igab_sim_step(nullptr, 1, &stats) == IGAB_ERR_INVALID_ARGUMENT);
  igab_sim_free(sim);
  igab_scenario_free(s);
}

TEST_CASE("run driver writes deterministic files") {
  igab_scenario* s = nullptr;
  REQUIRE(igab_scenario_from_json(R"({"preset": "cantilever", "name": "capi", "time": {"total_s": 0.0003}})", &s) ==
          IGAB_OK);
  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  igab_run_summary sum{};
  REQUIRE(igab_run(s, a.c_str(), &sum) == IGAB_OK);
  REQUIRE(igab_run(s, b.c_str(), nullptr) == IGAB_OK);
  CHECK(sum.steps == 300);
  for (const char* f : {"capi_timeseries.csv", "capi_summary.json", "capi_config.json"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "capi_timeseries.csv").rfind("t,ux,uy,uz,", 0) == 0);
  // The config echo reproduces the run.
  igab_scenario* echo = nullptr;
  REQUIRE(igab_scenario_from_file((a / "capi_config.json").c_str(), &echo) == IGAB_OK);
  const fs::path c = scratch_dir("c");
  REQUIRE(igab_run(echo, c.c_str(), nullptr) == IGAB_OK);
  CHECK(slurp(a / "capi_timeseries.csv") == slurp(c / "capi_timeseries.csv"));
  igab_scenario_free(echo);
  igab_scenario_free(s);
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST_CASE("solver failures surface as solver errors") {
  igab_scenario* s = nullptr;
  // Far beyond the stability limit of the explicit scheme.
  REQUIRE(igab_scenario_from_json(R"({"preset": "cantilever", "time": {"step_s": 1e-4, "total_s": 0.05}})", &s) ==
          IGAB_OK);
  const fs::path d = scratch_dir("unstable");
  CHECK(igab_run(s, d.c_str(), nullptr) == IGAB_ERR_SOLVER);
  CHECK(std::string(igab_last_error()) != "");
  igab_scenario_free(s);
  fs::remove_all(d);
}

TEST_CASE("spectral radius through the C interface") {
  double rho = 0.0;
  CHECK(igab_spectral_radius(2, 10, "dd", &rho) == IGAB_OK);
  CHECK(rho == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(igab_spectral_radius(4, 20, "xx", &rho) == IGAB_ERR_INVALID_ARGUMENT);
  const int degrees[] = {2, 4};
  const int ns[] = {10};
  const fs::path d = scratch_dir("spectral");
  CHECK(igab_spectral(degrees, 2, ns, 1, "dd,nn", d.c_str()) == IGAB_OK);
  CHECK(fs::exists(d / "spectral.csv"));
  fs::remove_all(d);
}
