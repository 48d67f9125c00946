#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igabeam/solvers.hpp"

namespace igabeam {

/// Cross-section either from shape and material or given directly.
struct SectionSpec {
  enum class Mode { Shape, Direct };
  Mode mode = Mode::Shape;
  SectionGeometry geometry;
  Material material;
  SectionProperties direct;

  SectionProperties resolve() const;
  bool operator==(const SectionSpec& o) const;
};

struct OutputSpec {
  int stride = 1;  // sample every stride-th step
  double probe_u = 1.0;  // parametric probe position, 1 = tip
  bool operator==(const OutputSpec&) const = default;
};

/// Everything needed to run one simulation. Units are SI throughout.
struct ScenarioConfig {
  std::string name = "custom";
  ReferenceGeometry geometry = ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ());
  SectionSpec section;
  BoundarySpec boundary{{EndCondition::clamped(), EndCondition::free()}};
  Loads loads;
  Vec3 initial_velocity = Vec3::Zero();
  Vec3 initial_angular_velocity = Vec3::Zero();
  bool rigid_body_velocity = false;
  int degree = 4;
  int n = 20;
  double time_step = 1e-6;
  double total_time = 1e-3;
  SolverSettings solver;
  OutputSpec output;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  long num_steps() const;
  InitialConditions initial_conditions() const;
  std::shared_ptr<const BeamProblem> make_problem() const;
  bool operator==(const ScenarioConfig& o) const;
};

/// JSON text <-> config. Keys carry their units (e.g. "step_s", "young_Pa").
/// Parsing throws std::invalid_argument with the JSON path of the bad field.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string emit_scenario(const ScenarioConfig& config);

/// Named benchmark setups: "cantilever", "pendulum", "flying", "spinning"
/// (omega_3 = 20 pi), "spinning-2pi", "spinning-0.2pi".
ScenarioConfig preset(std::string_view name);
std::vector<std::string> preset_names();

BoundarySpec parse_boundary_pair(std::string_view text);  // "dd", "dn", "nn", ...

}  // namespace igabeam
