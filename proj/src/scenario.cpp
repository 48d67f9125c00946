#include "igabeam/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace igabeam {

using Json = nlohmann::ordered_json;

SectionProperties SectionSpec::resolve() const {
  if (mode == Mode::Direct) {
    direct.validate();
    return direct;
  }
  return section_from_dimensions(geometry, material);
}

bool SectionSpec::operator==(const SectionSpec& o) const {
  if (mode != o.mode) return false;
  if (mode == Mode::Direct)
    return direct.mass_per_length == o.direct.mass_per_length && direct.axial_shear == o.direct.axial_shear &&
           direct.bending_torsion == o.direct.bending_torsion && direct.inertia == o.direct.inertia;
  return geometry.shape == o.geometry.shape && geometry.size == o.geometry.size &&
         geometry.shear_correction == o.geometry.shear_correction &&
         geometry.torsion_constant == o.geometry.torsion_constant && material.young == o.material.young &&
         material.poisson == o.material.poisson && material.density == o.material.density;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return name == o.name && geometry.control_points == o.geometry.control_points &&
         geometry.normal == o.geometry.normal && section == o.section && boundary == o.boundary &&
         loads == o.loads && initial_velocity == o.initial_velocity &&
         initial_angular_velocity == o.initial_angular_velocity && rigid_body_velocity == o.rigid_body_velocity &&
         degree == o.degree && n == o.n && time_step == o.time_step && total_time == o.total_time &&
         solver == o.solver && output == o.output;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  geometry.validate();
  section.resolve();
  if (degree < 1) fail("discretization.degree must be >= 1");
  if (n < degree) fail("discretization.n must be >= degree");
  if (!(time_step > 0.0) || !std::isfinite(time_step)) fail("time.step_s must be positive");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) fail("time.total_s must be positive");
  if (output.stride < 1) fail("output.stride must be >= 1");
  if (!(output.probe_u >= 0.0 && output.probe_u <= 1.0)) fail("output.probe_u must lie in [0, 1]");
  if (solver.corrector.max_passes < 1) fail("solver.corrector.max_passes must be >= 1");
  if (!(solver.corrector.tolerance >= 0.0)) fail("solver.corrector.tolerance must be >= 0");
  if (solver.newton.max_iterations < 1) fail("solver.newton.max_iterations must be >= 1");
  if (!(solver.newton.tolerance > 0.0)) fail("solver.newton.tolerance must be positive");
}

long ScenarioConfig::num_steps() const { return std::lround(total_time / time_step); }

InitialConditions ScenarioConfig::initial_conditions() const {
  InitialConditions ic;
  ic.velocity = initial_velocity;
  ic.angular_velocity = initial_angular_velocity;
  ic.rigid_body_velocity = rigid_body_velocity;
  return ic;
}

std::shared_ptr<const BeamProblem> ScenarioConfig::make_problem() const {
  validate();
  return BeamProblem::create(geometry, degree, n, section.resolve(), boundary, loads, time_step);
}

// ---------------------------------------------------------------------------
// JSON reading

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) bad(path, "unknown key '" + it.key() + "'");
  }
}

double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

int get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

Vec3 get_vec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) bad(path, "expected an array of three numbers");
  Vec3 v;
  for (int k = 0; k < 3; ++k) v[k] = get_number(j[static_cast<std::size_t>(k)], path + "[" + std::to_string(k) + "]");
  return v;
}

TimeHistory get_history(const Json& j, const std::string& path) {
  check_keys(j, path, {"kind", "start_s", "end_s", "points"});
  TimeHistory h;
  const std::string kind = j.contains("kind") ? get_string(j["kind"], path + ".kind") : "constant";
  if (kind == "constant") {
    h.kind = TimeHistory::Kind::Constant;
  } else if (kind == "ramp") {
    h.kind = TimeHistory::Kind::Ramp;
    if (!j.contains("start_s") || !j.contains("end_s")) bad(path, "ramp needs start_s and end_s");
    h.ramp_start = get_number(j["start_s"], path + ".start_s");
    h.ramp_end = get_number(j["end_s"], path + ".end_s");
    if (!(h.ramp_end > h.ramp_start)) bad(path, "ramp end_s must exceed start_s");
  } else if (kind == "table") {
    h.kind = TimeHistory::Kind::Table;
    if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
      bad(path, "table needs a non-empty points array");
    for (std::size_t k = 0; k < j["points"].size(); ++k) {
      const Json& p = j["points"][k];
      const std::string pp = path + ".points[" + std::to_string(k) + "]";
      if (!p.is_array() || p.size() != 2) bad(pp, "expected [t_s, factor]");
      h.table.push_back({get_number(p[0], pp), get_number(p[1], pp)});
      if (k > 0 && !(h.table[k][0] > h.table[k - 1][0])) bad(pp, "table times must increase");
    }
  } else {
    bad(path + ".kind", "expected constant, ramp or table");
  }
  return h;
}

VectorHistory get_vector_history(const Json& j, const std::string& path) {
  check_keys(j, path, {"value", "history"});
  VectorHistory v;
  if (j.contains("value")) v.value = get_vec3(j["value"], path + ".value");
  if (j.contains("history")) v.history = get_history(j["history"], path + ".history");
  return v;
}

BoundaryKind get_kind(const Json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  if (s == "dirichlet") return BoundaryKind::Dirichlet;
  if (s == "neumann") return BoundaryKind::Neumann;
  bad(path, "expected dirichlet or neumann");
}

EndCondition end_condition_from_name(std::string_view s, const std::string& path) {
  if (s == "clamped") return EndCondition::clamped();
  if (s == "hinged") return EndCondition::hinged();
  if (s == "free") return EndCondition::free();
  bad(path, "expected clamped, hinged, free or {translation, rotation}");
}

EndCondition get_end_condition(const Json& j, const std::string& path) {
  if (j.is_string()) return end_condition_from_name(j.get<std::string>(), path);
  check_keys(j, path, {"translation", "rotation"});
  EndCondition c;
  if (j.contains("translation")) c.translation = get_kind(j["translation"], path + ".translation");
  if (j.contains("rotation")) c.rotation = get_kind(j["rotation"], path + ".rotation");
  return c;
}

EndLoads get_end_loads(const Json& j, const std::string& path) {
  check_keys(j, path, {"force_N", "moment_N_m", "displacement_m", "rotation_rad"});
  EndLoads e;
  if (j.contains("force_N")) e.force = get_vector_history(j["force_N"], path + ".force_N");
  if (j.contains("moment_N_m")) e.moment = get_vector_history(j["moment_N_m"], path + ".moment_N_m");
  if (j.contains("displacement_m")) e.displacement = get_vector_history(j["displacement_m"], path + ".displacement_m");
  if (j.contains("rotation_rad")) e.rotation = get_vector_history(j["rotation_rad"], path + ".rotation_rad");
  return e;
}

SectionSpec get_section(const Json& j, const std::string& path) {
  check_keys(j, path, {"shape", "size_m", "shear_correction", "torsion_constant_m4", "material", "direct"});
  SectionSpec s;
  if (j.contains("direct")) {
    if (j.contains("shape") || j.contains("material")) bad(path, "give either direct constants or shape and material");
    const Json& d = j["direct"];
    const std::string dp = path + ".direct";
    check_keys(d, dp, {"mass_per_length_kg_per_m", "axial_shear_N", "bending_torsion_N_m2", "inertia_kg_m"});
    for (const char* k : {"mass_per_length_kg_per_m", "axial_shear_N", "bending_torsion_N_m2", "inertia_kg_m"})
      if (!d.contains(k)) bad(dp, std::string("missing ") + k);
    s.mode = SectionSpec::Mode::Direct;
    s.direct.mass_per_length = get_number(d["mass_per_length_kg_per_m"], dp + ".mass_per_length_kg_per_m");
    s.direct.axial_shear = get_vec3(d["axial_shear_N"], dp + ".axial_shear_N");
    s.direct.bending_torsion = get_vec3(d["bending_torsion_N_m2"], dp + ".bending_torsion_N_m2");
    s.direct.inertia = get_vec3(d["inertia_kg_m"], dp + ".inertia_kg_m");
    return s;
  }
  for (const char* k : {"shape", "size_m", "material"})
    if (!j.contains(k)) bad(path, std::string("missing ") + k);
  const std::string shape = get_string(j["shape"], path + ".shape");
  if (shape == "square")
    s.geometry.shape = SectionShape::Square;
  else if (shape == "circle")
    s.geometry.shape = SectionShape::Circle;
  else
    bad(path + ".shape", "expected square or circle");
  s.geometry.size = get_number(j["size_m"], path + ".size_m");
  if (j.contains("shear_correction")) s.geometry.shear_correction = get_number(j["shear_correction"], path + ".shear_correction");
  if (j.contains("torsion_constant_m4"))
    s.geometry.torsion_constant = get_number(j["torsion_constant_m4"], path + ".torsion_constant_m4");
  const Json& m = j["material"];
  const std::string mp = path + ".material";
  check_keys(m, mp, {"young_Pa", "poisson", "density_kg_per_m3"});
  for (const char* k : {"young_Pa", "poisson", "density_kg_per_m3"})
    if (!m.contains(k)) bad(mp, std::string("missing ") + k);
  s.material.young = get_number(m["young_Pa"], mp + ".young_Pa");
  s.material.poisson = get_number(m["poisson"], mp + ".poisson");
  s.material.density = get_number(m["density_kg_per_m3"], mp + ".density_kg_per_m3");
  return s;
}

// ---------------------------------------------------------------------------
// JSON writing

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json history_json(const TimeHistory& h) {
  Json j;
  switch (h.kind) {
    case TimeHistory::Kind::Constant:
      j["kind"] = "constant";
      break;
    case TimeHistory::Kind::Ramp:
      j["kind"] = "ramp";
      j["start_s"] = h.ramp_start;
      j["end_s"] = h.ramp_end;
      break;
    case TimeHistory::Kind::Table: {
      j["kind"] = "table";
      Json pts = Json::array();
      for (const auto& p : h.table) pts.push_back(Json::array({p[0], p[1]}));
      j["points"] = pts;
      break;
    }
  }
  return j;
}

Json vector_history_json(const VectorHistory& v) {
  Json j;
  j["value"] = vec_json(v.value);
  j["history"] = history_json(v.history);
  return j;
}

const char* kind_name(BoundaryKind k) { return k == BoundaryKind::Dirichlet ? "dirichlet" : "neumann"; }

Json end_condition_json(const EndCondition& c) {
  if (c == EndCondition::clamped()) return "clamped";
  if (c == EndCondition::hinged()) return "hinged";
  if (c == EndCondition::free()) return "free";
  Json j;
  j["translation"] = kind_name(c.translation);
  j["rotation"] = kind_name(c.rotation);
  return j;
}

Json end_loads_json(const EndLoads& e) {
  Json j = Json::object();
  const VectorHistory none;
  if (!(e.force == none)) j["force_N"] = vector_history_json(e.force);
  if (!(e.moment == none)) j["moment_N_m"] = vector_history_json(e.moment);
  if (!(e.displacement == none)) j["displacement_m"] = vector_history_json(e.displacement);
  if (!(e.rotation == none)) j["rotation_rad"] = vector_history_json(e.rotation);
  return j;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "$", {"name", "preset", "geometry", "section", "boundary", "loads", "initial", "discretization",
                         "time", "solver", "output"});
  ScenarioConfig c;
  if (root.contains("preset")) c = preset(get_string(root["preset"], "$.preset"));
  if (root.contains("name")) c.name = get_string(root["name"], "$.name");

  if (root.contains("geometry")) {
    const Json& g = root["geometry"];
    check_keys(g, "$.geometry", {"control_points_m", "length_m", "plane_normal"});
    if (g.contains("plane_normal")) c.geometry.normal = get_vec3(g["plane_normal"], "$.geometry.plane_normal");
    if (g.contains("control_points_m") && g.contains("length_m"))
      bad("$.geometry", "give either control_points_m or length_m");
    if (g.contains("control_points_m")) {
      const Json& pts = g["control_points_m"];
      if (!pts.is_array() || pts.size() < 2) bad("$.geometry.control_points_m", "expected at least two points");
      c.geometry.control_points.clear();
      for (std::size_t k = 0; k < pts.size(); ++k)
        c.geometry.control_points.push_back(get_vec3(pts[k], "$.geometry.control_points_m[" + std::to_string(k) + "]"));
    }
    if (g.contains("length_m")) {
      const double L = get_number(g["length_m"], "$.geometry.length_m");
      if (!(L > 0.0)) bad("$.geometry.length_m", "must be positive");
      c.geometry.control_points = {Vec3::Zero(), L * Vec3::UnitY()};
    }
  }
  if (root.contains("section")) c.section = get_section(root["section"], "$.section");
  if (root.contains("boundary")) {
    const Json& b = root["boundary"];
    check_keys(b, "$.boundary", {"start", "end"});
    if (b.contains("start")) c.boundary.ends[0] = get_end_condition(b["start"], "$.boundary.start");
    if (b.contains("end")) c.boundary.ends[1] = get_end_condition(b["end"], "$.boundary.end");
  }
  if (root.contains("loads")) {
    const Json& l = root["loads"];
    check_keys(l, "$.loads", {"gravity_m_per_s2", "distributed_force_N_per_m", "distributed_moment_N", "start", "end"});
    c.loads = Loads{};
    if (l.contains("gravity_m_per_s2")) c.loads.gravity = get_vec3(l["gravity_m_per_s2"], "$.loads.gravity_m_per_s2");
    if (l.contains("distributed_force_N_per_m"))
      c.loads.distributed_force = get_vector_history(l["distributed_force_N_per_m"], "$.loads.distributed_force_N_per_m");
    if (l.contains("distributed_moment_N"))
      c.loads.distributed_moment = get_vector_history(l["distributed_moment_N"], "$.loads.distributed_moment_N");
    if (l.contains("start")) c.loads.ends[0] = get_end_loads(l["start"], "$.loads.start");
    if (l.contains("end")) c.loads.ends[1] = get_end_loads(l["end"], "$.loads.end");
  }
  if (root.contains("initial")) {
    const Json& i = root["initial"];
    check_keys(i, "$.initial", {"velocity_m_per_s", "angular_velocity_rad_per_s", "rigid_body_velocity"});
    if (i.contains("velocity_m_per_s")) c.initial_velocity = get_vec3(i["velocity_m_per_s"], "$.initial.velocity_m_per_s");
    if (i.contains("angular_velocity_rad_per_s"))
      c.initial_angular_velocity = get_vec3(i["angular_velocity_rad_per_s"], "$.initial.angular_velocity_rad_per_s");
    if (i.contains("rigid_body_velocity"))
      c.rigid_body_velocity = get_bool(i["rigid_body_velocity"], "$.initial.rigid_body_velocity");
  }
  if (root.contains("discretization")) {
    const Json& d = root["discretization"];
    check_keys(d, "$.discretization", {"degree", "n"});
    if (d.contains("degree")) c.degree = get_int(d["degree"], "$.discretization.degree");
    if (d.contains("n")) c.n = get_int(d["n"], "$.discretization.n");
  }
  if (root.contains("time")) {
    const Json& t = root["time"];
    check_keys(t, "$.time", {"step_s", "total_s"});
    if (t.contains("step_s")) c.time_step = get_number(t["step_s"], "$.time.step_s");
    if (t.contains("total_s")) c.total_time = get_number(t["total_s"], "$.time.total_s");
  }
  if (root.contains("solver")) {
    const Json& s = root["solver"];
    check_keys(s, "$.solver", {"variant", "neumann_coupling", "corrector", "newton"});
    try {
      if (s.contains("variant")) c.solver.variant = parse_variant(get_string(s["variant"], "$.solver.variant"));
      if (s.contains("neumann_coupling"))
        c.solver.neumann_coupling = parse_neumann_coupling(get_string(s["neumann_coupling"], "$.solver.neumann_coupling"));
    } catch (const std::invalid_argument& e) {
      bad("$.solver", e.what());
    }
    if (s.contains("corrector")) {
      const Json& m = s["corrector"];
      check_keys(m, "$.solver.corrector", {"max_passes", "tolerance", "fixed_passes"});
      if (m.contains("max_passes")) c.solver.corrector.max_passes = get_int(m["max_passes"], "$.solver.corrector.max_passes");
      if (m.contains("tolerance")) c.solver.corrector.tolerance = get_number(m["tolerance"], "$.solver.corrector.tolerance");
      if (m.contains("fixed_passes"))
        c.solver.corrector.fixed_passes = get_bool(m["fixed_passes"], "$.solver.corrector.fixed_passes");
    }
    if (s.contains("newton")) {
      const Json& m = s["newton"];
      check_keys(m, "$.solver.newton", {"max_iterations", "tolerance"});
      if (m.contains("max_iterations"))
        c.solver.newton.max_iterations = get_int(m["max_iterations"], "$.solver.newton.max_iterations");
      if (m.contains("tolerance")) c.solver.newton.tolerance = get_number(m["tolerance"], "$.solver.newton.tolerance");
    }
  }
  if (root.contains("output")) {
    const Json& o = root["output"];
    check_keys(o, "$.output", {"stride", "probe_u"});
    if (o.contains("stride")) c.output.stride = get_int(o["stride"], "$.output.stride");
    if (o.contains("probe_u")) c.output.probe_u = get_number(o["probe_u"], "$.output.probe_u");
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string emit_scenario(const ScenarioConfig& c) {
  Json root;
  root["name"] = c.name;
  Json pts = Json::array();
  for (const Vec3& p : c.geometry.control_points) pts.push_back(vec_json(p));
  root["geometry"] = {{"control_points_m", pts}, {"plane_normal", vec_json(c.geometry.normal)}};

  Json sec;
  if (c.section.mode == SectionSpec::Mode::Direct) {
    const SectionProperties& d = c.section.direct;
    sec["direct"] = {{"mass_per_length_kg_per_m", d.mass_per_length},
                     {"axial_shear_N", vec_json(d.axial_shear)},
                     {"bending_torsion_N_m2", vec_json(d.bending_torsion)},
                     {"inertia_kg_m", vec_json(d.inertia)}};
  } else {
    const SectionGeometry& g = c.section.geometry;
    sec["shape"] = g.shape == SectionShape::Square ? "square" : "circle";
    sec["size_m"] = g.size;
    sec["shear_correction"] = g.shear_correction;
    if (g.torsion_constant) sec["torsion_constant_m4"] = *g.torsion_constant;
    sec["material"] = {{"young_Pa", c.section.material.young},
                       {"poisson", c.section.material.poisson},
                       {"density_kg_per_m3", c.section.material.density}};
  }
  root["section"] = sec;
  root["boundary"] = {{"start", end_condition_json(c.boundary.ends[0])}, {"end", end_condition_json(c.boundary.ends[1])}};

  Json loads;
  loads["gravity_m_per_s2"] = vec_json(c.loads.gravity);
  const VectorHistory none;
  if (!(c.loads.distributed_force == none))
    loads["distributed_force_N_per_m"] = vector_history_json(c.loads.distributed_force);
  if (!(c.loads.distributed_moment == none))
    loads["distributed_moment_N"] = vector_history_json(c.loads.distributed_moment);
  loads["start"] = end_loads_json(c.loads.ends[0]);
  loads["end"] = end_loads_json(c.loads.ends[1]);
  root["loads"] = loads;

  root["initial"] = {{"velocity_m_per_s", vec_json(c.initial_velocity)},
                     {"angular_velocity_rad_per_s", vec_json(c.initial_angular_velocity)},
                     {"rigid_body_velocity", c.rigid_body_velocity}};
  root["discretization"] = {{"degree", c.degree}, {"n", c.n}};
  root["time"] = {{"step_s", c.time_step}, {"total_s", c.total_time}};
  root["solver"] = {{"variant", std::string(to_string(c.solver.variant))},
                    {"neumann_coupling", std::string(to_string(c.solver.neumann_coupling))},
                    {"corrector",
                     {{"max_passes", c.solver.corrector.max_passes},
                      {"tolerance", c.solver.corrector.tolerance},
                      {"fixed_passes", c.solver.corrector.fixed_passes}}},
                    {"newton",
                     {{"max_iterations", c.solver.newton.max_iterations},
                      {"tolerance", c.solver.newton.tolerance}}}};
  root["output"] = {{"stride", c.output.stride}, {"probe_u", c.output.probe_u}};
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Presets

namespace {

ScenarioConfig straight_steel_beam(double side) {
  ScenarioConfig c;
  c.geometry = ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ());
  c.section.mode = SectionSpec::Mode::Shape;
  c.section.geometry = {SectionShape::Square, side, 1.0, std::nullopt};
  c.section.material = {210e9, 0.2, 7800.0};
  return c;
}

ScenarioConfig spinning(double omega, double total) {
  ScenarioConfig c = straight_steel_beam(0.0175);
  c.boundary = {{EndCondition::hinged(), EndCondition::free()}};
  c.loads.gravity = Vec3(0.0, 0.0, -9.81);
  c.initial_angular_velocity = Vec3(0.0, 0.0, omega);
  c.rigid_body_velocity = true;
  c.degree = 4;
  c.n = 20;
  c.time_step = 1e-6;
  c.total_time = total;
  c.output.stride = 1000;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"cantilever", "pendulum", "flying", "spinning", "spinning-2pi", "spinning-0.2pi"};
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "cantilever") {
    c = straight_steel_beam(0.01);
    c.boundary = {{EndCondition::clamped(), EndCondition::free()}};
    c.loads.ends[1].force.value = Vec3(0.0, 0.0, -100.0);
    c.degree = 4;
    c.n = 20;
    c.time_step = 1e-6;
    c.total_time = 0.5;
    c.output.stride = 100;
  } else if (name == "pendulum") {
    c.geometry = ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ());
    c.section.mode = SectionSpec::Mode::Shape;
    c.section.geometry = {SectionShape::Circle, 0.01, 1.0, std::nullopt};
    c.section.material = {5e6, 0.5, 1100.0};
    c.boundary = {{EndCondition::hinged(), EndCondition::free()}};
    c.loads.gravity = Vec3(0.0, 0.0, -9.81);
    c.degree = 4;
    c.n = 30;
    c.time_step = 1e-5;
    c.total_time = 1.0;
    c.output.stride = 100;
  } else if (name == "flying") {
    // L-shaped beam rounded into one quadratic Bezier; loads act on the s = 0 end.
    c.geometry.control_points = {Vec3(6.0, 0.0, 0.0), Vec3::Zero(), Vec3(0.0, 8.0, 0.0)};
    c.geometry.normal = Vec3::UnitZ();
    c.section.mode = SectionSpec::Mode::Direct;
    c.section.direct = {1.0, Vec3::Constant(1e4), Vec3::Constant(500.0), Vec3::Constant(10.0)};
    c.boundary = {{EndCondition::free(), EndCondition::free()}};
    TimeHistory hat;
    hat.kind = TimeHistory::Kind::Table;
    hat.table = {{0.0, 0.0}, {2.5, 1.0}, {5.0, 0.0}};
    c.loads.ends[0].force = {Vec3(20.0, 0.0, 0.0), hat};
    c.loads.ends[0].moment = {Vec3(0.0, 200.0, 100.0), hat};
    c.degree = 6;
    c.n = 60;
    c.time_step = 5e-6;
    c.total_time = 5.0;
    c.output.stride = 1000;
  } else if (name == "spinning") {
    c = spinning(20.0 * M_PI, 0.1);
  } else if (name == "spinning-2pi") {
    c = spinning(2.0 * M_PI, 1.0);
  } else if (name == "spinning-0.2pi") {
    c = spinning(0.2 * M_PI, 1.0);
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) +
                                "' (expected cantilever, pendulum, flying, spinning, spinning-2pi, spinning-0.2pi)");
  }
  c.name = std::string(name);
  return c;
}

BoundarySpec parse_boundary_pair(std::string_view text) {
  auto end = [&](char ch) {
    if (ch == 'd' || ch == 'D') return EndCondition::clamped();
    if (ch == 'n' || ch == 'N') return EndCondition::free();
    throw std::invalid_argument("boundary pair '" + std::string(text) + "' must be two letters from {d, n}");
  };
  if (text.size() != 2) throw std::invalid_argument("boundary pair '" + std::string(text) + "' must be two letters from {d, n}");
  return {{end(text[0]), end(text[1])}};
}

}  // namespace igabeam
