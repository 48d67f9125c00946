#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "igabeam/beam_model.hpp"
#include "igabeam/integrator.hpp"
#include "oracles.hpp"

using namespace igabeam;

namespace {

ReferenceGeometry curved() { return {{Vec3(6, 0, 0), Vec3(0, 0, 0), Vec3(0, 8, 0)}, Vec3::UnitZ()}; }

SectionProperties unit_section() {
  SectionProperties s;
  s.mass_per_length = 2.0;
  s.axial_shear = Vec3(3.0, 5.0, 7.0);
  s.bending_torsion = Vec3(11.0, 13.0, 17.0);
  s.inertia = Vec3(0.1, 0.2, 0.3);
  return s;
}

std::vector<PointFields> strains(const Configuration& c, const ReferenceConfiguration& ref,
                                 const Discretization& disc) {
  std::vector<PointFields> f(static_cast<std::size_t>(disc.size()));
  material_strains(c, ref, disc, f);
  strain_derivatives(c, ref, disc, f);
  return f;
}

// Spline value of control data at parameter u.
Vec3 spline_at(const Discretization& disc, std::span<const Vec3> controls, double u) {
  const BasisValues b = eval_basis(disc.space, u, 0);
  Vec3 v = Vec3::Zero();
  for (int k = 0; k <= disc.space.degree(); ++k) v += b.values[0][k] * controls[b.first + k];
  return v;
}

}  // namespace

TEST_CASE("section constants from dimensions") {
  const Material steel{210e9, 0.2, 7800};
  const SectionProperties s = section_from_dimensions({SectionShape::Square, 0.01, 1.0, std::nullopt}, steel);
  const double A = 1e-4, I = 1e-8 / 12.0, G = 210e9 / 2.4;
  CHECK(s.mass_per_length == doctest::Approx(7800 * A));
  CHECK(s.axial_shear.y() == doctest::Approx(210e9 * A));
  CHECK(s.axial_shear.x() == doctest::Approx(G * A));
  CHECK(s.bending_torsion.x() == doctest::Approx(210e9 * I));
  CHECK(s.bending_torsion.y() == doctest::Approx(G * 2 * I));
  CHECK(s.inertia.y() == doctest::Approx(7800 * 2 * I));
  const SectionProperties c = section_from_dimensions({SectionShape::Circle, 0.01, 1.0, 3e-9}, steel);
  CHECK(c.mass_per_length == doctest::Approx(7800 * M_PI * 0.25e-4));
  CHECK(c.bending_torsion.z() == doctest::Approx(210e9 * M_PI * 1e-8 / 64));
  CHECK(c.bending_torsion.y() == doctest::Approx(G * 3e-9));
  CHECK_THROWS_AS(section_from_dimensions({SectionShape::Square, -1.0, 1.0, std::nullopt}, steel),
                  std::invalid_argument);
}

TEST_CASE("Bezier reference geometry") {
  const ReferenceGeometry g = curved();
  const double h = 1e-6;
  for (double u : {0.1, 0.5, 0.8}) {
    CHECK(((g.position(u + h) - g.position(u - h)) / (2 * h) - g.derivative(u, 1)).norm() < 1e-7);
    CHECK(((g.derivative(u + h, 1) - g.derivative(u - h, 1)) / (2 * h) - g.derivative(u, 2)).norm() < 1e-6);
  }
  CHECK(ReferenceGeometry::straight(Vec3::Zero(), Vec3(0, 3, 4), Vec3::UnitX()).length() == doctest::Approx(5.0));
  // Quadratic Bezier arc length by a fine trapezoid sum as oracle.
  double trap = 0.0;
  const int m = 200000;
  for (int k = 0; k < m; ++k) trap += (g.position((k + 1.0) / m) - g.position(static_cast<double>(k) / m)).norm();
  CHECK(g.length() == doctest::Approx(trap).epsilon(1e-9));
  CHECK_THROWS_AS(ReferenceGeometry({{Vec3::Zero(), Vec3(0, 0, 1)}, Vec3::UnitZ()}).validate(),
                  std::invalid_argument);
}

TEST_CASE("strain-free reference configuration") {
  for (const ReferenceGeometry& g : {ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ()), curved()}) {
    const Discretization disc = make_discretization(4, 16, g);
    const ReferenceConfiguration ref = make_reference(g, disc);
    const auto f = strains(reference_configuration(ref), ref, disc);
    for (const PointFields& p : f) {
      CHECK(p.gamma.isZero(0.0));
      CHECK(p.kappa.isZero(0.0));
      CHECK(p.gamma_s.isZero(0.0));
      CHECK(p.kappa_s.isZero(0.0));
    }
  }
}

TEST_CASE("reference frame and curvature of the curved beam") {
  const ReferenceGeometry g = curved();
  const Discretization disc = make_discretization(6, 30, g);
  const ReferenceConfiguration ref = make_reference(g, disc);
  for (int i = 0; i < disc.size(); ++i) {
    const Mat3& R = ref.rotation[i];
    CHECK(rot3::orthonormality_error(R) < 1e-14);
    CHECK(R.determinant() == doctest::Approx(1.0));
    // K0 = axial(R0^T dR0/ds) by central differences of the analytic frame.
    const double u = disc.points[i];
    const double h = 1e-6;
    auto frame = [&](double x) {
      const Vec3 t = g.derivative(x, 1).normalized();
      Mat3 F;
      F.col(0) = t.cross(g.normal);
      F.col(1) = t;
      F.col(2) = g.normal;
      return F;
    };
    const double a = std::max(0.0, u - h), b = std::min(1.0, u + h);
    const Mat3 dF = (frame(b) - frame(a)) / ((b - a) * g.derivative(u, 1).norm());
    CHECK((oracle::vee(R.transpose() * dF) - ref.curvature[i]).norm() < 1e-6);
  }
}

TEST_CASE("uniform stretch gives axial strain only") {
  const ReferenceGeometry g = ReferenceGeometry::straight(Vec3::Zero(), Vec3(0, 2, 0), Vec3::UnitZ());
  const Discretization disc = make_discretization(4, 12, g);
  const ReferenceConfiguration ref = make_reference(g, disc);
  Configuration c = reference_configuration(ref);
  const double eps = 0.003;
  for (Vec3& x : c.centroid) x *= 1.0 + eps;
  const auto f = strains(c, ref, disc);
  for (const PointFields& p : f) {
    CHECK(p.gamma.y() == doctest::Approx(eps).epsilon(1e-10));
    CHECK(std::abs(p.gamma.x()) < 1e-14);
    CHECK(std::abs(p.gamma.z()) < 1e-14);
    CHECK(p.gamma_s.norm() < 1e-9);
  }
}

TEST_CASE("quadratic centroid field reproduces Gamma_N,s exactly") {
  const ReferenceGeometry g = ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ());
  const Discretization disc = make_discretization(4, 10, g);
  const ReferenceConfiguration ref = make_reference(g, disc);
  Configuration c = reference_configuration(ref);
  const Vec3 q(0.01, 0.0, -0.02);  // c = c0 + q s^2
  std::vector<Vec3> values(static_cast<std::size_t>(disc.size()));
  for (int i = 0; i < disc.size(); ++i) values[i] = g.position(disc.points[i]) + q * disc.points[i] * disc.points[i];
  disc.interpolate(values, c.centroid);
  const auto f = strains(c, ref, disc);
  for (int i = 0; i < disc.size(); ++i)
    CHECK((f[i].gamma_s - ref.rotation[i].transpose() * (2.0 * q)).norm() < 1e-9);
}

TEST_CASE("strains are objective under a global rigid rotation") {
  const ReferenceGeometry g = curved();
  const Discretization disc = make_discretization(5, 20, g);
  const ReferenceConfiguration ref = make_reference(g, disc);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> d(-0.01, 0.01);
  Configuration c = reference_configuration(ref);
  for (Vec3& x : c.centroid) x += Vec3(d(rng), d(rng), d(rng));
  for (int i = 0; i < disc.size(); ++i) {
    c.rotation[i] = rot3::exp_so3(Vec3(d(rng), d(rng), d(rng))) * c.rotation[i];
    c.curvature[i] += Vec3(d(rng), d(rng), d(rng));
    c.curvature_ds[i] += Vec3(d(rng), d(rng), d(rng));
  }
  const auto f0 = strains(c, ref, disc);
  const Mat3 Q = rot3::exp_so3(Vec3(0.7, -1.1, 0.4));
  Configuration r = c;
  for (Vec3& x : r.centroid) x = Q * x + Vec3(1, 2, 3);
  for (Mat3& R : r.rotation) R = Q * R;
  const auto f1 = strains(r, ref, disc);
  for (int i = 0; i < disc.size(); ++i) {
    CHECK((f0[i].gamma - f1[i].gamma).norm() < 1e-12);
    CHECK((f0[i].kappa - f1[i].kappa).norm() < 1e-12);
    CHECK((f0[i].gamma_s - f1[i].gamma_s).norm() < 1e-10);
    CHECK((f0[i].kappa_s - f1[i].kappa_s).norm() < 1e-12);
  }
}

TEST_CASE("curvature transport matches finite differences of the rotation field") {
  const ReferenceGeometry g = ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ());
  const Discretization disc = make_discretization(5, 24, g);
  const ReferenceConfiguration ref = make_reference(g, disc);
  const int n = disc.size();
  KinematicState state = apply_initial_conditions(ref, g, disc, InitialConditions{});
  std::vector<Vec3> s1(n), s2(n), s3(n);

  // Two successive increment fields given by their control values.
  auto field = [&](double a, double b) {
    std::vector<Vec3> pts(n), ctrl(n);
    for (int i = 0; i < n; ++i) {
      const double u = disc.points[i];
      pts[i] = Vec3(a * std::sin(2 * u), b * u * u, 0.4 * a * std::cos(3 * u));
    }
    disc.interpolate(pts, ctrl);
    return ctrl;
  };
  Predictor inc;
  inc.resize(n);
  for (Vec3& d : inc.displacement) d.setZero();
  const auto t1 = field(0.6, -0.8), t2 = field(-0.3, 0.5);
  inc.rotation = t1;
  update_configuration(state, inc, disc, s1, s2, s3);
  inc.rotation = t2;
  update_configuration(state, inc, disc, s1, s2, s3);

  auto rotation = [&](double u) -> Mat3 {
    return rot3::exp_so3(spline_at(disc, t2, u)) * rot3::exp_so3(spline_at(disc, t1, u)) * ref.rotation[0];
  };
  auto curvature = [&](double u) -> Vec3 {
    const double h = 1e-5;
    return oracle::vee(rotation(u).transpose() * (rotation(u + h) - rotation(u - h)) / (2 * h));
  };
  for (int i = 1; i + 1 < n; ++i) {
    const double u = disc.points[i];
    CHECK((state.config.rotation[i] - rotation(u)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((state.config.curvature[i] - curvature(u)).norm() < 1e-8);
    const double h = 1e-4;
    const Vec3 ks = (curvature(u + h) - curvature(u - h)) / (2 * h);
    CHECK((state.config.curvature_ds[i] - ks).norm() < 1e-5);
  }
}

TEST_CASE("rigid increments leave the strains unchanged") {
  const ReferenceGeometry g = ReferenceGeometry::straight(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ());
  const Discretization disc = make_discretization(4, 12, g);
  const ReferenceConfiguration ref = make_reference(g, disc);
  const int n = disc.size();
  std::vector<Vec3> s1(n), s2(n), s3(n);
  KinematicState state;
  state.config = reference_configuration(ref);
  Predictor inc;
  inc.resize(n);
  for (auto& v : inc.displacement) v = Vec3(0.1, -0.2, 0.3);
  update_configuration(state, inc, disc, s1, s2, s3);
  for (const PointFields& p : strains(state.config, ref, disc)) {
    CHECK(p.gamma.norm() < 1e-14);
    CHECK(p.kappa.norm() == 0.0);
  }
  // Uniform small rotation about the normal with centroid increments of the
  // same rotation applied to the straight line: strain error O(delta^2).
  for (double delta : {1e-3, 5e-4}) {
    KinematicState s;
    s.config = reference_configuration(ref);
    for (int j = 0; j < n; ++j) {
      inc.rotation[j] = Vec3(0, 0, delta);
      inc.displacement[j] = delta * Vec3::UnitZ().cross(ref.centroid[j]);
    }
    update_configuration(s, inc, disc, s1, s2, s3);
    double worst = 0.0;
    for (const PointFields& p : strains(s.config, ref, disc)) worst = std::max(worst, p.gamma.norm() + p.kappa.norm());
    CHECK(worst < delta * delta);
  }
}

TEST_CASE("collocated right-hand sides") {
  const SectionProperties sec = unit_section();
  PointFields f{};
  f.c_s = Vec3::UnitY();
  f.gamma.setZero();
  f.kappa.setZero();
  const Vec3 K = Vec3::Zero();
  CHECK(translational_rhs(Mat3::Identity(), K, sec, f, Vec3::Zero()).isZero(0.0));
  CHECK(rotational_rhs(Mat3::Identity(), K, sec, f, Vec3::Zero()).isZero(0.0));
  const Vec3 load = sec.mass_per_length * Vec3(0, 0, -9.81);
  CHECK(translational_rhs(Mat3::Identity(), K, sec, f, load) == load);
  // Uniform axial strain: constant force field, no divergence.
  f.gamma = Vec3(0, 0.01, 0);
  CHECK(translational_rhs(Mat3::Identity(), K, sec, f, Vec3::Zero()).norm() < 1e-15);
  // Uniform shear: only the c,s x n coupling remains.
  f.gamma = Vec3(0.02, 0, 0);
  const Vec3 n = sec.axial_shear.cwiseProduct(f.gamma);
  CHECK((rotational_rhs(Mat3::Identity(), K, sec, f, Vec3::Zero()) - f.c_s.cross(n)).norm() < 1e-15);
  f.gamma.setZero();
  CHECK(rotational_rhs(Mat3::Identity(), K, sec, f, Vec3(1, 2, 3)) == Vec3(1, 2, 3));
}

TEST_CASE("spatial inertia") {
  const Vec3 J(1, 2, 3);
  CHECK(spatial_inertia(Mat3::Identity(), J) == Mat3(J.asDiagonal()));
  const Mat3 j = spatial_inertia(rot3::exp_so3(Vec3(0, 0, M_PI / 2)), J);
  CHECK((j - Mat3(Vec3(2, 1, 3).asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);
  const Mat3 k = spatial_inertia(rot3::exp_so3(Vec3(0.3, 0.9, -0.2)), J);
  CHECK((k - k.transpose()).norm() < 1e-15);
  Eigen::SelfAdjointEigenSolver<Mat3> es(k);
  CHECK(es.eigenvalues()[0] == doctest::Approx(1.0));
  CHECK(es.eigenvalues()[2] == doctest::Approx(3.0));
}

TEST_CASE("Neumann operators at the identity") {
  const SectionProperties sec = unit_section();
  PointFields f{};
  f.c_s = Vec3::UnitY();
  f.gamma.setZero();
  f.kappa.setZero();
  const NeumannOperators op = neumann_operators(Mat3::Identity(), sec, f, Vec3(0, 0, -100), Vec3::Zero());
  CHECK(op.psi2 == sec.force_stiffness());
  CHECK(op.chi2 == sec.moment_stiffness());
  CHECK(op.chi1.isZero(0.0));
  CHECK((op.psi1 - sec.force_stiffness() * rot3::skew(Vec3::UnitY())).norm() < 1e-15);
  CHECK(op.psi_bar == Vec3(0, 0, -100));
  CHECK(op.chi_bar.isZero(0.0));
}

TEST_CASE("Neumann operators linearize the end resultants") {
  const SectionProperties sec = unit_section();
  const Mat3 R = rot3::exp_so3(Vec3(0.2, -0.4, 0.7));
  const Vec3 gamma0(0.0, 1.0, 0.0), K0(0.0, 0.0, 0.3);
  const Vec3 cs = R * Vec3(0.01, 1.02, -0.03);
  const Vec3 K = K0 + Vec3(0.05, -0.02, 0.04);
  const Vec3 theta(0.3, 0.1, -0.5), eta_s(0.2, -0.1, 0.4), theta_s(-0.2, 0.6, 0.1);

  auto force = [&](double e) {
    const Mat3 Re = rot3::exp_so3(e * theta) * R;
    return Vec3(Re * sec.axial_shear.cwiseProduct(Re.transpose() * (cs + e * eta_s) - gamma0));
  };
  auto moment = [&](double e) {
    const Mat3 Re = rot3::exp_so3(e * theta) * R;
    const Vec3 Ke = K + Re.transpose() * (rot3::dexp(e * theta) * (e * theta_s));
    return Vec3(Re * sec.bending_torsion.cwiseProduct(Ke - K0));
  };
  PointFields f{};
  f.c_s = cs;
  f.gamma = R.transpose() * cs - gamma0;
  f.kappa = K - K0;
  const NeumannOperators op = neumann_operators(R, sec, f, Vec3::Zero(), Vec3::Zero());
  const double h = 1e-6;
  const Vec3 dn = (force(h) - force(-h)) / (2 * h);
  const Vec3 dm = (moment(h) - moment(-h)) / (2 * h);
  CHECK((dn - (op.psi1 * theta + op.psi2 * eta_s)).norm() < 1e-7);
  CHECK((dm - (op.chi1 * theta + op.chi2 * theta_s)).norm() < 1e-7);
  CHECK((op.psi_bar + force(0.0)).norm() < 1e-14);
}

TEST_CASE("time histories") {
  TimeHistory c;
  CHECK(c(3.0) == 1.0);
  TimeHistory r{TimeHistory::Kind::Ramp, 1.0, 3.0, {}};
  CHECK(r(0.5) == 0.0);
  CHECK(r(2.0) == doctest::Approx(0.5));
  CHECK(r(4.0) == 1.0);
  TimeHistory t{TimeHistory::Kind::Table, 0, 0, {{0.0, 0.0}, {2.5, 1.0}, {5.0, 0.0}}};
  CHECK(t(-1.0) == 0.0);
  CHECK(t(1.25) == doctest::Approx(0.5));
  CHECK(t(2.5) == doctest::Approx(1.0));
  CHECK(t(3.75) == doctest::Approx(0.5));
  CHECK(t(9.0) == 0.0);
}
