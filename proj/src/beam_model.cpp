#include "igabeam/beam_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace igabeam {

void SectionProperties::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(mass_per_length)) throw std::invalid_argument("mass per length must be positive");
  for (int k = 0; k < 3; ++k) {
    if (!positive(axial_shear[k])) throw std::invalid_argument("C_N entries must be positive");
    if (!positive(bending_torsion[k])) throw std::invalid_argument("C_M entries must be positive");
    if (!positive(inertia[k])) throw std::invalid_argument("section inertia entries must be positive");
  }
}

SectionProperties section_from_dimensions(const SectionGeometry& g, const Material& m) {
  if (!(g.size > 0.0)) throw std::invalid_argument("section size must be positive");
  if (!(m.young > 0.0) || !(m.density > 0.0) || !(m.poisson > -1.0 && m.poisson <= 0.5))
    throw std::invalid_argument("invalid material constants");
  double area = 0.0, j1 = 0.0;
  if (g.shape == SectionShape::Square) {
    area = g.size * g.size;
    j1 = std::pow(g.size, 4) / 12.0;
  } else {
    area = M_PI * g.size * g.size / 4.0;
    j1 = M_PI * std::pow(g.size, 4) / 64.0;
  }
  const double polar = 2.0 * j1;
  const double torsion = g.torsion_constant.value_or(polar);
  const double E = m.young, G = m.shear_modulus();
  SectionProperties s;
  s.mass_per_length = m.density * area;
  s.axial_shear = Vec3(g.shear_correction * G * area, E * area, g.shear_correction * G * area);
  s.bending_torsion = Vec3(E * j1, G * torsion, E * j1);
  s.inertia = m.density * Vec3(j1, polar, j1);
  s.validate();
  return s;
}

ReferenceGeometry ReferenceGeometry::straight(const Vec3& start, const Vec3& end, const Vec3& normal) {
  return {{start, end}, normal};
}

Vec3 ReferenceGeometry::position(double u) const { return derivative(u, 0); }

Vec3 ReferenceGeometry::derivative(double u, int order) const {
  const int degree = static_cast<int>(control_points.size()) - 1;
  if (order > degree) return Vec3::Zero();
  // Forward differences of order `order`, then de Casteljau on them.
  std::vector<Vec3> pts(control_points);
  double factor = 1.0;
  for (int k = 0; k < order; ++k) {
    for (int i = 0; i + 1 < static_cast<int>(pts.size()); ++i) pts[i] = pts[i + 1] - pts[i];
    pts.pop_back();
    factor *= degree - k;
  }
  for (int level = static_cast<int>(pts.size()) - 1; level > 0; --level)
    for (int i = 0; i < level; ++i) pts[i] = (1.0 - u) * pts[i] + u * pts[i + 1];
  return factor * pts[0];
}

double ReferenceGeometry::length() const {
  if (control_points.size() == 2) return (control_points[1] - control_points[0]).norm();
  // Composite 5-point Gauss-Legendre.
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                              0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  const int panels = 64;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = static_cast<double>(k) / panels, b = static_cast<double>(k + 1) / panels;
    for (int q = 0; q < 5; ++q) total += 0.5 * (b - a) * w[q] * derivative(0.5 * (a + b) + 0.5 * (b - a) * x[q], 1).norm();
  }
  return total;
}

void ReferenceGeometry::validate() const {
  if (control_points.size() < 2) throw std::invalid_argument("reference geometry needs at least two points");
  if (std::abs(normal.norm() - 1.0) > 1e-12) throw std::invalid_argument("reference plane normal must be a unit vector");
  for (std::size_t k = 0; k + 1 < control_points.size(); ++k) {
    const Vec3 d = control_points[k + 1] - control_points[k];
    if (std::abs(d.dot(normal)) > 1e-12 * std::max(1.0, d.norm()))
      throw std::invalid_argument("reference curve must lie in the plane orthogonal to the normal");
  }
  for (int k = 0; k <= 16; ++k)
    if (derivative(k / 16.0, 1).norm() <= 0.0) throw std::invalid_argument("reference curve has a zero tangent");
}

void apply_rows(const BandedRows& m, std::span<const Vec3> x, std::span<Vec3> y) {
  const int w = m.width();
  for (int i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    const int f = m.first(i);
    Vec3 acc = Vec3::Zero();
    for (int k = 0; k < w; ++k) acc += row[k] * x[f + k];
    y[i] = acc;
  }
}

Vec3 apply_row(const BandedRows& m, int i, std::span<const Vec3> x) {
  const auto row = m.row(i);
  const int f = m.first(i);
  Vec3 acc = Vec3::Zero();
  for (int k = 0; k < m.width(); ++k) acc += row[k] * x[f + k];
  return acc;
}

void Discretization::interpolate(std::span<const Vec3> point_values, std::span<Vec3> controls) const {
  const int n = size();
  thread_local std::vector<double> buffer;
  buffer.resize(static_cast<std::size_t>(3 * n));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) buffer[static_cast<std::size_t>(c * n + i)] = point_values[i][c];
  d0_lu.solve(buffer, 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) controls[i][c] = buffer[static_cast<std::size_t>(c * n + i)];
}

void Discretization::evaluate(std::span<const Vec3> controls, std::span<Vec3> values) const {
  apply_rows(ops.d0, controls, values);
}
void Discretization::evaluate_ds(std::span<const Vec3> controls, std::span<Vec3> values) const {
  apply_rows(ops.d1, controls, values);
}
void Discretization::evaluate_dss(std::span<const Vec3> controls, std::span<Vec3> values) const {
  apply_rows(ops.d2, controls, values);
}

Discretization make_discretization(int degree, int n, const ReferenceGeometry& geometry) {
  geometry.validate();
  SplineSpace space = SplineSpace::open_uniform(degree, n + 1);
  std::vector<double> points = greville_abscissae(space);
  ReferenceJacobian metric;
  for (double u : points) {
    const Vec3 d1 = geometry.derivative(u, 1);
    const Vec3 d2 = geometry.derivative(u, 2);
    const double J = d1.norm();
    metric.jacobian.push_back(J);
    metric.jacobian_du.push_back(d1.dot(d2) / J);
  }
  CollocationOperators ops = collocation_operators(space, points, metric);
  const int nb = space.num_basis();
  int kl = 0, ku = 0;
  for (int i = 0; i < nb; ++i) {
    kl = std::max(kl, i - ops.d0.first(i));
    ku = std::max(ku, ops.d0.first(i) + degree - i);
  }
  BandedLU lu(nb, kl, ku);
  for (int i = 0; i < nb; ++i) {
    const auto row = ops.d0.row(i);
    for (int k = 0; k <= degree; ++k) lu.set(i, ops.d0.first(i) + k, row[k]);
  }
  lu.factor();
  return Discretization{std::move(space), std::move(points), std::move(ops), std::move(lu)};
}

ReferenceConfiguration make_reference(const ReferenceGeometry& geometry, const Discretization& disc) {
  const int n = disc.size();
  ReferenceConfiguration ref;
  std::vector<Vec3> positions(static_cast<std::size_t>(n));
  ref.centroid.resize(static_cast<std::size_t>(n));
  ref.rotation.resize(static_cast<std::size_t>(n));
  ref.curvature.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = disc.points[i];
    positions[i] = geometry.position(u);
    const Vec3 d1 = geometry.derivative(u, 1);
    const Vec3 d2 = geometry.derivative(u, 2);
    const double J = d1.norm();
    const Vec3 t = d1 / J;
    Mat3 R;
    R.col(0) = t.cross(geometry.normal);
    R.col(1) = t;
    R.col(2) = geometry.normal;
    ref.rotation[i] = R;
    ref.curvature[i] = Vec3(0.0, 0.0, d1.cross(d2).dot(geometry.normal) / (J * J * J));
  }
  disc.interpolate(positions, ref.centroid);
  {
    std::vector<Vec3> controls(static_cast<std::size_t>(n));
    ref.curvature_ds.resize(static_cast<std::size_t>(n));
    disc.interpolate(ref.curvature, controls);
    disc.evaluate_ds(controls, ref.curvature_ds);
  }

  std::vector<Vec3> cs(static_cast<std::size_t>(n)), css(static_cast<std::size_t>(n));
  disc.evaluate_ds(ref.centroid, cs);
  disc.evaluate_dss(ref.centroid, css);
  ref.strain.resize(static_cast<std::size_t>(n));
  ref.strain_ds.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Mat3& R0 = ref.rotation[i];
    ref.strain[i] = R0.transpose() * cs[i];
    ref.strain_ds[i] = -ref.curvature[i].cross(ref.strain[i]) + R0.transpose() * css[i];
  }
  return ref;
}

Configuration reference_configuration(const ReferenceConfiguration& ref) {
  return {ref.centroid, ref.rotation, ref.curvature, ref.curvature_ds};
}

double TimeHistory::operator()(double t) const {
  switch (kind) {
    case Kind::Constant:
      return 1.0;
    case Kind::Ramp:
      if (t <= ramp_start) return 0.0;
      if (t >= ramp_end) return 1.0;
      return (t - ramp_start) / (ramp_end - ramp_start);
    case Kind::Table: {
      if (table.empty()) return 0.0;
      if (t <= table.front()[0]) return table.front()[1];
      if (t >= table.back()[0]) return table.back()[1];
      std::size_t k = 1;
      while (table[k][0] < t) ++k;
      const auto& a = table[k - 1];
      const auto& b = table[k];
      return a[1] + (b[1] - a[1]) * (t - a[0]) / (b[0] - a[0]);
    }
  }
  return 0.0;
}

void material_strains(const Configuration& config, const ReferenceConfiguration& ref,
                      const Discretization& disc, std::span<PointFields> out) {
  const BandedRows& d1 = disc.ops.d1;
  for (int i = 0; i < disc.size(); ++i) {
    PointFields& f = out[i];
    f.c_s = apply_row(d1, i, config.centroid);
    f.gamma = config.rotation[i].transpose() * f.c_s - ref.strain[i];
    f.kappa = config.curvature[i] - ref.curvature[i];
  }
}

void strain_derivatives(const Configuration& config, const ReferenceConfiguration& ref,
                        const Discretization& disc, std::span<PointFields> fields) {
  const int n = disc.size();
  const BandedRows& d2 = disc.ops.d2;
  for (int i = 0; i < n; ++i) {
    PointFields& f = fields[i];
    const Mat3& R = config.rotation[i];
    f.c_ss = apply_row(d2, i, config.centroid);
    const Vec3 material_cs = R.transpose() * f.c_s;
    f.gamma_s = -config.curvature[i].cross(material_cs) + R.transpose() * f.c_ss - ref.strain_ds[i];
    f.kappa_s = config.curvature_ds[i] - ref.curvature_ds[i];
  }
}

void stress_resultants(const Configuration& config, const SectionProperties& section,
                       std::span<PointFields> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const Mat3& R = config.rotation[i];
    PointFields& f = fields[i];
    f.force = R * section.axial_shear.cwiseProduct(f.gamma);
    f.moment = R * section.bending_torsion.cwiseProduct(f.kappa);
    f.inertia = spatial_inertia(R, section.inertia);
  }
}

Mat3 spatial_inertia(const Mat3& R, const Vec3& inertia) {
  return R * inertia.asDiagonal() * R.transpose();
}

Vec3 translational_rhs(const Mat3& R, const Vec3& curvature, const SectionProperties& section,
                       const PointFields& f, const Vec3& distributed_force) {
  const Vec3 cn_gamma = section.axial_shear.cwiseProduct(f.gamma);
  return R * (curvature.cross(cn_gamma) + section.axial_shear.cwiseProduct(f.gamma_s)) + distributed_force;
}

Vec3 rotational_rhs(const Mat3& R, const Vec3& curvature, const SectionProperties& section,
                    const PointFields& f, const Vec3& distributed_moment) {
  const Vec3 cm_kappa = section.bending_torsion.cwiseProduct(f.kappa);
  const Vec3 spatial_force = R * section.axial_shear.cwiseProduct(f.gamma);
  return R * (curvature.cross(cm_kappa) + section.bending_torsion.cwiseProduct(f.kappa_s)) +
         f.c_s.cross(spatial_force) + distributed_moment;
}

NeumannOperators neumann_operators(const Mat3& R, const SectionProperties& section, const PointFields& f,
                                   const Vec3& end_force, const Vec3& end_moment) {
  NeumannOperators op;
  const Vec3 force = R * section.axial_shear.cwiseProduct(f.gamma);
  const Vec3 moment = R * section.bending_torsion.cwiseProduct(f.kappa);
  op.psi2 = R * section.axial_shear.asDiagonal() * R.transpose();
  op.psi1 = op.psi2 * rot3::skew(f.c_s) - rot3::skew(force);
  op.chi2 = R * section.bending_torsion.asDiagonal() * R.transpose();
  op.chi1 = -rot3::skew(moment);
  op.psi_bar = -(force - end_force);
  op.chi_bar = -(moment - end_moment);
  return op;
}

}  // namespace igabeam
