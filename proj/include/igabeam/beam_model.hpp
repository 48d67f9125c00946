#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "igabeam/banded.hpp"
#include "igabeam/rot3.hpp"
#include "igabeam/spline.hpp"

namespace igabeam {

/// Diagonal section constants. The beam axis is the second material axis:
/// C_N = diag(GA1, EA, GA3), C_M = diag(EJ1, GJ, EJ3), inertia per unit
/// length J = diag(J1, J0, J3).
struct SectionProperties {
  double mass_per_length = 0.0;  // kg/m
  Vec3 axial_shear = Vec3::Zero();  // N
  Vec3 bending_torsion = Vec3::Zero();  // N m^2
  Vec3 inertia = Vec3::Zero();  // kg m^2 / m

  Mat3 force_stiffness() const { return axial_shear.asDiagonal(); }
  Mat3 moment_stiffness() const { return bending_torsion.asDiagonal(); }
  Mat3 inertia_tensor() const { return inertia.asDiagonal(); }

  /// Throws std::invalid_argument unless every constant is positive and finite.
  void validate() const;
};

enum class SectionShape { Square, Circle };

struct SectionGeometry {
  SectionShape shape = SectionShape::Square;
  double size = 0.0;  // side length or diameter, m
  double shear_correction = 1.0;
  /// Torsion constant; the polar moment J1 + J3 when absent.
  std::optional<double> torsion_constant;
};

struct Material {
  double young = 0.0;  // Pa
  double poisson = 0.0;
  double density = 0.0;  // kg/m^3

  double shear_modulus() const { return young / (2.0 * (1.0 + poisson)); }
};

SectionProperties section_from_dimensions(const SectionGeometry& geometry, const Material& material);

/// Planar reference centroid line given as a Bezier curve over u in [0, 1].
/// Two control points give a straight beam. The cross-section frame has
/// d2 along the tangent, d3 = plane normal and d1 = d2 x d3.
struct ReferenceGeometry {
  std::vector<Vec3> control_points;
  Vec3 normal = Vec3::UnitZ();

  static ReferenceGeometry straight(const Vec3& start, const Vec3& end, const Vec3& normal);

  Vec3 position(double u) const;
  Vec3 derivative(double u, int order) const;
  double length() const;
  void validate() const;
};

/// Spline space, Greville grid, collocation matrices and the factored
/// point-to-control interpolation matrix D0. Built once per simulation.
struct Discretization {
  SplineSpace space;
  std::vector<double> points;
  CollocationOperators ops;
  BandedLU d0_lu;

  int size() const { return space.num_basis(); }

  /// Control values whose interpolant takes the given values at the collocation points.
  void interpolate(std::span<const Vec3> point_values, std::span<Vec3> controls) const;
  /// Interpolant and its arc-length derivative at the collocation points.
  void evaluate(std::span<const Vec3> controls, std::span<Vec3> values) const;
  void evaluate_ds(std::span<const Vec3> controls, std::span<Vec3> values) const;
  void evaluate_dss(std::span<const Vec3> controls, std::span<Vec3> values) const;
};

/// `n` follows the n+1 basis-function convention (indices 0..n).
Discretization make_discretization(int degree, int n, const ReferenceGeometry& geometry);

/// Banded product y_i = sum_j M_ij x_j on 3-vector blocks.
void apply_rows(const BandedRows& m, std::span<const Vec3> x, std::span<Vec3> y);
Vec3 apply_row(const BandedRows& m, int row, std::span<const Vec3> x);

/// Reference (initial) configuration data at the collocation points.
struct ReferenceConfiguration {
  std::vector<Vec3> centroid;  // control values of c0
  std::vector<Mat3> rotation;  // R0 per point
  std::vector<Vec3> curvature;  // K0 per point, material
  std::vector<Vec3> curvature_ds;  // K0,s from the spline fit of the point values
  std::vector<Vec3> strain;  // R0^T c0,s per point
  std::vector<Vec3> strain_ds;  // d/ds of R0^T c0,s
};

ReferenceConfiguration make_reference(const ReferenceGeometry& geometry, const Discretization& disc);

/// Current configuration: centroid control values, rotation, material
/// curvature and its s-derivative at each collocation point. K,s is
/// transported with K so that K_M,s = K,s - K0,s.
struct Configuration {
  std::vector<Vec3> centroid;
  std::vector<Mat3> rotation;
  std::vector<Vec3> curvature;
  std::vector<Vec3> curvature_ds;
};

Configuration reference_configuration(const ReferenceConfiguration& ref);

/// Scalar time modulation of a load or prescribed motion.
struct TimeHistory {
  enum class Kind { Constant, Ramp, Table };
  Kind kind = Kind::Constant;
  double ramp_start = 0.0;  // Ramp: 0 before start, linear to 1 at end, 1 after
  double ramp_end = 0.0;
  std::vector<std::array<double, 2>> table;  // Table: (t, f) pairs, linear, clamped at the ends

  double operator()(double t) const;
  bool operator==(const TimeHistory&) const = default;
};

struct VectorHistory {
  Vec3 value = Vec3::Zero();
  TimeHistory history;

  Vec3 operator()(double t) const { return value * history(t); }
  bool active() const { return !value.isZero(0.0); }
  bool operator==(const VectorHistory&) const = default;
};

/// Loads at one beam end: applied force and couple (used by Neumann rows) and
/// prescribed displacement / rotation vector (used by Dirichlet rows).
struct EndLoads {
  VectorHistory force;
  VectorHistory moment;
  VectorHistory displacement;
  VectorHistory rotation;
  bool operator==(const EndLoads&) const = default;
};

struct Loads {
  Vec3 gravity = Vec3::Zero();  // m/s^2, adds mu * g to the distributed force
  VectorHistory distributed_force;  // N/m
  VectorHistory distributed_moment;  // N
  std::array<EndLoads, 2> ends;  // [0] at s = 0, [1] at s = L

  Vec3 force_per_length(double mass_per_length, double t) const {
    return mass_per_length * gravity + distributed_force(t);
  }
  Vec3 moment_per_length(double t) const { return distributed_moment(t); }
  bool operator==(const Loads&) const = default;
};

/// Strains, stress resultants and inertia at one collocation point.
struct PointFields {
  Vec3 c_s, c_ss;
  Vec3 gamma, gamma_s;  // material force strain and its s-derivative
  Vec3 kappa, kappa_s;  // material curvature strain K - K0 and its s-derivative
  Vec3 force, moment;  // spatial resultants n = R C_N gamma, m = R C_M kappa
  Mat3 inertia;  // spatial j = R J R^T
};

/// Per-point strains Gamma_N = R^T c,s - R0^T c0,s and K_M = K - K0.
void material_strains(const Configuration& config, const ReferenceConfiguration& ref,
                      const Discretization& disc, std::span<PointFields> out);

/// Gamma_N,s by the product rule (R,s = R K~, c,ss from D2) and K_M,s from the
/// transported curvature derivative. Requires material_strains.
void strain_derivatives(const Configuration& config, const ReferenceConfiguration& ref,
                        const Discretization& disc, std::span<PointFields> fields);

/// Resultants and spatial inertia from the strains.
void stress_resultants(const Configuration& config, const SectionProperties& section,
                       std::span<PointFields> fields);

Mat3 spatial_inertia(const Mat3& R, const Vec3& inertia);

/// psi = R K~ C_N Gamma + R C_N Gamma,s + n_bar
Vec3 translational_rhs(const Mat3& R, const Vec3& curvature, const SectionProperties& section,
                       const PointFields& f, const Vec3& distributed_force);

/// chi = R K~ C_M K_M + R C_M K_M,s + c,s x (R C_N Gamma) + m_bar
Vec3 rotational_rhs(const Mat3& R, const Vec3& curvature, const SectionProperties& section,
                    const PointFields& f, const Vec3& distributed_moment);

/// Linearization of the end resultants around the current configuration:
/// delta n = psi1 theta + psi2 eta,s and delta m = chi1 theta + chi2 theta,s,
/// with the defects psi_bar = -(n - n_c) and chi_bar = -(m - m_c).
struct NeumannOperators {
  Mat3 psi1, psi2, chi1, chi2;
  Vec3 psi_bar, chi_bar;
};

/// `end_force` / `end_moment` are the target resultants at that end (the
/// applied load at s = L, its negative at s = 0).
NeumannOperators neumann_operators(const Mat3& R, const SectionProperties& section, const PointFields& f,
                                   const Vec3& end_force, const Vec3& end_moment);

}  // namespace igabeam
