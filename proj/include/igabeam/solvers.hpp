#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "igabeam/banded.hpp"
#include "igabeam/beam_model.hpp"
#include "igabeam/integrator.hpp"

namespace igabeam {

enum class SolverVariant {
  ConsistentNonlinear,  // CN-NL: banded direct solves, Newton on the rotational balance
  LumpedNonlinear,  // LU-NL: predictor-multicorrector inside Newton
  LumpedLinear,  // LU-L: predictor-multicorrector on the linearized rotational balance
};

std::string_view to_string(SolverVariant v);
/// Accepts "cn-nl", "lu-nl", "lu-l" (case-insensitive). Throws std::invalid_argument.
SolverVariant parse_variant(std::string_view text);

enum class BoundaryKind { Dirichlet, Neumann };

struct EndCondition {
  BoundaryKind translation = BoundaryKind::Neumann;
  BoundaryKind rotation = BoundaryKind::Neumann;

  static EndCondition clamped() { return {BoundaryKind::Dirichlet, BoundaryKind::Dirichlet}; }
  static EndCondition hinged() { return {BoundaryKind::Dirichlet, BoundaryKind::Neumann}; }
  static EndCondition free() { return {BoundaryKind::Neumann, BoundaryKind::Neumann}; }
  bool operator==(const EndCondition&) const = default;
};

/// [0] at s = 0, [1] at s = L.
struct BoundarySpec {
  std::array<EndCondition, 2> ends;
  bool operator==(const BoundarySpec&) const = default;
};

/// Scalar collocation matrices of the lumped systems: D0 rows at interior
/// points and Dirichlet ends, D1 rows at Neumann ends normalized to a unit
/// diagonal. They hold basis data only.
struct MassBlocks {
  BandedRows translational;
  BandedRows rotational;
};

MassBlocks assemble_mass_blocks(const CollocationOperators& ops, const BoundarySpec& bc);

/// rho(M - I) from the eigenvalues of the dense matrix (Hessenberg QR).
double spectral_radius(const BandedRows& m);
/// rho(M - I) by power iteration on (M - I)^2 with restarts; throws
/// std::runtime_error when the estimate does not settle within max_iterations.
double spectral_radius_power(const BandedRows& m, double tolerance = 1e-10, int max_iterations = 200000);

struct MulticorrectorSettings {
  int max_passes = 30;
  double tolerance = 1e-10;  // on ||b - M x||_inf / ||b||_inf
  bool fixed_passes = false;  // run exactly max_passes (timing mode)
  bool operator==(const MulticorrectorSettings&) const = default;
};

struct MulticorrectorResult {
  int passes = 0;
  double residual = 0.0;  // ||b - M x||_inf after the last pass
  double rhs_norm = 0.0;  // ||b||_inf
};

/// x^0 = 0, x^{k+1} = x^k + (b - M x^k) with the identity as lumped matrix.
/// `residual` is scratch of the same size. Throws SolverError when the
/// residual grows over three consecutive passes while above ||b||.
MulticorrectorResult multicorrector_solve(const BandedRows& m, std::span<const Vec3> b, std::span<Vec3> x,
                                          std::span<Vec3> residual, const MulticorrectorSettings& settings);

struct NewtonSettings {
  // Lumped solves contract by about rho(M - I)^r per iteration, which needs
  // more than 20 iterations for p = 6 with r = 30 from a cold start.
  int max_iterations = 50;
  double tolerance = 1e-10;  // relative to the magnitude of the balance terms
  bool operator==(const NewtonSettings&) const = default;
};

/// Rotational coupling term of the lumped Neumann force rows. The rotational
/// system does not depend on the translational accelerations, so it is solved
/// first and the force rows can use the new angular accelerations (Current).
/// Lagged uses the previous step's values instead.
enum class NeumannCoupling { Current, Lagged };

std::string_view to_string(NeumannCoupling c);
/// Accepts "current", "lagged".
NeumannCoupling parse_neumann_coupling(std::string_view text);

struct SolverSettings {
  SolverVariant variant = SolverVariant::LumpedLinear;
  NeumannCoupling neumann_coupling = NeumannCoupling::Current;
  MulticorrectorSettings corrector;
  NewtonSettings newton;
  bool operator==(const SolverSettings&) const = default;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Everything that defines a simulation apart from the time stepping state.
struct BeamProblem {
  ReferenceGeometry geometry;
  Discretization disc;
  ReferenceConfiguration reference;
  SectionProperties section;
  BoundarySpec boundary;
  Loads loads;
  double time_step = 0.0;

  static std::shared_ptr<const BeamProblem> create(ReferenceGeometry geometry, int degree, int n,
                                                   SectionProperties section, BoundarySpec boundary, Loads loads,
                                                   double time_step);
};

struct StepStats {
  int newton_iterations = 0;
  int corrector_passes = 0;
};

/// Lumped linearized rotational balance at one point:
/// [j + ((h/2) w_p + (h^2/4) alpha_prev)~ j] alpha = chi - (w_p + (h/2) alpha_prev) x (j w_p).
struct LinearizedRotation {
  Mat3 matrix;
  Vec3 rhs;
};
LinearizedRotation linearized_rotational_balance(const Mat3& j, const Vec3& w_p, const Vec3& alpha_prev,
                                                 const Vec3& chi, double h);

/// Residual j alpha + w_c x (j w_c) - chi and its tangent with w_c = w_p + (h/2) alpha.
struct RotationalResidual {
  Vec3 residual;
  Mat3 tangent;
  double scale;  // magnitude of the summed terms, for relative tolerances
};
RotationalResidual rotational_residual(const Mat3& j, const Vec3& w_p, const Vec3& alpha, const Vec3& chi, double h);

/// Explicit central-difference integrator for one beam. Construction solves
/// the initial accelerations; step() advances by one time step.
class BeamSolver {
 public:
  BeamSolver(std::shared_ptr<const BeamProblem> problem, SolverSettings settings, const InitialConditions& ic = {});

  StepStats step();

  const KinematicState& state() const { return state_; }
  const BeamProblem& problem() const { return *problem_; }
  const SolverSettings& settings() const { return settings_; }
  const MassBlocks& mass_blocks() const { return mass_; }
  const StepStats& initial_stats() const { return initial_stats_; }

  /// c(u) - c0(u) from the control values.
  Vec3 displacement_at(double u) const;
  Vec3 position_at(double u) const;
  /// Linear and angular (about `origin`) momentum by Gauss quadrature of the
  /// interpolated fields.
  Vec3 linear_momentum() const;
  Vec3 angular_momentum(const Vec3& origin) const;
  Vec3 center_of_mass() const;

 private:
  struct StepInputs;

  void evaluate_fields(double t);
  void solve_accelerations(const StepInputs& in, StepStats& stats);
  void solve_rotational_lumped_linear(const StepInputs& in, StepStats& stats);
  void solve_rotational_newton(const StepInputs& in, StepStats& stats);
  void solve_rotational_initial(const StepInputs& in, StepStats& stats);
  void solve_translational(const StepInputs& in, StepStats& stats);
  void fill_rotational_boundary(const StepInputs& in, std::span<Vec3> rhs, bool residual_form);
  void check_finite() const;

  std::shared_ptr<const BeamProblem> problem_;
  SolverSettings settings_;
  MassBlocks mass_;
  KinematicState state_;
  StepStats initial_stats_;

  // Workspace, sized once.
  Predictor predictor_;
  std::vector<PointFields> fields_;
  std::vector<Vec3> psi_, chi_;
  std::vector<Vec3> w_points_, alpha_prev_points_, alpha_points_;
  std::vector<Vec3> rhs_, delta_, residual_, scratch_a_, scratch_b_, scratch_c_;
  std::vector<Vec3> alpha_lag_;
  std::vector<Mat3> tangent_buffer_;
  std::vector<double> block_buffer_;
  std::array<NeumannOperators, 2> neumann_;
  BandedLU block_lu_;
};

}  // namespace igabeam
