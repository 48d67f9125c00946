#include "igabeam/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

namespace igabeam {

std::string_view to_string(SolverVariant v) {
  switch (v) {
    case SolverVariant::ConsistentNonlinear:
      return "cn-nl";
    case SolverVariant::LumpedNonlinear:
      return "lu-nl";
    case SolverVariant::LumpedLinear:
      return "lu-l";
  }
  return "?";
}

SolverVariant parse_variant(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "cn-nl") return SolverVariant::ConsistentNonlinear;
  if (s == "lu-nl") return SolverVariant::LumpedNonlinear;
  if (s == "lu-l") return SolverVariant::LumpedLinear;
  throw std::invalid_argument("unknown solver variant '" + std::string(text) + "' (expected cn-nl, lu-nl or lu-l)");
}

std::string_view to_string(NeumannCoupling c) { return c == NeumannCoupling::Current ? "current" : "lagged"; }

NeumannCoupling parse_neumann_coupling(std::string_view text) {
  if (text == "current") return NeumannCoupling::Current;
  if (text == "lagged") return NeumannCoupling::Lagged;
  throw std::invalid_argument("unknown Neumann coupling '" + std::string(text) + "' (expected current or lagged)");
}

namespace {

int end_row(int end, int n) { return end == 0 ? 0 : n - 1; }

double diagonal_entry(const BandedRows& m, int row) { return m.row(row)[row - m.first(row)]; }

void copy_normalized_row(const BandedRows& from, BandedRows& to, int row) {
  const double d = diagonal_entry(from, row);
  if (d == 0.0) throw std::runtime_error("zero diagonal in boundary derivative row");
  to.set_first(row, from.first(row));
  auto dst = to.row(row);
  const auto src = from.row(row);
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[k] / d;
}

double max_abs(std::span<const Vec3> v) {
  double m = 0.0;
  for (const Vec3& x : v) m = std::max(m, x.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

MassBlocks assemble_mass_blocks(const CollocationOperators& ops, const BoundarySpec& bc) {
  MassBlocks m{ops.d0, ops.d0};
  const int n = ops.d0.rows();
  for (int e = 0; e < 2; ++e) {
    const int k = end_row(e, n);
    if (bc.ends[e].translation == BoundaryKind::Neumann) copy_normalized_row(ops.d1, m.translational, k);
    if (bc.ends[e].rotation == BoundaryKind::Neumann) copy_normalized_row(ops.d1, m.rotational, k);
  }
  return m;
}

double spectral_radius(const BandedRows& m) {
  const int n = m.rows();
  const std::vector<double> d = m.dense();
  Eigen::MatrixXd a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.data(), n, n);
  a -= Eigen::MatrixXd::Identity(n, n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius_power(const BandedRows& m, double tolerance, int max_iterations) {
  const int n = m.rows();
  // y = (M - I) x, applied twice so that a dominant +-rho pair collapses to rho^2.
  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      const auto row = m.row(i);
      double acc = -x[i];
      for (int k = 0; k < m.width(); ++k) acc += row[k] * x[m.first(i) + k];
      y[i] = acc;
    }
    return y;
  };
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.7 * i + 0.3);
  x.normalize();
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd y = apply(apply(x));
    const double mu = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    if ((y - mu * x).norm() <= tolerance * std::abs(mu)) return std::sqrt(std::abs(mu));
    x = y / ny;
  }
  throw std::runtime_error("power iteration did not converge");
}

MulticorrectorResult multicorrector_solve(const BandedRows& m, std::span<const Vec3> b, std::span<Vec3> x,
                                          std::span<Vec3> residual, const MulticorrectorSettings& settings) {
  MulticorrectorResult out;
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    x[i].setZero();
    residual[i] = b[i];
  }
  out.rhs_norm = max_abs(b);
  out.residual = out.rhs_norm;
  if (out.rhs_norm == 0.0 && !settings.fixed_passes) return out;
  int growth = 0;
  while (out.passes < settings.max_passes) {
    for (std::size_t i = 0; i < n; ++i) x[i] += residual[i];
    ++out.passes;
    apply_rows(m, x, residual);
    for (std::size_t i = 0; i < n; ++i) residual[i] = b[i] - residual[i];
    const double r = max_abs(residual);
    if (!std::isfinite(r)) throw SolverError("multicorrector produced a non-finite residual", -1);
    // Non-normal iteration matrices (p >= 6, small n) shrink the residual
    // non-monotonically, so only growth above the starting residual counts.
    growth = (r > out.residual && r > out.rhs_norm) ? growth + 1 : 0;
    out.residual = r;
    if (growth >= 3) throw SolverError("multicorrector residual grew over three consecutive passes", -1);
    if (!settings.fixed_passes && r <= settings.tolerance * out.rhs_norm) break;
  }
  return out;
}

LinearizedRotation linearized_rotational_balance(const Mat3& j, const Vec3& w_p, const Vec3& alpha_prev,
                                                 const Vec3& chi, double h) {
  LinearizedRotation lr;
  lr.matrix = j + rot3::skew(0.5 * h * w_p + 0.25 * h * h * alpha_prev) * j;
  lr.rhs = chi - (w_p + 0.5 * h * alpha_prev).cross(j * w_p);
  return lr;
}

RotationalResidual rotational_residual(const Mat3& j, const Vec3& w_p, const Vec3& alpha, const Vec3& chi,
                                       double h) {
  const Vec3 wc = w_p + 0.5 * h * alpha;
  const Vec3 jw = j * wc;
  const Vec3 ja = j * alpha;
  const Vec3 gyro = wc.cross(jw);
  RotationalResidual r;
  r.residual = ja + gyro - chi;
  r.tangent = j + 0.5 * h * (rot3::skew(wc) * j - rot3::skew(jw));
  r.scale = std::max({chi.cwiseAbs().maxCoeff(), ja.cwiseAbs().maxCoeff(), gyro.cwiseAbs().maxCoeff()});
  return r;
}

std::shared_ptr<const BeamProblem> BeamProblem::create(ReferenceGeometry geometry, int degree, int n,
                                                       SectionProperties section, BoundarySpec boundary,
                                                       Loads loads, double time_step) {
  section.validate();
  if (!(time_step > 0.0) || !std::isfinite(time_step)) throw std::invalid_argument("time step must be positive");
  if (n < degree) throw std::invalid_argument("n must be at least the spline degree");
  Discretization disc = make_discretization(degree, n, geometry);
  ReferenceConfiguration reference = make_reference(geometry, disc);
  return std::make_shared<const BeamProblem>(BeamProblem{std::move(geometry), std::move(disc), std::move(reference),
                                                         section, boundary, std::move(loads), time_step});
}

struct BeamSolver::StepInputs {
  double h = 0.0;
  double beta = 0.0;  // weight of the new acceleration in the next increment
  double boundary_time = 0.0;  // time of the configuration the next increment produces
  std::span<const Vec3> velocity;  // v_p (v^0 on the initial solve)
  std::span<const Vec3> angular_velocity;  // w_p (w^0)
  bool initial = false;
};

BeamSolver::BeamSolver(std::shared_ptr<const BeamProblem> problem, SolverSettings settings,
                       const InitialConditions& ic)
    : problem_(std::move(problem)), settings_(settings) {
  if (!problem_) throw std::invalid_argument("null problem");
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  mass_ = assemble_mass_blocks(P.disc.ops, P.boundary);
  state_ = apply_initial_conditions(P.reference, P.geometry, P.disc, ic);
  predictor_.resize(n);
  fields_.resize(static_cast<std::size_t>(n));
  for (auto* v : {&psi_, &chi_, &w_points_, &alpha_prev_points_, &alpha_points_, &rhs_, &delta_, &residual_,
                  &scratch_a_, &scratch_b_, &scratch_c_, &alpha_lag_})
    v->assign(static_cast<std::size_t>(n), Vec3::Zero());

  if (settings_.variant == SolverVariant::ConsistentNonlinear) {
    const int p = P.disc.space.degree();
    int lower = 0, upper = 0;
    for (int i = 0; i < n; ++i) {
      lower = std::max(lower, i - P.disc.ops.d0.first(i));
      upper = std::max(upper, P.disc.ops.d0.first(i) + p - i);
    }
    block_lu_ = BandedLU(3 * n, 3 * lower + 2, 3 * upper + 2);
  }

  StepInputs in;
  in.h = P.time_step;
  in.beta = 0.5 * in.h * in.h;
  in.boundary_time = in.h;
  in.velocity = state_.velocity;
  in.angular_velocity = state_.angular_velocity;
  in.initial = true;
  evaluate_fields(0.0);
  solve_accelerations(in, initial_stats_);
  check_finite();
}

void BeamSolver::evaluate_fields(double t) {
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  material_strains(state_.config, P.reference, P.disc, fields_);
  strain_derivatives(state_.config, P.reference, P.disc, fields_);
  stress_resultants(state_.config, P.section, fields_);
  const Vec3 nbar = P.loads.force_per_length(P.section.mass_per_length, t);
  const Vec3 mbar = P.loads.moment_per_length(t);
  for (int i = 0; i < n; ++i) {
    const Mat3& R = state_.config.rotation[i];
    const Vec3& K = state_.config.curvature[i];
    psi_[i] = translational_rhs(R, K, P.section, fields_[i], nbar);
    chi_[i] = rotational_rhs(R, K, P.section, fields_[i], mbar);
  }
}

StepStats BeamSolver::step() {
  const BeamProblem& P = *problem_;
  const double h = P.time_step;
  StepStats stats;
  predict_increments(state_, h, predictor_);
  alpha_lag_ = state_.angular_acceleration;
  update_configuration(state_, predictor_, P.disc, scratch_a_, scratch_b_, scratch_c_);
  state_.time = (state_.step + 1) * h;
  ++state_.step;

  StepInputs in;
  in.h = h;
  in.beta = h * h;
  in.boundary_time = state_.time + h;
  in.velocity = predictor_.velocity;
  in.angular_velocity = predictor_.angular_velocity;
  evaluate_fields(state_.time);
  solve_accelerations(in, stats);
  correct_velocities(state_, predictor_, h);
  check_finite();
  return stats;
}

void BeamSolver::solve_accelerations(const StepInputs& in, StepStats& stats) {
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  for (int e = 0; e < 2; ++e) {
    const int k = end_row(e, n);
    const double sign = e == 0 ? -1.0 : 1.0;
    const EndLoads& L = P.loads.ends[e];
    neumann_[e] = neumann_operators(state_.config.rotation[k], P.section, fields_[k],
                                    sign * L.force(in.boundary_time), sign * L.moment(in.boundary_time));
  }
  P.disc.evaluate(in.angular_velocity, w_points_);
  P.disc.evaluate(alpha_lag_, alpha_prev_points_);

  if (in.initial) {
    solve_rotational_initial(in, stats);
  } else if (settings_.variant == SolverVariant::LumpedLinear) {
    solve_rotational_lumped_linear(in, stats);
  } else {
    solve_rotational_newton(in, stats);
  }
  solve_translational(in, stats);
}

// Boundary rows of the rotational system. Lumped rows hold the scaled target
// of the normalized mass row; with `residual_form` the current alpha's row
// value is subtracted (Newton correction right-hand side).
void BeamSolver::fill_rotational_boundary(const StepInputs& in, std::span<Vec3> rhs, bool residual_form) {
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  const BandedRows& d1 = P.disc.ops.d1;
  for (int e = 0; e < 2; ++e) {
    const int k = end_row(e, n);
    Vec3 target;
    if (P.boundary.ends[e].rotation == BoundaryKind::Dirichlet) {
      const Mat3 goal = rot3::exp_so3(P.loads.ends[e].rotation(in.boundary_time)) * P.reference.rotation[k];
      const Vec3 theta = rot3::log_so3(goal * state_.config.rotation[k].transpose());
      target = (theta - in.h * w_points_[k]) / in.beta;
    } else {
      const NeumannOperators& op = neumann_[e];
      const Vec3 ws = apply_row(d1, k, in.angular_velocity);
      const Vec3 c0 = op.chi_bar - in.h * (op.chi1 * w_points_[k] + op.chi2 * ws);
      target = op.chi2.partialPivLu().solve(c0 - in.beta * op.chi1 * alpha_prev_points_[k]) /
               (in.beta * diagonal_entry(d1, k));
    }
    if (residual_form) target -= apply_row(mass_.rotational, k, state_.angular_acceleration);
    rhs[k] = target;
  }
}

void BeamSolver::solve_rotational_lumped_linear(const StepInputs& in, StepStats& stats) {
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  for (int i = 1; i + 1 < n; ++i) {
    const LinearizedRotation lr =
        linearized_rotational_balance(fields_[i].inertia, w_points_[i], alpha_prev_points_[i], chi_[i], in.h);
    rhs_[i] = lr.matrix.inverse() * lr.rhs;
  }
  fill_rotational_boundary(in, rhs_, false);
  const auto mc = multicorrector_solve(mass_.rotational, rhs_, state_.angular_acceleration, residual_,
                                       settings_.corrector);
  stats.corrector_passes += mc.passes;
}

namespace {

void set_block(BandedLU& lu, int bi, int bj, const Mat3& block) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (block(r, c) != 0.0) lu.set(3 * bi + r, 3 * bj + c, block(r, c));
}

void add_block(BandedLU& lu, int bi, int bj, const Mat3& block) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (block(r, c) != 0.0) lu.add(3 * bi + r, 3 * bj + c, block(r, c));
}

}  // namespace

// Newton iterations on the rotational balance. Interior rows carry the
// residual j alpha + w_c x j w_c - chi. The consistent variant solves the
// block-banded correction system directly, the lumped one runs the
// multicorrector on T^{-1}-scaled rows. On the initial solve the balance is
// linear (w_c = w^0) and one correction is exact.
void BeamSolver::solve_rotational_newton(const StepInputs& in, StepStats& stats) {
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  const BandedRows& d0 = P.disc.ops.d0;
  const BandedRows& d1 = P.disc.ops.d1;
  const int width = d0.width();
  const bool consistent = settings_.variant == SolverVariant::ConsistentNonlinear;
  const double h_gyro = in.initial ? 0.0 : in.h;
  const int max_iterations = in.initial ? 1 : settings_.newton.max_iterations;
  std::vector<double>& packed = block_buffer_;
  std::vector<Mat3>& tangents = tangent_buffer_;
  tangents.resize(static_cast<std::size_t>(n));
  auto& alpha = state_.angular_acceleration;

  // Neumann targets of the consistent rows: beta (chi2 alpha,s + chi1 alpha) = c0.
  std::array<Vec3, 2> c0{Vec3::Zero(), Vec3::Zero()};
  std::array<Vec3, 2> dirichlet{Vec3::Zero(), Vec3::Zero()};
  if (consistent) {
    for (int e = 0; e < 2; ++e) {
      const int k = end_row(e, n);
      if (P.boundary.ends[e].rotation == BoundaryKind::Dirichlet) {
        const Mat3 goal = rot3::exp_so3(P.loads.ends[e].rotation(in.boundary_time)) * P.reference.rotation[k];
        const Vec3 theta = rot3::log_so3(goal * state_.config.rotation[k].transpose());
        dirichlet[e] = (theta - in.h * w_points_[k]) / in.beta;
      } else {
        const NeumannOperators& op = neumann_[e];
        c0[e] = op.chi_bar - in.h * (op.chi1 * w_points_[k] + op.chi2 * apply_row(d1, k, in.angular_velocity));
      }
    }
  }

  int iterations = 0;
  for (;;) {
    // Residual at the current iterate.
    P.disc.evaluate(alpha, alpha_points_);
    double rmax = 0.0, scale = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const RotationalResidual rr = rotational_residual(fields_[i].inertia, w_points_[i], alpha_points_[i], chi_[i], h_gyro);
      tangents[i] = rr.tangent;
      rhs_[i] = -rr.residual;
      rmax = std::max(rmax, rr.residual.cwiseAbs().maxCoeff());
      scale = std::max(scale, rr.scale);
    }
    double bmax = 0.0, bscale = 0.0;
    if (consistent) {
      for (int e = 0; e < 2; ++e) {
        const int k = end_row(e, n);
        if (P.boundary.ends[e].rotation == BoundaryKind::Dirichlet) {
          rhs_[k] = dirichlet[e] - alpha[k];
          bscale = std::max(bscale, dirichlet[e].cwiseAbs().maxCoeff());
        } else {
          const NeumannOperators& op = neumann_[e];
          rhs_[k] = (c0[e] - in.beta * (op.chi2 * apply_row(d1, k, alpha) + op.chi1 * alpha[k])) / in.beta;
          bscale = std::max(bscale, c0[e].cwiseAbs().maxCoeff() / in.beta);
        }
        bmax = std::max(bmax, rhs_[k].cwiseAbs().maxCoeff());
      }
    } else {
      fill_rotational_boundary(in, rhs_, true);
      for (int e = 0; e < 2; ++e) {
        const int k = end_row(e, n);
        bmax = std::max(bmax, rhs_[k].cwiseAbs().maxCoeff());
        bscale = std::max(bscale, apply_row(mass_.rotational, k, alpha).cwiseAbs().maxCoeff());
      }
    }
    const double tol = settings_.newton.tolerance;
    // The consistent boundary rows are linear and solved exactly.
    if (iterations > 0 && rmax <= tol * scale && (consistent || bmax <= tol * std::max(bscale, max_abs(alpha))))
      break;
    if (iterations >= max_iterations) {
      if (in.initial) break;
      std::ostringstream msg;
      msg << "Newton iteration on the rotational balance did not converge (residual " << rmax << ", scale " << scale
          << ")";
      throw SolverError(msg.str(), state_.step);
    }

    // Correction.
    if (consistent) {
      block_lu_.set_zero();
      for (int i = 0; i < n; ++i) {
        const int f = d0.first(i);
        const bool boundary = i == 0 || i == n - 1;
        if (!boundary) {
          const auto row = d0.row(i);
          for (int k = 0; k < width; ++k)
            if (row[k] != 0.0) set_block(block_lu_, i, f + k, row[k] * tangents[i]);
          continue;
        }
        const int e = i == 0 ? 0 : 1;
        if (P.boundary.ends[e].rotation == BoundaryKind::Dirichlet) {
          set_block(block_lu_, i, i, Mat3::Identity());
        } else {
          const NeumannOperators& op = neumann_[e];
          const int g = d1.first(i);
          const auto row = d1.row(i);
          for (int k = 0; k < width; ++k)
            if (row[k] != 0.0) set_block(block_lu_, i, g + k, row[k] * op.chi2);
          add_block(block_lu_, i, i, op.chi1);
        }
      }
      block_lu_.factor();
      packed.resize(static_cast<std::size_t>(3 * n));
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) packed[static_cast<std::size_t>(3 * i + c)] = rhs_[i][c];
      block_lu_.solve(packed);
      for (int i = 0; i < n; ++i) alpha[i] += Vec3(packed[3 * i], packed[3 * i + 1], packed[3 * i + 2]);
    } else {
      for (int i = 1; i + 1 < n; ++i) rhs_[i] = tangents[i].inverse() * rhs_[i];
      const auto mc = multicorrector_solve(mass_.rotational, rhs_, delta_, residual_, settings_.corrector);
      stats.corrector_passes += mc.passes;
      for (int i = 0; i < n; ++i) alpha[i] += delta_[i];
    }
    ++iterations;
  }
  stats.newton_iterations += iterations;
}

void BeamSolver::solve_rotational_initial(const StepInputs& in, StepStats& stats) {
  // alpha^0 = j^{-1} (chi - w^0 x j w^0) is linear: one exact correction from zero.
  for (auto& a : state_.angular_acceleration) a.setZero();
  StepStats local;
  solve_rotational_newton(in, local);
  stats.corrector_passes += local.corrector_passes;
}

void BeamSolver::solve_translational(const StepInputs& in, StepStats& stats) {
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  const BandedRows& d0 = P.disc.ops.d0;
  const BandedRows& d1 = P.disc.ops.d1;
  const double mu = P.section.mass_per_length;
  const bool consistent = settings_.variant == SolverVariant::ConsistentNonlinear;
  // Rotational coupling of the Neumann force rows: the new alpha when it is
  // already known exactly, the previous step's otherwise.
  const bool exact_coupling =
      consistent || in.initial || settings_.neumann_coupling == NeumannCoupling::Current;
  const std::span<const Vec3> coupling = exact_coupling ? std::span<const Vec3>(state_.angular_acceleration)
                                                        : std::span<const Vec3>(alpha_lag_);

  std::array<Vec3, 2> end_rhs;  // unscaled right-hand sides of the end rows
  for (int e = 0; e < 2; ++e) {
    const int k = end_row(e, n);
    if (P.boundary.ends[e].translation == BoundaryKind::Dirichlet) {
      const Vec3 goal = P.reference.centroid[k] + P.loads.ends[e].displacement(in.boundary_time);
      end_rhs[e] = (goal - state_.config.centroid[k] - in.h * in.velocity[k]) / in.beta;
    } else {
      const NeumannOperators& op = neumann_[e];
      const Vec3 vs = apply_row(d1, k, in.velocity);
      const Vec3 f0 = op.psi_bar - in.h * (op.psi1 * w_points_[k] + op.psi2 * vs);
      end_rhs[e] = f0 - in.beta * op.psi1 * coupling[k];
    }
  }

  if (!consistent) {
    for (int i = 1; i + 1 < n; ++i) rhs_[i] = psi_[i] / mu;
    for (int e = 0; e < 2; ++e) {
      const int k = end_row(e, n);
      if (P.boundary.ends[e].translation == BoundaryKind::Dirichlet)
        rhs_[k] = end_rhs[e];
      else
        rhs_[k] = neumann_[e].psi2.partialPivLu().solve(end_rhs[e]) / (in.beta * diagonal_entry(d1, k));
    }
    const auto mc = multicorrector_solve(mass_.translational, rhs_, state_.acceleration, residual_,
                                         settings_.corrector);
    stats.corrector_passes += mc.passes;
    return;
  }

  const int width = d0.width();
  block_lu_.set_zero();
  for (int i = 0; i < n; ++i) {
    const bool boundary = i == 0 || i == n - 1;
    if (!boundary) {
      const auto row = d0.row(i);
      for (int k = 0; k < width; ++k)
        if (row[k] != 0.0) set_block(block_lu_, i, d0.first(i) + k, (mu * row[k]) * Mat3::Identity());
      rhs_[i] = psi_[i];
      continue;
    }
    const int e = i == 0 ? 0 : 1;
    if (P.boundary.ends[e].translation == BoundaryKind::Dirichlet) {
      set_block(block_lu_, i, i, Mat3::Identity());
    } else {
      const auto row = d1.row(i);
      for (int k = 0; k < width; ++k)
        if (row[k] != 0.0) set_block(block_lu_, i, d1.first(i) + k, (in.beta * row[k]) * neumann_[e].psi2);
    }
    rhs_[i] = end_rhs[e];
  }
  block_lu_.factor();
  std::vector<double>& packed = block_buffer_;
  packed.resize(static_cast<std::size_t>(3 * n));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) packed[static_cast<std::size_t>(3 * i + c)] = rhs_[i][c];
  block_lu_.solve(packed);
  for (int i = 0; i < n; ++i) state_.acceleration[i] = Vec3(packed[3 * i], packed[3 * i + 1], packed[3 * i + 2]);
}

void BeamSolver::check_finite() const {
  for (int i = 0; i < state_.size(); ++i)
    if (!state_.acceleration[i].allFinite() || !state_.angular_acceleration[i].allFinite())
      throw SolverError("non-finite acceleration at step " + std::to_string(state_.step), state_.step);
}

Vec3 BeamSolver::position_at(double u) const {
  const BasisValues b = eval_basis(problem_->disc.space, u, 0);
  Vec3 x = Vec3::Zero();
  for (std::size_t k = 0; k < b.values[0].size(); ++k) x += b.values[0][k] * state_.config.centroid[b.first + k];
  return x;
}

Vec3 BeamSolver::displacement_at(double u) const { return position_at(u) - problem_->geometry.position(u); }

namespace {

// Calls f(u, weight * ds/du) over a Gauss rule on every knot span.
template <class F>
void integrate_over_beam(const BeamProblem& P, F&& f) {
  const auto& knots = P.disc.space.knots();
  const GaussRule rule = gauss_legendre(P.disc.space.degree() + 3);
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double a = knots[s], b = knots[s + 1];
    if (b <= a) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
      const double w = 0.5 * (b - a) * rule.weights[q] * P.geometry.derivative(u, 1).norm();
      f(u, w);
    }
  }
}

Vec3 interpolate_at(const BasisValues& b, std::span<const Vec3> controls) {
  Vec3 x = Vec3::Zero();
  for (std::size_t k = 0; k < b.values[0].size(); ++k) x += b.values[0][k] * controls[b.first + k];
  return x;
}

}  // namespace

Vec3 BeamSolver::linear_momentum() const {
  const BeamProblem& P = *problem_;
  Vec3 total = Vec3::Zero();
  integrate_over_beam(P, [&](double u, double w) {
    total += w * P.section.mass_per_length * interpolate_at(eval_basis(P.disc.space, u, 0), state_.velocity);
  });
  return total;
}

Vec3 BeamSolver::angular_momentum(const Vec3& origin) const {
  const BeamProblem& P = *problem_;
  const int n = P.disc.size();
  // Spin density j w is only known at the collocation points; integrate its interpolant.
  std::vector<Vec3> wp(static_cast<std::size_t>(n)), spin(static_cast<std::size_t>(n)), spin_c(static_cast<std::size_t>(n));
  P.disc.evaluate(state_.angular_velocity, wp);
  for (int i = 0; i < n; ++i) spin[i] = spatial_inertia(state_.config.rotation[i], P.section.inertia) * wp[i];
  P.disc.interpolate(spin, spin_c);
  Vec3 total = Vec3::Zero();
  integrate_over_beam(P, [&](double u, double w) {
    const BasisValues b = eval_basis(P.disc.space, u, 0);
    const Vec3 x = interpolate_at(b, state_.config.centroid);
    const Vec3 v = interpolate_at(b, state_.velocity);
    total += w * ((x - origin).cross(P.section.mass_per_length * v) + interpolate_at(b, spin_c));
  });
  return total;
}

Vec3 BeamSolver::center_of_mass() const {
  const BeamProblem& P = *problem_;
  Vec3 moment = Vec3::Zero();
  double mass = 0.0;
  integrate_over_beam(P, [&](double u, double w) {
    moment += w * interpolate_at(eval_basis(P.disc.space, u, 0), state_.config.centroid);
    mass += w;
  });
  return moment / mass;
}

}  // namespace igabeam
