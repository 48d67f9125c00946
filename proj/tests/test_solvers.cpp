#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "igabeam/scenario.hpp"
#include "igabeam/solvers.hpp"

using namespace igabeam;

namespace {

BandedRows diagonal(std::initializer_list<double> d) {
  BandedRows m(static_cast<int>(d.size()), static_cast<int>(d.size()), 1);
  int i = 0;
  for (double v : d) {
    m.set_first(i, i);
    m.row(i)[0] = v;
    ++i;
  }
  return m;
}

BandedRows dense_rows(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  BandedRows m(n, n, n);
  for (int i = 0; i < n; ++i) {
    m.set_first(i, 0);
    for (int j = 0; j < n; ++j) m.row(i)[j] = a(i, j);
  }
  return m;
}

CollocationOperators operators(int p, int nb) {
  const SplineSpace space = SplineSpace::open_uniform(p, nb);
  const auto g = greville_abscissae(space);
  return collocation_operators(space, g, ReferenceJacobian::constant(1.0, g.size()));
}

Eigen::MatrixXd to_dense(const BandedRows& m) {
  Eigen::MatrixXd a(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  return a;
}

}  // namespace

TEST_CASE("variant names") {
  CHECK(parse_variant("cn-nl") == SolverVariant::ConsistentNonlinear);
  CHECK(parse_variant("LU-NL") == SolverVariant::LumpedNonlinear);
  CHECK(parse_variant("lu-l") == SolverVariant::LumpedLinear);
  CHECK(to_string(SolverVariant::LumpedLinear) == "lu-l");
  CHECK_THROWS_AS(parse_variant("euler"), std::invalid_argument);
  CHECK(parse_neumann_coupling("lagged") == NeumannCoupling::Lagged);
  CHECK_THROWS_AS(parse_neumann_coupling("sometimes"), std::invalid_argument);
}

TEST_CASE("mass blocks") {
  const auto lin = operators(1, 2);
  const BoundarySpec dd{{EndCondition::clamped(), EndCondition::clamped()}};
  const MassBlocks m = assemble_mass_blocks(lin, dd);
  CHECK(to_dense(m.translational).isApprox(Eigen::MatrixXd::Identity(2, 2)));
  CHECK(spectral_radius(m.translational) == doctest::Approx(0.0).scale(1.0));

  const auto ops = operators(4, 21);
  for (const char* bc : {"dd", "nn"}) {
    const MassBlocks h = assemble_mass_blocks(ops, parse_boundary_pair(bc));
    CHECK(h.translational == h.rotational);
  }
  const MassBlocks hinge = assemble_mass_blocks(ops, {{EndCondition::hinged(), EndCondition::free()}});
  CHECK(!(hinge.translational == hinge.rotational));
  for (int i = 1; i + 1 < 21; ++i) {
    double sum = 0.0;
    for (int j = 0; j < 21; ++j) {
      sum += hinge.translational(i, j);
      CHECK(hinge.translational(i, j) == ops.d0(i, j));
    }
    CHECK(sum == doctest::Approx(1.0));
  }
  // Neumann rows carry a unit diagonal.
  CHECK(hinge.rotational(0, 0) == doctest::Approx(1.0));
  CHECK(hinge.translational(20, 20) == doctest::Approx(1.0));
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(diagonal({1.0, 1.0, 1.0})) == doctest::Approx(0.0).scale(1.0));
  CHECK(spectral_radius(diagonal({1.5, 1.0})) == doctest::Approx(0.5));
  for (const char* bc : {"dd", "dn", "nn"}) {
    const MassBlocks m = assemble_mass_blocks(operators(4, 21), parse_boundary_pair(bc));
    const double rho = spectral_radius(m.translational);
    CHECK(rho < 1.0);
    CHECK(spectral_radius_power(m.translational) == doctest::Approx(rho).epsilon(1e-6));
    // Independent dense eigenvalue oracle.
    const Eigen::MatrixXd e = to_dense(m.translational) - Eigen::MatrixXd::Identity(21, 21);
    CHECK(e.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(rho).epsilon(1e-12));
  }
  double previous = 0.0;
  for (int p : {2, 4, 6, 8}) {
    const double rho = spectral_radius(assemble_mass_blocks(operators(p, 41), parse_boundary_pair("nn")).translational);
    CHECK(rho > previous);
    previous = rho;
  }
}

TEST_CASE("multicorrector") {
  std::vector<Vec3> b{Vec3(1, 2, 3), Vec3(-1, 0, 4)}, x(2), r(2);
  auto res = multicorrector_solve(diagonal({1.0, 1.0}), b, x, r, {});
  CHECK(res.passes == 1);
  CHECK(x == b);

  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.2, 0.2, 1.0;
  std::vector<Vec3> ones{Vec3(1, 1, 1), Vec3(1, 1, 1)};
  MulticorrectorSettings s;
  s.max_passes = 40;
  res = multicorrector_solve(dense_rows(a), ones, x, r, s);
  CHECK(res.passes <= 40);
  for (const Vec3& v : x) CHECK((v - Vec3::Constant(1.0 / 1.2)).norm() < 1e-10);
  // Symmetric contraction: the residual decreases on every pass.
  double last = 2.0;
  for (int passes = 1; passes <= 10; ++passes) {
    s.max_passes = passes;
    s.fixed_passes = true;
    res = multicorrector_solve(dense_rows(a), ones, x, r, s);
    CHECK(res.residual < last);
    last = res.residual;
  }

  std::vector<Vec3> big{Vec3(1, 0, 0)}, xb(1), rb(1);
  CHECK_THROWS_AS(multicorrector_solve(diagonal({3.5}), big, xb, rb, {}), SolverError);
}

TEST_CASE("multicorrector with many passes equals the direct solve") {
  const MassBlocks m = assemble_mass_blocks(operators(6, 21), parse_boundary_pair("dn"));
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Vec3> b(21), x(21), r(21);
  for (Vec3& v : b) v = Vec3(d(rng), d(rng), d(rng));
  MulticorrectorSettings s;
  s.max_passes = 1000;
  s.tolerance = 1e-14;
  multicorrector_solve(m.translational, b, x, r, s);
  const Eigen::MatrixXd M = to_dense(m.translational);
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd rhs(21);
    for (int i = 0; i < 21; ++i) rhs[i] = b[i][c];
    const Eigen::VectorXd ref = M.partialPivLu().solve(rhs);
    for (int i = 0; i < 21; ++i) CHECK(x[i][c] == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("linearized rotational balance") {
  const Mat3 j = Vec3(1.0, 2.0, 3.0).asDiagonal();
  const Vec3 chi(0.1, -0.2, 0.3);
  const LinearizedRotation a = linearized_rotational_balance(j, Vec3::Zero(), Vec3::Zero(), chi, 1e-3);
  CHECK(a.matrix == j);
  CHECK(a.rhs == chi);
  const LinearizedRotation s = linearized_rotational_balance(Mat3::Identity(), Vec3(1, 2, 3), Vec3::Zero(), chi, 1e-3);
  CHECK((s.rhs - chi).norm() < 1e-15);
  // Torque-free spin about a principal axis: Euler's equations give alpha = 0.
  const LinearizedRotation e = linearized_rotational_balance(j, Vec3(0, 5.0, 0), Vec3::Zero(), Vec3::Zero(), 1e-3);
  CHECK(e.matrix.partialPivLu().solve(e.rhs).norm() < 1e-15);
}

TEST_CASE("rotational residual tangent matches finite differences") {
  const Mat3 R = rot3::exp_so3(Vec3(0.3, -0.2, 0.5));
  const Mat3 j = R * Vec3(1.0, 2.0, 3.0).asDiagonal() * R.transpose();
  const Vec3 w(3.0, -1.0, 2.0), alpha(10.0, 20.0, -5.0), chi(0.5, 0.1, -0.4);
  const double h = 1e-2;
  const RotationalResidual r = rotational_residual(j, w, alpha, chi, h);
  const Vec3 wc = w + 0.5 * h * alpha;
  CHECK((r.residual - (j * alpha + wc.cross(j * wc) - chi)).norm() < 1e-13);
  const double d = 1e-6;
  Mat3 fd;
  for (int c = 0; c < 3; ++c) {
    Vec3 e = Vec3::Zero();
    e[c] = d;
    fd.col(c) = (rotational_residual(j, w, alpha + e, chi, h).residual -
                 rotational_residual(j, w, alpha - e, chi, h).residual) / (2 * d);
  }
  CHECK((fd - r.tangent).norm() / r.tangent.norm() < 1e-6);
}

TEST_CASE("unloaded beam at rest stays at rest") {
  ScenarioConfig c = preset("cantilever");
  c.loads = Loads{};
  c.total_time = 2e-4;
  for (SolverVariant v : {SolverVariant::ConsistentNonlinear, SolverVariant::LumpedNonlinear, SolverVariant::LumpedLinear}) {
    c.solver.variant = v;
    BeamSolver solver(c.make_problem(), c.solver, c.initial_conditions());
    for (int k = 0; k < 200; ++k) solver.step();
    for (double u : {0.0, 0.5, 1.0}) CHECK(solver.displacement_at(u).isZero(0.0));
  }
}

TEST_CASE("Newton needs one iteration for typical explicit steps") {
  ScenarioConfig c = preset("cantilever");
  c.solver.variant = SolverVariant::ConsistentNonlinear;
  BeamSolver solver(c.make_problem(), c.solver, c.initial_conditions());
  for (int k = 0; k < 300; ++k) CHECK(solver.step().newton_iterations == 1);
}

TEST_CASE("variants agree on the cantilever over the first steps") {
  ScenarioConfig c = preset("cantilever");
  std::vector<Vec3> tips;
  for (SolverVariant v : {SolverVariant::ConsistentNonlinear, SolverVariant::LumpedNonlinear, SolverVariant::LumpedLinear}) {
    c.solver.variant = v;
    BeamSolver solver(c.make_problem(), c.solver, c.initial_conditions());
    for (int k = 0; k < 2000; ++k) solver.step();
    tips.push_back(solver.displacement_at(1.0));
  }
  CHECK(tips[0].norm() > 1e-4);
  CHECK((tips[1] - tips[0]).norm() / tips[0].norm() < 1e-3);
  CHECK((tips[2] - tips[0]).norm() / tips[0].norm() < 1e-3);
}

TEST_CASE("lumped Newton with many passes reproduces the consistent solve") {
  // Clamped-clamped beam under a transverse distributed load.
  ScenarioConfig c = preset("cantilever");
  c.boundary = {{EndCondition::clamped(), EndCondition::clamped()}};
  c.loads = Loads{};
  c.loads.distributed_force.value = Vec3(0, 0, -5000.0);
  c.degree = 4;
  c.n = 16;
  std::vector<Vec3> tips;
  for (SolverVariant v : {SolverVariant::ConsistentNonlinear, SolverVariant::LumpedNonlinear}) {
    c.solver.variant = v;
    c.solver.corrector.max_passes = 200;
    c.solver.corrector.tolerance = 1e-15;
    c.solver.newton.tolerance = 1e-13;
    BeamSolver solver(c.make_problem(), c.solver, c.initial_conditions());
    for (int k = 0; k < 1000; ++k) solver.step();
    tips.push_back(solver.displacement_at(0.5));
  }
  CHECK(tips[0].norm() > 1e-5);
  CHECK((tips[1] - tips[0]).norm() / tips[0].norm() < 1e-9);
}

TEST_CASE("momentum drift of the free flying beam shrinks under refinement") {
  // Collocation does not conserve the quadrature momentum exactly; after the
  // loads stop the drift is a discretization error.
  auto drift = [](int n, double h) {
    ScenarioConfig c = preset("flying");
    c.degree = 4;
    c.n = n;
    c.time_step = h;
    c.solver.variant = SolverVariant::LumpedLinear;
    for (auto* hist : {&c.loads.ends[0].force.history, &c.loads.ends[0].moment.history})
      hist->table = {{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}};
    BeamSolver solver(c.make_problem(), c.solver, c.initial_conditions());
    while (solver.state().time < 1.0 + 1e-12) solver.step();
    const Vec3 p0 = solver.linear_momentum();
    const Vec3 h0 = solver.angular_momentum(solver.center_of_mass());
    // Impulse of the end force.
    CHECK((p0 - Vec3(10.0, 0.0, 0.0)).norm() < 0.5);
    std::array<double, 2> worst{0.0, 0.0};
    while (solver.state().time < 1.25) {
      solver.step();
      worst[0] = std::max(worst[0], (solver.linear_momentum() - p0).norm() / p0.norm());
      worst[1] = std::max(worst[1], (solver.angular_momentum(solver.center_of_mass()) - h0).norm() / h0.norm());
    }
    return worst;
  };
  const auto coarse = drift(15, 4e-5), fine = drift(30, 2e-5);
  CHECK(fine[0] < coarse[0] / 4);
  CHECK(fine[1] < coarse[1] / 4);
  CHECK(fine[0] < 1e-2);
}
