#pragma once

#include <array>
#include <span>
#include <vector>

namespace igabeam {

/// Open knot vector with `num_basis - degree` uniform elements on [0, 1].
std::vector<double> make_open_uniform_knots(int degree, int num_basis);

/// B-spline (or NURBS, when weights are given) space on [0, 1] with an open
/// knot vector. Immutable after construction.
class SplineSpace {
 public:
  SplineSpace(int degree, std::vector<double> knots, std::vector<double> weights = {});

  static SplineSpace open_uniform(int degree, int num_basis);

  int degree() const { return degree_; }
  int num_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
  int num_elements() const;
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& weights() const { return weights_; }
  bool rational() const { return rational_; }

  /// Knot span index k with knots[k] <= u < knots[k+1] (the last non-empty span for u = 1).
  int find_span(double u) const;

 private:
  int degree_;
  std::vector<double> knots_;
  std::vector<double> weights_;
  bool rational_ = false;
};

/// Nonzero basis functions at one parameter value. values[d][k] is the d-th
/// parametric derivative of basis function `first + k`.
struct BasisValues {
  int first = 0;
  int max_derivative = 0;
  std::array<std::vector<double>, 3> values;
};

/// Cox-de Boor evaluation with derivatives up to second order; applies the
/// rational quotient rule when the space carries non-unit weights.
/// Throws std::domain_error for u outside [0, 1].
BasisValues eval_basis(const SplineSpace& space, double u, int max_derivative);

/// Knot averages (xi_{j+1} + ... + xi_{j+p}) / p, one per basis function.
std::vector<double> greville_abscissae(const SplineSpace& space);

/// Rows of a matrix in which row i has `width` consecutive nonzeros starting
/// at column first[i]. Used for all collocation matrices.
class BandedRows {
 public:
  BandedRows() = default;
  BandedRows(int rows, int cols, int width);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int width() const { return width_; }
  int first(int row) const { return first_[row]; }
  void set_first(int row, int col) { first_[row] = col; }
  std::span<double> row(int i) { return {values_.data() + static_cast<std::size_t>(i) * width_, static_cast<std::size_t>(width_)}; }
  std::span<const double> row(int i) const { return {values_.data() + static_cast<std::size_t>(i) * width_, static_cast<std::size_t>(width_)}; }

  /// Entry (i, j); zero outside the stored band.
  double operator()(int i, int j) const;

  /// Dense copy, row-major.
  std::vector<double> dense() const;

  bool operator==(const BandedRows&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int width_ = 0;
  std::vector<int> first_;
  std::vector<double> values_;
};

/// Arc-length metric of the reference centroid line at the collocation
/// points: J = |dc0/du| and dJ/du.
struct ReferenceJacobian {
  std::vector<double> jacobian;
  std::vector<double> jacobian_du;

  static ReferenceJacobian constant(double length, std::size_t points);
};

/// Basis values and first/second arc-length derivatives at every collocation
/// point, one row per point. Time invariant.
struct CollocationOperators {
  BandedRows d0;
  BandedRows d1;
  BandedRows d2;
  std::vector<double> jacobian;  // ds/du per row
};

CollocationOperators collocation_operators(const SplineSpace& space,
                                           std::span<const double> points,
                                           const ReferenceJacobian& metric);

}  // namespace igabeam

namespace igabeam {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int points);

}  // namespace igabeam
