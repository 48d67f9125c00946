#include "igabeam/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace igabeam {

std::vector<double> make_open_uniform_knots(int degree, int num_basis) {
  if (degree < 1) throw std::invalid_argument("spline degree must be >= 1");
  if (num_basis < degree + 1)
    throw std::invalid_argument("open knot vector needs at least degree+1 basis functions (got " +
                                std::to_string(num_basis) + " for degree " + std::to_string(degree) + ")");
  const int elements = num_basis - degree;
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(num_basis + degree + 1));
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), 0.0);
  for (int e = 1; e < elements; ++e) knots.push_back(static_cast<double>(e) / elements);
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), 1.0);
  return knots;
}

SplineSpace::SplineSpace(int degree, std::vector<double> knots, std::vector<double> weights)
    : degree_(degree), knots_(std::move(knots)), weights_(std::move(weights)) {
  if (degree_ < 1) throw std::invalid_argument("spline degree must be >= 1");
  const int m = static_cast<int>(knots_.size());
  if (m < 2 * (degree_ + 1)) throw std::invalid_argument("knot vector too short for degree");
  for (int k = 1; k < m; ++k)
    if (!(knots_[k] >= knots_[k - 1])) throw std::invalid_argument("knot vector must be non-decreasing");
  for (int k = 0; k <= degree_; ++k) {
    if (knots_[k] != 0.0) throw std::invalid_argument("knot vector must start with degree+1 zeros");
    if (knots_[m - 1 - k] != 1.0) throw std::invalid_argument("knot vector must end with degree+1 ones");
  }
  if (knots_[degree_ + 1] == 0.0 || knots_[m - degree_ - 2] == 1.0)
    throw std::invalid_argument("end knot multiplicity must equal degree+1");
  for (int k = degree_ + 1; k < m - degree_ - 1;) {
    int mult = 1;
    while (k + mult < m - degree_ - 1 && knots_[k + mult] == knots_[k]) ++mult;
    if (mult > degree_) throw std::invalid_argument("interior knot multiplicity exceeds degree");
    k += mult;
  }
  if (weights_.empty()) {
    weights_.assign(static_cast<std::size_t>(num_basis()), 1.0);
  } else {
    if (static_cast<int>(weights_.size()) != num_basis())
      throw std::invalid_argument("weight count must equal the number of basis functions");
    for (double w : weights_)
      if (!(w > 0.0)) throw std::invalid_argument("NURBS weights must be strictly positive");
    rational_ = std::any_of(weights_.begin(), weights_.end(), [](double w) { return w != 1.0; });
  }
}

SplineSpace SplineSpace::open_uniform(int degree, int num_basis) {
  return SplineSpace(degree, make_open_uniform_knots(degree, num_basis));
}

int SplineSpace::num_elements() const {
  int count = 0;
  for (std::size_t k = 1; k < knots_.size(); ++k)
    if (knots_[k] > knots_[k - 1]) ++count;
  return count;
}

int SplineSpace::find_span(double u) const {
  const int n = num_basis() - 1;
  if (u >= knots_[n + 1]) return n;
  if (u <= knots_[degree_]) return degree_;
  int low = degree_;
  int high = n + 1;
  int mid = (low + high) / 2;
  while (u < knots_[mid] || u >= knots_[mid + 1]) {
    if (u < knots_[mid]) high = mid; else low = mid;
    mid = (low + high) / 2;
  }
  return mid;
}

BasisValues eval_basis(const SplineSpace& space, double u, int max_derivative) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("parameter outside [0, 1]: " + std::to_string(u));
  if (max_derivative < 0 || max_derivative > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");

  const int p = space.degree();
  const auto& U = space.knots();
  const int span = space.find_span(u);

  // Triangular table of basis values (upper) and knot differences (lower).
  std::vector<double> ndu(static_cast<std::size_t>((p + 1) * (p + 1)));
  auto at = [&](int r, int c) -> double& { return ndu[static_cast<std::size_t>(r * (p + 1) + c)]; };
  std::vector<double> left(static_cast<std::size_t>(p + 1)), right(static_cast<std::size_t>(p + 1));
  at(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - U[span + 1 - j];
    right[j] = U[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      at(j, r) = right[r + 1] + left[j - r];
      const double temp = at(r, j - 1) / at(j, r);
      at(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    at(j, j) = saved;
  }

  BasisValues out;
  out.first = span - p;
  out.max_derivative = max_derivative;
  for (int d = 0; d <= max_derivative; ++d) out.values[d].assign(static_cast<std::size_t>(p + 1), 0.0);
  for (int j = 0; j <= p; ++j) out.values[0][j] = at(j, p);

  const int nd = std::min(max_derivative, p);
  std::vector<double> a(static_cast<std::size_t>(2 * (p + 1)));
  auto A = [&](int s, int k) -> double& { return a[static_cast<std::size_t>(s * (p + 1) + k)]; };
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    A(0, 0) = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        A(s2, 0) = A(s1, 0) / at(pk + 1, rk);
        d = A(s2, 0) * at(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        A(s2, j) = (A(s1, j) - A(s1, j - 1)) / at(pk + 1, rk + j);
        d += A(s2, j) * at(rk + j, pk);
      }
      if (r <= pk) {
        A(s2, k) = -A(s1, k - 1) / at(pk + 1, r);
        d += A(s2, k) * at(r, pk);
      }
      out.values[k][r] = d;
      std::swap(s1, s2);
    }
  }
  int factor = p;
  for (int k = 1; k <= nd; ++k) {
    for (double& v : out.values[k]) v *= factor;
    factor *= p - k;
  }

  if (space.rational()) {
    const auto& w = space.weights();
    double W[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d <= max_derivative; ++d)
      for (int j = 0; j <= p; ++j) W[d] += w[out.first + j] * out.values[d][j];
    for (int j = 0; j <= p; ++j) {
      const double wj = w[out.first + j];
      const double N0 = out.values[0][j];
      const double R0 = wj * N0 / W[0];
      if (max_derivative >= 1) {
        const double N1 = out.values[1][j];
        const double R1 = (wj * N1 - R0 * W[1]) / W[0];
        if (max_derivative >= 2) {
          const double N2 = out.values[2][j];
          out.values[2][j] = (wj * N2 - 2.0 * R1 * W[1] - R0 * W[2]) / W[0];
        }
        out.values[1][j] = R1;
      }
      out.values[0][j] = R0;
    }
  }
  return out;
}

std::vector<double> greville_abscissae(const SplineSpace& space) {
  const int p = space.degree();
  const auto& U = space.knots();
  std::vector<double> points(static_cast<std::size_t>(space.num_basis()));
  for (int j = 0; j < space.num_basis(); ++j) {
    double sum = 0.0;
    for (int k = 1; k <= p; ++k) sum += U[j + k];
    points[j] = sum / p;
  }
  // Exact end values; the averages of p equal knots are exact anyway.
  points.front() = 0.0;
  points.back() = 1.0;
  return points;
}

BandedRows::BandedRows(int rows, int cols, int width)
    : rows_(rows), cols_(cols), width_(width),
      first_(static_cast<std::size_t>(rows), 0),
      values_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(width), 0.0) {}

double BandedRows::operator()(int i, int j) const {
  const int k = j - first_[i];
  if (k < 0 || k >= width_) return 0.0;
  return values_[static_cast<std::size_t>(i) * width_ + k];
}

std::vector<double> BandedRows::dense() const {
  std::vector<double> out(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < width_; ++k)
      out[static_cast<std::size_t>(i) * cols_ + first_[i] + k] = values_[static_cast<std::size_t>(i) * width_ + k];
  return out;
}

ReferenceJacobian ReferenceJacobian::constant(double length, std::size_t points) {
  return {std::vector<double>(points, length), std::vector<double>(points, 0.0)};
}

CollocationOperators collocation_operators(const SplineSpace& space,
                                           std::span<const double> points,
                                           const ReferenceJacobian& metric) {
  const int nb = space.num_basis();
  if (static_cast<int>(points.size()) != nb)
    throw std::invalid_argument("collocation grid must have one point per basis function");
  if (metric.jacobian.size() != points.size() || metric.jacobian_du.size() != points.size())
    throw std::invalid_argument("reference jacobian must be given at every collocation point");
  const int width = space.degree() + 1;
  CollocationOperators ops{BandedRows(nb, nb, width), BandedRows(nb, nb, width), BandedRows(nb, nb, width),
                           metric.jacobian};
  for (int i = 0; i < nb; ++i) {
    const double J = metric.jacobian[i];
    const double dJ = metric.jacobian_du[i];
    if (!(J > 0.0) || !std::isfinite(J) || !std::isfinite(dJ))
      throw std::domain_error("singular reference jacobian at collocation point " + std::to_string(i));
    const BasisValues b = eval_basis(space, points[i], 2);
    ops.d0.set_first(i, b.first);
    ops.d1.set_first(i, b.first);
    ops.d2.set_first(i, b.first);
    auto r0 = ops.d0.row(i);
    auto r1 = ops.d1.row(i);
    auto r2 = ops.d2.row(i);
    for (int k = 0; k < width; ++k) {
      r0[k] = b.values[0][k];
      r1[k] = b.values[1][k] / J;
      // d2/ds2 = (1/J^2) d2/du2 - (J'/J^3) d/du
      r2[k] = b.values[2][k] / (J * J) - dJ * b.values[1][k] / (J * J * J);
    }
  }
  return ops;
}

}  // namespace igabeam

namespace igabeam {

GaussRule gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("Gauss rule needs at least one point");
  GaussRule rule{std::vector<double>(static_cast<std::size_t>(points)), std::vector<double>(static_cast<std::size_t>(points))};
  for (int k = 0; k < points; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (points + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= points; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (points == 1) p0 = 1.0;
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[k] = -x;
    rule.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace igabeam
