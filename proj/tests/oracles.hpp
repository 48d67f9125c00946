// Independent reference implementations used only by the tests.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Textbook Cox-de Boor recursion for one basis function, with the 0/0 := 0
// convention and the right-closed last span.
inline double bspline(const std::vector<double>& knots, int i, int p, double u) {
  if (p == 0) {
    const bool last = u == knots.back() && knots[i] < knots[i + 1] && knots[i + 1] == knots.back();
    return (knots[i] <= u && u < knots[i + 1]) || last ? 1.0 : 0.0;
  }
  double value = 0.0;
  const double d1 = knots[i + p] - knots[i];
  const double d2 = knots[i + p + 1] - knots[i + 1];
  if (d1 > 0.0) value += (u - knots[i]) / d1 * bspline(knots, i, p - 1, u);
  if (d2 > 0.0) value += (knots[i + p + 1] - u) / d2 * bspline(knots, i + 1, p - 1, u);
  return value;
}

// Matrix exponential by scaling and squaring of a truncated Taylor series.
inline Eigen::Matrix3d expm(const Eigen::Matrix3d& a) {
  int squarings = 0;
  double norm = a.norm();
  while (norm > 0.1) {
    norm *= 0.5;
    ++squarings;
  }
  const Eigen::Matrix3d s = a / std::ldexp(1.0, squarings);
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d sum = term;
  for (int k = 1; k < 20; ++k) {
    term = term * s / k;
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

inline Eigen::Matrix3d hat(const Eigen::Vector3d& a) {
  Eigen::Matrix3d m;
  m << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return m;
}

inline Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
}

}  // namespace oracle
