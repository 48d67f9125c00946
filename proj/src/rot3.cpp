#include "igabeam/rot3.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace igabeam::rot3 {

namespace {

// sin(t)/t, (1 - cos t)/t^2, (t - sin t)/t^3
struct Coefficients {
  double a, b, c;
};

Coefficients coefficients(double t) {
  if (t < kSmallAngle) {
    const double t2 = t * t;
    return {1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0)),
            0.5 - t2 / 24.0 * (1.0 - t2 / 30.0 * (1.0 - t2 / 56.0)),
            1.0 / 6.0 - t2 / 120.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0))};
  }
  const double half = std::sin(0.5 * t) / (0.5 * t);
  return {std::sin(t) / t, 0.5 * half * half, (t - std::sin(t)) / (t * t * t)};
}

// b'(t)/t and c'(t)/t for the (1 - cos t)/t^2 and (t - sin t)/t^3 coefficients.
struct Slopes {
  double b, c;
};

Slopes slopes(double t) {
  const double t2 = t * t;
  if (t < 0.1) {
    return {-1.0 / 12.0 + t2 * (1.0 / 180.0 - t2 * (1.0 / 6720.0 - t2 / 453600.0)),
            -1.0 / 60.0 + t2 * (1.0 / 1260.0 - t2 * (1.0 / 60480.0 - t2 / 4989600.0))};
  }
  const double s = std::sin(t);
  const double one_minus_cos = 1.0 - std::cos(t);
  return {(t * s - 2.0 * one_minus_cos) / (t2 * t2), (t * one_minus_cos - 3.0 * (t - s)) / (t2 * t2 * t)};
}

}  // namespace

Mat3 skew(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return m;
}

Vec3 axial(const Mat3& m) {
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Mat3 exp_so3(const Vec3& theta) {
  const Coefficients k = coefficients(theta.norm());
  const Mat3 S = skew(theta);
  return Mat3::Identity() + k.a * S + k.b * S * S;
}

Vec3 log_so3(const Mat3& R) {
  const double cos_t = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  const double t = std::acos(cos_t);
  const Vec3 w = axial(R);  // sin(t) * axis
  if (t < 1e-4) {
    // sin(t)/t ~ 1 - t^2/6
    return w / (1.0 - t * t / 6.0);
  }
  if (t < M_PI - 1e-4) return w * (t / std::sin(t));
  // Near pi: axis from the symmetric part, sign from the small skew part.
  const Mat3 B = 0.5 * (R + R.transpose()) - cos_t * Mat3::Identity();
  int col = 0;
  B.diagonal().maxCoeff(&col);
  Vec3 axis = B.col(col).normalized();
  if (axis.dot(w) < 0.0) axis = -axis;
  return t * axis;
}

Mat3 dexp(const Vec3& theta) {
  const Coefficients k = coefficients(theta.norm());
  const Mat3 S = skew(theta);
  return Mat3::Identity() + k.b * S + k.c * S * S;
}

Mat3 dexp_derivative(const Vec3& theta, const Vec3& direction) {
  const double t = theta.norm();
  const Coefficients k = coefficients(t);
  const Slopes d = slopes(t);
  const double rate = theta.dot(direction);  // t * dt/ds
  const Mat3 S = skew(theta);
  const Mat3 dS = skew(direction);
  return d.b * rate * S + k.b * dS + d.c * rate * S * S + k.c * (dS * S + S * dS);
}

double orthonormality_error(const Mat3& R) {
  return (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
}

Mat3 project_to_rotation(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 Q = svd.matrixU() * svd.matrixV().transpose();
  if (Q.determinant() < 0.0) {
    Mat3 U = svd.matrixU();
    U.col(2) *= -1.0;
    Q = U * svd.matrixV().transpose();
  }
  return Q;
}

Mat3 update_rotation(const Mat3& previous, const Vec3& theta) {
  Mat3 next = exp_so3(theta) * previous;
  if (orthonormality_error(next) > kReorthoTolerance) next = project_to_rotation(next);
  return next;
}

}  // namespace igabeam::rot3
