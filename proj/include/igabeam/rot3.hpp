#pragma once

#include <Eigen/Dense>

namespace igabeam {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace rot3 {

/// Below this rotation angle the Rodrigues and tangent-map coefficients are
/// evaluated from their Taylor series.
inline constexpr double kSmallAngle = 1e-6;

/// Orthonormality drift above which update_rotation re-projects onto SO(3).
inline constexpr double kReorthoTolerance = 1e-9;

/// skew(a) * h == a.cross(h)
Mat3 skew(const Vec3& a);

/// Axial vector of the skew-symmetric part of m.
Vec3 axial(const Mat3& m);

/// Rodrigues formula exp(skew(theta)).
Mat3 exp_so3(const Vec3& theta);

/// Rotation vector of R with angle in [0, pi].
Vec3 log_so3(const Mat3& R);

/// Tangent of the exponential map in spatial (left) trivialization:
/// d/dt exp(skew(theta(t))) = skew(T(theta) theta') exp(skew(theta)),
/// T = I + (1 - cos t)/t^2 skew(theta) + (t - sin t)/t^3 skew(theta)^2.
Mat3 dexp(const Vec3& theta);

/// Directional derivative of dexp at theta along `direction`:
/// d/ds T(theta(s)) with theta,s = direction.
Mat3 dexp_derivative(const Vec3& theta, const Vec3& direction);

/// ||R^T R - I||_inf (max absolute entry).
double orthonormality_error(const Mat3& R);

/// Closest rotation in the Frobenius norm (polar factor).
Mat3 project_to_rotation(const Mat3& R);

/// exp(skew(theta)) * previous, re-projected only when the drift exceeds
/// kReorthoTolerance.
Mat3 update_rotation(const Mat3& previous, const Vec3& theta);

}  // namespace rot3
}  // namespace igabeam
