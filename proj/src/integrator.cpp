#include "igabeam/integrator.hpp"

namespace igabeam {

void Predictor::resize(int n) {
  const auto size = static_cast<std::size_t>(n);
  displacement.resize(size);
  rotation.resize(size);
  velocity.resize(size);
  angular_velocity.resize(size);
}

void predict_increments(const KinematicState& state, double h, Predictor& out) {
  const int n = state.size();
  out.resize(n);
  const double half_h2 = 0.5 * h * h;
  for (int j = 0; j < n; ++j) {
    out.displacement[j] = h * state.velocity[j] + half_h2 * state.acceleration[j];
    out.rotation[j] = h * state.angular_velocity[j] + half_h2 * state.angular_acceleration[j];
    out.velocity[j] = state.velocity[j] + 0.5 * h * state.acceleration[j];
    out.angular_velocity[j] = state.angular_velocity[j] + 0.5 * h * state.angular_acceleration[j];
  }
}

void update_configuration(KinematicState& state, const Predictor& increments, const Discretization& disc,
                          std::span<Vec3> theta, std::span<Vec3> theta_s, std::span<Vec3> theta_ss) {
  const int n = state.size();
  for (int j = 0; j < n; ++j) state.config.centroid[j] += increments.displacement[j];
  disc.evaluate(increments.rotation, theta);
  disc.evaluate_ds(increments.rotation, theta_s);
  disc.evaluate_dss(increments.rotation, theta_ss);
  for (int i = 0; i < n; ++i) {
    Mat3& R = state.config.rotation[i];
    R = rot3::update_rotation(R, theta[i]);
    const Vec3 k = rot3::dexp(theta[i]) * theta_s[i];
    const Vec3 k_s = rot3::dexp(theta[i]) * theta_ss[i] + rot3::dexp_derivative(theta[i], theta_s[i]) * theta_s[i];
    const Vec3 k_material = R.transpose() * k;
    Vec3& K = state.config.curvature[i];
    K += k_material;
    state.config.curvature_ds[i] += -K.cross(k_material) + R.transpose() * k_s;
  }
}

void correct_velocities(KinematicState& state, const Predictor& predictor, double h) {
  const int n = state.size();
  for (int j = 0; j < n; ++j) {
    state.velocity[j] = predictor.velocity[j] + 0.5 * h * state.acceleration[j];
    state.angular_velocity[j] = predictor.angular_velocity[j] + 0.5 * h * state.angular_acceleration[j];
  }
}

KinematicState apply_initial_conditions(const ReferenceConfiguration& ref, const ReferenceGeometry& geometry,
                                        const Discretization& disc, const InitialConditions& ic) {
  const int n = disc.size();
  const auto size = static_cast<std::size_t>(n);
  KinematicState state;
  state.config = reference_configuration(ref);
  state.velocity.assign(size, Vec3::Zero());
  state.angular_velocity.assign(size, Vec3::Zero());
  state.acceleration.assign(size, Vec3::Zero());
  state.angular_acceleration.assign(size, Vec3::Zero());

  std::vector<Vec3> v(size), w(size);
  const Vec3 start = geometry.position(0.0);
  for (int i = 0; i < n; ++i) {
    const double u = disc.points[i];
    const Vec3 x = geometry.position(u);
    w[i] = ic.angular_velocity_field ? ic.angular_velocity_field(u, x) : ic.angular_velocity;
    if (ic.velocity_field) {
      v[i] = ic.velocity_field(u, x);
    } else {
      v[i] = ic.velocity;
      if (ic.rigid_body_velocity) v[i] += w[i].cross(x - start);
    }
  }
  disc.interpolate(v, state.velocity);
  disc.interpolate(w, state.angular_velocity);
  return state;
}

}  // namespace igabeam
