#pragma once

#include <functional>
#include <span>
#include <vector>

#include "igabeam/beam_model.hpp"

namespace igabeam {

/// Full kinematic state at time t^n. Rates are spline control values.
struct KinematicState {
  long step = 0;
  double time = 0.0;
  Configuration config;
  std::vector<Vec3> velocity;
  std::vector<Vec3> angular_velocity;
  std::vector<Vec3> acceleration;
  std::vector<Vec3> angular_acceleration;

  int size() const { return static_cast<int>(velocity.size()); }
};

/// Increments and predictor rates for one step, per control value:
///   eta = h v + h^2/2 a,  theta = h w + h^2/2 alpha,
///   v_p = v + h/2 a,      w_p = w + h/2 alpha.
struct Predictor {
  std::vector<Vec3> displacement;
  std::vector<Vec3> rotation;
  std::vector<Vec3> velocity;
  std::vector<Vec3> angular_velocity;

  void resize(int n);
};

void predict_increments(const KinematicState& state, double h, Predictor& out);

/// c <- c + eta on the controls. At each collocation point the rotation
/// increment and its s-derivative are interpolated from the controls, then
/// R <- exp(theta~) R and K <- K + R_new^T k with k = dexp(theta) theta,s.
/// K,s follows from differentiating that update:
/// K,s <- K,s - K_new x (R_new^T k) + R_new^T k,s.
/// The scratch spans need state.size() entries each.
void update_configuration(KinematicState& state, const Predictor& increments, const Discretization& disc,
                          std::span<Vec3> scratch_theta, std::span<Vec3> scratch_theta_s,
                          std::span<Vec3> scratch_theta_ss);

/// v = v_p + h/2 a and w = w_p + h/2 alpha, with a and alpha already stored in
/// the state.
void correct_velocities(KinematicState& state, const Predictor& predictor, double h);

/// Prescribed initial rates, evaluated at the collocation points from the
/// reference position.
struct InitialConditions {
  Vec3 velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
  /// Adds angular_velocity x (x - x_start) to the velocity so the initial
  /// motion is a rigid rotation about the start of the beam.
  bool rigid_body_velocity = false;
  /// Optional general fields (u, reference position) -> value; override the above.
  std::function<Vec3(double, const Vec3&)> velocity_field;
  std::function<Vec3(double, const Vec3&)> angular_velocity_field;
};

/// Reference configuration with control rates that interpolate the initial
/// fields at the collocation points (D0 controls = point values).
/// Accelerations are left at zero; the solver fills them.
KinematicState apply_initial_conditions(const ReferenceConfiguration& ref, const ReferenceGeometry& geometry,
                                        const Discretization& disc, const InitialConditions& ic);

}  // namespace igabeam
