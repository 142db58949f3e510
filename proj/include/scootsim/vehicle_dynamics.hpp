#pragma once

#include <array>
#include <limits>

namespace scootsim {

// Planar single-track pose/velocity plus the reaction-wheel roll subsystem.
// theta is the accumulated wheel angle, integrated from omega for bookkeeping
// only; nothing feeds back from it.
struct VehicleState {
  double x_p = 0.0;      // position east [m]
  double y_p = 0.0;      // position north [m]
  double psi = 0.0;      // yaw angle [rad]
  double v = 0.0;        // rear-wheel linear velocity [m/s]
  double delta = 0.0;    // steering angle [rad]
  double phi = 0.0;      // roll angle [rad]
  double phi_dot = 0.0;  // roll rate [rad/s]
  double omega = 0.0;    // reaction-wheel motor velocity [rad/s]
  double theta = 0.0;    // reaction-wheel angle [rad]
};

struct CommandInput {
  double v_cmd = 0.0;      // commanded rear-wheel velocity [m/s]
  double delta_cmd = 0.0;  // commanded steering angle [rad]
  double tau = 0.0;        // reaction-wheel torque [N*m]
};

struct PhysicalParams {
  double m = 34.0;     // total mass [kg]
  double z_m = 0.5;    // center-of-mass height at phi = 0 [m]
  double g = 9.81;     // gravity [m/s^2]
  double J_e = 8.0;    // overall roll moment of inertia [kg*m^2]
  double J_d = 0.05;   // reaction-wheel moment of inertia [kg*m^2]
  double l = 0.9;      // wheelbase [m]
  double v_max = 1.5;      // [m/s]
  double delta_max = 0.7;  // [rad]
  double omega_max = 600.0;  // [rad/s]
  double tau_max = 10.0;     // [N*m]

  void validate() const;  // throws ConfigError
};

// First-order tracking of the velocity / steering targets, standing in for
// the hardware's low-level loops. exact_tracking = true snaps to the target
// (the zero-lag limit). Rate limits default to unlimited.
struct ActuatorConfig {
  double T_v = 0.15;      // velocity tracking time constant [s]
  double T_delta = 0.1;   // steering tracking time constant [s]
  bool exact_tracking = false;
  double dv_max = std::numeric_limits<double>::infinity();      // [m/s^2]
  double ddelta_max = std::numeric_limits<double>::infinity();  // [rad/s]

  void validate() const;
};

struct BicycleRates {
  double dx_p = 0.0;
  double dy_p = 0.0;
  double dpsi = 0.0;
};

struct RollRates {
  double dphi = 0.0;
  double dphi_dot = 0.0;
  double domega = 0.0;
};

// Kinematic single-track model; throws InputError at |delta| >= pi/2.
BicycleRates bicycle_derivative(const VehicleState& s, const PhysicalParams& p);

// Reaction-wheel inverted pendulum about the roll axis.
RollRates roll_derivative(const VehicleState& s, const CommandInput& u,
                          const PhysicalParams& p);

// One classical RK4 step over pose + roll states; v and delta are held
// constant over the step (the actuator updates them separately), tau is
// saturated before use, omega/v/delta are clamped afterwards. Throws
// DivergenceError if the state leaves the finite range.
VehicleState integrate_step(const VehicleState& s, const CommandInput& u,
                            const PhysicalParams& p, double dt);

// First-order (or exact) tracking step for (v, delta) toward the targets,
// followed by rate limiting and saturation.
struct ActuatorOutput {
  double v = 0.0;
  double delta = 0.0;
};
ActuatorOutput actuator_step(const VehicleState& s, double v_target,
                             double delta_target, const ActuatorConfig& cfg,
                             const PhysicalParams& p, double dt);

struct BalanceGains {
  double k1 = 0.0;  // roll angle gain
  double k2 = 0.0;  // roll rate gain
  double k3 = 0.0;  // wheel velocity gain
};

// Coefficients of the closed-loop characteristic polynomial
// s^3 + c2 s^2 + c1 s + c0 for tau = -(k1 phi + k2 phi_dot + k3 omega)
// applied to the linearization about the upright equilibrium.
std::array<double, 3> closed_loop_char_poly(const BalanceGains& k,
                                            const PhysicalParams& p);

// Routh-Hurwitz test on the closed-loop cubic.
bool gains_stabilize(const BalanceGains& k, const PhysicalParams& p);

// Gains that place the closed-loop poles at the three requested (negative
// real parts) locations; expanded analytically from the characteristic
// polynomial of the linearized model.
BalanceGains pole_placement_gains(const PhysicalParams& p,
                                  const std::array<double, 3>& poles);

// Linear state feedback for the roll subsystem. Construction verifies the
// gains stabilize the upright equilibrium; torque() applies saturation.
class BalanceController {
 public:
  BalanceController(const BalanceGains& gains, const PhysicalParams& p);

  double torque(double phi, double phi_dot, double omega) const;
  const BalanceGains& gains() const { return gains_; }

 private:
  BalanceGains gains_;
  double tau_max_;
};

}  // namespace scootsim
