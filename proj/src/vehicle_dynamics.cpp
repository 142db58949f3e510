#include "scootsim/vehicle_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "scootsim/errors.hpp"

namespace scootsim {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;

double clamp_abs(double x, double bound) {
  return std::clamp(x, -bound, bound);
}

bool all_finite(const VehicleState& s) {
  return std::isfinite(s.x_p) && std::isfinite(s.y_p) && std::isfinite(s.psi) &&
         std::isfinite(s.v) && std::isfinite(s.delta) && std::isfinite(s.phi) &&
         std::isfinite(s.phi_dot) && std::isfinite(s.omega) &&
         std::isfinite(s.theta);
}

// Derivative of the seven integrated states (x_p, y_p, psi, phi, phi_dot,
// omega, theta) with v, delta and tau frozen over the step.
struct OdeRates {
  double d[7];
};

OdeRates combined_derivative(const VehicleState& s, double tau,
                             const PhysicalParams& p) {
  const BicycleRates b = bicycle_derivative(s, p);
  const double gravity_term = p.m * p.g * p.z_m * std::sin(s.phi);
  return {{b.dx_p, b.dy_p, b.dpsi,
           s.phi_dot,
           (gravity_term - tau) / p.J_e,
           -gravity_term / p.J_e + tau / p.J_d,
           s.omega}};
}

VehicleState advance(const VehicleState& s, const OdeRates& r, double h) {
  VehicleState n = s;
  n.x_p += h * r.d[0];
  n.y_p += h * r.d[1];
  n.psi += h * r.d[2];
  n.phi += h * r.d[3];
  n.phi_dot += h * r.d[4];
  n.omega += h * r.d[5];
  n.theta += h * r.d[6];
  return n;
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(m > 0.0 && z_m > 0.0 && J_e > 0.0 && J_d > 0.0 && l > 0.0))
    throw ConfigError("physical parameters must be positive");
  if (!(J_e > J_d))
    throw ConfigError("overall roll inertia must exceed the wheel inertia");
  if (!(v_max > 0.0 && delta_max > 0.0 && omega_max > 0.0 && tau_max > 0.0))
    throw ConfigError("saturation bounds must be positive");
  if (!(delta_max < kHalfPi))
    throw ConfigError("delta_max must stay below the steering singularity");
}

void ActuatorConfig::validate() const {
  if (!exact_tracking && !(T_v > 0.0 && T_delta > 0.0))
    throw ConfigError("actuator time constants must be positive");
  if (!(dv_max > 0.0 && ddelta_max > 0.0))
    throw ConfigError("actuator rate limits must be positive");
}

BicycleRates bicycle_derivative(const VehicleState& s, const PhysicalParams& p) {
  if (!(std::fabs(s.delta) < kHalfPi))
    throw InputError("steering angle at or beyond +/-pi/2 is singular");
  const double heading = s.psi + s.delta;
  const double cos_delta = std::cos(s.delta);
  return {s.v * std::cos(heading) / cos_delta,
          s.v * std::sin(heading) / cos_delta,
          s.v * std::tan(s.delta) / p.l};
}

RollRates roll_derivative(const VehicleState& s, const CommandInput& u,
                          const PhysicalParams& p) {
  const double gravity_term = p.m * p.g * p.z_m * std::sin(s.phi);
  return {s.phi_dot,
          (gravity_term - u.tau) / p.J_e,
          -gravity_term / p.J_e + u.tau / p.J_d};
}

VehicleState integrate_step(const VehicleState& s, const CommandInput& u,
                            const PhysicalParams& p, double dt) {
  if (!(dt > 0.0)) throw InputError("integration step must be positive");
  const double tau = clamp_abs(u.tau, p.tau_max);

  const OdeRates k1 = combined_derivative(s, tau, p);
  const OdeRates k2 = combined_derivative(advance(s, k1, dt / 2.0), tau, p);
  const OdeRates k3 = combined_derivative(advance(s, k2, dt / 2.0), tau, p);
  const OdeRates k4 = combined_derivative(advance(s, k3, dt), tau, p);

  OdeRates sum;
  for (int i = 0; i < 7; ++i)
    sum.d[i] = (k1.d[i] + 2.0 * k2.d[i] + 2.0 * k3.d[i] + k4.d[i]) / 6.0;

  VehicleState n = advance(s, sum, dt);
  n.v = clamp_abs(n.v, p.v_max);
  n.delta = clamp_abs(n.delta, p.delta_max);
  n.omega = clamp_abs(n.omega, p.omega_max);
  if (!all_finite(n)) throw DivergenceError("vehicle state diverged");
  return n;
}

ActuatorOutput actuator_step(const VehicleState& s, double v_target,
                             double delta_target, const ActuatorConfig& cfg,
                             const PhysicalParams& p, double dt) {
  if (!(dt > 0.0)) throw InputError("actuator step must be positive");
  double v = cfg.exact_tracking
                 ? v_target
                 : s.v + (dt / cfg.T_v) * (v_target - s.v);
  double delta = cfg.exact_tracking
                     ? delta_target
                     : s.delta + (dt / cfg.T_delta) * (delta_target - s.delta);
  v = s.v + clamp_abs(v - s.v, cfg.dv_max * dt);
  delta = s.delta + clamp_abs(delta - s.delta, cfg.ddelta_max * dt);
  return {clamp_abs(v, p.v_max), clamp_abs(delta, p.delta_max)};
}

std::array<double, 3> closed_loop_char_poly(const BalanceGains& k,
                                            const PhysicalParams& p) {
  // Linearization about phi = 0 with a = m g z_m / J_e:
  //   d/dt [phi, phi_dot, omega] =
  //     [[0, 1, 0],
  //      [a + k1/J_e, k2/J_e, k3/J_e],
  //      [-a - k1/J_d, -k2/J_d, -k3/J_d]] [phi, phi_dot, omega]
  // giving s^3 + c2 s^2 + c1 s + c0 with the coefficients below.
  const double a = p.m * p.g * p.z_m / p.J_e;
  const double c2 = k.k3 / p.J_d - k.k2 / p.J_e;
  const double c1 = -(a + k.k1 / p.J_e);
  const double c0 = a * k.k3 * (1.0 / p.J_e - 1.0 / p.J_d);
  return {c2, c1, c0};
}

bool gains_stabilize(const BalanceGains& k, const PhysicalParams& p) {
  const auto [c2, c1, c0] = closed_loop_char_poly(k, p);
  return c2 > 0.0 && c1 > 0.0 && c0 > 0.0 && c2 * c1 > c0;
}

BalanceGains pole_placement_gains(const PhysicalParams& p,
                                  const std::array<double, 3>& poles) {
  for (double s : poles)
    if (!(s < 0.0)) throw ConfigError("requested poles must be negative");
  const double c2 = -(poles[0] + poles[1] + poles[2]);
  const double c1 =
      poles[0] * poles[1] + poles[0] * poles[2] + poles[1] * poles[2];
  const double c0 = -(poles[0] * poles[1] * poles[2]);

  // Invert the closed_loop_char_poly coefficient map:
  //   c1 = -(mgz + k1)/J_e,  c0 = (mgz/J_e) k3 (1/J_e - 1/J_d),
  //   c2 = k3/J_d - k2/J_e.
  const double mgz = p.m * p.g * p.z_m;
  BalanceGains k;
  k.k1 = -mgz - p.J_e * c1;
  k.k3 = c0 * p.J_e / (mgz * (1.0 / p.J_e - 1.0 / p.J_d));
  k.k2 = p.J_e * (k.k3 / p.J_d - c2);
  return k;
}

BalanceController::BalanceController(const BalanceGains& gains,
                                     const PhysicalParams& p)
    : gains_(gains), tau_max_(p.tau_max) {
  if (!gains_stabilize(gains, p))
    throw ConfigError("balance gains do not stabilize the upright equilibrium");
}

double BalanceController::torque(double phi, double phi_dot,
                                 double omega) const {
  const double tau =
      -(gains_.k1 * phi + gains_.k2 * phi_dot + gains_.k3 * omega);
  return clamp_abs(tau, tau_max_);
}

}  // namespace scootsim
