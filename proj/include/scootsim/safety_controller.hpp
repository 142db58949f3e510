#pragma once

namespace scootsim {

struct SafetyConfig {
  double d_stop = 0.5;  // full-stop standoff distance [m]
  double d_max = 2.0;   // distance at which limiting begins [m]
  // Optional policy variant: also veto reverse commands when an obstacle is
  // inside d_stop. Off by default, which passes negative commands through.
  bool block_reverse_inside_stop = false;

  void validate() const;  // throws ConfigError
};

// Velocity scaling schedule: 1 beyond d_max, 0 below d_stop, linear ramp in
// between (the ramp value is used at both breakpoints, making the schedule
// continuous).
double beta_safe(double d_crit, const SafetyConfig& cfg);

// v_safe = min(beta_safe(d_crit) * v_cmd, v_cmd): forward commands are scaled
// down, negative (braking/reverse) commands pass through unless the reverse-
// blocking flag is set and the obstacle is inside d_stop.
double safe_velocity(double v_cmd, double d_crit, const SafetyConfig& cfg);

}  // namespace scootsim
