#pragma once

#include <string>
#include <vector>

#include "scootsim/scenario.hpp"

namespace scootsim {

// One row per control tick.
struct TraceRecord {
  double t = 0.0;
  double x_p = 0.0;
  double y_p = 0.0;
  double psi = 0.0;
  double v = 0.0;
  double delta = 0.0;
  double phi = 0.0;
  double d_meas_c = 0.0;
  double d_meas_l = 0.0;
  double d_meas_r = 0.0;
  double d_filt_c = 0.0;
  double d_filt_l = 0.0;
  double d_filt_r = 0.0;
  double d_crit = 0.0;
  double v_cmd = 0.0;
  double v_safe = 0.0;
  // Ground-truth distance from the sensor head to the nearest active
  // obstacle; +inf when none is active.
  double true_min_distance = 0.0;
  bool collision = false;
};

struct RunMetrics {
  // Tracked at the dynamics rate, so excursions between control ticks count.
  double min_true_distance = 0.0;
  // True distance when |v| < 0.01 m/s is first sustained for 0.5 s; NaN if
  // the vehicle never stops.
  double standstill_distance = 0.0;
  // Start time of that first sustained-standstill window; NaN if none.
  double time_to_stop = 0.0;
  // Path clearing (true distance above d_max, or no active obstacle) after
  // the first stop until v recovers to 0.95 * v_cmd; NaN if not applicable.
  double recovery_time = 0.0;
  // Number of distinct standstill episodes; an episode ends once |v| exceeds
  // 0.05 m/s again.
  int stop_events = 0;
  bool collided = false;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  RunMetrics metrics;
  bool ok = true;          // false if the integrator diverged mid-run
  std::string error;       // populated when ok is false
};

// Executes the full multi-rate loop: sensing at sensor_hz, filtering +
// velocity limiting at control_hz, actuation + integration at dynamics_hz.
// Deterministic for a given scenario (the seed lives in scenario.fault).
RunResult run(const Scenario& scenario);

// Centered moving average with window truncation at both ends; used for
// post-processing exported columns only, never inside the control loop.
std::vector<double> moving_average(const std::vector<double>& series, int window);

// Ground truth used for the trace column and metrics: signed distance from
// the sensor head at the front-wheel contact point (x_p, y_p) to the nearest
// active obstacle (+inf when none is active).
double true_min_distance(const VehicleState& state,
                         const std::vector<Obstacle>& obstacles, double t);

}  // namespace scootsim
