#include "scootsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scootsim/errors.hpp"
#include "scootsim/rng.hpp"

namespace scootsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Standstill detection thresholds: |v| below the entry threshold sustained
// for the hold time opens an episode; the episode closes only once |v|
// exceeds the (larger) release threshold.
constexpr double kStandstillSpeed = 0.01;
constexpr double kReleaseSpeed = 0.05;
constexpr double kStandstillHold = 0.5;

RunMetrics compute_metrics(const std::vector<TraceRecord>& trace,
                           double min_true, const SafetyConfig& safety,
                           int control_hz) {
  RunMetrics m;
  m.min_true_distance = min_true;
  m.collided = min_true <= 0.0;
  m.standstill_distance = kNaN;
  m.time_to_stop = kNaN;
  m.recovery_time = kNaN;

  const int hold_records = static_cast<int>(
      std::lround(kStandstillHold * control_hz)) + 1;
  bool in_standstill = false;
  int low_run = 0;
  std::size_t first_onset = trace.size();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double speed = std::fabs(trace[i].v);
    if (!in_standstill) {
      low_run = speed < kStandstillSpeed ? low_run + 1 : 0;
      if (low_run == hold_records) {
        in_standstill = true;
        ++m.stop_events;
        const std::size_t onset = i + 1 - static_cast<std::size_t>(hold_records);
        if (first_onset == trace.size()) {
          first_onset = onset;
          m.time_to_stop = trace[onset].t;
          m.standstill_distance = trace[onset].true_min_distance;
        }
      }
    } else if (speed > kReleaseSpeed) {
      in_standstill = false;
      low_run = 0;
    }
  }

  if (first_onset < trace.size()) {
    std::size_t cleared = trace.size();
    for (std::size_t i = first_onset; i < trace.size(); ++i) {
      if (trace[i].true_min_distance > safety.d_max) {
        cleared = i;
        break;
      }
    }
    if (cleared < trace.size()) {
      for (std::size_t i = cleared; i < trace.size(); ++i) {
        if (trace[i].v_cmd > 0.0 && trace[i].v >= 0.95 * trace[i].v_cmd) {
          m.recovery_time = trace[i].t - trace[cleared].t;
          break;
        }
      }
    }
  }
  return m;
}

}  // namespace

double true_min_distance(const VehicleState& state,
                         const std::vector<Obstacle>& obstacles, double t) {
  const Vec2 head{state.x_p, state.y_p};
  double best = kInf;
  for (const Obstacle& obs : obstacles) {
    if (!obs.active(t)) continue;
    best = std::min(best, obs.signed_distance(head, t));
  }
  return best;
}

RunResult run(const Scenario& scenario) {
  scenario.validate();

  RunResult result;
  const double dt = 1.0 / scenario.rates.dynamics_hz;
  const long long n_ticks =
      std::llround(scenario.duration * scenario.rates.dynamics_hz);
  const long long control_div =
      scenario.rates.dynamics_hz / scenario.rates.control_hz;
  result.trace.reserve(static_cast<std::size_t>(n_ticks / control_div) + 1);

  Rng rng(scenario.fault.rng_seed);
  BalanceController balance(scenario.balance, scenario.physical);
  FilterState filt_c(scenario.filter.tau_mem);
  FilterState filt_l(scenario.filter.tau_mem);
  FilterState filt_r(scenario.filter.tau_mem);

  VehicleState state = scenario.initial_state;
  std::array<double, 3> latest_meas{scenario.mounts[0].range_max,
                                    scenario.mounts[1].range_max,
                                    scenario.mounts[2].range_max};
  long long sensor_count = 0;  // samples taken so far
  double v_target = 0.0;
  double delta_target = 0.0;
  double min_true = kInf;

  try {
    for (long long k = 0; k < n_ticks; ++k) {
      const double t = k * dt;

      // Sensor tick: first dynamics tick at or after each 1/sensor_hz mark.
      const long long next_sensor_tick =
          (sensor_count * scenario.rates.dynamics_hz +
           scenario.rates.sensor_hz - 1) /
          scenario.rates.sensor_hz;
      if (k == next_sensor_tick) {
        latest_meas = sample_all(state, scenario.mounts, scenario.obstacles,
                                 scenario.fault, t, rng);
        ++sensor_count;
      }

      const double truth = true_min_distance(state, scenario.obstacles, t);
      min_true = std::min(min_true, truth);

      // Control tick: filter the held measurements, fuse, limit velocity.
      if (k % control_div == 0) {
        const double fc = filter_step(filt_c, latest_meas[0], scenario.filter);
        const double fl = filter_step(filt_l, latest_meas[1], scenario.filter);
        const double fr = filter_step(filt_r, latest_meas[2], scenario.filter);
        const double d_crit = weighted_critical_distance(
            fc, fl, fr, state.delta, scenario.fusion, scenario.mounts);
        const Command cmd = scenario.command_at(t);
        const double v_safe = safe_velocity(cmd.v_cmd, d_crit, scenario.safety);
        v_target = v_safe;
        delta_target = cmd.delta_cmd;

        TraceRecord rec;
        rec.t = t;
        rec.x_p = state.x_p;
        rec.y_p = state.y_p;
        rec.psi = state.psi;
        rec.v = state.v;
        rec.delta = state.delta;
        rec.phi = state.phi;
        rec.d_meas_c = latest_meas[0];
        rec.d_meas_l = latest_meas[1];
        rec.d_meas_r = latest_meas[2];
        rec.d_filt_c = fc;
        rec.d_filt_l = fl;
        rec.d_filt_r = fr;
        rec.d_crit = d_crit;
        rec.v_cmd = cmd.v_cmd;
        rec.v_safe = v_safe;
        rec.true_min_distance = truth;
        rec.collision = truth <= 0.0;
        result.trace.push_back(rec);
      }

      // Dynamics tick: actuator lag toward the held targets, stabilizing
      // wheel torque, then one RK4 step.
      const double tau = balance.torque(state.phi, state.phi_dot, state.omega);
      const ActuatorOutput act = actuator_step(
          state, v_target, delta_target, scenario.actuator, scenario.physical, dt);
      state.v = act.v;
      state.delta = act.delta;
      state = integrate_step(state, {v_target, delta_target, tau},
                             scenario.physical, dt);
    }
    min_true = std::min(min_true, true_min_distance(state, scenario.obstacles,
                                                    scenario.duration));
  } catch (const DivergenceError& e) {
    result.ok = false;
    result.error = e.what();
  }

  result.metrics = compute_metrics(result.trace, min_true, scenario.safety,
                                   scenario.rates.control_hz);
  return result;
}

std::vector<double> moving_average(const std::vector<double>& series, int window) {
  if (window < 1) throw ConfigError("moving average window must be >= 1");
  const int n = static_cast<int>(series.size());
  std::vector<double> out(series.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - (window - 1) / 2);
    const int hi = std::min(n - 1, i + window / 2);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += series[j];
    out[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
  }
  return out;
}

}  // namespace scootsim
