#pragma once

#include <cstddef>
#include <vector>

#include "scootsim/sensor_model.hpp"

namespace scootsim {

struct FilterConfig {
  double T_i = 0.79;  // time constant for increasing measurements [s]
  double T_d = 0.03;  // time constant for decreasing measurements [s]
  int tau_mem = 5;    // memory-min window [filter ticks]
  double dt = 0.02;   // filter period [s]

  void validate() const;  // throws ConfigError
};

// Per-sensor smoothing state: a FIFO ring of the last tau_mem raw readings
// plus the smoothed output, which starts at 0 so the vehicle treats the world
// as blocked until real measurements raise it.
class FilterState {
 public:
  explicit FilterState(int tau_mem);

  double d_filt() const { return d_filt_; }
  std::size_t ring_size() const { return count_; }

  // Push a raw reading, evict the oldest beyond capacity, return the ring min.
  double push_and_min(double d_meas);

  void set_d_filt(double v) { d_filt_ = v; }

 private:
  std::vector<double> ring_;
  std::size_t head_ = 0;   // next slot to overwrite
  std::size_t count_ = 0;  // valid entries
  double d_filt_ = 0.0;
};

// alpha = 1 - exp(-dt/T) and its inverse T = -dt / ln(1 - alpha).
double alpha_from_T(double T, double dt);
double T_from_alpha(double alpha, double dt);

// Ring update + minimum of the retained readings.
double memory_min(FilterState& state, double d_meas);

// Asymmetric exponential smoothing: the time constant is chosen by comparing
// the raw reading (not the ring min) against the previous output, then the
// ring min drives the update. Returns the new d_filt.
double filter_step(FilterState& state, double d_meas, const FilterConfig& cfg);

// Minimum of the three per-sensor outputs.
double critical_distance(double d_filt_c, double d_filt_l, double d_filt_r);

struct FusionConfig {
  double blend_lambda = 1.0;        // 1 = pure min fusion
  double weight_kernel_width = 0.3;  // angular width of the averaging kernel [rad]

  void validate() const;
};

// Blend of the min fusion with a steering-aligned weighted average. Mounts
// co-rotate with the handlebar, so each sensor's angular distance from the
// travel direction is just its yaw offset and the weights are constant in
// delta; the parameter is kept for interface symmetry with the min fusion.
double weighted_critical_distance(double d_filt_c, double d_filt_l,
                                  double d_filt_r, double delta,
                                  const FusionConfig& fusion,
                                  const std::array<SensorMount, 3>& mounts);

}  // namespace scootsim
