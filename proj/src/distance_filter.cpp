#include "scootsim/distance_filter.hpp"

#include <algorithm>
#include <cmath>

#include "scootsim/errors.hpp"

namespace scootsim {

void FilterConfig::validate() const {
  if (!(T_i > T_d && T_d > 0.0))
    throw ConfigError("filter requires T_i > T_d > 0");
  if (tau_mem < 1) throw ConfigError("tau_mem must be at least 1");
  if (!(dt > 0.0)) throw ConfigError("filter period must be positive");
}

void FusionConfig::validate() const {
  if (!(blend_lambda >= 0.0 && blend_lambda <= 1.0))
    throw ConfigError("blend_lambda must lie in [0, 1]");
  if (!(weight_kernel_width > 0.0))
    throw ConfigError("weight kernel width must be positive");
}

FilterState::FilterState(int tau_mem) {
  if (tau_mem < 1) throw ConfigError("tau_mem must be at least 1");
  ring_.assign(static_cast<std::size_t>(tau_mem), 0.0);
}

double FilterState::push_and_min(double d_meas) {
  ring_[head_] = d_meas;
  head_ = (head_ + 1) % ring_.size();
  count_ = std::min(count_ + 1, ring_.size());
  double m = ring_[0];
  for (std::size_t i = 1; i < count_; ++i) m = std::min(m, ring_[i]);
  return m;
}

double alpha_from_T(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw ConfigError("alpha_from_T requires positive T and dt");
  return 1.0 - std::exp(-dt / T);
}

double T_from_alpha(double alpha, double dt) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(dt > 0.0))
    throw ConfigError("T_from_alpha requires alpha in (0, 1] and positive dt");
  return -dt / std::log1p(-alpha);
}

double memory_min(FilterState& state, double d_meas) {
  return state.push_and_min(d_meas);
}

double filter_step(FilterState& state, double d_meas, const FilterConfig& cfg) {
  if (d_meas < 0.0) throw InputError("measured distance must be non-negative");
  const double T = d_meas > state.d_filt() ? cfg.T_i : cfg.T_d;
  const double alpha = alpha_from_T(T, cfg.dt);
  const double d_mem = memory_min(state, d_meas);
  const double next = alpha * d_mem + (1.0 - alpha) * state.d_filt();
  state.set_d_filt(next);
  return next;
}

double critical_distance(double d_filt_c, double d_filt_l, double d_filt_r) {
  return std::min(d_filt_c, std::min(d_filt_l, d_filt_r));
}

double weighted_critical_distance(double d_filt_c, double d_filt_l,
                                  double d_filt_r, double delta,
                                  const FusionConfig& fusion,
                                  const std::array<SensorMount, 3>& mounts) {
  (void)delta;  // mounts co-rotate with the handlebar; see header
  fusion.validate();
  const double d[3] = {d_filt_c, d_filt_l, d_filt_r};
  double w[3];
  double w_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double a = mounts[static_cast<std::size_t>(i)].yaw_offset;
    w[i] = std::exp(-a * a /
                    (2.0 * fusion.weight_kernel_width * fusion.weight_kernel_width));
    w_sum += w[i];
  }
  double average = 0.0;
  for (int i = 0; i < 3; ++i) average += (w[i] / w_sum) * d[i];
  return fusion.blend_lambda * critical_distance(d_filt_c, d_filt_l, d_filt_r) +
         (1.0 - fusion.blend_lambda) * average;
}

}  // namespace scootsim
