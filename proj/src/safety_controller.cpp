#include "scootsim/safety_controller.hpp"

#include <algorithm>
#include <cmath>

#include "scootsim/errors.hpp"

namespace scootsim {

void SafetyConfig::validate() const {
  if (!(d_stop >= 0.0) || !(d_stop < d_max))
    throw ConfigError("safety config requires 0 <= d_stop < d_max");
  if (!std::isfinite(d_max)) throw ConfigError("d_max must be finite");
}

double beta_safe(double d_crit, const SafetyConfig& cfg) {
  cfg.validate();
  if (d_crit > cfg.d_max) return 1.0;
  if (d_crit < cfg.d_stop) return 0.0;
  return (d_crit - cfg.d_stop) / (cfg.d_max - cfg.d_stop);
}

double safe_velocity(double v_cmd, double d_crit, const SafetyConfig& cfg) {
  if (cfg.block_reverse_inside_stop && d_crit < cfg.d_stop && v_cmd < 0.0)
    return 0.0;
  return std::min(beta_safe(d_crit, cfg) * v_cmd, v_cmd);
}

}  // namespace scootsim
