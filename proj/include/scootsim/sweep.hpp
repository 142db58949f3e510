#pragma once

#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "scootsim/scenario.hpp"
#include "scootsim/simulation.hpp"

namespace scootsim {

// One grid dimension: a dotted override path and the values it sweeps over.
struct SweepAxis {
  std::string path;
  std::vector<nlohmann::json> values;
};

struct SweepPoint {
  std::size_t index = 0;
  std::vector<nlohmann::json> values;  // one per axis, axis order
  RunMetrics metrics;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepPoint> points;  // index order: last axis varies fastest
  int collisions = 0;
  int failures = 0;
  double worst_min_true_distance = std::numeric_limits<double>::infinity();
};

// Runs the full cross product of the axes applied to the base scenario.
// Points execute independently (on `threads` workers; 0 = hardware count)
// and are merged by grid index, so the result is order-independent.
SweepResult sweep(const Scenario& base, const std::vector<SweepAxis>& axes,
                  int threads = 0);

// Grid file schema:
//   {"axes": {"<path>": [v, ...] | {"start": s, "step": d, "count": n}}}
// where step defaults to 1 and integer endpoints produce integer values.
// The object form expands to the integer range s .. s+n-1.
std::vector<SweepAxis> sweep_axes_from_json(const nlohmann::json& grid);

std::string sweep_table_to_csv(const SweepResult& result);
void write_sweep_csv(const std::string& path, const SweepResult& result);

}  // namespace scootsim
