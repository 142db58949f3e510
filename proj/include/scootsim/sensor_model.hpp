#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scootsim/rng.hpp"
#include "scootsim/vec2.hpp"
#include "scootsim/vehicle_dynamics.hpp"

namespace scootsim {

enum class SensorId { center, left, right };

std::string to_string(SensorId id);
SensorId sensor_id_from_string(const std::string& name);

// One ultrasonic mount on the handlebar. The mount frame follows the
// steering angle, so the beam heading is psi + delta + yaw_offset, and the
// origin is displaced from the steering head along the handlebar axis.
struct SensorMount {
  SensorId id = SensorId::center;
  double yaw_offset = 0.0;      // mounting angle in the handlebar frame [rad]
  double lateral_offset = 0.0;  // displacement along the handlebar axis [m]
  double half_angle = 0.2617993877991494;  // field-of-view half-angle [rad]
  double range_min = 0.02;   // [m]
  double range_max = 4.00;   // [m]
  double accuracy_sigma = 0.003;  // [m]
  double height = 0.5;       // mounting height, metadata only [m]

  void validate() const;  // throws ConfigError
};

// Center beam straight ahead, outer beams +/-24 degrees and +/-37 mm.
std::array<SensorMount, 3> default_mounts();

struct CircleShape {
  Vec2 center;
  double radius = 0.0;
};

struct RectShape {
  Vec2 center;
  Vec2 half_extents;
};

struct Waypoint {
  double t = 0.0;
  Vec2 offset;  // translation of the base shape at time t
};

// A circular or axis-aligned rectangular obstacle with an optional
// piecewise-linear translation schedule and an existence window.
struct Obstacle {
  std::variant<CircleShape, RectShape> shape;
  std::vector<Waypoint> waypoints;  // empty = static at the base pose
  double t_on = 0.0;
  double t_off = std::numeric_limits<double>::infinity();

  void validate() const;
  bool active(double t) const { return t >= t_on && t <= t_off; }
  Vec2 offset_at(double t) const;

  // Positive outside, zero on the boundary, negative inside.
  double signed_distance(Vec2 point, double t) const;
};

struct FaultModel {
  double dropout_prob = 0.0;  // per-reading missed-echo probability
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct SensorPose {
  Vec2 origin;
  double heading = 0.0;
};

// Beam origin and heading for a mount given the vehicle pose; the steering
// head sits at the front-wheel contact point (x_p, y_p).
SensorPose sensor_pose(const VehicleState& s, const SensorMount& mount);

struct WedgeHit {
  double distance = 0.0;
  Vec2 point;  // boundary point realizing the minimum
};

// Closest active-obstacle boundary point whose direction from the sensor
// origin lies inside [heading - half_angle, heading + half_angle]; empty if
// nothing intersects the wedge within range_max.
std::optional<WedgeHit> wedge_hit(const SensorPose& pose,
                                  const SensorMount& mount,
                                  const std::vector<Obstacle>& obstacles,
                                  double t);

std::optional<double> wedge_distance(const VehicleState& s,
                                     const SensorMount& mount,
                                     const std::vector<Obstacle>& obstacles,
                                     double t);

// One reading: a missed echo (Bernoulli dropout) or a missing target reads
// full range — faults are falsely large, never falsely small — otherwise the
// true distance plus Gaussian accuracy noise, clamped to the sensor range.
// Consumes a fixed number of RNG draws regardless of outcome.
double measure(const std::optional<double>& true_distance,
               const SensorMount& mount, const FaultModel& fault, Rng& rng);

// One reading per mount in fixed (center, left, right) order.
std::array<double, 3> sample_all(const VehicleState& s,
                                 const std::array<SensorMount, 3>& mounts,
                                 const std::vector<Obstacle>& obstacles,
                                 const FaultModel& fault, double t, Rng& rng);

}  // namespace scootsim
