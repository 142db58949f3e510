#include "scootsim/scenario.hpp"

#include <cmath>

#include "scootsim/errors.hpp"

namespace scootsim {

namespace {

// Stable closed-loop poles for the roll/reaction-wheel linearization. Chosen
// so a 0.05 rad initial lean decays below 0.005 rad within 3 s without
// saturating the wheel.
constexpr std::array<double, 3> kBalancePoles = {-5.0, -4.0, -1.2};

Vec2 polar(double r, double angle) {
  return {r * std::cos(angle), r * std::sin(angle)};
}

}  // namespace

void Rates::validate() const {
  if (dynamics_hz <= 0 || control_hz <= 0 || sensor_hz <= 0)
    throw ConfigError("loop rates must be positive");
  if (dynamics_hz % control_hz != 0)
    throw ConfigError("dynamics_hz must be an integer multiple of control_hz");
}

void Scenario::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw ConfigError("scenario duration must be positive and finite");
  rates.validate();
  physical.validate();
  actuator.validate();
  filter.validate();
  fusion.validate();
  safety.validate();
  fault.validate();
  for (const SensorMount& m : mounts) m.validate();
  for (const Obstacle& o : obstacles) o.validate();
  if (commands.empty()) throw ConfigError("scenario needs at least one command segment");
  if (commands.front().t > 0.0)
    throw ConfigError("first command segment must start at t <= 0");
  for (std::size_t i = 1; i < commands.size(); ++i)
    if (!(commands[i].t > commands[i - 1].t))
      throw ConfigError("command segment times must be strictly increasing");
  // The distance filter's alpha constants assume its dt equals the control
  // period; reject configurations where they disagree.
  if (std::fabs(filter.dt * rates.control_hz - 1.0) > 1e-9)
    throw ConfigError("filter dt must equal the control period 1/control_hz");
}

Command Scenario::command_at(double t) const {
  Command out{commands.front().v_cmd, commands.front().delta_cmd};
  for (const CommandSegment& seg : commands) {
    if (seg.t <= t) out = {seg.v_cmd, seg.delta_cmd};
    else break;
  }
  return out;
}

BalanceGains default_balance_gains() {
  return pole_placement_gains(PhysicalParams{}, kBalancePoles);
}

Scenario scenario_straight() {
  Scenario sc;
  sc.name = "straight";
  sc.duration = 26.0;
  sc.commands = {{0.0, 1.0, 0.0}};
  sc.fault.dropout_prob = 0.0;
  sc.fault.rng_seed = 20260814;

  // Sensor head starts at the origin; the obstacle face sits 6 m ahead of it.
  const double radius = 0.3;
  Obstacle block;
  block.shape = CircleShape{{6.0 + radius, 0.0}, radius};
  // Removed a while after standstill so the run shows the re-acceleration.
  block.t_off = 20.0;
  sc.obstacles.push_back(block);
  return sc;
}

Scenario scenario_curve() {
  Scenario sc;
  sc.name = "curve";
  sc.duration = 40.0;
  const double v_cmd = 0.8;
  const double delta_cmd = 0.4;
  sc.commands = {{0.0, v_cmd, delta_cmd}};
  sc.fault.dropout_prob = 0.0;
  sc.fault.rng_seed = 20260814;

  // Steady-turn geometry: the head starts at the origin, the rear axle at
  // (-l, 0) and traces a circle of radius R about (-l, R); the head leads it
  // on a circle of radius sqrt(R^2 + l^2) about the same center.
  const double l = sc.physical.l;
  const double R = l / std::tan(delta_cmd);
  const Vec2 center{-l, R};
  const double yaw_rate = v_cmd * std::tan(delta_cmd) / l;
  // Nominal (obstacle-free) pose, with ~0.5 s knocked off for the filter
  // warm-up hold at launch.
  const double t_meet = 14.0;
  const double psi = yaw_rate * (t_meet - 0.5);
  const Vec2 rear = center + polar(R, psi - 1.5707963267948966);
  const Vec2 head = rear + polar(l, psi);
  const Vec2 tangent = polar(1.0, psi);           // along the path
  const Vec2 outward = polar(1.0, psi - 1.5707963267948966);  // away from turn center

  const double radius = 0.25;
  Obstacle block;
  block.shape = CircleShape{head, radius};
  block.t_on = 10.0;
  // Choreography: sit on the path until the scooter has stopped, creep into
  // the stop band slowly (slow enough for the measurement pipeline to zero
  // the velocity before the boundary is crossed), press well inside, back
  // off, then slide out of the sensor wedges so the scooter resumes.
  const Vec2 slow_press = -0.03 * tangent;
  const Vec2 deep_press = -0.15 * tangent;
  const Vec2 back_step = 0.5 * tangent;
  const Vec2 exit_step = 2.5 * outward;
  block.waypoints = {
      {19.5, {0.0, 0.0}},
      {24.5, slow_press},
      {26.5, deep_press},
      {28.0, deep_press},
      {30.0, deep_press + back_step},
      {33.0, deep_press + back_step + exit_step},
  };
  sc.obstacles.push_back(block);
  return sc;
}

Scenario scenario_crossing() {
  Scenario sc;
  sc.name = "crossing";
  sc.duration = 36.0;
  sc.commands = {{0.0, 0.8, 0.0}};
  sc.fault.dropout_prob = 0.05;
  sc.fault.rng_seed = 20260814;

  const double radius = 0.25;

  // First pedestrian: crosses left-to-right ahead of the launch point,
  // pausing on the centerline long enough for the scooter to settle into a
  // full standstill before walking on.
  Obstacle a;
  a.shape = CircleShape{{4.0, 0.0}, radius};
  a.waypoints = {
      {0.0, {0.0, -2.5}},
      {5.0, {0.0, 0.0}},
      {14.0, {0.0, 0.0}},
      {19.0, {0.0, 2.5}},
  };
  sc.obstacles.push_back(a);

  // Second pedestrian: same dance further down the lane, timed to catch the
  // scooter after it has recovered from the first stop.
  Obstacle b;
  b.shape = CircleShape{{8.0, 0.0}, radius};
  b.waypoints = {
      {14.0, {0.0, 2.8}},
      {19.6, {0.0, 0.0}},
      {31.0, {0.0, 0.0}},
      {36.0, {0.0, -2.5}},
  };
  sc.obstacles.push_back(b);
  return sc;
}

std::vector<std::string> builtin_scenario_names() {
  return {"straight", "curve", "crossing"};
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "straight") return scenario_straight();
  if (name == "curve") return scenario_curve();
  if (name == "crossing") return scenario_crossing();
  throw ConfigError("unknown built-in scenario: " + name);
}

}  // namespace scootsim
