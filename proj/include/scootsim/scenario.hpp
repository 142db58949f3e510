#pragma once

#include <array>
#include <string>
#include <vector>

#include "scootsim/distance_filter.hpp"
#include "scootsim/safety_controller.hpp"
#include "scootsim/sensor_model.hpp"
#include "scootsim/vehicle_dynamics.hpp"

namespace scootsim {

// Loop rates for the three-layer executive. The dynamics integrator must tick
// an integer number of times per control tick; sensor ticks run on their own
// grid (first dynamics tick at or after each 1/sensor_hz boundary).
struct Rates {
  int dynamics_hz = 1000;
  int control_hz = 50;
  int sensor_hz = 10;

  void validate() const;
};

// Piecewise-constant rider command: holds from time t until the next segment.
struct CommandSegment {
  double t = 0.0;
  double v_cmd = 0.0;
  double delta_cmd = 0.0;
};

struct Command {
  double v_cmd = 0.0;
  double delta_cmd = 0.0;
};

// Roll stabilization gains used by every scenario unless overridden: pole
// placement on the default physical parameters.
BalanceGains default_balance_gains();

struct Scenario {
  std::string name;
  double duration = 10.0;  // [s]
  Rates rates;
  VehicleState initial_state;
  std::vector<CommandSegment> commands;
  PhysicalParams physical;
  ActuatorConfig actuator;
  FilterConfig filter;
  FusionConfig fusion;
  SafetyConfig safety;
  std::array<SensorMount, 3> mounts = default_mounts();
  FaultModel fault;
  BalanceGains balance = default_balance_gains();
  std::vector<Obstacle> obstacles;

  void validate() const;
  Command command_at(double t) const;
};

// Built-in demonstration scenarios (drive-and-stop on a straight, stop while
// turning, and a double crossing). Obstacle choreography is data: edit the
// JSON emitted by `scootsim scenarios emit <name>` to change it.
Scenario scenario_straight();
Scenario scenario_curve();
Scenario scenario_crossing();

std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

}  // namespace scootsim
