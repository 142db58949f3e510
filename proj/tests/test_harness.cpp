#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "scootsim/errors.hpp"
#include "scootsim/safety_controller.hpp"
#include "scootsim/scenario.hpp"
#include "scootsim/scenario_io.hpp"
#include "scootsim/simulation.hpp"
#include "scootsim/sweep.hpp"
#include "scootsim/trace_io.hpp"

using namespace scootsim;
using nlohmann::json;

namespace {

Scenario open_road() {
  Scenario sc;
  sc.name = "open_road";
  sc.duration = 8.0;
  sc.commands = {{0.0, 1.0, 0.0}};
  sc.fault.rng_seed = 5;
  return sc;
}

std::string temp_path(const std::string& name) {
  return "scootsim_test_" + name;
}

}  // namespace

TEST_CASE("scenario validation rejects inconsistent setups") {
  Scenario sc = open_road();
  CHECK_NOTHROW(sc.validate());
  SUBCASE("rates must divide") {
    sc.rates.dynamics_hz = 990;
    CHECK_THROWS_AS(sc.validate(), ConfigError);
  }
  SUBCASE("filter period must match the control period") {
    sc.filter.dt = 0.05;
    CHECK_THROWS_AS(sc.validate(), ConfigError);
  }
  SUBCASE("commands are required and ordered") {
    sc.commands.clear();
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc.commands = {{0.0, 1.0, 0.0}, {0.0, 0.5, 0.0}};
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc.commands = {{1.0, 1.0, 0.0}};  // nothing covers t = 0
    CHECK_THROWS_AS(sc.validate(), ConfigError);
  }
  SUBCASE("nonpositive duration") {
    sc.duration = 0.0;
    CHECK_THROWS_AS(sc.validate(), ConfigError);
  }
}

TEST_CASE("piecewise-constant command lookup") {
  Scenario sc = open_road();
  sc.commands = {{0.0, 1.0, 0.0}, {2.0, 0.5, 0.1}, {4.0, 0.0, -0.2}};
  CHECK(sc.command_at(0.0).v_cmd == 1.0);
  CHECK(sc.command_at(1.999).v_cmd == 1.0);
  CHECK(sc.command_at(2.0).v_cmd == 0.5);
  CHECK(sc.command_at(2.0).delta_cmd == 0.1);
  CHECK(sc.command_at(100.0).delta_cmd == -0.2);
}

TEST_CASE("free driving converges to the commanded velocity") {
  const Scenario sc = open_road();
  const RunResult r = run(sc);
  REQUIRE(r.ok);
  CHECK(r.trace.size() == 400);  // 8 s at 50 Hz
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].t > r.trace[i - 1].t);
  // After filter warm-up the limiter is inactive: v_safe equals v_cmd.
  for (std::size_t i = 100; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].v_safe == r.trace[i].v_cmd);
    CHECK(r.trace[i].d_crit > sc.safety.d_max);
  }
  CHECK(r.trace.back().v == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.metrics.stop_events == 0);
  CHECK_FALSE(r.metrics.collided);
  CHECK(std::isinf(r.metrics.min_true_distance));
  CHECK(std::isnan(r.metrics.time_to_stop));
}

TEST_CASE("every record satisfies the limiter contract") {
  const RunResult r = run(scenario_straight());
  REQUIRE(r.ok);
  const SafetyConfig cfg;  // scenario uses the defaults
  for (const TraceRecord& rec : r.trace) {
    CHECK(rec.v_safe == safe_velocity(rec.v_cmd, rec.d_crit, cfg));
    CHECK(rec.v_safe <= rec.v_cmd);
  }
}

TEST_CASE("runs are deterministic") {
  const Scenario sc = scenario_crossing();
  const std::string a = trace_to_csv(run(sc).trace);
  const std::string b = trace_to_csv(run(sc).trace);
  CHECK(a == b);
  // A different seed perturbs the noisy measurement columns.
  Scenario other = sc;
  other.fault.rng_seed += 1;
  CHECK(trace_to_csv(run(other).trace) != a);
}

TEST_CASE("held sensor readings change only on the sensor grid") {
  Scenario sc = open_road();
  Obstacle o;
  o.shape = CircleShape{{40.0, 0.0}, 0.5};  // out of range: noise-free 4.0 m
  sc.obstacles.push_back(o);
  sc.duration = 2.0;
  // Give the readings visible noise so every fresh sample differs.
  for (auto& m : sc.mounts) m.accuracy_sigma = 0.05;
  Obstacle near;
  near.shape = CircleShape{{3.0, 0.0}, 0.5};
  sc.obstacles.push_back(near);
  const RunResult r = run(sc);
  REQUIRE(r.ok);
  // control 50 Hz, sensors 10 Hz: constant within each block of 5 records.
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (i % 5 == 0) continue;
    CHECK(r.trace[i].d_meas_c == r.trace[i - 1].d_meas_c);
    CHECK(r.trace[i].d_meas_l == r.trace[i - 1].d_meas_l);
    CHECK(r.trace[i].d_meas_r == r.trace[i - 1].d_meas_r);
  }
}

TEST_CASE("trace CSV round-trips at emission precision") {
  const RunResult r = run(scenario_straight());
  const std::string csv = trace_to_csv(r.trace);
  const std::vector<TraceRecord> parsed = trace_from_csv(csv);
  REQUIRE(parsed.size() == r.trace.size());
  CHECK(trace_to_csv(parsed) == csv);

  SUBCASE("file writer emits identical bytes") {
    const std::string path = temp_path("trace.csv");
    write_trace_csv(path, r.trace);
    CHECK(trace_to_csv(load_trace_csv(path)) == csv);
    std::remove(path.c_str());
  }
  SUBCASE("header and shape are enforced") {
    CHECK_THROWS_AS(trace_from_csv("nope\n1,2,3\n"), InputError);
    std::string broken = csv;
    broken += "1,2,3\n";
    CHECK_THROWS_AS(trace_from_csv(broken), InputError);
  }
}

TEST_CASE("scenario JSON round-trips to identical behavior") {
  for (const std::string& name : builtin_scenario_names()) {
    const Scenario sc = builtin_scenario(name);
    const Scenario back = scenario_from_json(scenario_to_json(sc));
    CHECK(trace_to_csv(run(back).trace) == trace_to_csv(run(sc).trace));
  }
  SUBCASE("via a file") {
    const Scenario sc = scenario_curve();
    const std::string path = temp_path("scenario.json");
    save_scenario(path, sc);
    const Scenario back = load_scenario(path);
    std::remove(path.c_str());
    CHECK(trace_to_csv(run(back).trace) == trace_to_csv(run(sc).trace));
  }
  SUBCASE("defaults fill missing keys") {
    const Scenario sc = scenario_from_json(json::parse(R"({"duration": 1.5})"));
    CHECK(sc.duration == 1.5);
    CHECK(sc.safety.d_stop == 0.5);
    CHECK(sc.filter.T_i == 0.79);
    CHECK(sc.mounts[1].lateral_offset == 0.037);
    CHECK_NOTHROW(sc.validate());
  }
}

TEST_CASE("overrides address nested keys and array elements") {
  json doc = scenario_to_json(scenario_straight());
  apply_override(doc, "fault.dropout_prob", "0.3");
  apply_override(doc, "commands.0.v_cmd", "0.75");
  apply_override(doc, "obstacles.0.t_off", "12.5");
  apply_override(doc, "name", "edited");
  const Scenario sc = scenario_from_json(doc);
  CHECK(sc.fault.dropout_prob == 0.3);
  CHECK(sc.commands[0].v_cmd == 0.75);
  CHECK(sc.obstacles[0].t_off == 12.5);
  CHECK(sc.name == "edited");
  CHECK_THROWS_AS(apply_override(doc, "obstacles.7.t_off", "1"), InputError);
  CHECK_THROWS_AS(apply_override(doc, "", "1"), InputError);
}

TEST_CASE("metrics serialize with null for undefined entries") {
  RunMetrics m;
  m.min_true_distance = 1.25;
  m.standstill_distance = std::numeric_limits<double>::quiet_NaN();
  m.time_to_stop = std::numeric_limits<double>::quiet_NaN();
  m.recovery_time = std::numeric_limits<double>::quiet_NaN();
  const json j = metrics_to_json(m);
  CHECK(j["min_true_distance"] == 1.25);
  CHECK(j["standstill_distance"].is_null());
  CHECK(j["stop_events"] == 0);
  CHECK(j["collided"] == false);
}

TEST_CASE("centered moving average") {
  CHECK(moving_average({}, 20).empty());
  const std::vector<double> c{2.0, 2.0, 2.0, 2.0};
  CHECK(moving_average(c, 3) == c);
  const std::vector<double> any{1.0, 5.0, -2.0, 0.5};
  CHECK(moving_average(any, 1) == any);
  CHECK_THROWS_AS(moving_average(any, 0), ConfigError);

  std::vector<double> impulse(60, 0.0);
  impulse[30] = 20.0;
  const std::vector<double> sm = moving_average(impulse, 20);
  int ones = 0;
  for (double x : sm) {
    if (x > 0.0) {
      CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
      ++ones;
    }
  }
  CHECK(ones == 20);
}

TEST_CASE("sweep of one point reproduces a plain run") {
  Scenario sc = open_road();
  sc.duration = 2.0;
  const SweepResult sr = sweep(sc, {}, 2);
  REQUIRE(sr.points.size() == 1);
  const RunResult r = run(sc);
  CHECK(sr.points[0].metrics.stop_events == r.metrics.stop_events);
  CHECK(sr.points[0].metrics.collided == r.metrics.collided);
  CHECK(sr.collisions == 0);
  CHECK(sr.failures == 0);
}

TEST_CASE("sweep grids are deterministic under parallelism") {
  Scenario sc = open_road();
  sc.duration = 1.0;
  Obstacle o;
  o.shape = CircleShape{{6.0, 0.0}, 0.4};
  sc.obstacles.push_back(o);
  const json grid = json::parse(
      R"({"axes": {"fault.dropout_prob": [0.0, 0.2],
                   "fault.rng_seed": {"start": 1, "count": 6}}})");
  const auto axes = sweep_axes_from_json(grid);
  REQUIRE(axes.size() == 2);
  CHECK(axes[1].values.size() == 6);
  const SweepResult a = sweep(sc, axes, 4);
  const SweepResult b = sweep(sc, axes, 1);
  CHECK(a.points.size() == 12);
  CHECK(sweep_table_to_csv(a) == sweep_table_to_csv(b));
  // last axis fastest: first two points share the dropout value
  CHECK(a.points[0].values[0] == a.points[1].values[0]);
  CHECK(a.points[0].values[1] != a.points[1].values[1]);

  SUBCASE("grid parsing rejects malformed specs") {
    CHECK_THROWS_AS(sweep_axes_from_json(json::parse(R"({"axes": {"x": 3}})")),
                    InputError);
    CHECK_THROWS_AS(sweep_axes_from_json(json::parse(R"({})")), InputError);
  }
  SUBCASE("ranges honor fractional start and step") {
    const json g = json::parse(
        R"({"axes": {"commands.0.v_cmd": {"start": 0.6, "step": 0.2, "count": 3}}})");
    const auto ax = sweep_axes_from_json(g);
    REQUIRE(ax.size() == 1);
    REQUIRE(ax[0].values.size() == 3);
    CHECK(ax[0].values[0].get<double>() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(ax[0].values[2].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
    // Integer endpoints stay integers so seeds round-trip exactly.
    const json gi = json::parse(
        R"({"axes": {"fault.rng_seed": {"start": 10, "step": 5, "count": 2}}})");
    const auto axi = sweep_axes_from_json(gi);
    CHECK(axi[0].values[1].is_number_integer());
    CHECK(axi[0].values[1].get<std::int64_t>() == 15);
  }
  SUBCASE("failed points are recorded, not fatal") {
    const json bad = json::parse(R"({"axes": {"duration": [1.0, -1.0]}})");
    const SweepResult sr = sweep(sc, sweep_axes_from_json(bad), 2);
    CHECK(sr.points.size() == 2);
    CHECK(sr.failures == 1);
    CHECK_FALSE(sr.points[0].ok == sr.points[1].ok);
  }
}

TEST_CASE("built-in scenario registry") {
  CHECK(builtin_scenario_names() ==
        std::vector<std::string>{"straight", "curve", "crossing"});
  for (const std::string& name : builtin_scenario_names()) {
    const Scenario sc = builtin_scenario(name);
    CHECK(sc.name == name);
    CHECK_NOTHROW(sc.validate());
  }
  CHECK_THROWS_AS(builtin_scenario("warp"), ConfigError);
}

TEST_CASE("divergence aborts with a partial trace and error status") {
  Scenario sc = open_road();
  sc.duration = 4.0;
  sc.initial_state.phi = std::numeric_limits<double>::quiet_NaN();
  const RunResult r = run(sc);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.error.empty());
  CHECK(r.trace.size() < 200);
}
