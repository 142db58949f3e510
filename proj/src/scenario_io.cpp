#include "scootsim/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "scootsim/errors.hpp"

namespace scootsim {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw InputError("expected a 2-element [x, y] array");
  return {j[0].get<double>(), j[1].get<double>()};
}

// Missing key or null -> fallback.
template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<T>();
}

double get_finite_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<double>();
}

void put_if_finite(json& j, const char* key, double value) {
  if (std::isfinite(value)) j[key] = value;
}

json mount_to_json(const SensorMount& m) {
  return {{"id", to_string(m.id)},
          {"yaw_offset", m.yaw_offset},
          {"lateral_offset", m.lateral_offset},
          {"half_angle", m.half_angle},
          {"range_min", m.range_min},
          {"range_max", m.range_max},
          {"accuracy_sigma", m.accuracy_sigma},
          {"height", m.height}};
}

SensorMount mount_from_json(const json& j, const SensorMount& base) {
  SensorMount m = base;
  if (j.contains("id")) m.id = sensor_id_from_string(j["id"].get<std::string>());
  m.yaw_offset = get_or(j, "yaw_offset", m.yaw_offset);
  m.lateral_offset = get_or(j, "lateral_offset", m.lateral_offset);
  m.half_angle = get_or(j, "half_angle", m.half_angle);
  m.range_min = get_or(j, "range_min", m.range_min);
  m.range_max = get_or(j, "range_max", m.range_max);
  m.accuracy_sigma = get_or(j, "accuracy_sigma", m.accuracy_sigma);
  m.height = get_or(j, "height", m.height);
  return m;
}

json obstacle_to_json(const Obstacle& o) {
  json shape;
  if (const auto* c = std::get_if<CircleShape>(&o.shape)) {
    shape = {{"type", "circle"},
             {"center", vec_to_json(c->center)},
             {"radius", c->radius}};
  } else {
    const auto& r = std::get<RectShape>(o.shape);
    shape = {{"type", "rect"},
             {"center", vec_to_json(r.center)},
             {"half_extents", vec_to_json(r.half_extents)}};
  }
  json waypoints = json::array();
  for (const Waypoint& w : o.waypoints)
    waypoints.push_back({{"t", w.t}, {"offset", vec_to_json(w.offset)}});
  json j{{"shape", shape}, {"waypoints", waypoints}, {"t_on", o.t_on}};
  put_if_finite(j, "t_off", o.t_off);
  return j;
}

Obstacle obstacle_from_json(const json& j) {
  Obstacle o;
  if (!j.contains("shape")) throw InputError("obstacle needs a shape");
  const json& s = j["shape"];
  const std::string type = s.at("type").get<std::string>();
  if (type == "circle") {
    o.shape = CircleShape{vec_from_json(s.at("center")),
                          s.at("radius").get<double>()};
  } else if (type == "rect") {
    o.shape = RectShape{vec_from_json(s.at("center")),
                        vec_from_json(s.at("half_extents"))};
  } else {
    throw InputError("obstacle shape type must be 'circle' or 'rect'");
  }
  if (j.contains("waypoints"))
    for (const json& w : j["waypoints"])
      o.waypoints.push_back(
          {w.at("t").get<double>(), vec_from_json(w.at("offset"))});
  o.t_on = get_or(j, "t_on", 0.0);
  o.t_off = get_finite_or(j, "t_off", kInf);
  return o;
}

}  // namespace

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["duration"] = sc.duration;
  j["rates"] = {{"dynamics_hz", sc.rates.dynamics_hz},
                {"control_hz", sc.rates.control_hz},
                {"sensor_hz", sc.rates.sensor_hz}};
  j["initial_state"] = {{"x_p", sc.initial_state.x_p},
                        {"y_p", sc.initial_state.y_p},
                        {"psi", sc.initial_state.psi},
                        {"v", sc.initial_state.v},
                        {"delta", sc.initial_state.delta},
                        {"phi", sc.initial_state.phi},
                        {"phi_dot", sc.initial_state.phi_dot},
                        {"omega", sc.initial_state.omega},
                        {"theta", sc.initial_state.theta}};
  j["commands"] = json::array();
  for (const CommandSegment& c : sc.commands)
    j["commands"].push_back(
        {{"t", c.t}, {"v_cmd", c.v_cmd}, {"delta_cmd", c.delta_cmd}});
  j["physical"] = {{"m", sc.physical.m},
                   {"z_m", sc.physical.z_m},
                   {"g", sc.physical.g},
                   {"J_e", sc.physical.J_e},
                   {"J_d", sc.physical.J_d},
                   {"l", sc.physical.l},
                   {"v_max", sc.physical.v_max},
                   {"delta_max", sc.physical.delta_max},
                   {"omega_max", sc.physical.omega_max},
                   {"tau_max", sc.physical.tau_max}};
  j["actuator"] = {{"T_v", sc.actuator.T_v},
                   {"T_delta", sc.actuator.T_delta},
                   {"exact_tracking", sc.actuator.exact_tracking}};
  put_if_finite(j["actuator"], "dv_max", sc.actuator.dv_max);
  put_if_finite(j["actuator"], "ddelta_max", sc.actuator.ddelta_max);
  j["filter"] = {{"T_i", sc.filter.T_i},
                 {"T_d", sc.filter.T_d},
                 {"tau_mem", sc.filter.tau_mem},
                 {"dt", sc.filter.dt}};
  j["fusion"] = {{"blend_lambda", sc.fusion.blend_lambda},
                 {"weight_kernel_width", sc.fusion.weight_kernel_width}};
  j["safety"] = {{"d_stop", sc.safety.d_stop},
                 {"d_max", sc.safety.d_max},
                 {"block_reverse_inside_stop", sc.safety.block_reverse_inside_stop}};
  j["mounts"] = json::array();
  for (const SensorMount& m : sc.mounts) j["mounts"].push_back(mount_to_json(m));
  j["fault"] = {{"dropout_prob", sc.fault.dropout_prob},
                {"rng_seed", sc.fault.rng_seed}};
  j["balance"] = {{"k1", sc.balance.k1},
                  {"k2", sc.balance.k2},
                  {"k3", sc.balance.k3}};
  j["obstacles"] = json::array();
  for (const Obstacle& o : sc.obstacles) j["obstacles"].push_back(obstacle_to_json(o));
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario sc;
  sc.name = get_or<std::string>(j, "name", "");
  sc.duration = get_or(j, "duration", sc.duration);
  if (j.contains("rates")) {
    const json& r = j["rates"];
    sc.rates.dynamics_hz = get_or(r, "dynamics_hz", sc.rates.dynamics_hz);
    sc.rates.control_hz = get_or(r, "control_hz", sc.rates.control_hz);
    sc.rates.sensor_hz = get_or(r, "sensor_hz", sc.rates.sensor_hz);
  }
  if (j.contains("initial_state")) {
    const json& s = j["initial_state"];
    sc.initial_state.x_p = get_or(s, "x_p", 0.0);
    sc.initial_state.y_p = get_or(s, "y_p", 0.0);
    sc.initial_state.psi = get_or(s, "psi", 0.0);
    sc.initial_state.v = get_or(s, "v", 0.0);
    sc.initial_state.delta = get_or(s, "delta", 0.0);
    sc.initial_state.phi = get_or(s, "phi", 0.0);
    sc.initial_state.phi_dot = get_or(s, "phi_dot", 0.0);
    sc.initial_state.omega = get_or(s, "omega", 0.0);
    sc.initial_state.theta = get_or(s, "theta", 0.0);
  }
  if (j.contains("commands")) {
    for (const json& c : j["commands"])
      sc.commands.push_back({c.at("t").get<double>(),
                             get_or(c, "v_cmd", 0.0),
                             get_or(c, "delta_cmd", 0.0)});
  }
  if (sc.commands.empty()) sc.commands.push_back({0.0, 0.0, 0.0});
  if (j.contains("physical")) {
    const json& p = j["physical"];
    sc.physical.m = get_or(p, "m", sc.physical.m);
    sc.physical.z_m = get_or(p, "z_m", sc.physical.z_m);
    sc.physical.g = get_or(p, "g", sc.physical.g);
    sc.physical.J_e = get_or(p, "J_e", sc.physical.J_e);
    sc.physical.J_d = get_or(p, "J_d", sc.physical.J_d);
    sc.physical.l = get_or(p, "l", sc.physical.l);
    sc.physical.v_max = get_or(p, "v_max", sc.physical.v_max);
    sc.physical.delta_max = get_or(p, "delta_max", sc.physical.delta_max);
    sc.physical.omega_max = get_or(p, "omega_max", sc.physical.omega_max);
    sc.physical.tau_max = get_or(p, "tau_max", sc.physical.tau_max);
  }
  if (j.contains("actuator")) {
    const json& a = j["actuator"];
    sc.actuator.T_v = get_or(a, "T_v", sc.actuator.T_v);
    sc.actuator.T_delta = get_or(a, "T_delta", sc.actuator.T_delta);
    sc.actuator.exact_tracking = get_or(a, "exact_tracking", sc.actuator.exact_tracking);
    sc.actuator.dv_max = get_finite_or(a, "dv_max", kInf);
    sc.actuator.ddelta_max = get_finite_or(a, "ddelta_max", kInf);
  }
  if (j.contains("filter")) {
    const json& f = j["filter"];
    sc.filter.T_i = get_or(f, "T_i", sc.filter.T_i);
    sc.filter.T_d = get_or(f, "T_d", sc.filter.T_d);
    sc.filter.tau_mem = get_or(f, "tau_mem", sc.filter.tau_mem);
    sc.filter.dt = get_or(f, "dt", sc.filter.dt);
  }
  if (j.contains("fusion")) {
    const json& f = j["fusion"];
    sc.fusion.blend_lambda = get_or(f, "blend_lambda", sc.fusion.blend_lambda);
    sc.fusion.weight_kernel_width =
        get_or(f, "weight_kernel_width", sc.fusion.weight_kernel_width);
  }
  if (j.contains("safety")) {
    const json& s = j["safety"];
    sc.safety.d_stop = get_or(s, "d_stop", sc.safety.d_stop);
    sc.safety.d_max = get_or(s, "d_max", sc.safety.d_max);
    sc.safety.block_reverse_inside_stop =
        get_or(s, "block_reverse_inside_stop", sc.safety.block_reverse_inside_stop);
  }
  if (j.contains("mounts")) {
    const json& ms = j["mounts"];
    if (!ms.is_array() || ms.size() != 3)
      throw InputError("mounts must be an array of exactly 3 entries");
    for (std::size_t i = 0; i < 3; ++i)
      sc.mounts[i] = mount_from_json(ms[i], sc.mounts[i]);
  }
  if (j.contains("fault")) {
    const json& f = j["fault"];
    sc.fault.dropout_prob = get_or(f, "dropout_prob", sc.fault.dropout_prob);
    sc.fault.rng_seed = get_or(f, "rng_seed", sc.fault.rng_seed);
  }
  if (j.contains("balance")) {
    const json& b = j["balance"];
    sc.balance.k1 = get_or(b, "k1", sc.balance.k1);
    sc.balance.k2 = get_or(b, "k2", sc.balance.k2);
    sc.balance.k3 = get_or(b, "k3", sc.balance.k3);
  }
  if (j.contains("obstacles"))
    for (const json& o : j["obstacles"])
      sc.obstacles.push_back(obstacle_from_json(o));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open scenario file: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const std::string& path, const Scenario& scenario) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open scenario output file: " + path);
  f << scenario_to_json(scenario).dump(2) << '\n';
  if (!f) throw InputError("failed writing scenario file: " + path);
}

void apply_override(json& doc, const std::string& key, const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // bare strings are allowed unquoted
  }
  apply_override_json(doc, key, parsed);
}

void apply_override_json(json& doc, const std::string& key, const json& value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string token =
        key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (token.empty()) throw InputError("empty path segment in override: " + key);
    const bool is_index = token.find_first_not_of("0123456789") == std::string::npos;
    if (node->is_array() || (is_index && !node->is_object())) {
      if (!is_index)
        throw InputError("array override path needs a numeric index: " + key);
      const std::size_t idx = std::stoul(token);
      if (!node->is_array() || idx >= node->size())
        throw InputError("override index out of range: " + key);
      node = &(*node)[idx];
    } else {
      // operator[] creates missing object keys, so optional ones (e.g.
      // actuator.dv_max) can be introduced by an override.
      node = &(*node)[token];
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = value;
}

json metrics_to_json(const RunMetrics& m) {
  return {{"min_true_distance",
           std::isfinite(m.min_true_distance) ? json(m.min_true_distance) : json()},
          {"standstill_distance",
           std::isfinite(m.standstill_distance) ? json(m.standstill_distance) : json()},
          {"time_to_stop",
           std::isfinite(m.time_to_stop) ? json(m.time_to_stop) : json()},
          {"recovery_time",
           std::isfinite(m.recovery_time) ? json(m.recovery_time) : json()},
          {"stop_events", m.stop_events},
          {"collided", m.collided}};
}

void write_metrics_json(const std::string& path, const RunMetrics& metrics) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open metrics output file: " + path);
  f << metrics_to_json(metrics).dump(2) << '\n';
  if (!f) throw InputError("failed writing metrics file: " + path);
}

}  // namespace scootsim
