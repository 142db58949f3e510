#include "scootsim/sensor_model.hpp"

#include <algorithm>
#include <cmath>

#include "scootsim/errors.hpp"

namespace scootsim {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

bool in_wedge(Vec2 dir, double heading, double half_angle) {
  const double angle = std::atan2(dir.y, dir.x);
  return std::fabs(wrap_angle(angle - heading)) <= half_angle;
}

// Nearest non-negative ray parameter hitting the circle boundary.
std::optional<double> ray_circle(Vec2 o, Vec2 dir, const CircleShape& c) {
  const Vec2 rel = c.center - o;
  const double b = dot(rel, dir);
  const double disc = c.radius * c.radius - (dot(rel, rel) - b * b);
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  const double t1 = b - s;
  const double t2 = b + s;
  if (t1 >= 0.0) return t1;
  if (t2 >= 0.0) return t2;
  return std::nullopt;
}

// Nearest non-negative ray parameter hitting the segment [a, b].
std::optional<double> ray_segment(Vec2 o, Vec2 dir, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double denom = cross(dir, e);
  if (std::fabs(denom) < 1e-15) return std::nullopt;  // parallel; endpoints cover it
  const Vec2 rel = a - o;
  const double t = cross(rel, e) / denom;
  const double u = cross(rel, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return a;
  const double u = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
  return a + u * e;
}

struct Candidate {
  double distance;
  Vec2 point;
};

void consider(std::optional<Candidate>& best, const Candidate& c) {
  if (!best || c.distance < best->distance) best = c;
}

// Constrained minimum of |p - o| over circle boundary points p whose
// direction from o lies in the wedge: either the unconstrained closest point
// (if inside the wedge) or a point on one of the two wedge edge rays.
void circle_candidates(std::optional<Candidate>& best, Vec2 o, double heading,
                       double half_angle, const CircleShape& c) {
  const Vec2 rel = c.center - o;
  const double dist = norm(rel);
  if (dist <= c.radius) {
    consider(best, {0.0, o});
    return;
  }
  if (in_wedge(rel, heading, half_angle)) {
    const Vec2 p = o + ((dist - c.radius) / dist) * rel;
    consider(best, {dist - c.radius, p});
  }
  for (double edge : {heading - half_angle, heading + half_angle}) {
    const Vec2 dir = unit_from_angle(edge);
    if (auto t = ray_circle(o, dir, c)) consider(best, {*t, o + *t * dir});
  }
}

void rect_candidates(std::optional<Candidate>& best, Vec2 o, double heading,
                     double half_angle, const RectShape& r) {
  const Vec2 lo = r.center - r.half_extents;
  const Vec2 hi = r.center + r.half_extents;
  if (o.x >= lo.x && o.x <= hi.x && o.y >= lo.y && o.y <= hi.y) {
    consider(best, {0.0, o});
    return;
  }
  const Vec2 corners[4] = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
  for (int i = 0; i < 4; ++i) {
    const Vec2 a = corners[i];
    const Vec2 b = corners[(i + 1) % 4];
    const Vec2 q = closest_on_segment(o, a, b);
    if (in_wedge(q - o, heading, half_angle)) consider(best, {norm(q - o), q});
    for (Vec2 end : {a, b})
      if (in_wedge(end - o, heading, half_angle))
        consider(best, {norm(end - o), end});
    for (double edge : {heading - half_angle, heading + half_angle}) {
      const Vec2 dir = unit_from_angle(edge);
      if (auto t = ray_segment(o, dir, a, b)) consider(best, {*t, o + *t * dir});
    }
  }
}

}  // namespace

std::string to_string(SensorId id) {
  switch (id) {
    case SensorId::center: return "center";
    case SensorId::left: return "left";
    case SensorId::right: return "right";
  }
  return "center";
}

SensorId sensor_id_from_string(const std::string& name) {
  if (name == "center") return SensorId::center;
  if (name == "left") return SensorId::left;
  if (name == "right") return SensorId::right;
  throw ConfigError("unknown sensor id: " + name);
}

void SensorMount::validate() const {
  if (!(half_angle > 0.0 && half_angle < kHalfPi))
    throw ConfigError("sensor half angle must lie in (0, pi/2)");
  if (!(range_min > 0.0 && range_min < range_max))
    throw ConfigError("sensor range must satisfy 0 < range_min < range_max");
  if (!(accuracy_sigma >= 0.0))
    throw ConfigError("sensor accuracy sigma must be non-negative");
}

std::array<SensorMount, 3> default_mounts() {
  const double deg24 = 0.41887902047863906;  // 24 degrees
  SensorMount center{SensorId::center, 0.0, 0.0};
  center.height = 0.56;
  SensorMount left{SensorId::left, deg24, 0.037};
  left.height = 0.50;
  SensorMount right{SensorId::right, -deg24, -0.037};
  right.height = 0.50;
  return {center, left, right};
}

void Obstacle::validate() const {
  if (const auto* c = std::get_if<CircleShape>(&shape)) {
    if (!(c->radius > 0.0)) throw ConfigError("obstacle radius must be positive");
  } else {
    const auto& r = std::get<RectShape>(shape);
    if (!(r.half_extents.x > 0.0 && r.half_extents.y > 0.0))
      throw ConfigError("obstacle rectangle must be non-degenerate");
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    if (!(waypoints[i].t > waypoints[i - 1].t))
      throw ConfigError("obstacle waypoint times must be strictly increasing");
  if (!(t_on <= t_off)) throw ConfigError("obstacle active window is empty");
}

Vec2 Obstacle::offset_at(double t) const {
  if (waypoints.empty()) return {0.0, 0.0};
  if (t <= waypoints.front().t) return waypoints.front().offset;
  if (t >= waypoints.back().t) return waypoints.back().offset;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (t <= waypoints[i].t) {
      const Waypoint& a = waypoints[i - 1];
      const Waypoint& b = waypoints[i];
      const double u = (t - a.t) / (b.t - a.t);
      return a.offset + u * (b.offset - a.offset);
    }
  }
  return waypoints.back().offset;
}

double Obstacle::signed_distance(Vec2 point, double t) const {
  const Vec2 off = offset_at(t);
  if (const auto* c = std::get_if<CircleShape>(&shape))
    return norm(point - (c->center + off)) - c->radius;
  const auto& r = std::get<RectShape>(shape);
  const Vec2 d = point - (r.center + off);
  const double qx = std::fabs(d.x) - r.half_extents.x;
  const double qy = std::fabs(d.y) - r.half_extents.y;
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  const double inside = std::min(std::max(qx, qy), 0.0);
  return outside + inside;
}

void FaultModel::validate() const {
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0))
    throw ConfigError("dropout probability must lie in [0, 1]");
}

SensorPose sensor_pose(const VehicleState& s, const SensorMount& mount) {
  const Vec2 head = {s.x_p, s.y_p};
  const double handlebar = s.psi + s.delta;
  const Vec2 lateral = {-std::sin(handlebar), std::cos(handlebar)};
  return {head + mount.lateral_offset * lateral, handlebar + mount.yaw_offset};
}

std::optional<WedgeHit> wedge_hit(const SensorPose& pose,
                                  const SensorMount& mount,
                                  const std::vector<Obstacle>& obstacles,
                                  double t) {
  std::optional<Candidate> best;
  for (const Obstacle& obs : obstacles) {
    if (!obs.active(t)) continue;
    const Vec2 off = obs.offset_at(t);
    if (const auto* c = std::get_if<CircleShape>(&obs.shape)) {
      CircleShape moved = *c;
      moved.center = moved.center + off;
      circle_candidates(best, pose.origin, pose.heading, mount.half_angle, moved);
    } else {
      RectShape moved = std::get<RectShape>(obs.shape);
      moved.center = moved.center + off;
      rect_candidates(best, pose.origin, pose.heading, mount.half_angle, moved);
    }
  }
  if (!best || best->distance > mount.range_max) return std::nullopt;
  return WedgeHit{best->distance, best->point};
}

std::optional<double> wedge_distance(const VehicleState& s,
                                     const SensorMount& mount,
                                     const std::vector<Obstacle>& obstacles,
                                     double t) {
  const auto hit = wedge_hit(sensor_pose(s, mount), mount, obstacles, t);
  if (!hit) return std::nullopt;
  return hit->distance;
}

double measure(const std::optional<double>& true_distance,
               const SensorMount& mount, const FaultModel& fault, Rng& rng) {
  const bool dropout = rng.bernoulli(fault.dropout_prob);
  const double noise = rng.normal(0.0, mount.accuracy_sigma);
  if (dropout || !true_distance) return mount.range_max;
  return std::clamp(*true_distance + noise, mount.range_min, mount.range_max);
}

std::array<double, 3> sample_all(const VehicleState& s,
                                 const std::array<SensorMount, 3>& mounts,
                                 const std::vector<Obstacle>& obstacles,
                                 const FaultModel& fault, double t, Rng& rng) {
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i)
    out[i] = measure(wedge_distance(s, mounts[i], obstacles, t), mounts[i],
                     fault, rng);
  return out;
}

}  // namespace scootsim
