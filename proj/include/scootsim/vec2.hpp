#pragma once

#include <cmath>

namespace scootsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Signed angular difference wrapped to (-pi, pi].
inline double wrap_angle(double theta) {
  const double two_pi = 6.283185307179586476925286766559;
  double a = std::remainder(theta, two_pi);
  return a;
}

}  // namespace scootsim
