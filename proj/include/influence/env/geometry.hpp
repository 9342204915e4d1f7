#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace influence::geometry {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Wraps to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(a + std::numbers::pi, kTwoPi);
  if (w < 0) w += kTwoPi;
  w -= std::numbers::pi;
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

// Rectangle centered at `center`, long axis along `heading`.
struct OrientedBox {
  Vec2 center;
  double heading = 0.0;
  double length = 4.0;
  double width = 2.0;

  std::array<Vec2, 4> corners() const;
  double bounding_radius() const { return 0.5 * std::hypot(length, width); }
};

// Separating-axis test. Touching boxes count as overlapping.
bool overlaps(const OrientedBox& a, const OrientedBox& b);

}  // namespace influence::geometry
