#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace eot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }

  // Counter-clockwise rotation.
  Vec2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Rectangle with yaw; `length` extends along the yaw axis, `width` across it.
struct OrientedBox {
  Vec2 centre{};
  double length = 0.0;
  double width = 0.0;
  double yaw = 0.0;

  bool contains(const Vec2& p, double tol = 1e-9) const {
    const Vec2 d = (p - centre).rotated(-yaw);
    return std::abs(d.x) <= 0.5 * length + tol && std::abs(d.y) <= 0.5 * width + tol;
  }

  std::vector<Vec2> corners() const {
    const Vec2 u = unit_vector(yaw);
    const Vec2 n{-u.y, u.x};
    const Vec2 hl = u * (0.5 * length);
    const Vec2 hw = n * (0.5 * width);
    return {centre + hl + hw, centre + hl - hw, centre - hl - hw, centre - hl + hw};
  }
};

/// Tightest rectangle at the given yaw whose edges touch the extreme points.
/// Degenerate (zero-extent) boxes are valid for collinear or single-point input.
inline OrientedBox extreme_points_bbox(std::span<const Vec2> points, double orientation) {
  if (points.empty()) throw std::invalid_argument("extreme_points_bbox: empty point set");
  const Vec2 u = unit_vector(orientation);
  const Vec2 n{-u.y, u.x};
  double lo_u = points[0].dot(u), hi_u = lo_u;
  double lo_n = points[0].dot(n), hi_n = lo_n;
  for (const Vec2& p : points.subspan(1)) {
    const double pu = p.dot(u), pn = p.dot(n);
    lo_u = std::min(lo_u, pu); hi_u = std::max(hi_u, pu);
    lo_n = std::min(lo_n, pn); hi_n = std::max(hi_n, pn);
  }
  OrientedBox box;
  box.yaw = orientation;
  box.length = hi_u - lo_u;
  box.width = hi_n - lo_n;
  const double cu = 0.5 * (lo_u + hi_u), cn = 0.5 * (lo_n + hi_n);
  box.centre = u * cu + n * cn;
  return box;
}

}  // namespace eot
