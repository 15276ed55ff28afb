#pragma once

#include <cmath>

#include <Eigen/Core>

namespace nurbsvo {

/// Planar point or vector in meters (or m/s for velocities).
using Vec2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline double angle_of(const Vec2& v) { return std::atan2(v.y(), v.x()); }

/// z-component of the planar cross product.
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace nurbsvo
