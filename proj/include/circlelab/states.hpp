#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "circlelab/errors.hpp"

namespace circlelab {

/// Planar 2-vector. All wedge products against the out-of-plane unit vector
/// reduce to the scalar cross(a, b) = a.x b.y - a.y b.x.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return s * a; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Rotate a by +90 degrees; the planar form of "z-hat wedge a".
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Wrap an angle to (-pi, pi].
double wrap_angle(double theta);

/// Distance between two angles modulo 2*pi (in [0, pi]).
double angle_distance(double a, double b);

/// Distance between two angles modulo pi (in [0, pi/2]).
double angle_distance_mod_pi(double a, double b);

/// N particle angles with their angular velocities; the canonical state.
class AngleState {
 public:
  AngleState(std::vector<double> theta, std::vector<double> theta_dot);

  std::size_t size() const noexcept { return theta_.size(); }
  std::span<const double> theta() const noexcept { return theta_; }
  std::span<const double> theta_dot() const noexcept { return theta_dot_; }
  double theta(std::size_t n) const { return theta_[n]; }
  double theta_dot(std::size_t n) const { return theta_dot_[n]; }

 private:
  std::vector<double> theta_, theta_dot_;
};

/// N unit vectors on the circle with tangent velocities.
///
/// The constraint |r_n| = 1, r_n . rdot_n = 0 is not enforced on
/// construction: integrated states may carry drift up to the documented input
/// tolerance of each consumer (1e-9), while states produced by
/// angle_to_circle satisfy it to rounding. Use constraint_residual() to
/// inspect a state.
class CircleState {
 public:
  CircleState(std::vector<Vec2> r, std::vector<Vec2> r_dot);

  std::size_t size() const noexcept { return r_.size(); }
  std::span<const Vec2> r() const noexcept { return r_; }
  std::span<const Vec2> r_dot() const noexcept { return r_dot_; }
  Vec2 r(std::size_t n) const { return r_[n]; }
  Vec2 r_dot(std::size_t n) const { return r_dot_[n]; }

  /// max over n of max(| |r_n|^2 - 1 |, |r_n . rdot_n|).
  double constraint_residual() const;

  /// max over n of | |r_n| - 1 |.
  double radius_residual() const;

 private:
  std::vector<Vec2> r_, r_dot_;
};

/// N line coordinates z_n = tan(theta_n) with their velocities.
class LineState {
 public:
  LineState(std::vector<double> z, std::vector<double> z_dot);

  std::size_t size() const noexcept { return z_.size(); }
  std::span<const double> z() const noexcept { return z_; }
  std::span<const double> z_dot() const noexcept { return z_dot_; }
  double z(std::size_t n) const { return z_[n]; }
  double z_dot(std::size_t n) const { return z_dot_[n]; }

 private:
  std::vector<double> z_, z_dot_;
};

/// x_n = cos theta_n, y_n = sin theta_n, rdot_n = theta_dot_n * perp(r_n).
CircleState angle_to_circle(const AngleState& s);

/// Inverse of angle_to_circle: theta_n = atan2(y_n, x_n) in (-pi, pi],
/// theta_dot_n = cross(r_n, rdot_n).
///
/// Throws ConstraintViolation if any |x^2 + y^2 - 1| > 1e-9.
AngleState circle_to_angle(const CircleState& c);

/// z_n = tan theta_n, zdot_n = theta_dot_n / cos^2 theta_n.
///
/// Throws TangentSingularity if any |cos theta_n| <= 1e-9.
LineState angle_to_line(const AngleState& s);

/// Principal-branch inverse of angle_to_line: theta_n = atan(z_n) in
/// (-pi/2, pi/2), theta_dot_n = zdot_n * cos^2 theta_n.
AngleState line_to_angle(const LineState& l);

}  // namespace circlelab
