#include "circlelab/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circlelab {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConstraintViolation: return "constraint violation";
    case ErrorCode::TangentSingularity: return "tangent singularity";
    case ErrorCode::CollisionSingularity: return "collision singularity";
    case ErrorCode::ZeroMass: return "zero mass";
    case ErrorCode::WrongKind: return "wrong model kind";
    case ErrorCode::DegenerateVector: return "degenerate vector";
    case ErrorCode::GridMismatch: return "grid mismatch";
    case ErrorCode::SingularityEncountered: return "singularity encountered";
    case ErrorCode::StepLimitExceeded: return "step limit exceeded";
    case ErrorCode::DegenerateLeadingCoefficient: return "degenerate leading coefficient";
    case ErrorCode::RepeatedRoots: return "repeated roots";
    case ErrorCode::PoleHit: return "pole hit";
    case ErrorCode::ContinuationFailure: return "continuation failure";
    case ErrorCode::ConfigError: return "config error";
  }
  return "unknown error";
}

double wrap_angle(double theta) {
  double r = std::remainder(theta, 2.0 * M_PI);
  if (r <= -M_PI) r = M_PI;  // remainder may return the -pi endpoint
  return r;
}

double angle_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * M_PI)); }

double angle_distance_mod_pi(double a, double b) { return std::abs(std::remainder(a - b, M_PI)); }

AngleState::AngleState(std::vector<double> theta, std::vector<double> theta_dot)
    : theta_(std::move(theta)), theta_dot_(std::move(theta_dot)) {
  if (theta_.empty() || theta_.size() != theta_dot_.size())
    throw std::invalid_argument("AngleState needs matching nonempty theta/theta_dot");
  require_finite(theta_, "theta");
  require_finite(theta_dot_, "theta_dot");
}

CircleState::CircleState(std::vector<Vec2> r, std::vector<Vec2> r_dot)
    : r_(std::move(r)), r_dot_(std::move(r_dot)) {
  if (r_.empty() || r_.size() != r_dot_.size())
    throw std::invalid_argument("CircleState needs matching nonempty r/r_dot");
  for (std::size_t n = 0; n < r_.size(); ++n) {
    if (!std::isfinite(r_[n].x) || !std::isfinite(r_[n].y) || !std::isfinite(r_dot_[n].x) ||
        !std::isfinite(r_dot_[n].y))
      throw std::invalid_argument("CircleState entries must be finite");
  }
}

double CircleState::constraint_residual() const {
  double worst = 0.0;
  for (std::size_t n = 0; n < size(); ++n) {
    worst = std::max(worst, std::abs(dot(r_[n], r_[n]) - 1.0));
    worst = std::max(worst, std::abs(dot(r_[n], r_dot_[n])));
  }
  return worst;
}

double CircleState::radius_residual() const {
  double worst = 0.0;
  for (const Vec2& v : r_) worst = std::max(worst, std::abs(norm(v) - 1.0));
  return worst;
}

LineState::LineState(std::vector<double> z, std::vector<double> z_dot)
    : z_(std::move(z)), z_dot_(std::move(z_dot)) {
  if (z_.empty() || z_.size() != z_dot_.size())
    throw std::invalid_argument("LineState needs matching nonempty z/z_dot");
  require_finite(z_, "z");
  require_finite(z_dot_, "z_dot");
}

CircleState angle_to_circle(const AngleState& s) {
  std::vector<Vec2> r(s.size()), r_dot(s.size());
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double c = std::cos(s.theta(n));
    const double sn = std::sin(s.theta(n));
    r[n] = {c, sn};
    r_dot[n] = s.theta_dot(n) * Vec2{-sn, c};
  }
  return CircleState(std::move(r), std::move(r_dot));
}

AngleState circle_to_angle(const CircleState& c) {
  std::vector<double> theta(c.size()), theta_dot(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) {
    const Vec2 r = c.r(n);
    const double residual = std::abs(dot(r, r) - 1.0);
    if (residual > 1e-9)
      throw ConstraintViolation("particle " + std::to_string(n) + " off the unit circle by " +
                                std::to_string(residual));
    double th = std::atan2(r.y, r.x);
    if (th == -M_PI) th = M_PI;
    theta[n] = th;
    theta_dot[n] = cross(r, c.r_dot(n));
  }
  return AngleState(std::move(theta), std::move(theta_dot));
}

LineState angle_to_line(const AngleState& s) {
  std::vector<double> z(s.size()), z_dot(s.size());
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double c = std::cos(s.theta(n));
    if (std::abs(c) <= 1e-9)
      throw TangentSingularity("theta_" + std::to_string(n) + " too close to pi/2 mod pi");
    z[n] = std::tan(s.theta(n));
    z_dot[n] = s.theta_dot(n) / (c * c);
  }
  return LineState(std::move(z), std::move(z_dot));
}

AngleState line_to_angle(const LineState& l) {
  std::vector<double> theta(l.size()), theta_dot(l.size());
  for (std::size_t n = 0; n < l.size(); ++n) {
    const double th = std::atan(l.z(n));
    const double c = std::cos(th);
    theta[n] = th;
    theta_dot[n] = l.z_dot(n) * c * c;
  }
  return AngleState(std::move(theta), std::move(theta_dot));
}

}  // namespace circlelab
