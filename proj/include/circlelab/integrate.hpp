#pragma once

#include <functional>
#include <span>
#include <vector>

#include "circlelab/models.hpp"
#include "circlelab/states.hpp"

namespace circlelab {

enum class Projection { Off, Renormalize };

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;  // 0 = no cap
  long max_steps = 1000000;
  Projection projection = Projection::Off;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

/// First-order system y' = f(t, y).
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct RawTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  StepStats stats;
};

struct AngleTrajectory {
  std::vector<double> times;
  std::vector<AngleState> states;
  StepStats stats;
};

struct CircleTrajectory {
  std::vector<double> times;
  std::vector<CircleState> states;
  std::vector<double> constraint_residual;  // per sample
  StepStats stats;
};

/// Adaptive Dormand-Prince 5(4) integration with PI step-size control and
/// continuous (dense) output evaluated at exactly the requested grid times.
/// The grid must be strictly increasing and start at 0. Deterministic:
/// identical inputs give bit-identical output.
///
/// A right-hand side that throws a circlelab::Error inside a step triggers
/// step bisection; once the step shrinks below 1e-9 the singular time is
/// considered localized and SingularityEncountered is raised. Exceeding
/// cfg.max_steps raises StepLimitExceeded.
RawTrajectory integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                            std::span<const double> t_grid, const IntegratorConfig& cfg);

/// Integrates the second-order angle equations of the model as the doubled
/// first-order system (theta, theta_dot).
AngleTrajectory integrate_angle(const ModelSpec& model, const AngleState& s0,
                                std::span<const double> t_grid, const IntegratorConfig& cfg);

/// Integrates the vector-form equations in the 4N variables (r, rdot). With
/// Projection::Renormalize each accepted step is pulled back onto the
/// constraint manifold.
CircleTrajectory integrate_circle(const ModelSpec& model, const CircleState& c0,
                                  std::span<const double> t_grid, const IntegratorConfig& cfg);

/// Renormalizes r to unit length and removes the radial velocity component.
/// Idempotent; throws DegenerateVector if any |r_n| <= 0.5.
CircleState project_unit_circle(const CircleState& c);

/// Worst state distance between samples at t and t + period, over all
/// sampled t for which t + period is also on the grid: angles compared
/// modulo 2*pi (or modulo pi for the tan-transformed kinds), velocities
/// compared directly. Throws GridMismatch when no such pair exists.
enum class AngleWrapMode { TwoPi, Pi };
double recurrence_error(const AngleTrajectory& traj, double period,
                        AngleWrapMode mode = AngleWrapMode::TwoPi);

}  // namespace circlelab
