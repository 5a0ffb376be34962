#include "circlelab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circlelab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b_i - bhat_i of the embedded 4th-order solution.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous-extension weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinScale = 0.2;   // largest allowed step shrink factor
constexpr double kMaxScale = 10.0;  // largest allowed step growth factor
constexpr double kBeta = 0.04;      // PI stabilization
constexpr double kSingularStep = 1e-9;

struct DenseCoeffs {
  std::vector<double> c1, c2, c3, c4, c5;
  double t_old = 0.0, h = 0.0;

  void eval(double t, std::span<double> out) const {
    const double s = (t - t_old) / h;
    const double s1 = 1.0 - s;
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = c1[i] + s * (c2[i] + s1 * (c3[i] + s * (c4[i] + s1 * c5[i])));
  }
};

class Dopri5 {
 public:
  Dopri5(const OdeRhs& rhs, std::span<const double> y0, const IntegratorConfig& cfg)
      : rhs_(rhs), cfg_(cfg), n_(y0.size()), y_(y0.begin(), y0.end()) {
    if (cfg.rel_tol <= 0.0 || cfg.abs_tol <= 0.0)
      throw std::invalid_argument("tolerances must be positive");
    if (cfg.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &y_new_, &y_stage_, &y_err_})
      k->assign(n_, 0.0);
    dense_.c1.assign(n_, 0.0);
    dense_.c2.assign(n_, 0.0);
    dense_.c3.assign(n_, 0.0);
    dense_.c4.assign(n_, 0.0);
    dense_.c5.assign(n_, 0.0);
    eval(0.0, y_, k1_);
    h_ = initial_step();
  }

  double t() const { return t_; }
  const DenseCoeffs& dense() const { return dense_; }
  std::span<const double> y() const { return y_; }
  StepStats& stats() { return stats_; }

  // Advances one accepted step; on return dense() interpolates over
  // [t_old, t].
  void step(double t_end) {
    for (;;) {
      if (stats_.accepted + stats_.rejected >= cfg_.max_steps)
        throw StepLimitExceeded("no convergence within " + std::to_string(cfg_.max_steps) +
                                " steps at t = " + std::to_string(t_));
      double h = h_;
      if (cfg_.max_step > 0.0) h = std::min(h, cfg_.max_step);
      h = std::min(h, t_end - t_);

      bool singular = false;
      double err = 0.0;
      try {
        err = try_step(h);
      } catch (const Error&) {
        singular = true;
      }

      if (singular) {
        // Bisect toward the singular time; k1 at t_ is known good.
        if (h <= kSingularStep)
          throw SingularityEncountered(
              "right-hand side singular near t = " + std::to_string(t_), t_);
        ++stats_.rejected;
        h_ = 0.5 * h;
        continue;
      }

      // PI controller (Hairer's DOPRI5 flavor).
      const double expo = 0.2 - kBeta * 0.75;
      double scale = kSafety * std::pow(err, -expo) * std::pow(err_old_, kBeta);
      scale = std::clamp(scale, kMinScale, kMaxScale);

      if (err <= 1.0) {
        prepare_dense(h);
        t_ += h;
        y_.swap(y_new_);
        k1_.swap(k7_);  // FSAL
        err_old_ = std::max(err, 1e-4);
        ++stats_.accepted;
        stats_.min_step = stats_.min_step == 0.0 ? h : std::min(stats_.min_step, h);
        stats_.max_step = std::max(stats_.max_step, h);
        h_ = h * scale;
        return;
      }
      ++stats_.rejected;
      h_ = h * std::min(scale, 1.0);
    }
  }

  // Replaces the current state (projection hook); refreshes the FSAL slope.
  void replace_state(std::span<const double> y) {
    std::copy(y.begin(), y.end(), y_.begin());
    eval(t_, y_, k1_);
  }

 private:
  void eval(double t, std::span<const double> y, std::span<double> out) {
    ++stats_.rhs_evaluations;
    rhs_(t, y, out);
  }

  double error_norm(std::span<const double> y_old) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk =
          cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y_old[i]), std::abs(y_new_[i]));
      const double q = y_err_[i] / sk;
      sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(n_));
  }

  // One trial step of size h; returns the scaled error norm.
  double try_step(double h) {
    auto stage = [&](std::span<const double> weights, std::span<std::vector<double>*> ks) {
      for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j) acc += weights[j] * (*ks[j])[i];
        y_stage_[i] = y_[i] + h * acc;
      }
    };
    {
      const double w[] = {a21};
      std::vector<double>* ks[] = {&k1_};
      stage(w, ks);
      eval(t_ + c2 * h, y_stage_, k2_);
    }
    {
      const double w[] = {a31, a32};
      std::vector<double>* ks[] = {&k1_, &k2_};
      stage(w, ks);
      eval(t_ + c3 * h, y_stage_, k3_);
    }
    {
      const double w[] = {a41, a42, a43};
      std::vector<double>* ks[] = {&k1_, &k2_, &k3_};
      stage(w, ks);
      eval(t_ + c4 * h, y_stage_, k4_);
    }
    {
      const double w[] = {a51, a52, a53, a54};
      std::vector<double>* ks[] = {&k1_, &k2_, &k3_, &k4_};
      stage(w, ks);
      eval(t_ + c5 * h, y_stage_, k5_);
    }
    {
      const double w[] = {a61, a62, a63, a64, a65};
      std::vector<double>* ks[] = {&k1_, &k2_, &k3_, &k4_, &k5_};
      stage(w, ks);
      eval(t_ + h, y_stage_, k6_);
    }
    for (std::size_t i = 0; i < n_; ++i)
      y_new_[i] =
          y_[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
    eval(t_ + h, y_new_, k7_);
    for (std::size_t i = 0; i < n_; ++i)
      y_err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                       e7 * k7_[i]);
    return error_norm(y_);
  }

  void prepare_dense(double h) {
    dense_.t_old = t_;
    dense_.h = h;
    for (std::size_t i = 0; i < n_; ++i) {
      const double ydiff = y_new_[i] - y_[i];
      const double bspl = h * k1_[i] - ydiff;
      dense_.c1[i] = y_[i];
      dense_.c2[i] = ydiff;
      dense_.c3[i] = bspl;
      dense_.c4[i] = ydiff - h * k7_[i] - bspl;
      dense_.c5[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                          d7 * k7_[i]);
    }
  }

  // Hairer's starting-step heuristic.
  double initial_step() {
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y_[i]);
      d0 += (y_[i] / sk) * (y_[i] / sk);
      d1n += (k1_[i] / sk) * (k1_[i] / sk);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n_));
    d1n = std::sqrt(d1n / static_cast<double>(n_));
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    if (cfg_.max_step > 0.0) h0 = std::min(h0, cfg_.max_step);

    // One explicit Euler probe to estimate the second derivative.
    for (std::size_t i = 0; i < n_; ++i) y_stage_[i] = y_[i] + h0 * k1_[i];
    try {
      eval(h0, y_stage_, k2_);
    } catch (const Error&) {
      return std::max(1e-10, 0.01 * h0);
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y_[i]);
      const double q = (k2_[i] - k1_[i]) / sk;
      d2 += q * q;
    }
    d2 = std::sqrt(d2 / static_cast<double>(n_)) / h0;
    const double dmax = std::max(d1n, d2);
    double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                              : std::pow(0.01 / dmax, 1.0 / 5.0);
    double h = std::min(100.0 * h0, h1);
    if (cfg_.max_step > 0.0) h = std::min(h, cfg_.max_step);
    return h;
  }

  const OdeRhs& rhs_;
  IntegratorConfig cfg_;
  std::size_t n_;
  double t_ = 0.0;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  std::vector<double> y_, y_new_, y_stage_, y_err_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_;
  DenseCoeffs dense_;
  StepStats stats_;
};

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("t_grid must be nonempty");
  if (t_grid.front() != 0.0) throw std::invalid_argument("t_grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("t_grid must be strictly increasing");
}

using SampleHook = std::function<void(double t, std::span<const double> y)>;

void run_integration(const OdeRhs& rhs, std::span<const double> y0,
                     std::span<const double> t_grid, const IntegratorConfig& cfg,
                     const SampleHook& emit, StepStats& stats_out,
                     const std::function<void(std::vector<double>&)>& project = nullptr) {
  check_grid(t_grid);
  Dopri5 solver(rhs, y0, cfg);
  emit(0.0, y0);
  std::size_t next = 1;
  std::vector<double> sample(y0.size());
  const double t_end = t_grid.back();
  while (next < t_grid.size()) {
    solver.step(t_end);
    while (next < t_grid.size() && t_grid[next] <= solver.t() + 1e-14 * std::max(1.0, t_end)) {
      if (t_grid[next] >= solver.t()) {
        emit(t_grid[next], solver.y());
      } else {
        solver.dense().eval(t_grid[next], sample);
        emit(t_grid[next], sample);
      }
      ++next;
    }
    if (project) {
      std::vector<double> current(solver.y().begin(), solver.y().end());
      project(current);
      solver.replace_state(current);
    }
  }
  stats_out = solver.stats();
}

}  // namespace

RawTrajectory integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                            std::span<const double> t_grid, const IntegratorConfig& cfg) {
  RawTrajectory traj;
  run_integration(
      rhs, y0, t_grid, cfg,
      [&](double t, std::span<const double> y) {
        traj.times.push_back(t);
        traj.states.emplace_back(y.begin(), y.end());
      },
      traj.stats);
  return traj;
}

AngleTrajectory integrate_angle(const ModelSpec& model, const AngleState& s0,
                                std::span<const double> t_grid, const IntegratorConfig& cfg) {
  const std::size_t N = s0.size();
  const OdeRhs rhs = [&model, N](double, std::span<const double> y, std::span<double> dydt) {
    AngleState s(std::vector<double>(y.begin(), y.begin() + N),
                 std::vector<double>(y.begin() + N, y.end()));
    const std::vector<double> acc = rhs_angle(model, s);
    for (std::size_t i = 0; i < N; ++i) {
      dydt[i] = y[N + i];
      dydt[N + i] = acc[i];
    }
  };
  std::vector<double> y0(2 * N);
  std::copy(s0.theta().begin(), s0.theta().end(), y0.begin());
  std::copy(s0.theta_dot().begin(), s0.theta_dot().end(), y0.begin() + N);

  AngleTrajectory traj;
  run_integration(
      rhs, y0, t_grid, cfg,
      [&](double t, std::span<const double> y) {
        traj.times.push_back(t);
        traj.states.emplace_back(std::vector<double>(y.begin(), y.begin() + N),
                                 std::vector<double>(y.begin() + N, y.end()));
      },
      traj.stats);
  return traj;
}

namespace {

CircleState unpack_circle(std::span<const double> y) {
  const std::size_t N = y.size() / 4;
  std::vector<Vec2> r(N), rd(N);
  for (std::size_t n = 0; n < N; ++n) {
    r[n] = {y[2 * n], y[2 * n + 1]};
    rd[n] = {y[2 * N + 2 * n], y[2 * N + 2 * n + 1]};
  }
  return CircleState(std::move(r), std::move(rd));
}

}  // namespace

CircleTrajectory integrate_circle(const ModelSpec& model, const CircleState& c0,
                                  std::span<const double> t_grid, const IntegratorConfig& cfg) {
  const std::size_t N = c0.size();
  const OdeRhs rhs = [&model, N](double, std::span<const double> y, std::span<double> dydt) {
    const CircleState c = unpack_circle(y);
    const std::vector<Vec2> acc = rhs_circle(model, c);
    for (std::size_t n = 0; n < N; ++n) {
      dydt[2 * n] = y[2 * N + 2 * n];
      dydt[2 * n + 1] = y[2 * N + 2 * n + 1];
      dydt[2 * N + 2 * n] = acc[n].x;
      dydt[2 * N + 2 * n + 1] = acc[n].y;
    }
  };
  std::vector<double> y0(4 * N);
  for (std::size_t n = 0; n < N; ++n) {
    y0[2 * n] = c0.r(n).x;
    y0[2 * n + 1] = c0.r(n).y;
    y0[2 * N + 2 * n] = c0.r_dot(n).x;
    y0[2 * N + 2 * n + 1] = c0.r_dot(n).y;
  }

  std::function<void(std::vector<double>&)> project;
  if (cfg.projection == Projection::Renormalize) {
    project = [N](std::vector<double>& y) {
      const CircleState projected = project_unit_circle(unpack_circle(y));
      for (std::size_t n = 0; n < N; ++n) {
        y[2 * n] = projected.r(n).x;
        y[2 * n + 1] = projected.r(n).y;
        y[2 * N + 2 * n] = projected.r_dot(n).x;
        y[2 * N + 2 * n + 1] = projected.r_dot(n).y;
      }
    };
  }

  CircleTrajectory traj;
  run_integration(
      rhs, y0, t_grid, cfg,
      [&](double t, std::span<const double> y) {
        traj.times.push_back(t);
        traj.states.push_back(unpack_circle(y));
        traj.constraint_residual.push_back(traj.states.back().constraint_residual());
      },
      traj.stats, project);
  return traj;
}

CircleState project_unit_circle(const CircleState& c) {
  std::vector<Vec2> r(c.size()), rd(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double len = norm(c.r(n));
    if (len <= 0.5)
      throw DegenerateVector("r_" + std::to_string(n) + " too short to renormalize");
    r[n] = (1.0 / len) * c.r(n);
    rd[n] = c.r_dot(n) - dot(c.r_dot(n), r[n]) * r[n];
  }
  return CircleState(std::move(r), std::move(rd));
}

double recurrence_error(const AngleTrajectory& traj, double period, AngleWrapMode mode) {
  const double grid_tol = 1e-9;
  double worst = -1.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double target = traj.times[i] + period;
    while (j < traj.times.size() && traj.times[j] < target - grid_tol) ++j;
    if (j >= traj.times.size()) break;
    if (std::abs(traj.times[j] - target) > grid_tol) continue;
    const AngleState& a = traj.states[i];
    const AngleState& b = traj.states[j];
    double dist = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      const double dth = mode == AngleWrapMode::TwoPi
                             ? angle_distance(b.theta(n), a.theta(n))
                             : angle_distance_mod_pi(b.theta(n), a.theta(n));
      dist = std::max(dist, dth);
      dist = std::max(dist, std::abs(b.theta_dot(n) - a.theta_dot(n)));
    }
    worst = std::max(worst, dist);
  }
  if (worst < 0.0)
    throw GridMismatch("no sample pairs separated by the requested period");
  return worst;
}

}  // namespace circlelab
