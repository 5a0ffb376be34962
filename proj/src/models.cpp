#include "circlelab/models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circlelab/interp.hpp"

namespace circlelab {

namespace {

constexpr double kCollisionTol = 1e-10;
constexpr double kTangentTol = 1e-9;

void check_collisions(std::span<const double> theta) {
  for (std::size_t n = 0; n < theta.size(); ++n)
    for (std::size_t m = n + 1; m < theta.size(); ++m)
      if (std::abs(std::sin(theta[n] - theta[m])) <= kCollisionTol)
        throw CollisionSingularity("particles " + std::to_string(n) + " and " +
                                   std::to_string(m) + " collide");
}

void check_tangent(std::span<const double> theta) {
  for (std::size_t n = 0; n < theta.size(); ++n)
    if (std::abs(std::cos(theta[n])) <= kTangentTol)
      throw TangentSingularity("theta_" + std::to_string(n) + " too close to pi/2 mod pi");
}

void check_particle_count(std::size_t have, std::size_t want, const char* what) {
  if (have != want)
    throw std::invalid_argument(std::string(what) + " sized for " + std::to_string(have) +
                                " particles, state has " + std::to_string(want));
}

std::vector<double> sigmas(std::span<const double> theta) {
  const std::size_t N = theta.size();
  std::vector<double> sig(N, 1.0);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t l = 0; l < N; ++l)
      if (l != n) sig[n] *= std::sin(theta[n] - theta[l]);
  return sig;
}

// rho_n theta_ddot_n = theta_dot_n f_n sum_l cot(th_n - th_l)
//                      + theta_dot_n sum_l (sigma_n/sigma_l) f_l / sin(th_n - th_l)
//                      - sum_m (drho_nm theta_dot_n + dgamma_nm) theta_dot_m,
// with f_k = rho_k theta_dot_k + gamma_k. The closed-form kinds below are the
// two special assignments of rho, gamma.
std::vector<double> rhs_general(const GeneralInterpParams& p, const AngleState& s) {
  const std::size_t N = s.size();
  const auto theta = s.theta();
  check_collisions(theta);
  std::vector<double> rho(N), f(N);
  for (std::size_t k = 0; k < N; ++k) {
    rho[k] = p.rho(theta, k);
    f[k] = rho[k] * s.theta_dot(k) + p.gamma(theta, k);
  }
  const std::vector<double> sig = sigmas(theta);
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (rho[n] == 0.0)
      throw ZeroMass("rho_" + std::to_string(n) + " vanishes at the current state");
    double cot_sum = 0.0, coupling = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      const double d = theta[n] - theta[l];
      cot_sum += 1.0 / std::tan(d);
      coupling += (sig[n] / sig[l]) * f[l] / std::sin(d);
    }
    double partials = 0.0;
    for (std::size_t m = 0; m < N; ++m)
      partials +=
          (p.rho_partial(theta, n, m) * s.theta_dot(n) + p.gamma_partial(theta, n, m)) *
          s.theta_dot(m);
    out[n] = (s.theta_dot(n) * f[n] * cot_sum + s.theta_dot(n) * coupling - partials) / rho[n];
  }
  return out;
}

std::vector<double> rhs_many_body(const ManyBodyParams& p, const AngleState& s) {
  const std::size_t N = s.size();
  check_particle_count(p.mu.size(), N, "mu/eta");
  const auto theta = s.theta();
  check_collisions(theta);
  const std::vector<double> sig = sigmas(theta);
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    double cot_sum = 0.0, coupling = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      const double d = theta[n] - theta[l];
      cot_sum += 1.0 / std::tan(d);
      coupling += (sig[n] / sig[l]) * (p.mu[l] * s.theta_dot(l) + p.eta[l]) / std::sin(d);
    }
    out[n] = (s.theta_dot(n) * (p.mu[n] * s.theta_dot(n) + p.eta[n]) * cot_sum +
              s.theta_dot(n) * coupling) /
             p.mu[n];
  }
  return out;
}

std::vector<double> rhs_two_body(const ManyBodyParams& p, const AngleState& s) {
  const std::size_t N = s.size();
  check_particle_count(p.mu.size(), N, "mu/eta");
  const auto theta = s.theta();
  check_collisions(theta);
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    double acc = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      const double d = theta[n] - theta[l];
      acc += (s.theta_dot(n) * (p.mu[l] * s.theta_dot(l) + p.eta[l]) +
              (p.mu[n] * s.theta_dot(n) + p.eta[n]) * s.theta_dot(l) * std::cos(d)) /
             std::sin(d);
    }
    out[n] = acc / p.mu[n];
  }
  return out;
}

std::vector<double> rhs_sutherland(const SutherlandParams& p, const AngleState& s) {
  const std::size_t N = s.size();
  const auto theta = s.theta();
  check_collisions(theta);
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    double acc = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      const double sd = std::sin(theta[n] - theta[l]);
      acc += std::cos(theta[n] - theta[l]) / (sd * sd * sd);
    }
    out[n] = p.g * p.g * acc;
  }
  return out;
}

std::vector<double> rhs_goldfish_circle(const GoldfishCircleParams& p, const AngleState& s) {
  const std::size_t N = s.size();
  const auto theta = s.theta();
  check_collisions(theta);
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    double acc = p.g0 + p.g1 * s.theta_dot(n);
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      acc += (2.0 * s.theta_dot(n) * s.theta_dot(l) +
              p.g2 * (s.theta_dot(n) + s.theta_dot(l)) + p.g3) /
             std::tan(theta[n] - theta[l]);
    }
    out[n] = acc;
  }
  return out;
}

std::vector<double> rhs_isochronous_tan(const IsochronousTanParams& p, const AngleState& s) {
  const std::size_t N = s.size();
  const auto theta = s.theta();
  check_collisions(theta);
  check_tangent(theta);
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double c = std::cos(theta[n]);
    const double c5 = c * c * c * c * c;
    double pair_sum = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      const double cl = std::cos(theta[l]);
      const double sd = std::sin(theta[n] - theta[l]);
      pair_sum += (cl * cl * cl) / (sd * sd * sd);
    }
    out[n] = -2.0 * s.theta_dot(n) * s.theta_dot(n) * std::tan(theta[n]) -
             4.0 * std::sin(theta[n]) * c + p.g * p.g * c5 * pair_sum;
  }
  return out;
}

std::vector<double> rhs_goldfish_tan(const AngleState& s) {
  const std::size_t N = s.size();
  const auto theta = s.theta();
  check_collisions(theta);
  check_tangent(theta);
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double c = std::cos(theta[n]);
    double pair_sum = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      const double cl = std::cos(theta[l]);
      pair_sum += (2.0 * s.theta_dot(n) * s.theta_dot(l) + c * c * cl * cl) /
                  (cl * std::sin(theta[n] - theta[l]));
    }
    out[n] = -2.0 * s.theta_dot(n) * s.theta_dot(n) * std::tan(theta[n]) -
             std::sin(theta[n]) * c + c * pair_sum;
  }
  return out;
}

// Vector-form helpers. theta_dot and the pairwise sines/cosines are read off
// the stored vectors through the planar dictionary
//   theta_dot_n = cross(r_n, rdot_n),  sin(th_n - th_l) = cross(r_l, r_n),
//   cos(th_n - th_l) = dot(r_l, r_n).
void check_circle_state(const CircleState& c) {
  for (std::size_t n = 0; n < c.size(); ++n)
    if (std::abs(dot(c.r(n), c.r(n)) - 1.0) > 1e-9)
      throw ConstraintViolation("particle " + std::to_string(n) + " off the unit circle");
}

void check_circle_collisions(const CircleState& c) {
  for (std::size_t n = 0; n < c.size(); ++n)
    for (std::size_t m = n + 1; m < c.size(); ++m)
      if (std::abs(cross(c.r(m), c.r(n))) <= kCollisionTol)
        throw CollisionSingularity("particles " + std::to_string(n) + " and " +
                                   std::to_string(m) + " collide");
}

std::vector<double> circle_sigmas(const CircleState& c) {
  const std::size_t N = c.size();
  std::vector<double> sig(N, 1.0);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t l = 0; l < N; ++l)
      if (l != n) sig[n] *= cross(c.r(l), c.r(n));
  return sig;
}

}  // namespace

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::ManyBody: return "many_body";
    case ModelKind::TwoBody: return "two_body";
    case ModelKind::Sutherland: return "sutherland";
    case ModelKind::GoldfishCircle: return "goldfish_circle";
    case ModelKind::IsochronousTan: return "isochronous_tan";
    case ModelKind::GoldfishTan: return "goldfish_tan";
    case ModelKind::GeneralInterp: return "general_interp";
  }
  return "unknown";
}

ModelSpec ModelSpec::many_body(std::vector<double> mu, std::vector<double> eta) {
  if (mu.size() != eta.size() || mu.empty())
    throw std::invalid_argument("mu and eta must be nonempty and of equal length");
  for (std::size_t n = 0; n < mu.size(); ++n)
    if (mu[n] == 0.0) throw ZeroMass("mu_" + std::to_string(n) + " must be nonzero");
  return ModelSpec(ModelKind::ManyBody, ManyBodyParams{std::move(mu), std::move(eta)});
}

ModelSpec ModelSpec::two_body(std::vector<double> mu, std::vector<double> eta) {
  ModelSpec m = many_body(std::move(mu), std::move(eta));
  m.kind_ = ModelKind::TwoBody;
  return m;
}

ModelSpec ModelSpec::sutherland(double g) {
  return ModelSpec(ModelKind::Sutherland, SutherlandParams{g});
}

ModelSpec ModelSpec::goldfish_circle(double g0, double g1, double g2, double g3) {
  return ModelSpec(ModelKind::GoldfishCircle, GoldfishCircleParams{g0, g1, g2, g3});
}

ModelSpec ModelSpec::isochronous_tan(double g) {
  return ModelSpec(ModelKind::IsochronousTan, IsochronousTanParams{g});
}

ModelSpec ModelSpec::goldfish_tan() {
  return ModelSpec(ModelKind::GoldfishTan, GoldfishTanParams{});
}

ModelSpec ModelSpec::general_interp(GeneralInterpParams params) {
  if (!params.rho || !params.gamma || !params.rho_partial || !params.gamma_partial)
    throw std::invalid_argument("general_interp requires all four callbacks");
  return ModelSpec(ModelKind::GeneralInterp, std::move(params));
}

const ManyBodyParams& ModelSpec::many_body_params() const {
  if (kind_ != ModelKind::ManyBody && kind_ != ModelKind::TwoBody)
    throw WrongKind("model has no mu/eta parameters");
  return std::get<ManyBodyParams>(params_);
}

const SutherlandParams& ModelSpec::sutherland_params() const {
  if (kind_ != ModelKind::Sutherland) throw WrongKind("not a Sutherland model");
  return std::get<SutherlandParams>(params_);
}

const GoldfishCircleParams& ModelSpec::goldfish_circle_params() const {
  if (kind_ != ModelKind::GoldfishCircle) throw WrongKind("not a goldfish_circle model");
  return std::get<GoldfishCircleParams>(params_);
}

const IsochronousTanParams& ModelSpec::isochronous_tan_params() const {
  if (kind_ != ModelKind::IsochronousTan) throw WrongKind("not an isochronous_tan model");
  return std::get<IsochronousTanParams>(params_);
}

const GeneralInterpParams& ModelSpec::general_interp_params() const {
  if (kind_ != ModelKind::GeneralInterp) throw WrongKind("not a general_interp model");
  return std::get<GeneralInterpParams>(params_);
}

bool ModelSpec::is_interp_family() const noexcept {
  return kind_ == ModelKind::ManyBody || kind_ == ModelKind::TwoBody ||
         kind_ == ModelKind::GeneralInterp;
}

ModelSpec ModelSpec::permuted(std::span<const std::size_t> perm) const {
  if (kind_ != ModelKind::ManyBody && kind_ != ModelKind::TwoBody) return *this;
  const auto& p = std::get<ManyBodyParams>(params_);
  if (perm.size() != p.mu.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<double> mu(p.mu.size()), eta(p.eta.size());
  for (std::size_t n = 0; n < perm.size(); ++n) {
    mu[n] = p.mu[perm[n]];
    eta[n] = p.eta[perm[n]];
  }
  ModelSpec out(kind_, ManyBodyParams{std::move(mu), std::move(eta)});
  return out;
}

std::vector<double> rhs_angle(const ModelSpec& model, const AngleState& s) {
  switch (model.kind()) {
    case ModelKind::ManyBody: return rhs_many_body(model.many_body_params(), s);
    case ModelKind::TwoBody: return rhs_two_body(model.many_body_params(), s);
    case ModelKind::Sutherland: return rhs_sutherland(model.sutherland_params(), s);
    case ModelKind::GoldfishCircle:
      return rhs_goldfish_circle(model.goldfish_circle_params(), s);
    case ModelKind::IsochronousTan:
      return rhs_isochronous_tan(model.isochronous_tan_params(), s);
    case ModelKind::GoldfishTan: return rhs_goldfish_tan(s);
    case ModelKind::GeneralInterp: return rhs_general(model.general_interp_params(), s);
  }
  throw std::logic_error("unreachable");
}

std::vector<Vec2> rhs_circle(const ModelSpec& model, const CircleState& c) {
  const std::size_t N = c.size();
  check_circle_state(c);
  check_circle_collisions(c);

  // Tangential forcing per particle; the centripetal term is shared.
  std::vector<double> tangential(N, 0.0);
  std::vector<Vec2> extra(N, Vec2{0.0, 0.0});

  switch (model.kind()) {
    case ModelKind::ManyBody: {
      const auto& p = model.many_body_params();
      check_particle_count(p.mu.size(), N, "mu/eta");
      const std::vector<double> sig = circle_sigmas(c);
      for (std::size_t n = 0; n < N; ++n) {
        const double v2 = dot(c.r_dot(n), c.r_dot(n));
        const double td = cross(c.r(n), c.r_dot(n));
        double cot_sum = 0.0, coupling = 0.0;
        for (std::size_t l = 0; l < N; ++l) {
          if (l == n) continue;
          const double sd = cross(c.r(l), c.r(n));
          cot_sum += dot(c.r(l), c.r(n)) / sd;
          coupling += (sig[n] / sig[l]) * (p.mu[l] * cross(c.r(l), c.r_dot(l)) + p.eta[l]) / sd;
        }
        tangential[n] = ((p.mu[n] * v2 + p.eta[n] * td) * cot_sum + td * coupling) / p.mu[n];
      }
      break;
    }
    case ModelKind::TwoBody: {
      const auto& p = model.many_body_params();
      check_particle_count(p.mu.size(), N, "mu/eta");
      for (std::size_t n = 0; n < N; ++n) {
        const double td = cross(c.r(n), c.r_dot(n));
        double acc = 0.0;
        for (std::size_t l = 0; l < N; ++l) {
          if (l == n) continue;
          const double sd = cross(c.r(l), c.r(n));
          acc += (td * (p.mu[l] * cross(c.r(l), c.r_dot(l)) + p.eta[l]) -
                  (p.mu[n] * td + p.eta[n]) * cross(c.r_dot(l), c.r(n))) /
                 sd;
        }
        tangential[n] = acc / p.mu[n];
      }
      break;
    }
    case ModelKind::Sutherland: {
      const auto& p = model.sutherland_params();
      for (std::size_t n = 0; n < N; ++n) {
        double acc = 0.0;
        for (std::size_t l = 0; l < N; ++l) {
          if (l == n) continue;
          const double sd = cross(c.r(l), c.r(n));
          acc += dot(c.r(n), c.r(l)) / (sd * sd * sd);
        }
        tangential[n] = p.g * p.g * acc;
      }
      break;
    }
    case ModelKind::GoldfishCircle: {
      const auto& p = model.goldfish_circle_params();
      for (std::size_t n = 0; n < N; ++n) {
        double acc = p.g0;
        for (std::size_t l = 0; l < N; ++l) {
          if (l == n) continue;
          acc += (2.0 * dot(c.r_dot(n), c.r_dot(l)) +
                  p.g2 * (cross(c.r(l), c.r_dot(n)) + cross(c.r(n), c.r_dot(l))) +
                  p.g3 * dot(c.r(n), c.r(l))) /
                 cross(c.r(l), c.r(n));
        }
        tangential[n] = acc;
        extra[n] = p.g1 * c.r_dot(n);
      }
      break;
    }
    case ModelKind::IsochronousTan: {
      const auto& p = model.isochronous_tan_params();
      for (std::size_t n = 0; n < N; ++n) {
        const double x = c.r(n).x, y = c.r(n).y;
        if (std::abs(x) <= kTangentTol)
          throw TangentSingularity("x_" + std::to_string(n) + " too close to zero");
        const double v2 = dot(c.r_dot(n), c.r_dot(n));
        double pair_sum = 0.0;
        for (std::size_t l = 0; l < N; ++l) {
          if (l == n) continue;
          const double ratio = c.r(l).x / cross(c.r(l), c.r(n));
          pair_sum += ratio * ratio * ratio;
        }
        const double x5 = x * x * x * x * x;
        tangential[n] = -(2.0 * v2 * y / x + 4.0 * x * y - p.g * p.g * x5 * pair_sum);
      }
      break;
    }
    case ModelKind::GoldfishTan: {
      for (std::size_t n = 0; n < N; ++n) {
        const double x = c.r(n).x, y = c.r(n).y;
        if (std::abs(x) <= kTangentTol)
          throw TangentSingularity("x_" + std::to_string(n) + " too close to zero");
        const double v2 = dot(c.r_dot(n), c.r_dot(n));
        const double td = cross(c.r(n), c.r_dot(n));
        double pair_sum = 0.0;
        for (std::size_t l = 0; l < N; ++l) {
          if (l == n) continue;
          const double xl = c.r(l).x;
          pair_sum += (2.0 * td * cross(c.r(l), c.r_dot(l)) + x * x * xl * xl) /
                      (xl * cross(c.r(l), c.r(n)));
        }
        tangential[n] = -(2.0 * v2 * y / x + x * y - x * pair_sum);
      }
      break;
    }
    case ModelKind::GeneralInterp: {
      // The general system is angle-native; its vector form is the assembled
      // transcription through the same dictionary used by the closed kinds.
      const AngleState s = circle_to_angle(c);
      const std::vector<double> acc = rhs_general(model.general_interp_params(), s);
      for (std::size_t n = 0; n < N; ++n) tangential[n] = acc[n];
      break;
    }
  }

  std::vector<Vec2> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double v2 = dot(c.r_dot(n), c.r_dot(n));
    out[n] = (-v2) * c.r(n) + tangential[n] * perp(c.r(n)) + extra[n];
  }
  return out;
}

double InvariantVector::conjugation_residual() const {
  double worst = 0.0;
  const std::size_t N = h.size();
  for (std::size_t m = 0; m < N; ++m)
    worst = std::max(worst, std::abs(h[N - 1 - m] - std::conj(h[m])));
  return worst;
}

InvariantVector constants_of_motion(const ModelSpec& model, const AngleState& s) {
  if (!model.is_interp_family())
    throw WrongKind(std::string("constants of motion are defined for the interpolation family, "
                                "not ") +
                    to_string(model.kind()));
  const std::size_t N = s.size();
  const auto theta = s.theta();
  check_collisions(theta);

  Eigen::VectorXcd f(N);
  if (model.kind() == ModelKind::GeneralInterp) {
    const auto& p = model.general_interp_params();
    for (std::size_t n = 0; n < N; ++n)
      f(n) = p.rho(theta, n) * s.theta_dot(n) + p.gamma(theta, n);
  } else {
    const auto& p = model.many_body_params();
    check_particle_count(p.mu.size(), N, "mu/eta");
    const std::vector<double> sig = sigmas(theta);
    for (std::size_t n = 0; n < N; ++n) {
      const double base = p.mu[n] * s.theta_dot(n) + p.eta[n];
      f(n) = model.kind() == ModelKind::ManyBody ? base : sig[n] * base;
    }
  }

  const SeedBasis basis(N);
  Eigen::MatrixXcd M(N, N);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t m = 0; m < N; ++m) M(n, m) = basis.eval(m, theta[n]);

  const Eigen::VectorXcd h = M.partialPivLu().solve(f);
  const double residual = (M * h - f).cwiseAbs().maxCoeff();
  const double scale = f.cwiseAbs().maxCoeff();
  if (residual > 1e-10 * scale)
    throw CollisionSingularity("seed matrix numerically singular (residual " +
                               std::to_string(residual) + ")");

  InvariantVector out;
  out.h.assign(h.data(), h.data() + N);
  return out;
}

std::pair<double, double> momentum_energy_oracle(const ModelSpec& model, const AngleState& s) {
  if (model.kind() != ModelKind::Sutherland)
    throw WrongKind("momentum/energy oracle is defined for the Sutherland kind only");
  const double g = model.sutherland_params().g;
  double momentum = 0.0, energy = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    momentum += s.theta_dot(n);
    energy += 0.5 * s.theta_dot(n) * s.theta_dot(n);
    for (std::size_t l = 0; l < s.size(); ++l) {
      if (l == n) continue;
      const double sd = std::sin(s.theta(n) - s.theta(l));
      energy += 0.25 * g * g / (sd * sd);
    }
  }
  return {momentum, energy};
}

}  // namespace circlelab
