#pragma once

#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "circlelab/states.hpp"

namespace circlelab {

enum class ModelKind {
  ManyBody,        // interpolation family, constant rho_n = mu_n, gamma_n = eta_n
  TwoBody,         // interpolation family, rho_n = mu_n sigma_n, gamma_n = eta_n sigma_n
  Sutherland,      // inverse-sin-cube two-body forces, coupling g
  GoldfishCircle,  // goldfish-type velocity-dependent cotangent forces, g0..g3
  IsochronousTan,  // tan-transformed harmonic Calogero system, coupling g
  GoldfishTan,     // tan-transformed goldfish system, no parameters
  GeneralInterp,   // caller-supplied rho_n, gamma_n and their partials
};

const char* to_string(ModelKind kind) noexcept;

struct ManyBodyParams {
  std::vector<double> mu, eta;
};
struct SutherlandParams {
  double g = 1.0;
};
struct GoldfishCircleParams {
  double g0 = 0.0, g1 = 0.0, g2 = 0.0, g3 = 0.0;
};
struct IsochronousTanParams {
  double g = 1.0;
};
struct GoldfishTanParams {};

/// Callbacks evaluating rho_n(theta), gamma_n(theta) and their exact partial
/// derivatives with respect to theta_m. Supplying analytic partials keeps the
/// general system bit-comparable with its closed-form specializations.
struct GeneralInterpParams {
  std::function<double(std::span<const double>, std::size_t)> rho, gamma;
  std::function<double(std::span<const double>, std::size_t, std::size_t)> rho_partial,
      gamma_partial;
};

/// A model identifier plus its parameter set. Immutable after construction;
/// mu_n != 0 is enforced where the equations divide by it.
class ModelSpec {
 public:
  static ModelSpec many_body(std::vector<double> mu, std::vector<double> eta);
  static ModelSpec two_body(std::vector<double> mu, std::vector<double> eta);
  static ModelSpec sutherland(double g);
  static ModelSpec goldfish_circle(double g0, double g1, double g2, double g3);
  static ModelSpec isochronous_tan(double g);
  static ModelSpec goldfish_tan();
  static ModelSpec general_interp(GeneralInterpParams params);

  ModelKind kind() const noexcept { return kind_; }

  const ManyBodyParams& many_body_params() const;
  const SutherlandParams& sutherland_params() const;
  const GoldfishCircleParams& goldfish_circle_params() const;
  const IsochronousTanParams& isochronous_tan_params() const;
  const GeneralInterpParams& general_interp_params() const;

  /// True for the kinds generated by the interpolation construction, i.e.
  /// those carrying the h_m constants of motion.
  bool is_interp_family() const noexcept;

  /// Permute per-particle parameters (mu, eta) by `perm`; identity for kinds
  /// with global parameters only.
  ModelSpec permuted(std::span<const std::size_t> perm) const;

 private:
  using Params = std::variant<ManyBodyParams, SutherlandParams, GoldfishCircleParams,
                              IsochronousTanParams, GoldfishTanParams, GeneralInterpParams>;
  ModelSpec(ModelKind kind, Params params) : kind_(kind), params_(std::move(params)) {}

  ModelKind kind_;
  Params params_;
};

/// Angular accelerations theta_ddot_n for the given kind, with the equations
/// solved explicitly for theta_ddot (divided through by mu_n / rho_n where
/// present).
///
/// Throws CollisionSingularity near pairwise collisions (|sin| <= 1e-10),
/// TangentSingularity for the tan-transformed kinds near |cos theta| <= 1e-9,
/// and ZeroMass if an inertia factor vanishes.
std::vector<double> rhs_angle(const ModelSpec& model, const AngleState& s);

/// Accelerations rddot_n of the constrained plane form. Every kind carries
/// the exact centripetal term -(rdot.rdot) r plus tangential forcing, so
/// rddot_n . r_n = -(rdot_n . rdot_n) holds identically. Computed from the
/// stored vectors with planar dot/cross arithmetic only (no angle
/// extraction).
///
/// Throws ConstraintViolation if the state is off the circle by more than
/// 1e-9, plus the rhs_angle singularity errors.
std::vector<Vec2> rhs_circle(const ModelSpec& model, const CircleState& c);

/// The N coefficients h_m of the interpolated function, with conjugation
/// symmetry h_{N-1-m} = conj(h_m) on real states.
struct InvariantVector {
  std::vector<std::complex<double>> h;

  std::size_t size() const noexcept { return h.size(); }

  /// max_m |h_{N-1-m} - conj(h_m)|.
  double conjugation_residual() const;
};

/// Recovers the constants of motion h by solving the linear system
/// sum_m s_m(theta_n) h_m = rho_n theta_dot_n + gamma_n.
///
/// Only defined for the interpolation family (ManyBody, TwoBody,
/// GeneralInterp); throws WrongKind otherwise and CollisionSingularity when
/// the node matrix is numerically singular.
InvariantVector constants_of_motion(const ModelSpec& model, const AngleState& s);

/// Total angular momentum and energy of the Sutherland kind,
///   P = sum theta_dot_n,
///   E = 1/2 sum theta_dot_n^2 + (g^2/4) sum_{n != l} 1/sin^2(theta_n - theta_l),
/// both constant along the flow (the prefactor g^2/4 on the ordered double
/// sum is the one that passes the flow-derivative check). Throws WrongKind
/// for other kinds.
std::pair<double, double> momentum_energy_oracle(const ModelSpec& model, const AngleState& s);

}  // namespace circlelab
