#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "circlelab/errors.hpp"

namespace circlelab {

/// The exponential basis s_k(theta) = exp[i e_k theta] with integer
/// exponents e_k = 2k + 1 - N (k = 0..N-1), i.e. the symmetric set
/// {-(N-1), -(N-3), ..., N-1}. Every s_k has period 2*pi, which is what makes
/// theta an angle variable.
class SeedBasis {
 public:
  explicit SeedBasis(std::size_t n_seeds);

  std::size_t size() const noexcept { return n_; }
  int exponent(std::size_t k) const;
  std::complex<double> eval(std::size_t k, double theta) const;

  /// d/dtheta of seed k at theta (used as the analytic oracle for the
  /// differentiation matrix).
  std::complex<double> eval_derivative(std::size_t k, double theta) const;

 private:
  std::size_t n_;
};

/// Interpolation nodes: N angles, pairwise non-colliding in the mod-pi sense
/// |sin(theta_n - theta_m)| > collision_tol.
class NodeSet {
 public:
  explicit NodeSet(std::vector<double> nodes, double collision_tol = 1e-10);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> angles() const noexcept { return nodes_; }
  double angle(std::size_t n) const { return nodes_[n]; }

 private:
  std::vector<double> nodes_;
};

/// sigma_n = prod_{l != n} sin(theta_n - theta_l); 1 for N = 1.
double sigma(const NodeSet& nodes, std::size_t n);

/// The cardinal interpolant q^(n)(theta), a linear combination of the seeds
/// with q^(n)(theta_m) = delta_nm:
///
///   q^(n)(theta) = s_0(theta - theta_n) *
///                  prod_{l != n} (e^{2 i theta} - e^{2 i theta_l})
///                              / (e^{2 i theta_n} - e^{2 i theta_l}).
std::complex<double> interp_q(const SeedBasis& basis, const NodeSet& nodes, std::size_t n,
                              double theta);

/// N x N matrix representing d/dtheta exactly on the seed space at the nodes.
class DiffMatrix {
 public:
  DiffMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }

  std::vector<std::complex<double>> apply(std::span<const std::complex<double>> values) const;
  std::vector<double> apply(std::span<const double> values) const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// D_nn = sum_{l != n} cot(theta_n - theta_l),
/// D_nm = (sigma_n / sigma_m) / sin(theta_n - theta_m) for n != m.
DiffMatrix diff_matrix(const NodeSet& nodes);

}  // namespace circlelab
