#include "circlelab/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace circlelab {

namespace {
constexpr std::complex<double> kImag{0.0, 1.0};
}

SeedBasis::SeedBasis(std::size_t n_seeds) : n_(n_seeds) {
  if (n_ == 0) throw std::invalid_argument("SeedBasis needs at least one seed");
}

int SeedBasis::exponent(std::size_t k) const {
  if (k >= n_) throw std::out_of_range("seed index");
  return 2 * static_cast<int>(k) + 1 - static_cast<int>(n_);
}

std::complex<double> SeedBasis::eval(std::size_t k, double theta) const {
  return std::exp(kImag * (static_cast<double>(exponent(k)) * theta));
}

std::complex<double> SeedBasis::eval_derivative(std::size_t k, double theta) const {
  const double e = static_cast<double>(exponent(k));
  return kImag * e * std::exp(kImag * (e * theta));
}

NodeSet::NodeSet(std::vector<double> nodes, double collision_tol) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("NodeSet needs at least one node");
  for (double x : nodes_)
    if (!std::isfinite(x)) throw std::invalid_argument("nodes must be finite");
  for (std::size_t n = 0; n < nodes_.size(); ++n)
    for (std::size_t m = n + 1; m < nodes_.size(); ++m)
      if (std::abs(std::sin(nodes_[n] - nodes_[m])) <= collision_tol)
        throw CollisionSingularity("nodes " + std::to_string(n) + " and " + std::to_string(m) +
                                   " coincide mod pi");
}

double sigma(const NodeSet& nodes, std::size_t n) {
  if (n >= nodes.size()) throw std::out_of_range("node index");
  double product = 1.0;
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    if (l == n) continue;
    product *= std::sin(nodes.angle(n) - nodes.angle(l));
  }
  return product;
}

std::complex<double> interp_q(const SeedBasis& basis, const NodeSet& nodes, std::size_t n,
                              double theta) {
  if (basis.size() != nodes.size())
    throw std::invalid_argument("basis and node set sizes differ");
  if (n >= nodes.size()) throw std::out_of_range("node index");
  const auto doubled = [](double t) { return std::exp(kImag * (2.0 * t)); };
  const std::complex<double> e_theta = doubled(theta);
  const std::complex<double> e_n = doubled(nodes.angle(n));
  std::complex<double> q = basis.eval(0, theta - nodes.angle(n));
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    if (l == n) continue;
    const std::complex<double> e_l = doubled(nodes.angle(l));
    q *= (e_theta - e_l) / (e_n - e_l);
  }
  return q;
}

DiffMatrix::DiffMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw std::invalid_argument("DiffMatrix size mismatch");
}

std::vector<std::complex<double>> DiffMatrix::apply(
    std::span<const std::complex<double>> values) const {
  if (values.size() != n_) throw std::invalid_argument("vector length mismatch");
  std::vector<std::complex<double>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n_; ++j) acc += entries_[i * n_ + j] * values[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> DiffMatrix::apply(std::span<const double> values) const {
  if (values.size() != n_) throw std::invalid_argument("vector length mismatch");
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += entries_[i * n_ + j] * values[j];
    out[i] = acc;
  }
  return out;
}

DiffMatrix diff_matrix(const NodeSet& nodes) {
  const std::size_t N = nodes.size();
  std::vector<double> entries(N * N, 0.0);
  std::vector<double> sig(N);
  for (std::size_t n = 0; n < N; ++n) sig[n] = sigma(nodes, n);
  for (std::size_t n = 0; n < N; ++n) {
    double diag = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == n) continue;
      diag += 1.0 / std::tan(nodes.angle(n) - nodes.angle(l));
    }
    entries[n * N + n] = diag;
    for (std::size_t m = 0; m < N; ++m) {
      if (m == n) continue;
      entries[n * N + m] = (sig[n] / sig[m]) / std::sin(nodes.angle(n) - nodes.angle(m));
    }
  }
  return DiffMatrix(N, std::move(entries));
}

}  // namespace circlelab
