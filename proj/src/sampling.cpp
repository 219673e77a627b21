#include "qbat/sampling.hpp"

#include <array>
#include <cmath>

namespace qbat {

namespace {

Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace

DensityMatrix random_pure_state(std::mt19937_64& rng) { return random_mixed_state(rng, 1); }

DensityMatrix random_mixed_state(std::mt19937_64& rng, std::size_t rank) {
  if (rank < 1 || rank > 4) throw std::invalid_argument("random_mixed_state: rank must be 1..4");
  ComplexMatrix g(4, rank);
  for (auto& z : g.entries()) z = gaussian(rng);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

DensityMatrix random_state(std::mt19937_64& rng, std::size_t draw_index) {
  return random_mixed_state(rng, 1 + draw_index % 4);
}

ComplexMatrix random_unitary_2(std::mt19937_64& rng) {
  // Gram-Schmidt on a complex Gaussian matrix.
  std::array<Complex, 2> a{gaussian(rng), gaussian(rng)};
  std::array<Complex, 2> b{gaussian(rng), gaussian(rng)};
  const double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
  for (auto& z : a) z /= na;
  const Complex proj = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
  for (std::size_t i = 0; i < 2; ++i) b[i] -= proj * a[i];
  const double nb = std::sqrt(std::norm(b[0]) + std::norm(b[1]));
  for (auto& z : b) z /= nb;
  return ComplexMatrix{{a[0], b[0]}, {a[1], b[1]}};
}

}  // namespace qbat
