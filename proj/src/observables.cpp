#include "qbat/observables.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

namespace qbat {

double stored_energy(const DensityMatrix& rho, double omega0) {
  return omega0 * (rho(0, 0).real() + rho(2, 2).real());
}

double charger_energy(const DensityMatrix& rho, double omega0) {
  return omega0 * (rho(0, 0).real() + rho(1, 1).real());
}

double population_difference(const DensityMatrix& rho) {
  return 2.0 * (rho(0, 0).real() + rho(2, 2).real()) - 1.0;
}

double ergotropy_closed(const DensityMatrix& rho, double omega0) {
  const double chi = population_difference(rho);
  const double coherence = std::abs(rho(0, 1) + rho(2, 3));
  return omega0 * (std::sqrt(4.0 * coherence * coherence + chi * chi) + chi) / 2.0;
}

double ergotropy_oracle(const DensityMatrix& rho, double omega0) {
  const ComplexMatrix rho_b = rho.reduced(Subsystem::B);
  const ComplexMatrix h_b = omega0 * (pauli::raising() * pauli::lowering());

  auto populations = hermitian_eig(rho_b).values;  // ascending
  std::reverse(populations.begin(), populations.end());
  const auto levels = hermitian_eig(h_b).values;  // ascending

  double passive = 0.0;
  for (std::size_t m = 0; m < levels.size(); ++m) passive += levels[m] * populations[m];
  const double energy = (h_b * rho_b).trace().real();
  return energy - passive;
}

double purity(const DensityMatrix& rho, Subsystem which) {
  const ComplexMatrix r = rho.reduced(which);
  return (r * r).trace().real();
}

SteeringResult steering(const DensityMatrix& rho) {
  const ComplexMatrix rho_a = rho.reduced(Subsystem::A);
  const ComplexMatrix rho_b = rho.reduced(Subsystem::B);
  const ComplexMatrix fluct = rho.matrix() - kron(rho_a, rho_b);

  const std::array<std::reference_wrapper<const ComplexMatrix>, 4> loo = {
      pauli::identity(), pauli::x(), pauli::y(), pauli::z()};

  SteeringResult out;
  ComplexMatrix c(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      // 1/sqrt(2) from each normalized observable
      const double v = 0.5 * (kron(loo[i], loo[j]) * fluct).trace().real();
      out.correlation[i][j] = v;
      c(i, j) = v;
    }
  for (std::size_t k = 0; k < 4; ++k) {
    const double worst = std::max(std::abs(out.correlation[0][k]), std::abs(out.correlation[k][0]));
    if (worst > kIdentityRowTolerance) {
      std::ostringstream os;
      os << "correlation matrix identity row/column does not vanish (|C| = " << worst << ")";
      throw CorrelationConsistencyError(os.str());
    }
  }

  const double pa = (rho_a * rho_a).trace().real();
  const double pb = (rho_b * rho_b).trace().real();
  // Purities of pure marginals can exceed 1 by rounding.
  auto mixedness = [](double p) { return std::max(0.0, 1.0 - p); };
  out.trace_norm = trace_norm(c);
  out.bound_AB = std::sqrt((2.0 - pa) * mixedness(pb));
  out.bound_BA = std::sqrt((2.0 - pb) * mixedness(pa));
  out.S_AB = out.trace_norm - out.bound_AB;
  out.S_BA = out.trace_norm - out.bound_BA;
  return out;
}

double charging_power(double energy_at_tau, double tau) {
  if (!(tau > 0.0))
    throw std::invalid_argument("charging_power: tau must be > 0 (battery never charged or started full)");
  return energy_at_tau / tau;
}

ObservableRecord observe(double t, const DensityMatrix& rho, double omega0) {
  const SteeringResult s = steering(rho);
  ObservableRecord r;
  r.t = t;
  r.E_A = charger_energy(rho, omega0);
  r.E_B = stored_energy(rho, omega0);
  r.W_B = ergotropy_closed(rho, omega0);
  r.sz_B = population_difference(rho);
  r.S_AB = s.S_AB;
  r.S_BA = s.S_BA;
  r.purity_A = purity(rho, Subsystem::A);
  r.purity_B = purity(rho, Subsystem::B);
  r.trace_err = std::abs(rho.matrix().trace() - 1.0);
  return r;
}

double column_value(const ObservableRecord& r, std::string_view column) {
  if (column == "t") return r.t;
  if (column == "E_A") return r.E_A;
  if (column == "E_B") return r.E_B;
  if (column == "W_B") return r.W_B;
  if (column == "sz_B") return r.sz_B;
  if (column == "S_AB") return r.S_AB;
  if (column == "S_BA") return r.S_BA;
  if (column == "purity_A") return r.purity_A;
  if (column == "purity_B") return r.purity_B;
  if (column == "trace_err") return r.trace_err;
  throw std::out_of_range("unknown observable column '" + std::string(column) + "'");
}

}  // namespace qbat
