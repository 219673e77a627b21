// Figures of merit of the charger-battery state: energies, ergotropy,
// population balance, purity and the local-orthogonal-observable (LOO)
// steering functions.

#pragma once

#include <array>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qbat/model.hpp"

namespace qbat {

/// omega0 (rho11 + rho33) = Tr[H_B rho_B]
double stored_energy(const DensityMatrix& rho, double omega0);
/// omega0 (rho11 + rho22) = Tr[H_A rho_A]
double charger_energy(const DensityMatrix& rho, double omega0);

/// Closed form for a qubit battery:
///   W = omega0 ( sqrt(4 |rho12 + rho34|^2 + chi^2) + chi ) / 2,  chi = 2(rho11 + rho33) - 1
double ergotropy_closed(const DensityMatrix& rho, double omega0);

/// Spectral construction: E_B minus the energy of the passive state, with the
/// eigenvalues of rho_B in descending order paired with the eigenvalues of H_B
/// in ascending order.
double ergotropy_oracle(const DensityMatrix& rho, double omega0);

/// <sigma_z>_B = p_e - p_g = 2(rho11 + rho33) - 1
double population_difference(const DensityMatrix& rho);

/// Tr[rho_s^2] of the reduced state of one qubit.
double purity(const DensityMatrix& rho, Subsystem which);

struct SteeringResult {
  double S_AB = 0.0;
  double S_BA = 0.0;
  double trace_norm = 0.0;
  double bound_AB = 0.0;
  double bound_BA = 0.0;
  /// C_ij = Tr[(G_i (x) G_j)(rho - rho_A (x) rho_B)] with G = {I, sx, sy, sz}/sqrt(2).
  std::array<std::array<double, 4>, 4> correlation{};
};

/// Thrown when the identity row/column of the correlation matrix fails to
/// vanish, i.e. the reduced states are inconsistent with rho.
class CorrelationConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr double kIdentityRowTolerance = 1e-12;

/// Steering functions S = ||C||_tr - bound, with
///   bound_AB = sqrt[(2 - Tr rho_A^2)(1 - Tr rho_B^2)],
///   bound_BA = sqrt[(2 - Tr rho_B^2)(1 - Tr rho_A^2)].
/// S > 0 certifies steerability in that direction.
SteeringResult steering(const DensityMatrix& rho);

/// E_B(tau) / tau. Throws std::invalid_argument for tau <= 0.
double charging_power(double energy_at_tau, double tau);

struct ObservableRecord {
  double t = 0.0;
  double E_A = 0.0;
  double E_B = 0.0;
  double W_B = 0.0;
  double sz_B = 0.0;
  double S_AB = 0.0;
  double S_BA = 0.0;
  double purity_A = 0.0;
  double purity_B = 0.0;
  /// |Tr rho - 1|
  double trace_err = 0.0;
};

ObservableRecord observe(double t, const DensityMatrix& rho, double omega0);

/// Column names in CSV order.
inline constexpr std::array<const char*, 10> kObservableColumns = {
    "t", "E_A", "E_B", "W_B", "sz_B", "S_AB", "S_BA", "purity_A", "purity_B", "trace_err"};

/// Value of the named column; throws std::out_of_range for unknown names.
double column_value(const ObservableRecord& r, std::string_view column);

}  // namespace qbat
