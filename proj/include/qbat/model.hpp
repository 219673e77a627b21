// Charger-battery model: parameters, rotating-frame Hamiltonian, reservoir
// statistics and the Lindblad generator.
//
// Qubit A is the charger, qubit B the battery. Operators act on the product
// basis |ee>, |eg>, |ge>, |gg> (charger label first).

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qbat/linalg.hpp"

namespace qbat {

enum class ReservoirKind { Bosonic, Fermionic };

std::string to_string(ReservoirKind kind);
/// Accepts "bosonic" / "fermionic"; throws std::invalid_argument otherwise.
ReservoirKind parse_reservoir_kind(const std::string& name);

struct ReservoirSpec {
  ReservoirKind kind = ReservoirKind::Bosonic;
  /// Mean occupation n(T).
  double occupation = 0.0;

  /// N(T): 1 + n for bosons, 1 - n for fermions.
  double emission_factor() const {
    return kind == ReservoirKind::Bosonic ? 1.0 + occupation : 1.0 - occupation;
  }
  /// Throws std::invalid_argument when n is outside the range allowed by the statistics.
  void validate() const;
};

/// Bose-Einstein or Fermi-Dirac mean occupation of a reservoir mode at frequency
/// `mode_frequency`. `chemical_potential` only enters the fermionic case.
/// Throws std::domain_error for temperature <= 0: pass the occupation directly
/// in that limit.
double occupation_from_temperature(ReservoirKind kind, double temperature, double mode_frequency,
                                   double chemical_potential = 0.0);

struct SystemParams {
  double omega0 = 1.0;    // transition frequency, sets the energy unit
  double detuning = 0.0;  // omega0 - omega_L
  double coupling = 1.0;  // g
  double pump = 0.0;      // F
  double dissipation = 0.0;  // Gamma
  ReservoirSpec reservoir;

  void validate() const;
};

class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validated two-qubit density matrix.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-9;

  /// Checks Hermiticity, unit trace and positivity at `tolerance`.
  explicit DensityMatrix(ComplexMatrix m, double tolerance = kTolerance);

  /// Product state |ab><ab| from a two-letter label such as "eg".
  static DensityMatrix basis_state(const std::string& label);
  /// |psi><psi| for a normalized 4-vector of amplitudes.
  static DensityMatrix pure(std::span<const Complex> amplitudes);
  static DensityMatrix maximally_mixed();

  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  ComplexMatrix reduced(Subsystem keep) const { return partial_trace(m_, keep); }

 private:
  ComplexMatrix m_;
};

/// Why `m` fails to be a valid state at `tolerance`, or nullopt when valid.
std::optional<std::string> state_violation(const ComplexMatrix& m, double tolerance);

/// sigma_A = s (x) I, sigma_B = I (x) s
ComplexMatrix on_charger(const ComplexMatrix& single_qubit_op);
ComplexMatrix on_battery(const ComplexMatrix& single_qubit_op);

/// H = (Delta/2)(sz_A + sz_B) + g(s+_A s-_B + s-_A s+_B) + F(s+_A + s-_A)
ComplexMatrix hamiltonian(const SystemParams& p);

/// Bare (lab-frame) Hamiltonians omega0 s+ s- of each qubit, on the 4-dim space.
ComplexMatrix charger_hamiltonian(double omega0);
ComplexMatrix battery_hamiltonian(double omega0);

/// j rho j^H - {j^H j, rho}/2
ComplexMatrix dissipator(const ComplexMatrix& jump, const ComplexMatrix& rho);

/// Right-hand side of the master equation evaluated on any 4x4 operator.
/// The generator is linear, so rho need not be a valid state.
ComplexMatrix lindblad_rhs(const SystemParams& p, const ComplexMatrix& rho);
inline ComplexMatrix lindblad_rhs(const SystemParams& p, const DensityMatrix& rho) {
  return lindblad_rhs(p, rho.matrix());
}

/// 16x16 matrix of the generator acting on row-major vec(rho).
ComplexMatrix liouvillian(const SystemParams& p);

}  // namespace qbat
