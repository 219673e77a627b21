#include "qbat/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace qbat {

std::string to_string(ReservoirKind kind) {
  return kind == ReservoirKind::Bosonic ? "bosonic" : "fermionic";
}

ReservoirKind parse_reservoir_kind(const std::string& name) {
  if (name == "bosonic") return ReservoirKind::Bosonic;
  if (name == "fermionic") return ReservoirKind::Fermionic;
  throw std::invalid_argument("unknown reservoir kind '" + name + "' (expected bosonic|fermionic)");
}

void ReservoirSpec::validate() const {
  if (!std::isfinite(occupation) || occupation < 0.0)
    throw std::invalid_argument("reservoir occupation must be finite and >= 0");
  if (kind == ReservoirKind::Fermionic && occupation > 1.0)
    throw std::invalid_argument("fermionic occupation must lie in [0, 1]");
}

double occupation_from_temperature(ReservoirKind kind, double temperature, double mode_frequency,
                                   double chemical_potential) {
  if (!(temperature > 0.0))
    throw std::domain_error("occupation_from_temperature: temperature must be > 0");
  if (!(mode_frequency > 0.0))
    throw std::domain_error("occupation_from_temperature: mode frequency must be > 0");
  if (kind == ReservoirKind::Bosonic) return 1.0 / std::expm1(mode_frequency / temperature);
  return 1.0 / (std::exp((mode_frequency - chemical_potential) / temperature) + 1.0);
}

void SystemParams::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("omega0 must be > 0");
  if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
  for (auto [name, v] : {std::pair{"coupling", coupling}, std::pair{"pump", pump},
                         std::pair{"dissipation", dissipation}}) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
  }
  reservoir.validate();
}

std::optional<std::string> state_violation(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != 4 || m.cols() != 4) return "density matrix must be 4x4";
  const double skew = max_abs_diff(m, m.adjoint());
  if (skew > tolerance) {
    std::ostringstream os;
    os << "not Hermitian (max |rho - rho^H| = " << skew << ")";
    return os.str();
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > tolerance) {
    std::ostringstream os;
    os << "trace " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i != 1";
    return os.str();
  }
  const auto eig = hermitian_eig(0.5 * (m + m.adjoint()));
  if (eig.values.front() < -tolerance) {
    std::ostringstream os;
    os << "negative eigenvalue " << eig.values.front();
    return os.str();
  }
  return std::nullopt;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tolerance) : m_(std::move(m)) {
  if (auto why = state_violation(m_, tolerance)) throw InvalidStateError("invalid density matrix: " + *why);
}

DensityMatrix DensityMatrix::basis_state(const std::string& label) {
  if (label.size() != 2) throw std::invalid_argument("basis label must have two letters, got '" + label + "'");
  auto index = [&](char c) -> std::size_t {
    if (c == 'e') return 0;
    if (c == 'g') return 1;
    throw std::invalid_argument("basis label letters must be 'e' or 'g', got '" + label + "'");
  };
  ComplexMatrix m(4, 4);
  const std::size_t k = 2 * index(label[0]) + index(label[1]);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> amplitudes) {
  if (amplitudes.size() != 4) throw DimensionError("pure state needs 4 amplitudes");
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-12) throw InvalidStateError("amplitudes are not normalized");
  return DensityMatrix(ComplexMatrix::projector(amplitudes));
}

DensityMatrix DensityMatrix::maximally_mixed() { return DensityMatrix(0.25 * ComplexMatrix::identity(4)); }

ComplexMatrix on_charger(const ComplexMatrix& op) { return kron(op, pauli::identity()); }
ComplexMatrix on_battery(const ComplexMatrix& op) { return kron(pauli::identity(), op); }

ComplexMatrix hamiltonian(const SystemParams& p) {
  using namespace pauli;
  ComplexMatrix h = (0.5 * p.detuning) * (on_charger(z()) + on_battery(z()));
  h += p.coupling * (on_charger(raising()) * on_battery(lowering()) +
                     on_charger(lowering()) * on_battery(raising()));
  h += p.pump * (on_charger(raising()) + on_charger(lowering()));
  return h;
}

ComplexMatrix charger_hamiltonian(double omega0) {
  return omega0 * on_charger(pauli::raising() * pauli::lowering());
}

ComplexMatrix battery_hamiltonian(double omega0) {
  return omega0 * on_battery(pauli::raising() * pauli::lowering());
}

ComplexMatrix dissipator(const ComplexMatrix& jump, const ComplexMatrix& rho) {
  const ComplexMatrix jd = jump.adjoint();
  return jump * rho * jd - 0.5 * anticommutator(jd * jump, rho);
}

ComplexMatrix lindblad_rhs(const SystemParams& p, const ComplexMatrix& rho) {
  using namespace pauli;
  static const ComplexMatrix lower_a = on_charger(lowering());
  static const ComplexMatrix lower_b = on_battery(lowering());
  static const ComplexMatrix raise_a = on_charger(raising());
  static const ComplexMatrix raise_b = on_battery(raising());

  ComplexMatrix out = Complex(0.0, -1.0) * commutator(hamiltonian(p), rho);
  if (p.dissipation == 0.0) return out;
  const double n = p.reservoir.occupation;
  const double emit = p.reservoir.emission_factor();
  if (emit != 0.0) out += (p.dissipation * emit) * (dissipator(lower_a, rho) + dissipator(lower_b, rho));
  if (n != 0.0) out += (p.dissipation * n) * (dissipator(raise_a, rho) + dissipator(raise_b, rho));
  return out;
}

ComplexMatrix liouvillian(const SystemParams& p) {
  ComplexMatrix l(16, 16);
  for (std::size_t col = 0; col < 16; ++col) {
    ComplexMatrix unit(4, 4);
    unit(col / 4, col % 4) = 1.0;
    const ComplexMatrix image = lindblad_rhs(p, unit);
    for (std::size_t row = 0; row < 16; ++row) l(row, col) = image(row / 4, row % 4);
  }
  return l;
}

}  // namespace qbat
