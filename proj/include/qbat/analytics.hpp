// Closed-form steady-state energies at zero detuning and zero reservoir
// occupation, and rectangular steady-state parameter sweeps.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbat/model.hpp"

namespace qbat {

struct SteadyStateAnalytic {
  double k = 0.0;  // F / g
  double l = 0.0;  // Gamma / g
  double E_A_inf = 0.0;
  double E_B_inf = 0.0;
  double alpha = 0.0;
};

/// Steady-state charger and battery energies for Delta = 0, n = 0 in terms of
/// k = F/g and l = Gamma/g:
///
///   E_A/omega0 = 4k^2 [32k^4(1+l^2) + l^4(4+9l^2) + 4k^2(2+l^2)(4+9l^2)] / alpha
///   E_B/omega0 = 16k^2 [8(k^2+k^4) + 2(2+9k^2)l^2 + 9l^4] / alpha
///   alpha = 256k^6(1+l^2) + l^2(4+l^2)^2(4+9l^2) + 4k^2 l^2(4+3l^2)(4+9l^2)
///           + 64k^4(4+11l^2+5l^4)
///
/// Throws std::domain_error for k = l = 0, where the ratio is 0/0.
SteadyStateAnalytic steady_energy_analytic(double k, double l, double omega0 = 1.0);

/// Parameters a sweep axis may vary.
enum class SweepVariable { PumpRatio, DissipationRatio, Detuning, BosonicOccupation, FermionicOccupation };

std::string to_string(SweepVariable v);
/// "F/g", "Gamma/g", "Delta", "n_b", "n_f"
SweepVariable parse_sweep_variable(const std::string& name);

struct SweepAxis {
  SweepVariable variable = SweepVariable::PumpRatio;
  std::vector<double> values;

  static SweepAxis linear(SweepVariable v, double lo, double hi, std::size_t count);
  static SweepAxis logarithmic(SweepVariable v, double lo, double hi, std::size_t count);
};

/// Writes one axis value into a copy of the parameters. Ratio axes are taken
/// relative to base.coupling; occupation axes also set the reservoir kind.
SystemParams apply_axis(SystemParams base, SweepVariable v, double value);

struct SweepGrid {
  SystemParams base;
  SweepAxis x;
  /// Absent for one-dimensional sweeps.
  std::optional<SweepAxis> y;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

struct SweepFailure {
  std::size_t row;
  std::size_t col;
  double x;
  double y;
  std::string message;
};

/// Row-major tables, rows along y and columns along x. Failed points hold NaN.
struct SweepTable {
  SweepAxis x;
  std::optional<SweepAxis> y;
  std::vector<double> E_A;
  std::vector<double> E_B;
  /// 1 where the analytic form was used, 0 where the numeric solver was.
  std::vector<int> analytic;
  std::vector<SweepFailure> failures;

  std::size_t rows() const { return y ? y->values.size() : 1; }
  std::size_t cols() const { return x.values.size(); }
  double ea(std::size_t r, std::size_t c) const { return E_A[r * cols() + c]; }
  double eb(std::size_t r, std::size_t c) const { return E_B[r * cols() + c]; }
};

/// Per point: the analytic form when Delta = 0 and n = 0 (and F or Gamma is
/// nonzero), otherwise the numeric steady state. Failures are recorded with
/// their grid coordinates and the sweep continues. Output order is
/// independent of the worker count.
SweepTable sweep_steady(const SweepGrid& grid);

}  // namespace qbat
