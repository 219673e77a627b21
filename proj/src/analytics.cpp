#include "qbat/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qbat/dynamics.hpp"
#include "qbat/observables.hpp"

namespace qbat {

SteadyStateAnalytic steady_energy_analytic(double k, double l, double omega0) {
  if (k == 0.0 && l == 0.0)
    throw std::domain_error("steady_energy_analytic: undefined at k = l = 0");
  const double k2 = k * k, k4 = k2 * k2, k6 = k4 * k2;
  const double l2 = l * l, l4 = l2 * l2;

  const double alpha = 256.0 * k6 * (1.0 + l2) + l2 * (4.0 + l2) * (4.0 + l2) * (4.0 + 9.0 * l2) +
                       4.0 * k2 * l2 * (4.0 + 3.0 * l2) * (4.0 + 9.0 * l2) +
                       64.0 * k4 * (4.0 + 11.0 * l2 + 5.0 * l4);
  const double num_a =
      4.0 * k2 * (32.0 * k4 * (1.0 + l2) + l4 * (4.0 + 9.0 * l2) + 4.0 * k2 * (2.0 + l2) * (4.0 + 9.0 * l2));
  const double num_b = 16.0 * k2 * (8.0 * (k2 + k4) + 2.0 * (2.0 + 9.0 * k2) * l2 + 9.0 * l4);

  return {k, l, omega0 * num_a / alpha, omega0 * num_b / alpha, alpha};
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::PumpRatio: return "F/g";
    case SweepVariable::DissipationRatio: return "Gamma/g";
    case SweepVariable::Detuning: return "Delta";
    case SweepVariable::BosonicOccupation: return "n_b";
    case SweepVariable::FermionicOccupation: return "n_f";
  }
  return "?";
}

SweepVariable parse_sweep_variable(const std::string& name) {
  for (auto v : {SweepVariable::PumpRatio, SweepVariable::DissipationRatio, SweepVariable::Detuning,
                 SweepVariable::BosonicOccupation, SweepVariable::FermionicOccupation})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown sweep variable '" + name + "' (expected F/g, Gamma/g, Delta, n_b, n_f)");
}

SweepAxis SweepAxis::linear(SweepVariable v, double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("sweep axis needs at least one point");
  SweepAxis axis{v, std::vector<double>(count)};
  for (std::size_t i = 0; i < count; ++i)
    axis.values[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return axis;
}

SweepAxis SweepAxis::logarithmic(SweepVariable v, double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("log sweep axis bounds must be > 0");
  SweepAxis axis = linear(v, std::log10(lo), std::log10(hi), count);
  for (auto& x : axis.values) x = std::pow(10.0, x);
  return axis;
}

SystemParams apply_axis(SystemParams p, SweepVariable v, double value) {
  switch (v) {
    case SweepVariable::PumpRatio: p.pump = value * p.coupling; break;
    case SweepVariable::DissipationRatio: p.dissipation = value * p.coupling; break;
    case SweepVariable::Detuning: p.detuning = value; break;
    case SweepVariable::BosonicOccupation:
      p.reservoir = {ReservoirKind::Bosonic, value};
      break;
    case SweepVariable::FermionicOccupation:
      p.reservoir = {ReservoirKind::Fermionic, value};
      break;
  }
  return p;
}

namespace {

struct PointResult {
  double ea;
  double eb;
  bool analytic;
};

PointResult solve_point(const SystemParams& p) {
  p.validate();
  const bool analytic_ok = p.detuning == 0.0 && p.reservoir.occupation == 0.0 && p.coupling > 0.0 &&
                           (p.pump > 0.0 || p.dissipation > 0.0);
  if (analytic_ok) {
    const auto a = steady_energy_analytic(p.pump / p.coupling, p.dissipation / p.coupling, p.omega0);
    return {a.E_A_inf, a.E_B_inf, true};
  }
  const DensityMatrix rho = steady_state(p);
  return {charger_energy(rho, p.omega0), stored_energy(rho, p.omega0), false};
}

}  // namespace

SweepTable sweep_steady(const SweepGrid& grid) {
  if (grid.x.values.empty() || (grid.y && grid.y->values.empty()))
    throw std::invalid_argument("sweep_steady: empty axis");

  SweepTable table{grid.x, grid.y, {}, {}, {}, {}};
  const std::size_t total = table.rows() * table.cols();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  table.E_A.assign(total, nan);
  table.E_B.assign(total, nan);
  table.analytic.assign(total, 0);

  std::atomic<std::size_t> next{0};
  std::mutex failures_mutex;
  auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const std::size_t r = idx / table.cols(), c = idx % table.cols();
      const double xv = grid.x.values[c];
      const double yv = grid.y ? grid.y->values[r] : nan;
      try {
        SystemParams p = apply_axis(grid.base, grid.x.variable, xv);
        if (grid.y) p = apply_axis(p, grid.y->variable, yv);
        const PointResult res = solve_point(p);
        table.E_A[idx] = res.ea;
        table.E_B[idx] = res.eb;
        table.analytic[idx] = res.analytic ? 1 : 0;
      } catch (const std::exception& e) {
        std::lock_guard lock(failures_mutex);
        table.failures.push_back({r, c, xv, yv, e.what()});
      }
    }
  };

  unsigned workers = grid.workers ? grid.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  pool.clear();

  std::sort(table.failures.begin(), table.failures.end(), [](const SweepFailure& a, const SweepFailure& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return table;
}

}  // namespace qbat
