#include "qbat/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace qbat {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrator dt must be > 0");
  if (!(t_max >= dt)) throw std::invalid_argument("integrator t_max must be >= dt");
  if (record_every < 1) throw std::invalid_argument("integrator record_every must be >= 1");
}

double default_time_step(const SystemParams& p) {
  const double n = p.reservoir.occupation;
  const double rate = std::max({p.pump, p.dissipation * std::max(p.reservoir.emission_factor(), n),
                                std::abs(p.detuning), 1e-6});
  const double inv_g = p.coupling > 0.0 ? 1.0 / p.coupling : std::numeric_limits<double>::infinity();
  return 1e-3 * std::min(inv_g, 1.0 / rate);
}

namespace {

using Vec16 = std::array<Complex, 16>;

// For a time-independent linear generator one RK4 step is exactly
// I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24, so the four stages collapse into
// a single propagator matrix.
ComplexMatrix rk4_propagator(const ComplexMatrix& generator, double h) {
  const ComplexMatrix hl = h * generator;
  ComplexMatrix step = ComplexMatrix::identity(16);
  ComplexMatrix term = ComplexMatrix::identity(16);
  for (int k = 1; k <= 4; ++k) {
    term = (1.0 / k) * (term * hl);
    step += term;
  }
  return step;
}

Vec16 propagate(const ComplexMatrix& m, const Vec16& v) {
  Vec16 out{};
  for (std::size_t i = 0; i < 16; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < 16; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix unvec(const Vec16& v) { return ComplexMatrix(4, 4, std::vector<Complex>(v.begin(), v.end())); }

}  // namespace

Trajectory evolve(const SystemParams& p, const DensityMatrix& rho0, const IntegratorConfig& cfg) {
  p.validate();
  cfg.validate();

  const ComplexMatrix propagator = rk4_propagator(liouvillian(p), cfg.dt);
  const auto steps = static_cast<std::size_t>(std::floor(cfg.t_max / cfg.dt + 1e-9));

  Trajectory traj;
  traj.times.reserve(steps / static_cast<std::size_t>(cfg.record_every) + 2);
  traj.states.reserve(traj.times.capacity());

  Vec16 v{};
  std::copy(rho0.matrix().entries().begin(), rho0.matrix().entries().end(), v.begin());

  auto record = [&](std::size_t step, const ComplexMatrix& m) {
    const double t = static_cast<double>(step) * cfg.dt;
    const auto eig = hermitian_eig(m);
    traj.diagnostics.min_eigenvalue = std::min(traj.diagnostics.min_eigenvalue, eig.values.front());
    if (auto why = state_violation(m, kAbortTolerance)) {
      std::ostringstream os;
      os << "state left the physical set at t = " << t << " (" << *why << "); reduce dt (currently "
         << cfg.dt << ")";
      throw IntegrationError(os.str(), traj);
    }
    traj.times.push_back(t);
    traj.states.emplace_back(m, kAbortTolerance);
  };

  record(0, rho0.matrix());
  for (std::size_t step = 1; step <= steps; ++step) {
    v = propagate(propagator, v);
    // Hermitize
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) {
        const Complex avg = 0.5 * (v[4 * i + j] + std::conj(v[4 * j + i]));
        v[4 * i + j] = avg;
        v[4 * j + i] = std::conj(avg);
      }
    const double tr = (v[0] + v[5] + v[10] + v[15]).real();
    traj.diagnostics.max_trace_drift = std::max(traj.diagnostics.max_trace_drift, std::abs(tr - 1.0));
    if (!std::isfinite(tr)) throw IntegrationError("non-finite state; reduce dt", traj);
    if (cfg.renormalize)
      for (auto& z : v) z /= tr;
    if (step % static_cast<std::size_t>(cfg.record_every) == 0 || step == steps) record(step, unvec(v));
  }
  traj.diagnostics.steps = steps;
  return traj;
}

SteadyStateResult solve_steady_state(const SystemParams& p) {
  p.validate();
  const ComplexMatrix l = liouvillian(p);
  const auto dec = svd(l);
  const double scale = std::max(1.0, dec.values.front());
  const std::size_t kernel_dim = static_cast<std::size_t>(
      std::count_if(dec.values.begin(), dec.values.end(), [&](double s) { return s <= kKernelTolerance * scale; }));
  if (kernel_dim > 1) {
    std::ostringstream os;
    os << "steady state is not unique: generator kernel has dimension " << kernel_dim
       << " (Gamma = " << p.dissipation << ", F = " << p.pump << ")";
    throw DegenerateSteadyStateError(os.str(), kernel_dim);
  }

  const auto kernel = dec.right.column(15);
  ComplexMatrix rho(4, 4, kernel);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw std::runtime_error("steady state: kernel vector is traceless");
  rho *= 1.0 / tr;
  rho = 0.5 * (rho + rho.adjoint());

  const double residual = lindblad_rhs(p, rho).max_abs();
  return {DensityMatrix(std::move(rho)), dec.values[15], dec.values[14], residual};
}

Peak find_peak(std::span<const double> times, std::span<const double> values) {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("find_peak: need equally sized non-empty series");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;

  Peak peak{best, times[best], values[best]};
  if (best == 0 || best + 1 == values.size()) return peak;

  const double t0 = times[best - 1], t1 = times[best], t2 = times[best + 1];
  const double y0 = values[best - 1], y1 = values[best], y2 = values[best + 1];
  // Parabola through three points in Newton form.
  const double d01 = (y1 - y0) / (t1 - t0);
  const double d12 = (y2 - y1) / (t2 - t1);
  const double curvature = (d12 - d01) / (t2 - t0);
  if (!(curvature < 0.0)) return peak;
  // y(t) = y0 + d01 (t - t0) + curvature (t - t0)(t - t1)
  const double tv = 0.5 * (t0 + t1) - d01 / (2.0 * curvature);
  const double t = std::clamp(tv, t0, t2);
  peak.time = t;
  peak.value = y0 + d01 * (t - t0) + curvature * (t - t0) * (t - t1);
  return peak;
}

ChargingPeak find_tau(std::span<const double> times, std::span<const double> battery_energy) {
  const Peak p = find_peak(times, battery_energy);
  return {p.time, p.value};
}

}  // namespace qbat
