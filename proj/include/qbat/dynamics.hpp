// Time evolution under the Lindblad generator and steady-state extraction.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qbat/model.hpp"

namespace qbat {

struct IntegratorConfig {
  double dt = 1e-3;
  double t_max = 10.0;
  int record_every = 1;
  bool renormalize = true;

  void validate() const;
};

/// dt = 1e-3 * min(1/g, 1/max(F, Gamma*max(N, n), |Delta|, 1e-6))
double default_time_step(const SystemParams& p);

struct IntegratorDiagnostics {
  /// Largest |Tr rho - 1| seen after a step, before renormalization.
  double max_trace_drift = 0.0;
  /// Smallest eigenvalue over all recorded states.
  double min_eigenvalue = 1.0;
  std::size_t steps = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  IntegratorDiagnostics diagnostics;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

/// Thrown when the state drifts outside the physical set by more than
/// kAbortTolerance, typically because dt is too large. Carries the samples
/// recorded before the failure.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

inline constexpr double kRecordedStateTolerance = 1e-7;
inline constexpr double kAbortTolerance = 1e-5;

/// Fixed-step classical RK4. After each step the state is Hermitized and,
/// when cfg.renormalize is set, rescaled to unit trace. Records t = 0 and every
/// cfg.record_every steps after it; the final step is always recorded.
Trajectory evolve(const SystemParams& p, const DensityMatrix& rho0, const IntegratorConfig& cfg);

class DegenerateSteadyStateError : public std::runtime_error {
 public:
  DegenerateSteadyStateError(const std::string& what, std::size_t kernel_dimension)
      : std::runtime_error(what), kernel_dimension_(kernel_dimension) {}
  std::size_t kernel_dimension() const { return kernel_dimension_; }

 private:
  std::size_t kernel_dimension_;
};

inline constexpr double kKernelTolerance = 1e-10;

struct SteadyStateResult {
  DensityMatrix state;
  /// Smallest and second-smallest singular values of the Liouvillian.
  double smallest_singular_value;
  double spectral_gap;
  /// max |L[rho]| entry
  double residual;
};

/// Kernel of the vectorized generator via SVD. Throws
/// DegenerateSteadyStateError when more than one singular value falls below
/// kKernelTolerance (relative to the largest).
SteadyStateResult solve_steady_state(const SystemParams& p);
inline DensityMatrix steady_state(const SystemParams& p) { return solve_steady_state(p).state; }

/// A sampled maximum, optionally refined by a parabola through the three
/// samples around the discrete argmax.
struct Peak {
  std::size_t index = 0;
  double time = 0.0;
  double value = 0.0;
};

/// Global maximum of `values` over `times`; ties go to the earliest sample.
/// Interior maxima are refined quadratically; endpoints are returned as sampled.
Peak find_peak(std::span<const double> times, std::span<const double> values);

struct ChargingPeak {
  double tau;
  double energy;
};

/// tau = time of maximum stored energy over the recorded horizon.
ChargingPeak find_tau(std::span<const double> times, std::span<const double> battery_energy);

}  // namespace qbat
