#include "qbat/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qbat/sampling.hpp"

namespace qbat {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckOutcome random_state_identities(const ValidationOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  double worst_ergotropy = 0.0, worst_sz = 0.0, worst_bound = 0.0;
  for (std::size_t i = 0; i < opt.random_states; ++i) {
    const DensityMatrix rho = random_state(rng, i);
    const double e = stored_energy(rho, 1.0);
    const double w = ergotropy_closed(rho, 1.0);
    worst_ergotropy = std::max(worst_ergotropy, std::abs(w - ergotropy_oracle(rho, 1.0)));
    worst_sz = std::max(worst_sz, std::abs(population_difference(rho) - (2.0 * e - 1.0)));
    worst_bound = std::max({worst_bound, -w, w - e});
    steering(rho);  // throws if the identity row/column does not vanish
  }
  const bool ok = worst_ergotropy <= 1e-10 && worst_sz <= 1e-12 && worst_bound <= 1e-9;
  return {"random-state identities (" + std::to_string(opt.random_states) + " states)", ok,
          "max |W_closed - W_oracle| = " + sci(worst_ergotropy) + ", max |sz - (2E-1)| = " + sci(worst_sz) +
              ", max W bound violation = " + sci(std::max(0.0, worst_bound))};
}

CheckOutcome steering_references() {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> bell{s, 0.0, 0.0, s};
  const SteeringResult b = steering(DensityMatrix::pure(bell));
  const double expected = 1.5 - std::sqrt(3.0) / 2.0;
  double product = 0.0;
  for (const char* label : {"ee", "eg", "ge", "gg"}) {
    const SteeringResult r = steering(DensityMatrix::basis_state(label));
    product = std::max({product, std::abs(r.S_AB), std::abs(r.S_BA)});
  }
  const double bell_err = std::max(std::abs(b.S_AB - expected), std::abs(b.S_BA - expected));
  return {"steering reference values", bell_err <= 1e-10 && product <= 1e-12,
          "Bell error " + sci(bell_err) + ", product-state max |S| " + sci(product)};
}

CheckOutcome scenario_invariants(const ScenarioSpec& spec, const ValidationOptions& opt) {
  IntegratorConfig cfg = resolve_integrator(spec);
  cfg.renormalize = false;
  cfg.t_max = std::max(cfg.t_max, opt.drift_horizon / std::max(spec.params.coupling, 1e-12));
  const Trajectory traj = evolve(spec.params, spec.initial_state.density(), cfg);

  double worst_ergotropy = 0.0;
  for (const auto& rho : traj.states)
    worst_ergotropy = std::max(worst_ergotropy, std::abs(ergotropy_closed(rho, spec.params.omega0) -
                                                         ergotropy_oracle(rho, spec.params.omega0)));
  const auto& d = traj.diagnostics;
  const bool ok = d.max_trace_drift <= 1e-8 && d.min_eigenvalue >= -kRecordedStateTolerance && worst_ergotropy <= 1e-10;
  return {"dynamics invariants: " + spec.name, ok,
          "trace drift " + sci(d.max_trace_drift) + ", min eigenvalue " + sci(d.min_eigenvalue) +
              ", ergotropy mismatch " + sci(worst_ergotropy)};
}

CheckOutcome steady_state_residual(const ScenarioSpec& spec) {
  if (spec.params.dissipation <= 0.0) return {"steady state: " + spec.name, true, "skipped (no dissipation)"};
  const SteadyStateResult r = solve_steady_state(spec.params);
  return {"steady state: " + spec.name, r.residual <= 1e-9, "residual " + sci(r.residual)};
}

}  // namespace

std::vector<CheckOutcome> run_invariant_suite(const std::vector<ScenarioSpec>& scenarios,
                                              const ValidationOptions& options) {
  std::vector<CheckOutcome> out;
  auto guarded = [&](const std::string& name, auto&& check) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  };
  guarded("random-state identities", [&] { return random_state_identities(options); });
  guarded("steering reference values", [] { return steering_references(); });
  for (const auto& spec : scenarios) {
    if (spec.sweep) continue;
    guarded("dynamics invariants: " + spec.name, [&] { return scenario_invariants(spec, options); });
    guarded("steady state: " + spec.name, [&] { return steady_state_residual(spec); });
  }
  return out;
}

}  // namespace qbat
