// qbat: command-line front end for the charger-battery simulator.
//
// Exit codes: 0 success, 1 invariant violation, 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qbat/analytics.hpp"
#include "qbat/scenarios.hpp"
#include "qbat/validation.hpp"

#ifndef QBAT_PRESET_DIR
#define QBAT_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace qbat;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config;
  std::string out = "out";
  std::optional<double> dt;
  std::optional<double> t_max;
  std::uint64_t seed = 20251018;
  std::string format = "csv";
  std::string presets;
};

fs::path preset_dir(const CommonOptions& o) {
  if (!o.presets.empty()) return o.presets;
  if (const char* env = std::getenv("QBAT_PRESETS")) return env;
  return QBAT_PRESET_DIR;
}

void apply_overrides(ScenarioSpec& s, const CommonOptions& o) {
  if (o.dt) s.integrator.dt = *o.dt;
  if (o.t_max) s.integrator.t_max = *o.t_max;
  try {
    resolve_integrator(s).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("integrator override: ") + e.what());
  }
}

void run_one(ScenarioSpec spec, const CommonOptions& o) {
  apply_overrides(spec, o);
  const OutputFormat fmt = parse_output_format(o.format);
  const RunManifest m = spec.sweep ? run_sweep(spec, o.out, fmt) : run_scenario(spec, o.out, fmt);
  std::cout << spec.name << ": " << m.status;
  for (const auto& w : m.warnings) std::cout << "\n  warning: " << w;
  std::cout << '\n';
  for (const auto& f : m.outputs) std::cout << "  " << f << '\n';
}

int cmd_steady(const CommonOptions& o, SystemParams p, bool have_config) {
  if (have_config) {
    const ScenarioSpec spec = load_scenario(o.config);
    if (spec.sweep) {
      run_one(spec, o);
      return 0;
    }
    p = spec.params;
  }
  p.validate();
  const SteadyStateResult r = solve_steady_state(p);
  nlohmann::json j{{"params", to_json(p)},
                   {"E_A_inf", charger_energy(r.state, p.omega0)},
                   {"E_B_inf", stored_energy(r.state, p.omega0)},
                   {"residual", r.residual},
                   {"spectral_gap", r.spectral_gap}};
  if (p.detuning == 0.0 && p.reservoir.occupation == 0.0 && p.coupling > 0.0) {
    const auto a = steady_energy_analytic(p.pump / p.coupling, p.dissipation / p.coupling, p.omega0);
    j["analytic"] = {{"k", a.k}, {"l", a.l}, {"E_A_inf", a.E_A_inf}, {"E_B_inf", a.E_B_inf}, {"alpha", a.alpha}};
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_validate(const CommonOptions& o) {
  ValidationOptions vo;
  vo.seed = o.seed;
  std::vector<ScenarioSpec> specs;
  if (!o.config.empty())
    specs.push_back(load_scenario(o.config));
  else
    specs = load_all_presets(preset_dir(o));
  for (auto& s : specs) apply_overrides(s, o);
  const auto results = run_invariant_suite(specs, vo);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  [" << r.detail << "]\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charger-battery quantum battery simulator"};
  app.require_subcommand(1);
  CommonOptions opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--dt", opt.dt, "Override integrator time step");
    sub->add_option("--t-max", opt.t_max, "Override integration horizon");
    sub->add_option("--format", opt.format, "Data format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--presets", opt.presets, "Preset directory");
    sub->add_option("--seed", opt.seed, "Seed for random-state sampling");
  };

  SystemParams point;
  std::string kind = "bosonic";
  auto* steady = app.add_subcommand("steady", "Steady state at one point, or a sweep when the config has one");
  add_common(steady);
  steady->add_option("--config", opt.config, "Scenario config (JSON)")->check(CLI::ExistingFile);
  steady->add_option("--omega0", point.omega0);
  steady->add_option("--detuning", point.detuning);
  steady->add_option("--coupling", point.coupling);
  steady->add_option("--pump", point.pump);
  steady->add_option("--dissipation", point.dissipation);
  steady->add_option("--occupation", point.reservoir.occupation);
  steady->add_option("--reservoir", kind)->check(CLI::IsMember({"bosonic", "fermionic"}));

  auto* evolve_cmd = app.add_subcommand("evolve", "Run a single scenario config");
  add_common(evolve_cmd);
  evolve_cmd->add_option("--config", opt.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);

  std::string preset;
  auto* scenario = app.add_subcommand("scenario", "Run a shipped preset (fig2 ... fig7, appendixA, or one panel)");
  add_common(scenario);
  scenario->add_option("preset", preset, "Preset name")->required();

  std::string pumpless = "fig4a", driven = "fig5a";
  auto* power = app.add_subcommand("power-compare", "Charging power ratio P(tau) of two scenarios");
  add_common(power);
  power->add_option("--pumpless", pumpless, "Preset name or config path of the first scenario");
  power->add_option("--driven", driven, "Preset name or config path of the second scenario");

  auto* validate = app.add_subcommand("validate", "Run the invariant suite over all presets");
  add_common(validate);
  validate->add_option("--config", opt.config, "Validate a single config instead")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  auto resolve_spec = [&](const std::string& ref) {
    if (fs::exists(ref)) return load_scenario(ref);
    auto specs = load_preset(preset_dir(opt), ref);
    if (specs.size() != 1) throw ConfigError("'" + ref + "' names a preset group, expected one scenario");
    return specs.front();
  };

  try {
    if (*steady) {
      point.reservoir.kind = parse_reservoir_kind(kind);
      return cmd_steady(opt, point, !opt.config.empty());
    }
    if (*evolve_cmd) {
      run_one(load_scenario(opt.config), opt);
      return 0;
    }
    if (*scenario) {
      for (auto& spec : load_preset(preset_dir(opt), preset)) run_one(spec, opt);
      return 0;
    }
    if (*power) {
      ScenarioSpec a = resolve_spec(pumpless);
      ScenarioSpec b = resolve_spec(driven);
      apply_overrides(a, opt);
      apply_overrides(b, opt);
      const PowerReport r = compare_power(a, b);
      fs::create_directories(opt.out);
      const fs::path file = fs::path(opt.out) / ("power_" + a.name + "_vs_" + b.name + ".json");
      std::ofstream(file) << r.to_json().dump(2) << '\n';
      std::cout << r.to_json().dump(2) << '\n' << "written to " << file.string() << '\n';
      return 0;
    }
    if (*validate) return cmd_validate(opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
  return 0;
}
