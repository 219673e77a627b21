// Scenario configs, runs, sweeps and their on-disk outputs.
//
// A scenario config is a JSON object:
//
//   {
//     "name": "fig4a",
//     "description": "...",                       // optional
//     "params": {"omega0": 1, "detuning": 0, "coupling": 1, "pump": 0,
//                "dissipation": 0.001,
//                "reservoir": {"kind": "bosonic", "occupation": 0}},
//     "initial_state": "eg",                      // gg|eg|ge|ee or
//                                                 // {"amplitudes": [[re, im] x4]}
//     "integrator": {"dt": 0.001, "t_max": 10, "record_every": 20,
//                    "renormalize": true},        // dt optional
//     "outputs": ["E_A", "E_B", "S_AB"],          // optional, default all
//     "sweep": {"x": {"variable": "F/g", "min": 0.01, "max": 100,
//                     "count": 41, "scale": "log"},
//               "y": {...}}                       // optional; turns the run into a sweep
//   }
//
// A group config lists other presets: {"name": "fig4", "group": ["fig4a", ...]}.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbat/analytics.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/observables.hpp"

namespace qbat {

inline constexpr const char* kToolVersion = "1.0.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialState {
  /// "gg", "eg", "ge", "ee" or "custom"
  std::string label = "gg";
  std::vector<Complex> amplitudes;  // custom only

  DensityMatrix density() const;
};

struct SweepSpec {
  SweepAxis x;
  std::optional<SweepAxis> y;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  SystemParams params;
  InitialState initial_state;
  IntegratorConfig integrator;
  /// Observable columns written after "t", in canonical order.
  std::vector<std::string> outputs;
  std::optional<SweepSpec> sweep;
};

/// Throws ConfigError with the offending key path.
ScenarioSpec parse_scenario(const nlohmann::json& j);
ScenarioSpec load_scenario(const std::filesystem::path& file);
nlohmann::json to_json(const ScenarioSpec& spec);
nlohmann::json to_json(const SystemParams& p);

/// Preset names resolved in `preset_dir`; groups are expanded in order.
std::vector<ScenarioSpec> load_preset(const std::filesystem::path& preset_dir, const std::string& name);
/// Every non-group preset in the directory, sorted by name.
std::vector<ScenarioSpec> load_all_presets(const std::filesystem::path& preset_dir);

struct PeakSummary {
  double t = 0.0;
  double value = 0.0;
  /// Other observables linearly interpolated at t.
  double E_A = 0.0;
  double E_B = 0.0;
  double sz_B = 0.0;
};

struct ScenarioMaxima {
  PeakSummary max_S_AB;
  PeakSummary max_S_BA;
  double tau = 0.0;
  double E_B_tau = 0.0;
  /// Absent when tau = 0.
  std::optional<double> P_tau;
  /// Linearly interpolated times where sz_B changes sign.
  std::vector<double> sz_B_zero_crossings;
};

struct RunManifest {
  std::string scenario;
  nlohmann::json parameters;
  std::string tool_version = kToolVersion;
  std::string timestamp;
  std::vector<std::string> outputs;
  IntegratorDiagnostics diagnostics;
  std::vector<std::string> warnings;
  std::string status = "ok";
  std::string error;

  nlohmann::json to_json() const;
};

struct ScenarioResult {
  ScenarioSpec spec;
  Trajectory trajectory;
  std::vector<ObservableRecord> records;
  ScenarioMaxima maxima;
};

/// Effective time step: the configured one or default_time_step(params).
IntegratorConfig resolve_integrator(const ScenarioSpec& spec);

/// Evolves the scenario and evaluates every observable at each recorded step.
ScenarioResult simulate_scenario(const ScenarioSpec& spec);

ScenarioMaxima find_maxima(std::span<const ObservableRecord> records);

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(const std::string& name);

/// Fixed-width text of one value, 12 significant digits.
std::string format_number(double v);

void write_records_csv(std::ostream& os, std::span<const ObservableRecord> records,
                       const std::vector<std::string>& columns);
nlohmann::json records_to_json(std::span<const ObservableRecord> records, const std::vector<std::string>& columns);
nlohmann::json maxima_to_json(const std::string& scenario, const ScenarioMaxima& m);

/// Simulates and writes <name>.csv|json, <name>_maxima.json and
/// <name>_manifest.json into out_dir. On IntegrationError the partial records
/// and a manifest with status "partial" are written before rethrowing.
RunManifest run_scenario(const ScenarioSpec& spec, const std::filesystem::path& out_dir,
                         OutputFormat format = OutputFormat::Csv);

/// Matrix table: first row "<y>\<x>", x values; then y value and one entry per column.
void write_sweep_csv(std::ostream& os, const SweepTable& table, bool battery);

/// Sweeps and writes <name>_E_A.csv, <name>_E_B.csv (or one .json) plus the manifest.
RunManifest run_sweep(const ScenarioSpec& spec, const std::filesystem::path& out_dir,
                      OutputFormat format = OutputFormat::Csv);

SweepTable sweep_from_spec(const ScenarioSpec& spec);

struct PowerReport {
  std::string first_name;
  std::string second_name;
  double first_tau, first_energy, first_power;
  double second_tau, second_energy, second_power;
  /// first_power / second_power
  double ratio;

  nlohmann::json to_json() const;
};

/// Charging power of each scenario at its own tau. Throws std::domain_error
/// when either tau is 0.
PowerReport compare_power(const ScenarioSpec& first, const ScenarioSpec& second);

}  // namespace qbat
