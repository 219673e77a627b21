#include "qbat/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace qbat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_required(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing required key");
  return get_or<T>(j, key, path, T{});
}

SystemParams parse_params(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  SystemParams p;
  p.omega0 = get_or(j, "omega0", path, 1.0);
  p.detuning = get_or(j, "detuning", path, 0.0);
  p.coupling = get_or(j, "coupling", path, 1.0);
  p.pump = get_or(j, "pump", path, 0.0);
  p.dissipation = get_or(j, "dissipation", path, 0.0);
  if (j.contains("reservoir")) {
    const json& r = j.at("reservoir");
    const std::string rpath = path + ".reservoir";
    try {
      p.reservoir.kind = parse_reservoir_kind(get_or<std::string>(r, "kind", rpath, "bosonic"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(rpath + ".kind: " + e.what());
    }
    if (r.contains("occupation")) {
      p.reservoir.occupation = get_or(r, "occupation", rpath, 0.0);
    } else if (r.contains("temperature")) {
      p.reservoir.occupation = occupation_from_temperature(
          p.reservoir.kind, get_required<double>(r, "temperature", rpath),
          get_required<double>(r, "mode_frequency", rpath), get_or(r, "chemical_potential", rpath, 0.0));
    }
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return p;
}

InitialState parse_initial_state(const json& j, const std::string& path) {
  InitialState s;
  if (j.is_string()) {
    s.label = j.get<std::string>();
    static const std::set<std::string> labels{"gg", "eg", "ge", "ee"};
    if (!labels.contains(s.label))
      throw ConfigError(path + ": unknown initial state '" + s.label + "' (expected gg|eg|ge|ee)");
    return s;
  }
  if (!j.is_object() || !j.contains("amplitudes")) throw ConfigError(path + ": expected a label or {amplitudes}");
  const json& amps = j.at("amplitudes");
  if (!amps.is_array() || amps.size() != 4) throw ConfigError(path + ".amplitudes: expected 4 entries");
  s.label = "custom";
  double norm2 = 0.0;
  for (const auto& a : amps) {
    Complex z;
    if (a.is_number()) {
      z = a.get<double>();
    } else if (a.is_array() && a.size() == 2) {
      z = {a[0].get<double>(), a[1].get<double>()};
    } else {
      throw ConfigError(path + ".amplitudes: each entry is a number or [re, im]");
    }
    norm2 += std::norm(z);
    s.amplitudes.push_back(z);
  }
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw ConfigError(path + ".amplitudes: not normalized (|psi|^2 = " + format_number(norm2) + ")");
  return s;
}

SweepAxis parse_axis(const json& j, const std::string& path) {
  SweepVariable v;
  try {
    v = parse_sweep_variable(get_required<std::string>(j, "variable", path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ".variable: " + e.what());
  }
  if (j.contains("values")) {
    SweepAxis axis{v, get_required<std::vector<double>>(j, "values", path)};
    if (axis.values.empty()) throw ConfigError(path + ".values: empty");
    return axis;
  }
  const auto lo = get_required<double>(j, "min", path);
  const auto hi = get_required<double>(j, "max", path);
  const auto count = get_required<std::size_t>(j, "count", path);
  const auto scale = get_or<std::string>(j, "scale", path, "linear");
  try {
    if (scale == "log") return SweepAxis::logarithmic(v, lo, hi, count);
    if (scale == "linear") return SweepAxis::linear(v, lo, hi, count);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ".scale: expected log|linear");
}

json axis_to_json(const SweepAxis& a) { return {{"variable", to_string(a.variable)}, {"values", a.values}}; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_output(const fs::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file " + file.string());
  return os;
}

void write_json_file(const fs::path& file, const json& j) {
  auto os = open_output(file);
  os << j.dump(2) << '\n';
}

std::vector<std::string> all_observables() {
  return {kObservableColumns.begin() + 1, kObservableColumns.end()};
}

double lerp_column(std::span<const ObservableRecord> r, double t, double ObservableRecord::*field) {
  if (t <= r.front().t) return r.front().*field;
  if (t >= r.back().t) return r.back().*field;
  auto hi = std::lower_bound(r.begin(), r.end(), t, [](const ObservableRecord& a, double v) { return a.t < v; });
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return (1.0 - w) * (*lo).*field + w * (*hi).*field;
}

PeakSummary summarize_peak(std::span<const ObservableRecord> r, double ObservableRecord::*field) {
  std::vector<double> t(r.size()), y(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    t[i] = r[i].t;
    y[i] = r[i].*field;
  }
  const Peak p = find_peak(t, y);
  return {p.time, p.value, lerp_column(r, p.time, &ObservableRecord::E_A),
          lerp_column(r, p.time, &ObservableRecord::E_B), lerp_column(r, p.time, &ObservableRecord::sz_B)};
}

json peak_to_json(const PeakSummary& p) {
  return {{"t", p.t}, {"value", p.value}, {"E_A", p.E_A}, {"E_B", p.E_B}, {"sz_B", p.sz_B}};
}

}  // namespace

DensityMatrix InitialState::density() const {
  if (label == "custom") return DensityMatrix::pure(amplitudes);
  return DensityMatrix::basis_state(label);
}

ScenarioSpec parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  ScenarioSpec s;
  s.name = get_required<std::string>(j, "name", "scenario");
  if (s.name.empty()) throw ConfigError("scenario.name: empty");
  const std::string path = s.name;
  s.description = get_or<std::string>(j, "description", path, "");
  s.params = parse_params(j.contains("params") ? j.at("params") : json::object(), path + ".params");
  if (j.contains("initial_state")) s.initial_state = parse_initial_state(j.at("initial_state"), path + ".initial_state");

  if (j.contains("integrator")) {
    const json& ij = j.at("integrator");
    const std::string ipath = path + ".integrator";
    s.integrator.dt = get_or(ij, "dt", ipath, 0.0);
    s.integrator.t_max = get_or(ij, "t_max", ipath, s.integrator.t_max);
    s.integrator.record_every = get_or(ij, "record_every", ipath, s.integrator.record_every);
    s.integrator.renormalize = get_or(ij, "renormalize", ipath, s.integrator.renormalize);
  } else {
    s.integrator.dt = 0.0;
  }
  // dt = 0 means "derive from the parameters"
  if (s.integrator.dt < 0.0) throw ConfigError(path + ".integrator.dt: must be > 0");
  try {
    resolve_integrator(s).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ".integrator: " + e.what());
  }

  s.outputs = all_observables();
  if (j.contains("outputs")) {
    const auto wanted = get_required<std::vector<std::string>>(j, "outputs", path);
    if (wanted.empty()) throw ConfigError(path + ".outputs: empty observable selection");
    for (const auto& w : wanted)
      if (w != "t" && std::find(s.outputs.begin(), s.outputs.end(), w) == s.outputs.end())
        throw ConfigError(path + ".outputs: unknown observable '" + w + "'");
    std::erase_if(s.outputs, [&](const std::string& c) {
      return std::find(wanted.begin(), wanted.end(), c) == wanted.end();
    });
  }

  if (j.contains("sweep")) {
    const json& sj = j.at("sweep");
    SweepSpec sw{parse_axis(sj.at("x"), path + ".sweep.x"), std::nullopt};
    if (sj.contains("y")) sw.y = parse_axis(sj.at("y"), path + ".sweep.y");
    s.sweep = std::move(sw);
  }
  return s;
}

ScenarioSpec load_scenario(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot read config " + file.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  if (j.contains("group")) throw ConfigError(file.string() + ": is a preset group, not a single scenario");
  return parse_scenario(j);
}

json to_json(const SystemParams& p) {
  return {{"omega0", p.omega0},
          {"detuning", p.detuning},
          {"coupling", p.coupling},
          {"pump", p.pump},
          {"dissipation", p.dissipation},
          {"reservoir", {{"kind", to_string(p.reservoir.kind)}, {"occupation", p.reservoir.occupation}}}};
}

json to_json(const ScenarioSpec& s) {
  json j{{"name", s.name}, {"params", to_json(s.params)}, {"outputs", s.outputs}};
  if (!s.description.empty()) j["description"] = s.description;
  if (s.initial_state.label == "custom") {
    json amps = json::array();
    for (const auto& a : s.initial_state.amplitudes) amps.push_back({a.real(), a.imag()});
    j["initial_state"] = {{"amplitudes", amps}};
  } else {
    j["initial_state"] = s.initial_state.label;
  }
  const IntegratorConfig ic = resolve_integrator(s);
  j["integrator"] = {{"dt", ic.dt}, {"t_max", ic.t_max}, {"record_every", ic.record_every}, {"renormalize", ic.renormalize}};
  if (s.sweep) {
    j["sweep"] = {{"x", axis_to_json(s.sweep->x)}};
    if (s.sweep->y) j["sweep"]["y"] = axis_to_json(*s.sweep->y);
  }
  return j;
}

std::vector<ScenarioSpec> load_preset(const fs::path& preset_dir, const std::string& name) {
  const fs::path file = preset_dir / (name + ".json");
  std::ifstream is(file);
  if (!is) throw ConfigError("unknown preset '" + name + "' (no " + file.string() + ")");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  if (!j.contains("group")) return {parse_scenario(j)};
  std::vector<ScenarioSpec> out;
  for (const auto& member : get_required<std::vector<std::string>>(j, "group", name)) {
    if (member == name) throw ConfigError(name + ".group: preset lists itself");
    auto specs = load_preset(preset_dir, member);
    out.insert(out.end(), specs.begin(), specs.end());
  }
  return out;
}

std::vector<ScenarioSpec> load_all_presets(const fs::path& preset_dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(preset_dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<ScenarioSpec> out;
  for (const auto& f : files) {
    std::ifstream is(f);
    const json j = json::parse(is);
    if (!j.contains("group")) out.push_back(parse_scenario(j));
  }
  return out;
}

json RunManifest::to_json() const {
  return {{"scenario", scenario},
          {"parameters", parameters},
          {"tool_version", tool_version},
          {"timestamp", timestamp},
          {"outputs", outputs},
          {"diagnostics",
           {{"max_trace_drift", diagnostics.max_trace_drift},
            {"min_eigenvalue", diagnostics.min_eigenvalue},
            {"steps", diagnostics.steps}}},
          {"warnings", warnings},
          {"status", status},
          {"error", error}};
}

IntegratorConfig resolve_integrator(const ScenarioSpec& spec) {
  IntegratorConfig cfg = spec.integrator;
  if (cfg.dt == 0.0) cfg.dt = default_time_step(spec.params);
  return cfg;
}

ScenarioMaxima find_maxima(std::span<const ObservableRecord> records) {
  if (records.empty()) throw std::invalid_argument("find_maxima: no records");
  ScenarioMaxima m;
  m.max_S_AB = summarize_peak(records, &ObservableRecord::S_AB);
  m.max_S_BA = summarize_peak(records, &ObservableRecord::S_BA);

  std::vector<double> t(records.size()), eb(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    t[i] = records[i].t;
    eb[i] = records[i].E_B;
  }
  const ChargingPeak tau = find_tau(t, eb);
  m.tau = tau.tau;
  m.E_B_tau = tau.energy;
  if (tau.tau > 0.0) m.P_tau = charging_power(tau.energy, tau.tau);

  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double a = records[i].sz_B, b = records[i + 1].sz_B;
    if (a == 0.0) {
      m.sz_B_zero_crossings.push_back(records[i].t);
    } else if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
      m.sz_B_zero_crossings.push_back(records[i].t - a * (records[i + 1].t - records[i].t) / (b - a));
    }
  }
  if (records.back().sz_B == 0.0) m.sz_B_zero_crossings.push_back(records.back().t);
  return m;
}

ScenarioResult simulate_scenario(const ScenarioSpec& spec) {
  ScenarioResult out{spec, evolve(spec.params, spec.initial_state.density(), resolve_integrator(spec)), {}, {}};
  out.records.reserve(out.trajectory.size());
  for (std::size_t i = 0; i < out.trajectory.size(); ++i)
    out.records.push_back(observe(out.trajectory.times[i], out.trajectory.states[i], spec.params.omega0));
  out.maxima = find_maxima(out.records);
  return out;
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + name + "' (expected csv|json)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void write_records_csv(std::ostream& os, std::span<const ObservableRecord> records,
                       const std::vector<std::string>& columns) {
  os << "t";
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  for (const auto& r : records) {
    os << format_number(r.t);
    for (const auto& c : columns) os << ',' << format_number(column_value(r, c));
    os << '\n';
  }
}

json records_to_json(std::span<const ObservableRecord> records, const std::vector<std::string>& columns) {
  json arr = json::array();
  for (const auto& r : records) {
    json row{{"t", r.t}};
    for (const auto& c : columns) row[c] = column_value(r, c);
    arr.push_back(std::move(row));
  }
  return arr;
}

json maxima_to_json(const std::string& scenario, const ScenarioMaxima& m) {
  json j{{"scenario", scenario},
         {"max_S_AB", peak_to_json(m.max_S_AB)},
         {"max_S_BA", peak_to_json(m.max_S_BA)},
         {"tau", m.tau},
         {"E_B_tau", m.E_B_tau},
         {"P_tau", m.P_tau ? json(*m.P_tau) : json(nullptr)},
         {"sz_B_zero_crossings", m.sz_B_zero_crossings}};
  return j;
}

RunManifest run_scenario(const ScenarioSpec& spec, const fs::path& out_dir, OutputFormat format) {
  fs::create_directories(out_dir);
  RunManifest manifest;
  manifest.scenario = spec.name;
  manifest.parameters = to_json(spec);
  manifest.timestamp = utc_timestamp();

  const fs::path data_file = out_dir / (spec.name + (format == OutputFormat::Csv ? ".csv" : ".json"));
  const fs::path maxima_file = out_dir / (spec.name + "_maxima.json");
  const fs::path manifest_file = out_dir / (spec.name + "_manifest.json");

  auto write_data = [&](std::span<const ObservableRecord> records) {
    auto os = open_output(data_file);
    if (format == OutputFormat::Csv)
      write_records_csv(os, records, spec.outputs);
    else
      os << records_to_json(records, spec.outputs).dump(2) << '\n';
    manifest.outputs.push_back(data_file.string());
  };

  ScenarioResult result;
  try {
    result = simulate_scenario(spec);
  } catch (const IntegrationError& e) {
    std::vector<ObservableRecord> partial;
    const Trajectory& t = e.partial();
    for (std::size_t i = 0; i < t.size(); ++i) partial.push_back(observe(t.times[i], t.states[i], spec.params.omega0));
    write_data(partial);
    manifest.diagnostics = t.diagnostics;
    manifest.status = "partial";
    manifest.error = e.what();
    manifest.outputs.push_back(manifest_file.string());
    write_json_file(manifest_file, manifest.to_json());
    throw;
  }

  write_data(result.records);
  write_json_file(maxima_file, maxima_to_json(spec.name, result.maxima));
  manifest.outputs.push_back(maxima_file.string());
  manifest.outputs.push_back(manifest_file.string());
  manifest.diagnostics = result.trajectory.diagnostics;
  if (manifest.diagnostics.max_trace_drift > 1e-8)
    manifest.warnings.push_back("trace drift " + format_number(manifest.diagnostics.max_trace_drift) + " exceeds 1e-8");
  if (manifest.diagnostics.min_eigenvalue < -kRecordedStateTolerance)
    manifest.warnings.push_back("min eigenvalue " + format_number(manifest.diagnostics.min_eigenvalue) +
                                " below -1e-7");
  write_json_file(manifest_file, manifest.to_json());
  return manifest;
}

SweepTable sweep_from_spec(const ScenarioSpec& spec) {
  if (!spec.sweep) throw ConfigError(spec.name + ": no sweep section");
  return sweep_steady({spec.params, spec.sweep->x, spec.sweep->y, 0});
}

void write_sweep_csv(std::ostream& os, const SweepTable& table, bool battery) {
  os << (table.y ? to_string(table.y->variable) : std::string("-")) << '\\' << to_string(table.x.variable);
  for (double x : table.x.values) os << ',' << format_number(x);
  os << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    os << (table.y ? format_number(table.y->values[r]) : std::string("-"));
    for (std::size_t c = 0; c < table.cols(); ++c)
      os << ',' << format_number(battery ? table.eb(r, c) : table.ea(r, c));
    os << '\n';
  }
}

RunManifest run_sweep(const ScenarioSpec& spec, const fs::path& out_dir, OutputFormat format) {
  fs::create_directories(out_dir);
  RunManifest manifest;
  manifest.scenario = spec.name;
  manifest.parameters = to_json(spec);
  manifest.timestamp = utc_timestamp();
  manifest.diagnostics.min_eigenvalue = 0.0;

  const SweepTable table = sweep_from_spec(spec);
  if (format == OutputFormat::Csv) {
    for (bool battery : {false, true}) {
      const fs::path file = out_dir / (spec.name + (battery ? "_E_B.csv" : "_E_A.csv"));
      auto os = open_output(file);
      write_sweep_csv(os, table, battery);
      manifest.outputs.push_back(file.string());
    }
  } else {
    const fs::path file = out_dir / (spec.name + ".json");
    json j{{"x", axis_to_json(table.x)}, {"E_A", table.E_A}, {"E_B", table.E_B}, {"analytic", table.analytic}};
    if (table.y) j["y"] = axis_to_json(*table.y);
    write_json_file(file, j);
    manifest.outputs.push_back(file.string());
  }
  for (const auto& f : table.failures) {
    std::ostringstream os;
    os << "point (row " << f.row << ", col " << f.col << "; x = " << f.x << ", y = " << f.y << ") failed: " << f.message;
    manifest.warnings.push_back(os.str());
  }
  if (!table.failures.empty()) manifest.status = "partial";
  const fs::path manifest_file = out_dir / (spec.name + "_manifest.json");
  manifest.outputs.push_back(manifest_file.string());
  write_json_file(manifest_file, manifest.to_json());
  return manifest;
}

json PowerReport::to_json() const {
  return {{"first", {{"scenario", first_name}, {"tau", first_tau}, {"E_B_tau", first_energy}, {"P_tau", first_power}}},
          {"second",
           {{"scenario", second_name}, {"tau", second_tau}, {"E_B_tau", second_energy}, {"P_tau", second_power}}},
          {"ratio", ratio}};
}

PowerReport compare_power(const ScenarioSpec& first, const ScenarioSpec& second) {
  const ScenarioResult a = simulate_scenario(first);
  const ScenarioResult b = simulate_scenario(second);
  if (!a.maxima.P_tau || !b.maxima.P_tau)
    throw std::domain_error("compare_power: tau = 0 in " + (a.maxima.P_tau ? second.name : first.name) +
                                " (battery never charges over the horizon)");
  PowerReport r{first.name, second.name,
                a.maxima.tau, a.maxima.E_B_tau, *a.maxima.P_tau,
                b.maxima.tau, b.maxima.E_B_tau, *b.maxima.P_tau, 0.0};
  if (r.second_power == 0.0) throw std::domain_error("compare_power: " + second.name + " stores no energy");
  r.ratio = r.first_power / r.second_power;
  return r;
}

}  // namespace qbat
