#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbat/scenarios.hpp"
#include "qbat/validation.hpp"

using namespace qbat;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal() {
  return json::parse(R"({
    "name": "t1",
    "params": {"coupling": 1, "pump": 0, "dissipation": 0.001},
    "initial_state": "eg",
    "integrator": {"dt": 0.001, "t_max": 2, "record_every": 10}
  })");
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qbat_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Parse, Minimal) {
  const ScenarioSpec s = parse_scenario(minimal());
  EXPECT_EQ(s.name, "t1");
  EXPECT_EQ(s.initial_state.label, "eg");
  EXPECT_DOUBLE_EQ(s.params.dissipation, 0.001);
  EXPECT_EQ(s.integrator.record_every, 10);
  EXPECT_EQ(s.outputs.size(), kObservableColumns.size() - 1);
  EXPECT_FALSE(s.sweep);
}

TEST(Parse, DefaultTimeStepWhenOmitted) {
  json j = minimal();
  j["params"]["pump"] = 4.0;
  j["integrator"].erase("dt");
  const ScenarioSpec s = parse_scenario(j);
  EXPECT_DOUBLE_EQ(resolve_integrator(s).dt, default_time_step(s.params));
  EXPECT_DOUBLE_EQ(resolve_integrator(s).dt, 0.25e-3);
}

TEST(Parse, OutputSelectionKeepsCanonicalOrder) {
  json j = minimal();
  j["outputs"] = {"S_AB", "E_B", "t"};
  EXPECT_EQ(parse_scenario(j).outputs, (std::vector<std::string>{"E_B", "S_AB"}));
}

TEST(Parse, CustomAmplitudes) {
  json j = minimal();
  const double s = 1.0 / std::sqrt(2.0);
  j["initial_state"] = {{"amplitudes", {s, 0, 0, json::array({0, s})}}};
  const ScenarioSpec spec = parse_scenario(j);
  EXPECT_EQ(spec.initial_state.label, "custom");
  EXPECT_NEAR(std::abs(spec.initial_state.density()(0, 3)), 0.5, 1e-15);
}

TEST(Parse, Errors) {
  auto bad = [](auto mutate) {
    json j = minimal();
    mutate(j);
    return j;
  };
  EXPECT_THROW(parse_scenario(json::array()), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j.erase("name"); })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["params"]["coupling"] = -1; })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["params"]["pump"] = "lots"; })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["params"]["reservoir"] = {{"kind", "anyonic"}}; })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) {
                 j["params"]["reservoir"] = {{"kind", "fermionic"}, {"occupation", 1.5}};
               })),
               ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["initial_state"] = "xx"; })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["initial_state"] = {{"amplitudes", {1, 1, 0, 0}}}; })),
               ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["integrator"]["dt"] = -0.1; })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["integrator"]["record_every"] = 0; })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["outputs"] = json::array(); })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) { j["outputs"] = {"E_C"}; })), ConfigError);
  EXPECT_THROW(parse_scenario(bad([](json& j) {
                 j["sweep"] = {{"x", {{"variable", "T"}, {"min", 0}, {"max", 1}, {"count", 3}}}};
               })),
               ConfigError);
  EXPECT_THROW(parse_output_format("xml"), ConfigError);
}

TEST(Parse, RoundTripThroughJson) {
  const ScenarioSpec a = parse_scenario(minimal());
  const ScenarioSpec b = parse_scenario(to_json(a));
  EXPECT_EQ(to_json(a), to_json(b));
}

TEST(Presets, AllLoadAndGroupsExpand) {
  const auto all = load_all_presets(QBAT_PRESET_DIR);
  EXPECT_EQ(all.size(), 21u);  // 3 sweeps + 18 panels
  const auto fig4 = load_preset(QBAT_PRESET_DIR, "fig4");
  ASSERT_EQ(fig4.size(), 4u);
  EXPECT_EQ(fig4[0].name, "fig4a");
  EXPECT_EQ(fig4[3].name, "fig4d");
  EXPECT_EQ(load_preset(QBAT_PRESET_DIR, "appendixA").size(), 4u);
  EXPECT_THROW(load_preset(QBAT_PRESET_DIR, "fig99"), ConfigError);
  const auto fig2 = load_preset(QBAT_PRESET_DIR, "fig2");
  ASSERT_EQ(fig2.size(), 1u);
  ASSERT_TRUE(fig2[0].sweep);
  EXPECT_EQ(fig2[0].sweep->x.values.size(), 41u);
}

TEST(Maxima, CrossingsAndTau) {
  std::vector<ObservableRecord> r(5);
  const double sz[] = {-1.0, -0.5, 0.5, 1.0, -1.0};
  const double eb[] = {0.0, 0.25, 0.75, 1.0, 0.0};
  for (int i = 0; i < 5; ++i) {
    r[i].t = i;
    r[i].sz_B = sz[i];
    r[i].E_B = eb[i];
  }
  const ScenarioMaxima m = find_maxima(r);
  ASSERT_EQ(m.sz_B_zero_crossings.size(), 2u);
  EXPECT_DOUBLE_EQ(m.sz_B_zero_crossings[0], 1.5);
  EXPECT_DOUBLE_EQ(m.sz_B_zero_crossings[1], 3.5);
  // Parabola through (2, 0.75), (3, 1), (4, 0) peaks at t = 2.7.
  EXPECT_NEAR(m.tau, 2.7, 1e-12);
}

TEST(Format, Numbers) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}

TEST_F(TempDir, ScenarioOutputsAreDeterministic) {
  const ScenarioSpec s = parse_scenario(minimal());
  const RunManifest m1 = run_scenario(s, dir_ / "a");
  const RunManifest m2 = run_scenario(s, dir_ / "b");
  EXPECT_EQ(m1.status, "ok");
  EXPECT_TRUE(m1.warnings.empty());
  const std::string a = slurp(dir_ / "a" / "t1.csv");
  EXPECT_EQ(a, slurp(dir_ / "b" / "t1.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "t1_maxima.json"), slurp(dir_ / "b" / "t1_maxima.json"));
  EXPECT_EQ(a.substr(0, a.find('\n')), "t,E_A,E_B,W_B,sz_B,S_AB,S_BA,purity_A,purity_B,trace_err");
  // 2000 steps at stride 10 plus t = 0
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1 + 201);

  const json manifest = json::parse(slurp(dir_ / "a" / "t1_manifest.json"));
  EXPECT_EQ(manifest["scenario"], "t1");
  EXPECT_EQ(manifest["tool_version"], kToolVersion);
  EXPECT_EQ(manifest["status"], "ok");
  EXPECT_TRUE(manifest.contains("timestamp"));
  EXPECT_TRUE(manifest["parameters"].contains("params"));

  const json maxima = json::parse(slurp(dir_ / "a" / "t1_maxima.json"));
  EXPECT_NEAR(maxima["tau"].get<double>(), 1.5708, 2e-3);
}

TEST_F(TempDir, JsonFormat) {
  json j = minimal();
  j["outputs"] = {"E_B"};
  run_scenario(parse_scenario(j), dir_, OutputFormat::Json);
  const json data = json::parse(slurp(dir_ / "t1.json"));
  ASSERT_EQ(data.size(), 201u);
  EXPECT_EQ(data[0].size(), 2u);
  EXPECT_DOUBLE_EQ(data[0]["E_B"].get<double>(), 0.0);
}

TEST_F(TempDir, PartialOutputOnIntegrationFailure) {
  json j = minimal();
  j["params"]["pump"] = 10;
  j["params"]["dissipation"] = 1;
  j["initial_state"] = "gg";
  j["integrator"] = {{"dt", 0.5}, {"t_max", 50}, {"record_every", 1}};
  EXPECT_THROW(run_scenario(parse_scenario(j), dir_), IntegrationError);
  EXPECT_TRUE(fs::exists(dir_ / "t1.csv"));
  const json manifest = json::parse(slurp(dir_ / "t1_manifest.json"));
  EXPECT_EQ(manifest["status"], "partial");
  EXPECT_FALSE(manifest["error"].get<std::string>().empty());
}

TEST_F(TempDir, SweepTables) {
  json j = minimal();
  j["params"] = {{"coupling", 1}, {"pump", 1}, {"dissipation", 1}};
  j["sweep"] = {{"x", {{"variable", "Delta"}, {"min", 0}, {"max", 2}, {"count", 3}, {"scale", "linear"}}},
                {"y", {{"variable", "n_f"}, {"values", {0.1, 0.9}}}}};
  const RunManifest m = run_sweep(parse_scenario(j), dir_);
  EXPECT_EQ(m.status, "ok");
  const std::string eb = slurp(dir_ / "t1_E_B.csv");
  std::istringstream is(eb);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n_f\\Delta,0,1,2");
  std::getline(is, line);
  EXPECT_EQ(line.substr(0, 4), "0.1,");
  EXPECT_TRUE(fs::exists(dir_ / "t1_E_A.csv"));
}

TEST_F(TempDir, OnePointSweepEqualsSteadyState) {
  json j = minimal();
  j["params"] = {{"coupling", 1}, {"pump", 2}, {"dissipation", 0.5}};
  j["sweep"] = {{"x", {{"variable", "F/g"}, {"values", {2.0}}}}};
  const SweepTable t = sweep_from_spec(parse_scenario(j));
  ASSERT_EQ(t.E_B.size(), 1u);
  EXPECT_NEAR(t.E_B[0], steady_energy_analytic(2.0, 0.5).E_B_inf, 1e-15);
}

TEST(Power, IdenticalScenariosGiveUnitRatio) {
  const ScenarioSpec s = parse_scenario(minimal());
  const PowerReport r = compare_power(s, s);
  EXPECT_DOUBLE_EQ(r.ratio, 1.0);
  const json j = r.to_json();
  EXPECT_EQ(j["first"]["scenario"], "t1");
  EXPECT_EQ(j["second"]["scenario"], "t1");
}

TEST(Power, UnchargedScenarioIsRejected) {
  json j = minimal();
  j["initial_state"] = "ge";  // battery starts full and only decays
  j["params"]["dissipation"] = 1.0;
  j["params"]["coupling"] = 0.0;
  EXPECT_THROW(compare_power(parse_scenario(j), parse_scenario(minimal())), std::domain_error);
}

TEST(Validation, SuitePassesOnSmallScenario) {
  ValidationOptions opt;
  opt.random_states = 200;
  opt.drift_horizon = 5;
  const auto out = run_invariant_suite({parse_scenario(minimal())}, opt);
  ASSERT_EQ(out.size(), 4u);
  for (const auto& c : out) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}
