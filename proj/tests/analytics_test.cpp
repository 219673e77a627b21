#include <gtest/gtest.h>

#include <cmath>

#include "qbat/analytics.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/observables.hpp"

using namespace qbat;

namespace {

SystemParams params(double delta, double g, double F, double gamma, ReservoirKind kind = ReservoirKind::Bosonic,
                    double n = 0.0) {
  SystemParams p;
  p.detuning = delta;
  p.coupling = g;
  p.pump = F;
  p.dissipation = gamma;
  p.reservoir = {kind, n};
  return p;
}

}  // namespace

TEST(Analytic, ZeroDissipationLimit) {
  // alpha -> 256k^6 + 256k^4 and both numerators -> 128k^4(1 + k^2).
  for (double k : {0.5, 1.0, 4.0}) {
    const auto a = steady_energy_analytic(k, 1e-6);
    EXPECT_NEAR(a.E_A_inf, 0.5, 1e-4);
    EXPECT_NEAR(a.E_B_inf, 0.5, 1e-4);
  }
}

TEST(Analytic, StrongPumpLimit) {
  // Leading k^6 terms: E_A -> 1/2, E_B -> 1 / (2 (1 + l^2)).
  for (double l : {0.1, 1.0, 3.0}) {
    const auto a = steady_energy_analytic(1e4, l);
    EXPECT_NEAR(a.E_A_inf, 0.5, 1e-6);
    EXPECT_NEAR(a.E_B_inf, 0.5 / (1.0 + l * l), 1e-6);
  }
}

TEST(Analytic, NoPumpNoEnergy) {
  const auto a = steady_energy_analytic(0.0, 0.7, 2.0);
  EXPECT_EQ(a.E_A_inf, 0.0);
  EXPECT_EQ(a.E_B_inf, 0.0);
}

TEST(Analytic, ExampleValue) {
  // k = l = 1: alpha = 512 + 25*13 + 4*7*13 + 64*20 = 2481.
  const auto a = steady_energy_analytic(1.0, 1.0);
  EXPECT_DOUBLE_EQ(a.alpha, 2481.0);
  EXPECT_NEAR(a.E_A_inf, 4.0 * (64 + 13 + 12 * 13) / 2481.0, 1e-15);
  EXPECT_NEAR(a.E_B_inf, 16.0 * (16 + 22 + 9) / 2481.0, 1e-15);
}

TEST(Analytic, ScalesWithOmega0) {
  const auto a = steady_energy_analytic(2.0, 0.3, 1.0);
  const auto b = steady_energy_analytic(2.0, 0.3, 3.5);
  EXPECT_NEAR(b.E_B_inf, 3.5 * a.E_B_inf, 1e-14);
  EXPECT_NEAR(b.E_A_inf, 3.5 * a.E_A_inf, 1e-14);
}

TEST(Analytic, UndefinedAtOrigin) { EXPECT_THROW(steady_energy_analytic(0.0, 0.0), std::domain_error); }

TEST(Analytic, BoundedOnFigure2Grid) {
  const auto axis = SweepAxis::logarithmic(SweepVariable::PumpRatio, 0.01, 100, 41).values;
  for (double k : axis)
    for (double l : axis) {
      const auto a = steady_energy_analytic(k, l);
      ASSERT_GE(a.E_A_inf, 0.0);
      ASSERT_LE(a.E_A_inf, 1.0);
      ASSERT_GE(a.E_B_inf, 0.0);
      ASSERT_LE(a.E_B_inf, 1.0);
    }
}

TEST(Analytic, NumericSteadyStateDependsOnlyOnRatios) {
  for (double s : {0.25, 3.0, 40.0}) {
    const DensityMatrix a = steady_state(params(0, 1, 2, 0.5));
    const DensityMatrix b = steady_state(params(0, s, 2 * s, 0.5 * s));
    EXPECT_NEAR(stored_energy(a, 1.0), stored_energy(b, 1.0), 1e-12);
    EXPECT_NEAR(charger_energy(a, 1.0), charger_energy(b, 1.0), 1e-12);
  }
}

TEST(Analytic, WhiteLineRisesThenFalls) {
  const auto axis = SweepAxis::logarithmic(SweepVariable::PumpRatio, 0.01, 100, 41).values;
  std::vector<double> e;
  for (double k : axis) e.push_back(steady_energy_analytic(k, k).E_B_inf);
  const auto peak = std::max_element(e.begin(), e.end()) - e.begin();
  ASSERT_GT(peak, 0);
  ASSERT_LT(peak, static_cast<long>(e.size()) - 1);
  for (long i = 0; i < peak; ++i) EXPECT_LT(e[i], e[i + 1]);
  for (std::size_t i = peak; i + 1 < e.size(); ++i) EXPECT_GT(e[i], e[i + 1]);
}

TEST(Axis, Spacing) {
  const auto lin = SweepAxis::linear(SweepVariable::Detuning, -3, 3, 25);
  EXPECT_DOUBLE_EQ(lin.values.front(), -3.0);
  EXPECT_DOUBLE_EQ(lin.values.back(), 3.0);
  EXPECT_NEAR(lin.values[12], 0.0, 1e-15);
  const auto log = SweepAxis::logarithmic(SweepVariable::PumpRatio, 0.01, 100, 5);
  const double expected[] = {0.01, 0.1, 1, 10, 100};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(log.values[i], expected[i], 1e-12 * expected[i]);
  EXPECT_EQ(SweepAxis::linear(SweepVariable::Detuning, 2, 5, 1).values, std::vector<double>{2.0});
  EXPECT_THROW(SweepAxis::logarithmic(SweepVariable::PumpRatio, 0, 1, 3), std::invalid_argument);
  EXPECT_THROW(SweepAxis::linear(SweepVariable::Detuning, 0, 1, 0), std::invalid_argument);
}

TEST(Axis, Names) {
  for (const char* n : {"F/g", "Gamma/g", "Delta", "n_b", "n_f"}) EXPECT_EQ(to_string(parse_sweep_variable(n)), n);
  EXPECT_THROW(parse_sweep_variable("T"), std::invalid_argument);
}

TEST(Axis, ApplyIsRelativeToCoupling) {
  const SystemParams base = params(0, 2, 0, 0);
  EXPECT_DOUBLE_EQ(apply_axis(base, SweepVariable::PumpRatio, 1.5).pump, 3.0);
  EXPECT_DOUBLE_EQ(apply_axis(base, SweepVariable::DissipationRatio, 0.5).dissipation, 1.0);
  EXPECT_DOUBLE_EQ(apply_axis(base, SweepVariable::Detuning, -0.4).detuning, -0.4);
  const auto f = apply_axis(base, SweepVariable::FermionicOccupation, 0.9);
  EXPECT_EQ(f.reservoir.kind, ReservoirKind::Fermionic);
  EXPECT_DOUBLE_EQ(f.reservoir.occupation, 0.9);
  EXPECT_EQ(apply_axis(f, SweepVariable::BosonicOccupation, 2.0).reservoir.kind, ReservoirKind::Bosonic);
}

TEST(Sweep, SinglePointMatchesDirectCall) {
  SweepGrid grid{params(0.5, 1, 1, 1), SweepAxis::linear(SweepVariable::BosonicOccupation, 0.3, 0.3, 1), std::nullopt};
  const SweepTable t = sweep_steady(grid);
  ASSERT_EQ(t.rows(), 1u);
  ASSERT_EQ(t.cols(), 1u);
  const DensityMatrix rho = steady_state(params(0.5, 1, 1, 1, ReservoirKind::Bosonic, 0.3));
  EXPECT_DOUBLE_EQ(t.eb(0, 0), stored_energy(rho, 1.0));
  EXPECT_DOUBLE_EQ(t.ea(0, 0), charger_energy(rho, 1.0));
  EXPECT_EQ(t.analytic[0], 0);
}

TEST(Sweep, AnalyticPathAgreesWithNumeric) {
  SweepGrid grid{params(0, 1, 0, 0), SweepAxis::logarithmic(SweepVariable::PumpRatio, 0.1, 10, 5),
                 SweepAxis::logarithmic(SweepVariable::DissipationRatio, 0.1, 10, 4)};
  const SweepTable t = sweep_steady(grid);
  ASSERT_EQ(t.rows(), 4u);
  ASSERT_EQ(t.cols(), 5u);
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) {
      EXPECT_EQ(t.analytic[r * t.cols() + c], 1);
      const DensityMatrix rho = steady_state(params(0, 1, t.x.values[c], t.y->values[r]));
      EXPECT_NEAR(t.eb(r, c), stored_energy(rho, 1.0), 1e-9);
      EXPECT_NEAR(t.ea(r, c), charger_energy(rho, 1.0), 1e-9);
    }
}

TEST(Sweep, OrderIndependentOfWorkers) {
  SweepGrid grid{params(0, 1, 1, 1), SweepAxis::linear(SweepVariable::Detuning, -3, 3, 7),
                 SweepAxis::linear(SweepVariable::FermionicOccupation, 0, 1, 6)};
  grid.workers = 1;
  const SweepTable serial = sweep_steady(grid);
  grid.workers = 4;
  const SweepTable parallel = sweep_steady(grid);
  EXPECT_EQ(serial.E_B, parallel.E_B);
  EXPECT_EQ(serial.E_A, parallel.E_A);
}

TEST(Sweep, FermionicTransitionAroundHalfFilling) {
  SweepGrid grid{params(0, 1, 1, 1), SweepAxis::linear(SweepVariable::Detuning, 0, 2, 3),
                 SweepAxis{SweepVariable::FermionicOccupation, {0.1, 0.9}}};
  const SweepTable t = sweep_steady(grid);
  EXPECT_GT(t.eb(0, 0), t.eb(0, 1));
  EXPECT_GT(t.eb(0, 1), t.eb(0, 2));
  EXPECT_LT(t.eb(1, 0), t.eb(1, 1));
  EXPECT_LT(t.eb(1, 1), t.eb(1, 2));
}

TEST(Sweep, FailuresAreRecordedAndSweepContinues) {
  // Gamma = F = 0 leaves a degenerate steady manifold.
  SweepGrid grid{params(0, 1, 0, 0), SweepAxis::linear(SweepVariable::DissipationRatio, 0, 1, 3), std::nullopt};
  const SweepTable t = sweep_steady(grid);
  ASSERT_EQ(t.failures.size(), 1u);
  EXPECT_EQ(t.failures[0].col, 0u);
  EXPECT_TRUE(std::isnan(t.eb(0, 0)));
  EXPECT_NEAR(t.eb(0, 1), 0.0, 1e-9);
  EXPECT_NEAR(t.eb(0, 2), 0.0, 1e-9);
}
