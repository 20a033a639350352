#include <gtest/gtest.h>

#include <sstream>

#include "bcsmeta/scenario.hpp"

using namespace bcsmeta;

TEST(Scenario, DefaultMagnetizationRun) {
  ScenarioConfig cfg;
  const ScenarioResult r = run_scenario(cfg);
  ASSERT_EQ(r.trajectory.size(), 1000u);
  EXPECT_EQ(r.relaxation.relaxation, RelaxationClass::Metastable);
  ASSERT_TRUE(r.invariant_exit_time.has_value());
  EXPECT_NEAR(*r.relaxation.exit_time, *r.invariant_exit_time, 1e-12);
  ASSERT_EQ(r.stability.size(), 3u);
  for (const auto& row : r.stability) {
    EXPECT_TRUE(row.report.creation_stable_annihilation_unstable()) << row.label;
  }

  // The extremum of the sampled trajectory lies within one grid step of t*.
  std::size_t best = 0;
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    EXPECT_LT(r.trajectory[i].abs_diff, 1e-10);
    if (r.trajectory[i].closed_form < r.trajectory[best].closed_form) best = i;
  }
  const double t_star = *r.invariant_exit_time;
  const double lo = r.trajectory[best > 0 ? best - 1 : 0].t;
  const double hi = r.trajectory[std::min(best + 1, r.trajectory.size() - 1)].t;
  EXPECT_LE(lo, t_star);
  EXPECT_GE(hi, t_star);
}

TEST(Scenario, TrivialAngleIsConstant) {
  ScenarioConfig cfg;
  cfg.phi = 0.0;
  cfg.t_count = 50;
  const ScenarioResult r = run_scenario(cfg);
  EXPECT_EQ(r.relaxation.relaxation, RelaxationClass::Constant);
  for (const auto& row : r.trajectory) EXPECT_NEAR(row.closed_form, -0.5, 1e-12);
}

TEST(Scenario, QuadratureIsMonotoneAndMatchesOracle) {
  ScenarioConfig cfg;
  cfg.observable = ObservableKind::XQuadrature;
  cfg.t_scale = GridScale::Linear;
  cfg.t_count = 200;
  const ScenarioResult r = run_scenario(cfg);
  EXPECT_EQ(r.relaxation.relaxation, RelaxationClass::Monotone);
  EXPECT_FALSE(r.relaxation.exit_time.has_value());
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    EXPECT_LT(r.trajectory[i].abs_diff, 1e-10);
    if (i > 0) {
      EXPECT_GE(r.trajectory[i].closed_form, r.trajectory[i - 1].closed_form);
    }
  }
}

TEST(Scenario, CustomObservableIsHermitized) {
  ScenarioConfig cfg;
  cfg.observable = ObservableKind::Custom;
  cfg.custom = sigma_plus();
  cfg.t_count = 10;
  const ScenarioResult r = run_scenario(cfg);
  EXPECT_TRUE(r.observable.hermitized);
  EXPECT_LT(distance(r.observable.matrix, (sigma_plus() + sigma_minus()) * 0.5), 1e-15);
  cfg.custom = sigma_z() * 2.0;
  EXPECT_FALSE(run_scenario(cfg).observable.hermitized);
}

TEST(Scenario, ExplicitBetaAndNormalPhase) {
  ScenarioConfig cfg;
  cfg.beta = 1.0;
  cfg.t_count = 10;
  const ScenarioResult r = run_scenario(cfg);
  EXPECT_FALSE(r.params.superconducting());
  EXPECT_EQ(r.relaxation.relaxation, RelaxationClass::Constant);
  EXPECT_FALSE(r.invariant_exit_time.has_value());
  EXPECT_TRUE(r.stability.empty());
  EXPECT_TRUE(report_json(r)["invariant_exit_time"].is_null());
}

TEST(Scenario, Validation) {
  ScenarioConfig cfg;
  cfg.t_count = 1;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.epsilon = -0.1;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.beta_ratio.reset();
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.t_min = 1.0;
  cfg.t_max = 0.5;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.epsilon = 0.6;
  EXPECT_THROW(resolve_params(cfg), DomainError);
  cfg.beta = 3.0;
  EXPECT_NO_THROW(resolve_params(cfg));
  EXPECT_THROW(time_grid(0.0, 1.0, 10, GridScale::Log), DomainError);
}

TEST(Serialization, JsonRoundTripIsExact) {
  ScenarioConfig cfg;
  cfg.t_count = 20;
  const ScenarioResult r = run_scenario(cfg);
  const json report = report_json(r);
  const json parsed = json::parse(report.dump());
  EXPECT_EQ(parsed["c"].get<double>(), r.constants.c);
  EXPECT_EQ(parsed["exit_time"].get<double>(), *r.relaxation.exit_time);
  EXPECT_EQ(parsed["gap"]["lambda"].get<double>(), r.params.lambda());
  EXPECT_EQ(parsed["classification"], "metastable");
  EXPECT_TRUE(parsed["stability"]["exit"]["creation_stable_annihilation_unstable"].get<bool>());
  const json traj = json::parse(trajectory_json(r.trajectory).dump());
  ASSERT_EQ(traj.size(), r.trajectory.size());
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    EXPECT_EQ(traj[i]["t"].get<double>(), r.trajectory[i].t);
    EXPECT_EQ(traj[i]["oracle"].get<double>(), r.trajectory[i].oracle);
  }
}

TEST(Serialization, CsvTrajectoryRoundTrip) {
  ScenarioConfig cfg;
  cfg.t_count = 5;
  const ScenarioResult r = run_scenario(cfg);
  std::ostringstream os;
  write_trajectory_csv(os, r.trajectory);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kTrajectoryHeader);
  for (const auto& row : r.trajectory) {
    ASSERT_TRUE(std::getline(is, line));
    std::istringstream cells(line);
    std::string t;
    std::string cf;
    std::getline(cells, t, ',');
    std::getline(cells, cf, ',');
    EXPECT_EQ(std::stod(t), row.t);
    EXPECT_EQ(std::stod(cf), row.closed_form);
  }
}

TEST(Sweep, AmplitudeGrowsAwayFromCriticality) {
  SweepGrid grid;
  grid.epsilons = {0.25};
  grid.beta_ratios = {1.01, 1.1, 1.5, 2.0, 5.0};
  grid.phis = {std::numbers::pi / 4};
  const SweepResult s = run_sweep(grid);
  ASSERT_EQ(s.rows.size(), 5u);
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    EXPECT_EQ(s.rows[i].relaxation, RelaxationClass::Metastable);
    EXPECT_EQ(s.rows[i].families_satisfied, 3);
    EXPECT_EQ(s.rows[i].families_violated, 1);
    if (i > 0) {
      EXPECT_GT(s.rows[i].amplitude, s.rows[i - 1].amplitude);
      EXPECT_LT(*s.rows[i].invariant_exit_time, *s.rows[i - 1].invariant_exit_time);
    }
  }
}

TEST(Sweep, NormalRowsAndDeterminism) {
  SweepGrid grid;
  grid.epsilons = {0.25, 0.25, 0.6};
  grid.beta_ratios = {0.5, 2.0};
  grid.phis = {0.0, 1.0};
  grid.threads = 1;
  const SweepResult serial = run_sweep(grid);
  grid.threads = 4;
  const SweepResult parallel = run_sweep(grid);
  ASSERT_EQ(serial.rows.size(), 12u);
  EXPECT_EQ(to_json(serial).dump(), to_json(parallel).dump());
  // Duplicate grid points give identical rows.
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(to_json(serial.rows[i]).dump(), to_json(serial.rows[i + 4]).dump());
  }
  for (std::size_t i = 8; i < 12; ++i) {
    const SweepRow& row = serial.rows[i];
    EXPECT_FALSE(row.gap.superconducting);
    EXPECT_FALSE(row.beta.has_value());
    EXPECT_FALSE(row.relaxation.has_value());
    EXPECT_FALSE(row.note.empty());
  }
  EXPECT_EQ(serial.rows[0].note, "normal phase");
  EXPECT_EQ(serial.rows[0].relaxation, RelaxationClass::Constant);
  std::ostringstream os;
  write_sweep_csv(os, serial);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "epsilon,beta_ratio,beta,phi,lambda,k,superconducting,residual,classification,"
            "exit_time,invariant_exit_time,amplitude,families_satisfied,families_violated,note");
}

TEST(Sweep, ExplicitBetas) {
  SweepGrid grid;
  grid.epsilons = {0.6};
  grid.betas = {10.0};
  grid.phis = {1.0};
  const SweepResult s = run_sweep(grid);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].relaxation, RelaxationClass::Constant);
  EXPECT_EQ(s.rows[0].gap.lambda, 0.0);
}
