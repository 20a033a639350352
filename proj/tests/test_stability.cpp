#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bcsmeta/metastability.hpp"
#include "bcsmeta/random.hpp"
#include "bcsmeta/stability.hpp"
#include "oracles.hpp"

using namespace bcsmeta;
using std::numbers::pi;

namespace {

ModelParams reference_params(double phi = pi / 4) {
  return make_params(0.25, 2.0 * critical_beta(0.25), phi);
}

// 2 beta k_t - log(omega_t(E_--)/omega_t(E_++)); creation operators pass iff >= 0.
double creation_slack(const ModelParams& p, double t) {
  const IntermediateFrame f = intermediate_frame(p, t);
  return 2.0 * p.beta * f.k_t - std::log(f.lower_population() / f.upper_population());
}

Matrix2 random_unitary(std::mt19937_64& rng) {
  return oracle::expm2(random_hermitian(rng) * kI * 3.0);
}

}  // namespace

TEST(EEB, MatrixUnitsSaturateAtEquilibrium) {
  for (double phi : {0.0, pi / 4, 2.0}) {
    const ModelParams p = reference_params(phi);
    const DensityMatrix2 rho = equilibrium_state(p, phi);
    const HermitianMatrix2 h = effective_hamiltonian(p, phi);
    const SpectralFrame f = make_frame(h);
    const double bk = p.beta * p.k();
    const EEBResult up = eeb_check(rho, h, p.beta, f.E_pm);
    EXPECT_LT(std::abs(up.margin), 1e-12);
    EXPECT_NEAR(up.lhs, 2.0 * bk * std::exp(bk) / (2.0 * std::cosh(bk)), 1e-12);
    EXPECT_NEAR(up.rhs, up.lhs, 1e-12);
    EXPECT_TRUE(up.satisfied);
    const EEBResult down = eeb_check(rho, h, p.beta, f.E_mp);
    EXPECT_LT(std::abs(down.margin), 1e-12);
    EXPECT_NEAR(down.lhs, -2.0 * bk * std::exp(-bk) / (2.0 * std::cosh(bk)), 1e-12);
  }
}

TEST(EEB, UnitariesHaveZeroEntropyTerm) {
  const ModelParams p = reference_params();
  const DensityMatrix2 rho = equilibrium_state(p, p.phi);
  const HermitianMatrix2 h = effective_hamiltonian(p, p.phi);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const Matrix2 u = random_unitary(rng);
    ASSERT_LT(distance(adjoint(u) * u, Matrix2::identity()), 1e-12);
    const EEBResult r = eeb_check(rho, h, p.beta, u);
    EXPECT_LT(std::abs(r.rhs), 1e-12);
    EXPECT_GE(r.lhs, -1e-12);
    EXPECT_TRUE(r.satisfied);
  }
}

TEST(EEB, EquilibriumStatesPassUniversally) {
  std::mt19937_64 rng(32);
  for (double phi : {pi / 4, 1.3}) {
    const ModelParams p = reference_params(phi);
    for (double phase : {phi, -phi}) {
      const DensityMatrix2 rho = equilibrium_state(p, phase);
      const HermitianMatrix2 h = effective_hamiltonian(p, phase);
      for (int i = 0; i < 500; ++i) {
        const EEBResult r = eeb_check(rho, h, p.beta, random_matrix(rng));
        EXPECT_GE(r.margin, -1e-12);
        EXPECT_LT(std::abs(r.lhs_imag), 1e-12);
      }
    }
  }
}

TEST(EEB, NullDirectionsAndZeroLogZero) {
  const DensityMatrix2 pure(Matrix2::diagonal(1.0, 0.0));
  const HermitianMatrix2 h(sigma_z() * 0.25);
  // sigma^+ annihilates the occupied level: rho(X^dag X) = 0.
  const EEBResult zero = eeb_check(pure, h, 2.0, sigma_plus());
  EXPECT_EQ(zero.rhs, 0.0);
  EXPECT_TRUE(zero.satisfied);
  // sigma^- pushes into the empty level: rho(X X^dag) = 0.
  const EEBResult null = eeb_check(pure, h, 2.0, sigma_minus());
  EXPECT_TRUE(std::isinf(null.rhs));
  EXPECT_FALSE(null.satisfied);
  EXPECT_TRUE(eeb_check(pure, h, 2.0, Matrix2::zero()).satisfied);
}

TEST(IntermediateFrame, Limits) {
  const ModelParams p = reference_params();
  const IntermediateFrame start = intermediate_frame(p, 0.0);
  EXPECT_LT(distance(start.h, effective_hamiltonian(p, -p.phi)), 1e-12);
  EXPECT_NEAR(start.f_t, 0.0, 1e-15);
  const IntermediateFrame late = intermediate_frame(p, 60.0 / relaxation_constants(p).c);
  EXPECT_LT(distance(late.h, effective_hamiltonian(p, p.phi)), 1e-10);
  EXPECT_THROW(intermediate_frame(p, -0.1), DomainError);
}

TEST(IntermediateFrame, ScalarsAndClosedForms) {
  const ModelParams p = reference_params();
  const RelaxationConstants rc = relaxation_constants(p);
  for (double t : time_grid(1e-4 / rc.c, 20.0 / rc.c, 1000, GridScale::Log)) {
    const IntermediateFrame f = intermediate_frame(p, t);
    EXPECT_LE(f.lambda_t, p.lambda() + 1e-15);
    EXPECT_NEAR(f.k_t * f.k_t, p.epsilon * p.epsilon + f.lambda_t * f.lambda_t, 1e-15);
    EXPECT_NEAR(f.rho.expect(sigma_z()).real(), -2.0 * p.epsilon - f.f_t, 1e-12);
    EXPECT_NEAR(f.lower_population(), f.closed_form_lower_population(), 1e-10);
    EXPECT_LT(std::abs(f.rho.expect(f.frame.E_mp) - f.closed_form_coherence()), 1e-10);
  }
}

TEST(IntermediateFrame, PrintedCoherenceIsTwiceTheDirectValue) {
  // The uncorrected form -lambda_t f_t / k_t overshoots Tr(rho_t E(t)_-+) by 2.
  const ModelParams p = reference_params();
  for (double t : {0.01, 0.05, 0.0734, 0.2, 0.5}) {
    const IntermediateFrame f = intermediate_frame(p, t);
    const cplx direct = f.rho.expect(f.frame.E_mp);
    const double printed = -f.lambda_t * f.f_t / f.k_t;
    ASSERT_GT(std::abs(direct), 1e-6);
    EXPECT_NEAR(printed / direct.real(), 2.0, 1e-9);
    EXPECT_LT(std::abs(direct.imag()), 1e-12);
  }
}

TEST(NormalModesAtT, ExamplesAndCanonicalEquations) {
  const ModelParams p = reference_params();
  const IntermediateFrame f = intermediate_frame(p, 0.07);
  const TimeNormalModes mh = normal_modes_at_t(f, f.h);
  EXPECT_LT(max_norm(mh.a_plus), 1e-12);
  EXPECT_LT(max_norm(mh.a_minus), 1e-12);
  EXPECT_LT(max_norm(mh.Q), 1e-12);
  EXPECT_LT(max_norm(mh.P), 1e-12);
  const TimeNormalModes mu = normal_modes_at_t(f, f.frame.E_pm);
  EXPECT_LT(distance(mu.a_plus, f.frame.E_pm), 1e-12);
  EXPECT_LT(max_norm(mu.a_minus), 1e-12);
  EXPECT_LT(distance(mu.Q, f.frame.E_pm / std::numbers::sqrt2), 1e-12);

  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const TimeNormalModes m = normal_modes_at_t(f, random_matrix(rng));
    EXPECT_LT(distance(commutator(f.h, m.Q) * kI, m.P * (2.0 * f.k_t)), 1e-12);
    EXPECT_LT(distance(commutator(f.h, m.P) * kI, m.Q * (-2.0 * f.k_t)), 1e-12);
  }
}

TEST(StabilityReport, AuditAtExitTimeMultiples) {
  const ModelParams p = reference_params();
  const double t_star = invariant_exit_time(p);
  for (double t : {0.5 * t_star, t_star, 2.0 * t_star}) {
    const StabilityReport r = stability_report(p, t);
    EXPECT_FALSE(r.is_equilibrium);
    EXPECT_TRUE(r.quadratures.all_satisfied()) << t;
    EXPECT_TRUE(r.constants.all_satisfied()) << t;
    EXPECT_TRUE(r.creation.all_satisfied()) << t;
    EXPECT_TRUE(r.annihilation.all_violated()) << t;
    EXPECT_LT(r.annihilation.max_margin, -1e-6);
    EXPECT_TRUE(r.creation_stable_annihilation_unstable());
    EXPECT_EQ(r.quadratures.members, kFamilySamples * kFamilySamples);
    EXPECT_LT(r.population_ratio, r.boltzmann_ratio);
  }
}

TEST(StabilityReport, EquilibriumStartPassesEverything) {
  const ModelParams p = reference_params();
  const StabilityReport r = stability_report(p, 0.0);
  EXPECT_TRUE(r.is_equilibrium);
  for (const FamilyVerdict* fam : {&r.quadratures, &r.constants, &r.creation, &r.annihilation}) {
    EXPECT_TRUE(fam->all_satisfied()) << fam->name;
    EXPECT_GE(fam->min_margin, -1e-12) << fam->name;
  }
  EXPECT_TRUE(stability_report(reference_params(0.0), 0.2).is_equilibrium);
}

TEST(StabilityReport, ReproducibleForFixedSeed) {
  const ModelParams p = reference_params();
  const StabilityReport a = stability_report(p, 0.05, 7);
  const StabilityReport b = stability_report(p, 0.05, 7);
  EXPECT_EQ(a.annihilation.max_margin, b.annihilation.max_margin);
  EXPECT_EQ(a.quadratures.min_margin, b.quadratures.min_margin);
  EXPECT_EQ(a.seed, 7u);
}

TEST(StabilityReport, ComplexQuadratureWeightsCanFail) {
  // b = i a turns a Q_X + b P_X into sqrt(2) a a^-_t, an annihilation operator.
  const ModelParams p = reference_params();
  const IntermediateFrame f = intermediate_frame(p, invariant_exit_time(p));
  const TimeNormalModes m = normal_modes_at_t(f, f.frame.E_mp);
  const Matrix2 x = m.Q + m.P * kI;
  EXPECT_LT(distance(x, m.a_minus * std::numbers::sqrt2), 1e-12);
  EXPECT_FALSE(eeb_check(f.rho, f.h, p.beta, x).satisfied);
}

TEST(StabilityReport, OneSidednessWithSingleCrossing) {
  // The population ratio meets the Boltzmann factor once, late in the relaxation.
  // There the state is still not invariant under h_t, so it is not equilibrium.
  const ModelParams p = reference_params();
  const RelaxationConstants rc = relaxation_constants(p);
  const auto grid = time_grid(1e-3 / rc.c, 10.0 / rc.c, 2000, GridScale::Log);
  int crossings = 0;
  double lo = 0.0;
  double hi = 0.0;
  double prev = creation_slack(p, grid.front());
  EXPECT_GT(prev, 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double s = creation_slack(p, grid[i]);
    EXPECT_NE(s, 0.0);
    if ((s > 0.0) != (prev > 0.0)) {
      ++crossings;
      lo = grid[i - 1];
      hi = grid[i];
    }
    prev = s;
  }
  ASSERT_EQ(crossings, 1);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (creation_slack(p, mid) > 0.0 ? lo : hi) = mid;
  }
  EXPECT_GT(lo, 0.4);
  EXPECT_LT(lo, 0.6);
  EXPECT_GT(std::abs(noninvariance_witness(p, lo).value), 1e-6);

  // Past the crossing the roles swap: creation fails, annihilation passes.
  const StabilityReport late = stability_report(p, 0.7);
  EXPECT_TRUE(late.creation.all_violated());
  EXPECT_TRUE(late.annihilation.all_satisfied());
}

TEST(NoninvarianceWitness, Examples) {
  const ModelParams p = reference_params();
  EXPECT_LT(std::abs(noninvariance_witness(p, 0.0).value), 1e-12);
  for (double t : {0.1, 0.5, 1.0}) {
    EXPECT_LT(std::abs(noninvariance_witness(reference_params(0.0), t).value), 1e-12);
  }
  const double t_star = invariant_exit_time(p);
  const NoninvarianceWitness w = noninvariance_witness(p, t_star);
  EXPECT_LT(w.identity_residual, 1e-12);
  EXPECT_GT(std::abs(w.value), 1e-6);
  const RelaxationConstants rc = relaxation_constants(p);
  for (double t : time_grid(1e-3 / rc.c, 10.0 / rc.c, 100, GridScale::Log)) {
    EXPECT_LT(noninvariance_witness(p, t).identity_residual, 1e-12);
  }
}
