#pragma once

// Energy-entropy balance (EEB) inequalities
//   beta rho(X^dag [h, X]) >= rho(X^dag X) log(rho(X^dag X) / rho(X X^dag))
// and the stability audit of the intermediate states omega_t.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bcsmeta/dynamics.hpp"
#include "bcsmeta/equilibrium.hpp"
#include "bcsmeta/metastability.hpp"
#include "bcsmeta/normal_modes.hpp"
#include "bcsmeta/random.hpp"

namespace bcsmeta {

inline constexpr double kEEBTol = 1e-10;
inline constexpr double kNullExpectation = 1e-300;

struct EEBResult {
  double lhs = 0.0;       // beta Re rho(X^dag [h, X])
  double lhs_imag = 0.0;  // beta Im rho(X^dag [h, X]); zero when [rho, h] = 0
  double rhs = 0.0;
  bool satisfied = false;
  double margin = 0.0;  // lhs - rhs
};

inline EEBResult eeb_check(const DensityMatrix2& rho, const HermitianMatrix2& h, double beta,
                           const Matrix2& x) {
  const Matrix2 x_dag = adjoint(x);
  const cplx energy = rho.expect(x_dag * commutator(h, x)) * beta;
  const double forward = rho.expect(x_dag * x).real();
  const double backward = rho.expect(x * x_dag).real();

  EEBResult r;
  r.lhs = energy.real();
  r.lhs_imag = energy.imag();
  if (forward < kNullExpectation) {
    r.rhs = 0.0;  // 0 log 0 = 0
  } else if (backward < kNullExpectation) {
    r.rhs = std::numeric_limits<double>::infinity();
  } else {
    r.rhs = forward * std::log(forward / backward);
  }
  r.margin = r.lhs - r.rhs;
  r.satisfied = std::isfinite(r.rhs) && r.margin >= -kEEBTol;
  return r;
}

/// Effective Hamiltonian, its frame, and the derived scalars of omega_t.
struct IntermediateFrame {
  double t = 0.0;
  DensityMatrix2 rho;
  HermitianMatrix2 h;
  cplx order;             // omega_t(sigma^+)
  double lambda_t = 0.0;  // |omega_t(sigma^+)|
  double k_t = 0.0;       // sqrt(eps^2 + lambda_t^2)
  double f_t = 0.0;       // -2 eps - omega_t(sigma^z)
  double epsilon = 0.0;
  SpectralFrame frame;

  /// omega_t(E(t)_--) = 1/2 + k_t + eps f_t / (2 k_t)
  double closed_form_lower_population() const {
    return 0.5 + k_t + epsilon * f_t / (2.0 * k_t);
  }
  /// omega_t(E(t)_-+) = -lambda_t f_t / (2 k_t)
  double closed_form_coherence() const { return -lambda_t * f_t / (2.0 * k_t); }

  double lower_population() const { return rho.expect(frame.E_mm).real(); }
  double upper_population() const { return rho.expect(frame.E_pp).real(); }
};

/// f_t = 4 sin^2(phi) eps lambda^2 (e^{-tc} - e^{-td}) / k^2
inline double condensate_shift(const ModelParams& p, double t) {
  const RelaxationConstants rc = relaxation_constants(p);
  const double s = std::sin(p.phi);
  return 4.0 * s * s * p.epsilon * p.lambda() * p.lambda() *
         (std::exp(-t * rc.c) - std::exp(-t * rc.d)) / (p.k() * p.k());
}

inline IntermediateFrame intermediate_frame(const ModelParams& p, double t) {
  detail::require_time(t);
  const DensityMatrix2 rho = intermediate_state(p, t);
  const cplx order = rho.expect(sigma_plus());
  const HermitianMatrix2 h(sigma_z() * p.epsilon - sigma_minus() * order -
                           sigma_plus() * std::conj(order));
  const double lambda_t = std::abs(order);
  return {t,
          rho,
          h,
          order,
          lambda_t,
          std::hypot(p.epsilon, lambda_t),
          p.lambda() > 0.0 ? condensate_shift(p, t) : 0.0,
          p.epsilon,
          make_frame(h)};
}

struct TimeNormalModes {
  Matrix2 a_plus;   // E(t)_++ X E(t)_--
  Matrix2 a_minus;  // E(t)_-- X E(t)_++
  Matrix2 a_zero;   // E(t)_++ X E(t)_++ + E(t)_-- X E(t)_-- - omega_t(X) 1
  Matrix2 Q;        // (a^+ + a^-)/sqrt 2
  Matrix2 P;        // i(a^+ - a^-)/sqrt 2
};

inline TimeNormalModes normal_modes_at_t(const IntermediateFrame& f, const Matrix2& x) {
  const NormalModeDecomposition m = decompose(f.frame, f.rho, x);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return {m.a_plus, m.a_minus, m.a_zero, (m.a_plus + m.a_minus) * inv_sqrt2,
          (m.a_plus - m.a_minus) * (kI * inv_sqrt2)};
}

struct FamilyVerdict {
  std::string name;
  int members = 0;
  int satisfied = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_margin = -std::numeric_limits<double>::infinity();

  bool all_satisfied() const { return satisfied == members; }
  bool all_violated() const { return satisfied == 0; }

  void add(const EEBResult& r) {
    ++members;
    if (r.satisfied) ++satisfied;
    min_margin = std::min(min_margin, r.margin);
    max_margin = std::max(max_margin, r.margin);
  }
};

struct StabilityReport {
  double t = 0.0;
  std::uint64_t seed = 0;
  bool is_equilibrium = false;
  FamilyVerdict quadratures{"qp_combinations"};
  FamilyVerdict constants{"constants_of_motion"};
  FamilyVerdict creation{"creation"};
  FamilyVerdict annihilation{"annihilation"};
  double population_ratio = 0.0;  // omega_t(E(t)_--) / omega_t(E(t)_++)
  double boltzmann_ratio = 0.0;   // e^{2 beta k_t}

  /// Stable under Q/P combinations, constants of motion and creation
  /// operators, unstable under annihilation operators.
  bool creation_stable_annihilation_unstable() const {
    return quadratures.all_satisfied() && constants.all_satisfied() && creation.all_satisfied() &&
           annihilation.all_violated();
  }
};

inline constexpr int kFamilySamples = 20;

/// Runs eeb_check(rho_t, h_t, beta, .) over the four operator families.
/// Q/P combinations use real (a, b) = (cos, sin) of 20 equally spaced angles.
inline StabilityReport stability_report(const ModelParams& p, double t,
                                        std::uint64_t seed = kDefaultSeed) {
  detail::require_time(t);
  const IntermediateFrame f = intermediate_frame(p, t);
  std::mt19937_64 rng(seed);

  StabilityReport r;
  r.t = t;
  r.seed = seed;
  const double s = std::sin(p.phi);
  r.is_equilibrium = t == 0.0 || !p.superconducting() || std::abs(s) < 1e-15;
  r.population_ratio = f.lower_population() / f.upper_population();
  r.boltzmann_ratio = std::exp(2.0 * p.beta * f.k_t);

  auto check = [&](const Matrix2& x) { return eeb_check(f.rho, f.h, p.beta, x); };

  for (int i = 0; i < kFamilySamples; ++i) {
    const TimeNormalModes m = normal_modes_at_t(f, random_matrix(rng));
    for (int j = 0; j < kFamilySamples; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / kFamilySamples;
      r.quadratures.add(check(m.Q * std::cos(theta) + m.P * std::sin(theta)));
    }
  }
  for (int i = 0; i < kFamilySamples; ++i) {
    const cplx a = random_disc_point(rng);
    const cplx b = random_disc_point(rng);
    r.constants.add(check(f.frame.E_pp * a + f.frame.E_mm * b));
  }
  for (int i = 0; i < kFamilySamples; ++i) {
    r.creation.add(check(normal_modes_at_t(f, random_matrix(rng)).a_plus));
  }
  for (int i = 0; i < kFamilySamples; ++i) {
    r.annihilation.add(check(normal_modes_at_t(f, random_matrix(rng)).a_minus));
  }
  return r;
}

struct NoninvarianceWitness {
  cplx value;     // omega_t([h_t, E(t)_+-])
  cplx expected;  // 2 k_t omega_t(E(t)_+-)
  double identity_residual = 0.0;
};

inline NoninvarianceWitness noninvariance_witness(const ModelParams& p, double t) {
  const IntermediateFrame f = intermediate_frame(p, t);
  const cplx value = f.rho.expect(commutator(f.h, f.frame.E_pm));
  const cplx expected = 2.0 * f.k_t * f.rho.expect(f.frame.E_pm);
  return {value, expected, std::abs(value - expected)};
}

}  // namespace bcsmeta
