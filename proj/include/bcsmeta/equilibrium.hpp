#pragma once

// Gap equation, phase diagram, effective Hamiltonians and the pure phase
// equilibrium states of the strong-coupling mean-field BCS model.

#include <cmath>
#include <numbers>
#include <string>

#include "bcsmeta/errors.hpp"
#include "bcsmeta/matrix2.hpp"
#include "bcsmeta/spectral_frame.hpp"

namespace bcsmeta {

struct GapSolution {
  double lambda = 0.0;  // order-parameter norm
  double k = 0.0;       // sqrt(eps^2 + lambda^2)
  bool superconducting = false;
  double residual = 0.0;  // |1 - tanh(beta k) / (2k)|, 0 in the normal phase
};

/// Inverse critical temperature beta_c = log((1+2eps)/(1-2eps)) / (2eps),
/// defined for 0 < eps < 1/2.
inline double critical_beta(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 0.5)) {
    throw DomainError("critical_beta: no superconducting phase for epsilon = " +
                      std::to_string(epsilon) + " (need 0 < epsilon < 1/2)");
  }
  return std::log1p(2.0 * epsilon) / (2.0 * epsilon) - std::log1p(-2.0 * epsilon) / (2.0 * epsilon);
}

inline constexpr int kGapBisectionSteps = 200;
inline constexpr double kGapResidualTol = 1e-12;

/// Solves lambda (1 - tanh(beta k) / (2k)) = 0.
///
/// Returns the normal root lambda = 0 (k = eps) unless eps < 1/2 and
/// beta > beta_c strictly; otherwise finds the unique k in (eps, 1/2) with
/// tanh(beta k) = 2k by bisection.
inline GapSolution solve_gap(double epsilon, double beta) {
  if (!(epsilon > 0.0)) throw DomainError("solve_gap: epsilon must be positive");
  if (!(beta > 0.0)) throw DomainError("solve_gap: beta must be positive");

  const GapSolution normal{0.0, epsilon, false, 0.0};
  if (epsilon >= 0.5 || beta <= critical_beta(epsilon)) return normal;

  auto g = [beta](double k) { return std::tanh(beta * k) - 2.0 * k; };
  double lo = epsilon;
  double hi = 0.5;
  // g(eps) > 0 is equivalent to beta > beta_c; it can round to <= 0 only when
  // beta is within an ulp of beta_c, where lambda is 0 to double precision.
  if (!(g(lo) > 0.0)) return normal;
  if (!(g(hi) <= 0.0)) throw ConvergenceError("solve_gap: invalid bracket at k = 1/2");

  for (int i = 0; i < kGapBisectionSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  const double residual = std::abs(1.0 - std::tanh(beta * k) / (2.0 * k));
  if (residual >= kGapResidualTol) {
    throw ConvergenceError("solve_gap: residual " + std::to_string(residual) +
                           " after bisection (epsilon = " + std::to_string(epsilon) +
                           ", beta = " + std::to_string(beta) + ")");
  }
  const double lambda = std::sqrt((k - epsilon) * (k + epsilon));
  if (!(lambda > 0.0)) return normal;
  return {lambda, k, true, residual};
}

/// Solved model parameters; fixes both endpoint states omega_{-phi} and omega_phi.
struct ModelParams {
  double epsilon = 0.0;
  double beta = 0.0;
  double phi = 0.0;  // in [0, 2pi]
  GapSolution gap;

  double lambda() const { return gap.lambda; }
  double k() const { return gap.k; }
  bool superconducting() const { return gap.superconducting; }
};

inline ModelParams make_params(double epsilon, double beta, double phi) {
  if (!(phi >= 0.0) || !(phi <= 2.0 * std::numbers::pi)) {
    throw DomainError("phase phi = " + std::to_string(phi) + " outside [0, 2pi]");
  }
  return {epsilon, beta, phi, solve_gap(epsilon, beta)};
}

/// beta given as a multiple of beta_c(eps).
inline ModelParams make_params_relative(double epsilon, double beta_ratio, double phi) {
  if (!(beta_ratio > 0.0)) throw DomainError("beta ratio must be positive");
  return make_params(epsilon, beta_ratio * critical_beta(epsilon), phi);
}

/// h = eps sigma^z - lambda e^{i phase} sigma^- - lambda e^{-i phase} sigma^+
inline HermitianMatrix2 effective_hamiltonian(const ModelParams& p, double phase) {
  const cplx order = std::polar(p.lambda(), phase);
  return HermitianMatrix2(sigma_z() * p.epsilon - sigma_minus() * order -
                          sigma_plus() * std::conj(order));
}

/// Gibbs weights (upper, lower) = (e^{-beta k}, e^{beta k}) / (2 cosh beta k),
/// evaluated without overflow.
inline std::array<double, 2> gibbs_weights(double beta, double k) {
  const double damp = std::exp(-2.0 * beta * k);
  return {damp / (1.0 + damp), 1.0 / (1.0 + damp)};
}

/// rho = exp(-beta h_phase) / Tr exp(-beta h_phase), built on the spectral frame.
inline DensityMatrix2 equilibrium_state(const ModelParams& p, double phase) {
  const SpectralFrame f = make_frame(effective_hamiltonian(p, phase));
  const auto [w_plus, w_minus] = gibbs_weights(p.beta, f.k);
  return DensityMatrix2(f.E_pp * w_plus + f.E_mm * w_minus);
}

}  // namespace bcsmeta
