#pragma once

// Monotone / metastable classification of relaxing expectation values and
// their exit times.

#include <cmath>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "bcsmeta/dynamics.hpp"
#include "bcsmeta/normal_modes.hpp"
#include "bcsmeta/time_grid.hpp"

namespace bcsmeta {

enum class RelaxationClass { Monotone, Metastable, Constant };

inline std::string_view to_string(RelaxationClass c) {
  switch (c) {
    case RelaxationClass::Monotone: return "monotone";
    case RelaxationClass::Metastable: return "metastable";
    case RelaxationClass::Constant: return "constant";
  }
  return "unknown";
}

inline constexpr double kAmplitudeTol = 1e-13;

/// f(t) = mean + off e^{-tc} + diag e^{-td} has a stationary point at t > 0
/// iff -diag/off > c/d. Equality puts the extremum at t = 0 (Monotone).
/// off = 0 leaves a single exponential, which is monotone.
inline RelaxationClass classify_amplitudes(double off, double diag, double c, double d) {
  const bool off_zero = std::abs(off) < kAmplitudeTol;
  const bool diag_zero = std::abs(diag) < kAmplitudeTol;
  if (off_zero && diag_zero) return RelaxationClass::Constant;
  if (off_zero) return RelaxationClass::Monotone;
  return -diag / off <= c / d ? RelaxationClass::Monotone : RelaxationClass::Metastable;
}

/// t* = (log(d/c) + log|diag/off|) / (d - c); meaningful only for metastable amplitudes.
inline double exit_time_from_amplitudes(double off, double diag, double c, double d) {
  return (std::log(d / c) + std::log(std::abs(diag / off))) / (d - c);
}

struct RelaxationReport {
  RelaxationClass relaxation = RelaxationClass::Constant;
  std::optional<double> exit_time;
  double amplitude_offdiag = 0.0;  // omega_{-phi}(a^+ + a^-)
  double amplitude_diag = 0.0;     // omega_{-phi}(a^0)
  double c = 0.0;
  double d = 0.0;
  std::vector<std::pair<double, double>> trajectory;  // (t, omega_t(X))
};

inline constexpr int kReportSamples = 1000;

/// Default sampling grid: 1000 log-spaced points on [1e-4/c, 20/c].
inline std::vector<double> default_report_grid(double c) {
  return time_grid(1e-4 / c, 20.0 / c, kReportSamples, GridScale::Log);
}

namespace detail {
inline ExpectationTrajectory hermitian_trajectory(const ModelParams& p, const Matrix2& x) {
  const HermitianMatrix2 certified(x);  // throws for non-Hermitian X
  return make_trajectory(p, certified.matrix());
}
}  // namespace detail

inline RelaxationReport classify_relaxation(const ModelParams& p, const Matrix2& x) {
  const ExpectationTrajectory traj = detail::hermitian_trajectory(p, x);
  RelaxationReport r;
  r.amplitude_offdiag = traj.off.real();
  r.amplitude_diag = traj.diag.real();
  r.c = traj.c;
  r.d = traj.d;
  r.relaxation = classify_amplitudes(r.amplitude_offdiag, r.amplitude_diag, r.c, r.d);
  if (r.relaxation == RelaxationClass::Metastable) {
    r.exit_time = exit_time_from_amplitudes(r.amplitude_offdiag, r.amplitude_diag, r.c, r.d);
  }
  for (double t : default_report_grid(r.c)) r.trajectory.emplace_back(t, traj.value(t).real());
  return r;
}

/// Exit time of a metastably relaxing Hermitian observable. Throws NoExitTime otherwise.
inline double exit_time(const ModelParams& p, const Matrix2& x) {
  const ExpectationTrajectory traj = detail::hermitian_trajectory(p, x);
  const double off = traj.off.real();
  const double diag = traj.diag.real();
  const RelaxationClass cls = classify_amplitudes(off, diag, traj.c, traj.d);
  if (cls != RelaxationClass::Metastable) {
    throw NoExitTime(std::string("observable relaxes ") + std::string(to_string(cls)) +
                     "; no exit time");
  }
  return exit_time_from_amplitudes(off, diag, traj.c, traj.d);
}

/// Common exit time (log d - log c)/(d - c) of all gauge-invariant observables.
inline double invariant_exit_time(const ModelParams& p) {
  if (!p.superconducting()) {
    throw NoMetastability("normal phase: trajectories are constant, no exit time");
  }
  const RelaxationConstants rc = relaxation_constants(p);
  return (std::log(rc.d) - std::log(rc.c)) / (rc.d - rc.c);
}

enum class Quadrature { X, Y, Z };

/// sigma^+ e^{-i phi} + sigma^- e^{i phi}, i sigma^+ e^{-i phi} - i sigma^- e^{i phi}, sigma^z.
inline Matrix2 quadrature_observable(const ModelParams& p, Quadrature which) {
  const cplx u = std::polar(1.0, -p.phi);
  switch (which) {
    case Quadrature::X: return sigma_plus() * u + sigma_minus() * std::conj(u);
    case Quadrature::Y: return sigma_plus() * (kI * u) - sigma_minus() * (kI * std::conj(u));
    case Quadrature::Z: return sigma_z();
  }
  return {};
}

/// Closed-form trajectories of the three quadratures.
inline double reference_trajectory(const ModelParams& p, Quadrature which, double t) {
  detail::require_time(t);
  const RelaxationConstants rc = relaxation_constants(p);
  const double lam = p.lambda();
  const double eps = p.epsilon;
  const double k2 = p.k() * p.k();
  const double s = std::sin(p.phi);
  const double e_c = std::exp(-t * rc.c);
  const double e_d = std::exp(-t * rc.d);
  switch (which) {
    case Quadrature::X:
      return 2.0 * lam * (1.0 - 2.0 * s * s * (lam * lam * e_d + eps * eps * e_c) / k2);
    case Quadrature::Y: return 2.0 * lam * std::sin(2.0 * p.phi) * e_c;
    case Quadrature::Z: return -2.0 * eps - 4.0 * s * s * (eps * lam * lam / k2) * (e_c - e_d);
  }
  return 0.0;
}

}  // namespace bcsmeta
