#pragma once

// Detailed-balance Lindblad generator L_phi and the closed-form evolution of
// the intermediate states omega_t(.) = omega_{-phi}(e^{tL_phi} .).

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "bcsmeta/equilibrium.hpp"
#include "bcsmeta/normal_modes.hpp"
#include "bcsmeta/spectral_frame.hpp"

namespace bcsmeta {

inline SpectralFrame spectral_frame(const ModelParams& p, double phase) {
  return make_frame(effective_hamiltonian(p, phase));
}

struct RelaxationConstants {
  double c = 0.0;  // decay rate of E_pm, E_mp
  double d = 0.0;  // decay rate of D
  Matrix2 D;       // e^{beta k} E_pp - e^{-beta k} E_mm
};

inline RelaxationConstants relaxation_constants(const ModelParams& p) {
  const SpectralFrame f = spectral_frame(p, p.phi);
  const double bk = p.beta * f.k;
  return {2.0 + 2.0 * std::cosh(bk), 4.0 * std::cosh(bk),
          f.E_pp * std::exp(bk) - f.E_mm * std::exp(-bk)};
}

/// L_phi(X) = sum_ij e^{-beta(e_i - e_j)/2} (E_ij^dag [X, E_ij] + [E_ij^dag, X] E_ij),
/// summed over all four pairs (i, j) in {+, -}^2 of the omega_phi frame.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const ModelParams& p)
      : frame_(spectral_frame(p, p.phi)), beta_(p.beta) {
    const std::array<double, 2> energy{frame_.energy_plus, frame_.energy_minus};
    const std::array<std::array<const Matrix2*, 2>, 2> units{
        {{&frame_.E_pp, &frame_.E_pm}, {&frame_.E_mp, &frame_.E_mm}}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        terms_[2 * i + j] = {*units[i][j], std::exp(-beta_ * (energy[i] - energy[j]) / 2.0)};
      }
    }
  }

  Matrix2 operator()(const Matrix2& x) const {
    Matrix2 out;
    for (const auto& [unit, weight] : terms_) {
      const Matrix2 unit_dag = adjoint(unit);
      out += (unit_dag * commutator(x, unit) + commutator(unit_dag, x) * unit) * weight;
    }
    return out;
  }

  const SpectralFrame& frame() const { return frame_; }
  double beta() const { return beta_; }

 private:
  SpectralFrame frame_;
  double beta_;
  std::array<std::pair<Matrix2, double>, 4> terms_;
};

inline Matrix2 lindblad_apply(const ModelParams& p, const Matrix2& x) {
  return LindbladGenerator(p)(x);
}

/// t -> omega_t(X) = mean + off e^{-tc} + diag e^{-td} for one observable X, with
/// off = omega_{-phi}(a^+ + a^-) and diag = omega_{-phi}(a^0).
struct ExpectationTrajectory {
  cplx mean;
  cplx off;
  cplx diag;
  double c = 0.0;
  double d = 0.0;

  cplx value(double t) const { return mean + off * std::exp(-t * c) + diag * std::exp(-t * d); }
  cplx derivative(double t) const {
    return -c * off * std::exp(-t * c) - d * diag * std::exp(-t * d);
  }
  cplx second_derivative(double t) const {
    return c * c * off * std::exp(-t * c) + d * d * diag * std::exp(-t * d);
  }
};

namespace detail {
inline void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative, got " + std::to_string(t));
}
}  // namespace detail

inline ExpectationTrajectory make_trajectory(const ModelParams& p, const Matrix2& x) {
  const NormalModeDecomposition modes = normal_modes(p, x);
  const DensityMatrix2 initial = equilibrium_state(p, -p.phi);
  const RelaxationConstants rc = relaxation_constants(p);
  return {modes.mean, initial.expect(modes.a_plus + modes.a_minus), initial.expect(modes.a_zero),
          rc.c, rc.d};
}

/// omega_t(X) for the transition omega_{-phi} -> omega_phi.
inline cplx evolve_expectation(const ModelParams& p, const Matrix2& x, double t) {
  detail::require_time(t);
  return make_trajectory(p, x).value(t);
}

/// Density matrix rho_t with Tr(rho_t X) = omega_t(X), assembled entrywise from
/// rho_t(a, b) = omega_t(|b><a|).
inline DensityMatrix2 intermediate_state(const ModelParams& p, double t) {
  detail::require_time(t);
  const SpectralFrame f = spectral_frame(p, p.phi);
  const DensityMatrix2 target = equilibrium_state(p, p.phi);
  const DensityMatrix2 initial = equilibrium_state(p, -p.phi);
  const RelaxationConstants rc = relaxation_constants(p);
  const double e_c = std::exp(-t * rc.c);
  const double e_d = std::exp(-t * rc.d);
  Matrix2 rho;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Matrix2 unit;
      unit(b, a) = 1.0;
      const auto m = decompose(f, target, unit);
      rho(a, b) = m.mean + initial.expect(m.a_plus + m.a_minus) * e_c + initial.expect(m.a_zero) * e_d;
    }
  }
  return DensityMatrix2(rho);
}

struct DissipativityCheck {
  bool dissipative = false;
  Matrix2 witness;  // L(A^dag A) - A^dag L(A) - L(A^dag) A
  double min_eigenvalue = 0.0;
  double adjoint_residual = 0.0;  // |L(A^dag) - L(A)^dag|
};

inline constexpr double kDissipativityTol = 1e-10;
inline constexpr double kSelfAdjointTol = 1e-12;

inline DissipativityCheck check_dissipativity(const ModelParams& p, const Matrix2& a) {
  const LindbladGenerator gen(p);
  const Matrix2 a_dag = adjoint(a);
  const Matrix2 la = gen(a);
  const Matrix2 la_dag = gen(a_dag);
  const Matrix2 witness = gen(a_dag * a) - a_dag * la - la_dag * a;
  const double lo = min_eigenvalue(HermitianMatrix2(HermitianMatrix2::hermitian_part(witness)));
  const double adj = distance(la_dag, adjoint(la));
  return {lo >= -kDissipativityTol && adj < kSelfAdjointTol, witness, lo, adj};
}

/// |omega(X L(Y)) - omega(L(X) Y)| in the reference state (omega_phi by default).
inline double check_detailed_balance(const ModelParams& p, const Matrix2& x, const Matrix2& y,
                                     std::optional<DensityMatrix2> reference = std::nullopt) {
  const LindbladGenerator gen(p);
  const DensityMatrix2 ref = reference ? *reference : equilibrium_state(p, p.phi);
  return std::abs(ref.expect(x * gen(y)) - ref.expect(gen(x) * y));
}

}  // namespace bcsmeta
