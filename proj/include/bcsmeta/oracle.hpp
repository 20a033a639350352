#pragma once

// Numerical semigroup oracle: the generator as a dense 4x4 superoperator and
// e^{tL} by scaling and squaring. Uses only the direct action of L_phi, never
// its closed-form spectral relations.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>

#include "bcsmeta/dynamics.hpp"

namespace bcsmeta {

/// Linear map on M2 acting on row-major vectorizations: vec(X)[2r + c] = X(r, c).
struct Superoperator {
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();

  static Eigen::Vector4cd vec(const Matrix2& x) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = x.entries()[i];
    return v;
  }
  static Matrix2 unvec(const Eigen::Vector4cd& v) { return {v(0), v(1), v(2), v(3)}; }

  Matrix2 apply(const Matrix2& x) const { return unvec(matrix * vec(x)); }
};

/// Tabulates a linear map column by column on the standard matrix units.
template <class LinearMap>
Superoperator superoperator_of(const LinearMap& map) {
  Superoperator s;
  for (int col = 0; col < 4; ++col) {
    Matrix2 unit;
    unit(col / 2, col % 2) = 1.0;
    s.matrix.col(col) = Superoperator::vec(map(unit));
  }
  return s;
}

inline Superoperator generator_superoperator(const ModelParams& p) {
  return superoperator_of(LindbladGenerator(p));
}

/// e^A by scaling and squaring with a truncated Taylor series; the series is
/// summed until the next term falls below tol relative to the partial sum.
inline Eigen::Matrix4cd matrix_exponential(const Eigen::Matrix4cd& a, double tol = 1e-16) {
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::Matrix4cd scaled = a / std::ldexp(1.0, squarings);

  Eigen::Matrix4cd result = Eigen::Matrix4cd::Identity();
  Eigen::Matrix4cd term = Eigen::Matrix4cd::Identity();
  for (int n = 1; n < 60; ++n) {
    term = term * scaled / static_cast<double>(n);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= tol * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

inline Superoperator semigroup_at(const Superoperator& generator, double t) {
  return {matrix_exponential(generator.matrix * t)};
}

/// Eigenvalues of a superoperator, sorted by descending real part.
inline std::array<cplx, 4> spectrum(const Superoperator& s) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(s.matrix, false);
  std::array<cplx, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = solver.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
  return out;
}

/// Tr(rho_0 e^{tL_phi}(X)) with rho_0 = rho_{-phi} unless given.
inline cplx oracle_evolve(const ModelParams& p, const Matrix2& x, double t,
                          std::optional<DensityMatrix2> initial = std::nullopt) {
  detail::require_time(t);
  const DensityMatrix2 rho0 = initial ? *initial : equilibrium_state(p, -p.phi);
  const Superoperator evolution = semigroup_at(generator_superoperator(p), t);
  return rho0.expect(evolution.apply(x));
}

}  // namespace bcsmeta
