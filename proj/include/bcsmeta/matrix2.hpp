#pragma once

// One-site observable algebra M2: 2x2 complex matrices, Pauli operators,
// closed-form Hermitian eigendecomposition and the gauge group action.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "bcsmeta/errors.hpp"

namespace bcsmeta {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// 2x2 complex matrix, row-major storage.
class Matrix2 {
 public:
  constexpr Matrix2() = default;
  constexpr Matrix2(cplx a00, cplx a01, cplx a10, cplx a11) : m_{a00, a01, a10, a11} {}

  static constexpr Matrix2 zero() { return {}; }
  static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Matrix2 diagonal(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

  constexpr cplx operator()(int r, int c) const { return m_[2 * r + c]; }
  constexpr cplx& operator()(int r, int c) { return m_[2 * r + c]; }

  /// Row-major entries; vec(X) in the superoperator representation uses this order.
  constexpr const std::array<cplx, 4>& entries() const { return m_; }

  constexpr Matrix2& operator+=(const Matrix2& o) {
    for (int i = 0; i < 4; ++i) m_[i] += o.m_[i];
    return *this;
  }
  constexpr Matrix2& operator-=(const Matrix2& o) {
    for (int i = 0; i < 4; ++i) m_[i] -= o.m_[i];
    return *this;
  }
  constexpr Matrix2& operator*=(cplx s) {
    for (auto& v : m_) v *= s;
    return *this;
  }

  friend constexpr Matrix2 operator+(Matrix2 a, const Matrix2& b) { return a += b; }
  friend constexpr Matrix2 operator-(Matrix2 a, const Matrix2& b) { return a -= b; }
  friend constexpr Matrix2 operator-(Matrix2 a) { return a *= -1.0; }
  friend constexpr Matrix2 operator*(Matrix2 a, cplx s) { return a *= s; }
  friend constexpr Matrix2 operator*(cplx s, Matrix2 a) { return a *= s; }
  friend constexpr Matrix2 operator*(Matrix2 a, double s) { return a *= s; }
  friend constexpr Matrix2 operator*(double s, Matrix2 a) { return a *= s; }
  friend constexpr Matrix2 operator/(Matrix2 a, double s) { return a *= 1.0 / s; }

  friend constexpr Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
            a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
  }

  friend constexpr bool operator==(const Matrix2&, const Matrix2&) = default;

 private:
  std::array<cplx, 4> m_{};
};

inline constexpr Matrix2 adjoint(const Matrix2& x) {
  return {std::conj(x(0, 0)), std::conj(x(1, 0)), std::conj(x(0, 1)), std::conj(x(1, 1))};
}

inline constexpr cplx trace(const Matrix2& x) { return x(0, 0) + x(1, 1); }

inline constexpr Matrix2 commutator(const Matrix2& a, const Matrix2& b) { return a * b - b * a; }

/// Maximum absolute entry. Used for every tolerance check in the library.
inline double max_norm(const Matrix2& x) {
  double n = 0.0;
  for (const auto& v : x.entries()) n = std::max(n, std::abs(v));
  return n;
}

inline double distance(const Matrix2& a, const Matrix2& b) { return max_norm(a - b); }

/// Tr(rho X), the expectation of X in the state with density matrix rho.
inline constexpr cplx expectation(const Matrix2& rho, const Matrix2& x) { return trace(rho * x); }

// Pauli operators with sigma^z = sigma^+ sigma^- - sigma^- sigma^+.
inline constexpr Matrix2 sigma_plus() { return {0.0, 1.0, 0.0, 0.0}; }
inline constexpr Matrix2 sigma_minus() { return {0.0, 0.0, 1.0, 0.0}; }
inline constexpr Matrix2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }

using Vector2 = std::array<cplx, 2>;

/// |u><v|
inline constexpr Matrix2 outer(const Vector2& u, const Vector2& v) {
  return {u[0] * std::conj(v[0]), u[0] * std::conj(v[1]), u[1] * std::conj(v[0]),
          u[1] * std::conj(v[1])};
}

inline constexpr double kHermitianTol = 1e-12;

/// Matrix2 certified Hermitian to kHermitianTol at construction. The stored
/// matrix is the exact Hermitian part of the input.
class HermitianMatrix2 {
 public:
  explicit HermitianMatrix2(const Matrix2& x) {
    if (distance(x, adjoint(x)) > kHermitianTol) {
      throw DomainError("matrix is not Hermitian (asymmetry " +
                        std::to_string(distance(x, adjoint(x))) + ")");
    }
    m_ = hermitian_part(x);
  }

  /// (X + X^dag)/2 with an exactly real diagonal.
  static Matrix2 hermitian_part(const Matrix2& x) {
    Matrix2 h = (x + adjoint(x)) * 0.5;
    h(0, 0) = h(0, 0).real();
    h(1, 1) = h(1, 1).real();
    return h;
  }

  const Matrix2& matrix() const { return m_; }
  operator const Matrix2&() const { return m_; }  // NOLINT(google-explicit-constructor)

 private:
  Matrix2 m_;
};

struct EigenDecomposition {
  std::array<double, 2> values;   // descending
  std::array<Vector2, 2> vectors; // vectors[i] belongs to values[i]
};

inline constexpr double kDegenerateGap = 1e-13;

namespace detail {

// A component counts as nonzero for the phase convention above this modulus.
inline constexpr double kPhaseThreshold = 1e-14;

inline Vector2 normalized(const Vector2& v) {
  const double n = std::hypot(std::abs(v[0]), std::abs(v[1]));
  return {v[0] / n, v[1] / n};
}

inline Vector2 fix_phase(const Vector2& v) {
  const int i = std::abs(v[0]) > kPhaseThreshold ? 0 : 1;
  const cplx phase = std::conj(v[i]) / std::abs(v[i]);
  Vector2 out{v[0] * phase, v[1] * phase};
  out[i] = std::abs(v[i]);
  return out;
}

}  // namespace detail

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
///
/// Eigenvalues are sorted descending. Each eigenvector is normalized and its
/// first component with modulus above 1e-14 is made real and positive, so the
/// off-diagonal matrix units |psi_i><psi_j| are reproducible.
/// Throws DegenerateFrame when the eigenvalue gap is below 1e-13.
inline EigenDecomposition eigendecompose(const HermitianMatrix2& hm) {
  const Matrix2& h = hm.matrix();
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const cplx b = h(0, 1);
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double radius = std::hypot(half_diff, std::abs(b));
  if (2.0 * radius < kDegenerateGap) {
    throw DegenerateFrame("degenerate spectrum: eigenvalue gap " + std::to_string(2.0 * radius));
  }
  const double upper = mean + radius;
  const double lower = mean - radius;

  // Two algebraically equivalent null vectors of (H - upper); take the larger
  // one to avoid cancellation.
  const Vector2 cand_a{b, upper - a};
  const Vector2 cand_b{upper - d, std::conj(b)};
  const double na = std::hypot(std::abs(cand_a[0]), std::abs(cand_a[1]));
  const double nb = std::hypot(std::abs(cand_b[0]), std::abs(cand_b[1]));
  const Vector2 up = detail::normalized(na > nb ? cand_a : cand_b);
  const Vector2 down{-std::conj(up[1]), std::conj(up[0])};

  return {{upper, lower}, {detail::fix_phase(up), detail::fix_phase(down)}};
}

/// Smallest eigenvalue of a Hermitian matrix (no degeneracy check).
inline double min_eigenvalue(const HermitianMatrix2& hm) {
  const Matrix2& h = hm.matrix();
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  return 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
}

inline constexpr double kDensityTol = 1e-12;

/// Density matrix: Hermitian, unit trace, positive semidefinite (all to 1e-12).
class DensityMatrix2 {
 public:
  explicit DensityMatrix2(const Matrix2& x) : h_(x) {
    const double tr_err = std::abs(trace(h_.matrix()) - 1.0);
    if (tr_err > kDensityTol) {
      throw DomainError("density matrix trace deviates from 1 by " + std::to_string(tr_err));
    }
    const double lo = bcsmeta::min_eigenvalue(h_);
    if (lo < -kDensityTol) {
      throw DomainError("density matrix has negative eigenvalue " + std::to_string(lo));
    }
  }

  const Matrix2& matrix() const { return h_.matrix(); }
  operator const Matrix2&() const { return h_.matrix(); }  // NOLINT(google-explicit-constructor)

  cplx expect(const Matrix2& x) const { return expectation(h_.matrix(), x); }
  double min_eigenvalue() const { return bcsmeta::min_eigenvalue(h_); }

 private:
  HermitianMatrix2 h_;
};

/// Gauge automorphism alpha_psi(X) = U X U^dag with U = exp(i psi sigma^z / 2),
/// so that alpha_psi(sigma^+) = e^{i psi} sigma^+.
inline Matrix2 gauge_transform(const Matrix2& x, double psi) {
  const cplx u = std::polar(1.0, 0.5 * psi);
  const Matrix2 unitary = Matrix2::diagonal(u, std::conj(u));
  return unitary * x * adjoint(unitary);
}

/// [sigma^z, X] = 0 up to tol in the max-entry norm.
inline bool is_gauge_invariant(const Matrix2& x, double tol) {
  if (!(tol > 0.0)) throw DomainError("is_gauge_invariant: tolerance must be positive");
  return max_norm(commutator(sigma_z(), x)) < tol;
}

}  // namespace bcsmeta
