#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "bcsmeta/matrix2.hpp"

namespace bcsmeta {

inline constexpr std::uint64_t kDefaultSeed = 20010401;

/// Uniform on the closed complex unit disc.
inline cplx random_disc_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, theta);
}

inline Matrix2 random_matrix(std::mt19937_64& rng) {
  const cplx a = random_disc_point(rng);
  const cplx b = random_disc_point(rng);
  const cplx c = random_disc_point(rng);
  const cplx d = random_disc_point(rng);
  return {a, b, c, d};
}

inline Matrix2 random_hermitian(std::mt19937_64& rng) {
  return HermitianMatrix2::hermitian_part(random_matrix(rng));
}

/// Random real diagonal matrix, i.e. a gauge-invariant Hermitian observable.
inline Matrix2 random_gauge_invariant(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng);
  const double b = u(rng);
  return Matrix2::diagonal(a, b);
}

}  // namespace bcsmeta
