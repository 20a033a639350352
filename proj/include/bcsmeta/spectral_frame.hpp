#pragma once

#include "bcsmeta/matrix2.hpp"

namespace bcsmeta {

/// Matrix units E_ij = |psi_i><psi_j| of a Hermitian matrix's eigenbasis,
/// with + labelling the upper eigenvalue.
struct SpectralFrame {
  Matrix2 E_pp;
  Matrix2 E_pm;
  Matrix2 E_mp;
  Matrix2 E_mm;
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  /// Half the eigenvalue gap; the effective Hamiltonians here are traceless, so
  /// their spectrum is {-k, +k}.
  double k = 0.0;

  /// energy_plus E_pp + energy_minus E_mm
  Matrix2 reconstruct() const { return E_pp * energy_plus + E_mm * energy_minus; }
};

inline SpectralFrame make_frame(const HermitianMatrix2& h) {
  const auto eig = eigendecompose(h);
  const auto& up = eig.vectors[0];
  const auto& down = eig.vectors[1];
  return SpectralFrame{outer(up, up),     outer(up, down),   outer(down, up),
                       outer(down, down), eig.values[0],     eig.values[1],
                       0.5 * (eig.values[0] - eig.values[1])};
}

}  // namespace bcsmeta
