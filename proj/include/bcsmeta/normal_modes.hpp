#pragma once

#include "bcsmeta/equilibrium.hpp"
#include "bcsmeta/spectral_frame.hpp"

namespace bcsmeta {

/// X = mean 1 + a_plus + a_minus + a_zero relative to a reference frame and state.
struct NormalModeDecomposition {
  cplx mean;        // reference expectation of X
  Matrix2 a_plus;   // E_pp X E_mm, creation mode
  Matrix2 a_minus;  // E_mm X E_pp, annihilation mode
  Matrix2 a_zero;   // E_pp X E_pp + E_mm X E_mm - mean 1, constant of motion

  Matrix2 reconstruct() const { return Matrix2::identity() * mean + a_plus + a_minus + a_zero; }
};

/// Normal coordinates of X in the frame of a reference Hamiltonian, centred on
/// the reference state rho.
inline NormalModeDecomposition decompose(const SpectralFrame& f, const Matrix2& rho,
                                         const Matrix2& x) {
  const cplx mean = expectation(rho, x);
  return {mean, f.E_pp * x * f.E_mm, f.E_mm * x * f.E_pp,
          f.E_pp * x * f.E_pp + f.E_mm * x * f.E_mm - Matrix2::identity() * mean};
}

/// Normal coordinates of X for the asymptotic state omega_phi.
inline NormalModeDecomposition normal_modes(const ModelParams& p, const Matrix2& x) {
  const SpectralFrame f = make_frame(effective_hamiltonian(p, p.phi));
  return decompose(f, equilibrium_state(p, p.phi), x);
}

}  // namespace bcsmeta
