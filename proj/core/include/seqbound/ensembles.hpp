#pragma once

#include <array>

#include "seqbound/smallmat.hpp"

namespace seqbound {

// Three phase-shift-keyed coherent states split into two equal time slots,
// embedded in the 3-dimensional span of the half-slot states. The embedding
// basis diagonalizes the cyclic-shift symmetry: V = diag(1, w, w^2) with
// w = exp(i 2 pi / 3), and |beta_{m+1}> = V |beta_m> exactly.
struct CoherentEnsemble {
  double mean_photon = 0.0;                    // |alpha|^2 of the full slot
  std::array<Complex, 3> amplitudes{};         // alpha_m = alpha e^{i 2 pi m / 3}
  std::array<Complex, 3> split_amplitudes{};   // beta_m = alpha_m / sqrt(2)
  std::array<double, 3> priors{};
  HermitianMatrix gram{3};                     // <beta_j|beta_k>
  std::array<Vec, 3> state_vectors{};          // |beta_m> in the V eigenbasis
  std::array<double, 3> dft_eigenvalues{};     // Gram eigenvalue of DFT mode k
  ComplexMatrix symmetry_op{3};                // V
};

// <a|b> = exp(-(|a|^2 + |b|^2)/2 + conj(a) b) for coherent amplitudes a, b.
Complex coherent_overlap(Complex a, Complex b);

// Constructs the ensemble at the given full-slot mean photon number.
// Throws std::invalid_argument on negative/non-finite input or priors that
// are negative or do not sum to 1 within 1e-12.
CoherentEnsemble build_ensemble(double mean_photon,
                                const std::array<double, 3>& priors = {1.0 / 3, 1.0 / 3,
                                                                       1.0 / 3});

// Gram eigenvalues sorted descending, clamped to zero if within -1e-12.
std::array<double, 3> gram_eigenvalues(const CoherentEnsemble& e);

// |beta_m><beta_m| in the embedding basis.
HermitianMatrix state_projector(const CoherentEnsemble& e, int m);

}  // namespace seqbound
