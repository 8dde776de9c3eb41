#include "seqbound/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seqbound/tolerances.hpp"

namespace seqbound {

namespace {

const Complex kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

Complex omega_pow(int k) {
  switch (((k % 3) + 3) % 3) {
    case 0: return 1.0;
    case 1: return kOmega;
    default: return std::conj(kOmega);
  }
}

void validate_priors(const std::array<double, 3>& p) {
  double sum = 0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0) throw std::invalid_argument("priors must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol::prior_sum)
    throw std::invalid_argument("priors must sum to 1");
}

}  // namespace

Complex coherent_overlap(Complex a, Complex b) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
      !std::isfinite(b.imag()))
    throw std::invalid_argument("non-finite amplitude");
  return std::exp(-0.5 * (std::norm(a) + std::norm(b)) + std::conj(a) * b);
}

CoherentEnsemble build_ensemble(double mean_photon, const std::array<double, 3>& priors) {
  if (!std::isfinite(mean_photon) || mean_photon < 0)
    throw std::invalid_argument("mean_photon must be finite and nonnegative");
  validate_priors(priors);

  CoherentEnsemble e;
  e.mean_photon = mean_photon;
  e.priors = priors;
  const double alpha = std::sqrt(mean_photon);
  for (int m = 0; m < 3; ++m) {
    e.amplitudes[m] = alpha * omega_pow(m);
    e.split_amplitudes[m] = e.amplitudes[m] / std::sqrt(2.0);
  }
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k <= j; ++k)
      e.gram.set(j, k, coherent_overlap(e.split_amplitudes[j], e.split_amplitudes[k]));

  // The Gram matrix is circulant, so its eigenbasis is the 3-point DFT basis
  // and the eigenvalue of mode k is mu_k = 1 + 2 Re(g1 w^{-k}) with
  // g1 = <beta_0|beta_1> = exp(t (w - 1)), t = |beta|^2.
  const double t = mean_photon / 2.0;
  const Complex g1 = std::exp(t * (kOmega - 1.0));
  for (int k = 0; k < 3; ++k) {
    double mu = 1.0 + 2.0 * (g1 * omega_pow(-k)).real();
    if (mu < -1e-12) throw std::logic_error("negative Gram eigenvalue beyond tolerance");
    // Rounding noise of order 1e-16 would blow up to 1e-8 under the square
    // root in the embedding; snap exact-zero modes to zero.
    if (std::abs(mu) <= 1e-12) mu = 0.0;
    e.dft_eigenvalues[k] = mu;
  }

  // Embedding: component k of |beta_m> is sqrt(mu_k) w^{mk} / sqrt(3), which
  // reproduces the Gram exactly and diagonalizes the shift as V.
  for (int m = 0; m < 3; ++m) {
    Vec v(3);
    for (int k = 0; k < 3; ++k)
      v[k] = std::sqrt(e.dft_eigenvalues[k]) * omega_pow(m * k) / std::sqrt(3.0);
    e.state_vectors[m] = std::move(v);
  }
  for (int k = 0; k < 3; ++k) e.symmetry_op(k, k) = omega_pow(k);
  return e;
}

std::array<double, 3> gram_eigenvalues(const CoherentEnsemble& e) {
  std::array<double, 3> mu = e.dft_eigenvalues;
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return mu;
}

HermitianMatrix state_projector(const CoherentEnsemble& e, int m) {
  if (m < 0 || m > 2) throw std::invalid_argument("state index out of range");
  return HermitianMatrix::outer(e.state_vectors[m]);
}

}  // namespace seqbound
