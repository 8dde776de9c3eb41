#include <cmath>
#include <complex>
#include <functional>

#include "doctest.h"
#include "seqbound/ensembles.hpp"
#include "test_support.hpp"

using namespace seqbound;

namespace {

Complex inner(const Vec& a, const Vec& b) {
  Complex s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_SUITE("ensembles") {

TEST_CASE("coherent overlap fixed points") {
  CHECK(coherent_overlap(0.0, 0.0) == Complex(1.0, 0.0));
  auto g = testutil::make_rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    const Complex a(std::uniform_real_distribution<double>(-1.5, 1.5)(g),
                    std::uniform_real_distribution<double>(-1.5, 1.5)(g));
    CHECK(std::abs(coherent_overlap(a, a) - 1.0) < 1e-14);
  }
}

TEST_CASE("coherent overlap against the number-basis series") {
  // The half-slot pair at unit mean photon number, then random amplitudes.
  const Complex b0 = std::sqrt(0.5);
  const Complex b1 = b0 * std::polar(1.0, 2.0 * kPi / 3.0);
  const Complex closed = coherent_overlap(b0, b1);
  CHECK(std::abs(closed) == doctest::Approx(std::exp(-0.75)).epsilon(1e-13));
  CHECK(std::abs(closed - testutil::fock_overlap(b0, b1)) < 1e-12);

  auto g = testutil::make_rng(22);
  std::uniform_real_distribution<double> d(-1.6, 1.6);
  for (int rep = 0; rep < 20; ++rep) {
    const Complex a(d(g), d(g)), b(d(g), d(g));
    CHECK(std::abs(coherent_overlap(a, b) - testutil::fock_overlap(a, b)) < 1e-12);
  }
}

TEST_CASE("vacuum ensemble collapses to a single state") {
  const CoherentEnsemble e = build_ensemble(0.0);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(std::abs(e.gram(r, c) - 1.0) < 1e-14);
  CHECK(e.dft_eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(e.dft_eigenvalues[1]) < 1e-13);
  CHECK(std::abs(e.dft_eigenvalues[2]) < 1e-13);
  for (int m = 1; m < 3; ++m)
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(e.state_vectors[m][k] - e.state_vectors[0][k]) < 1e-14);
}

TEST_CASE("half-slot overlap modulus at unit mean photon number") {
  const CoherentEnsemble e = build_ensemble(1.0);
  CHECK(std::abs(e.gram(0, 1)) == doctest::Approx(std::exp(-0.75)).epsilon(1e-13));
  CHECK(std::abs(e.gram(1, 2)) == doctest::Approx(std::exp(-0.75)).epsilon(1e-13));
}

TEST_CASE("amplitudes sit on the PSK circle") {
  const CoherentEnsemble e = build_ensemble(1.3);
  const double alpha = std::sqrt(1.3);
  for (int m = 0; m < 3; ++m) {
    CHECK(std::abs(e.amplitudes[m]) == doctest::Approx(alpha).epsilon(1e-14));
    CHECK(std::abs(e.amplitudes[m] - std::sqrt(2.0) * e.split_amplitudes[m]) < 1e-14);
  }
  CHECK(std::abs(e.amplitudes[1] - e.amplitudes[0] * std::polar(1.0, 2.0 * kPi / 3.0)) <
        1e-14);
}

TEST_CASE("cyclic shift operator cubes to the identity and shifts states") {
  for (double nbar : {0.0, 0.4, 1.0, 2.0}) {
    const CoherentEnsemble e = build_ensemble(nbar);
    const ComplexMatrix v3 = e.symmetry_op * e.symmetry_op * e.symmetry_op;
    ComplexMatrix diff = v3;
    diff -= ComplexMatrix::identity(3);
    CHECK(diff.frobenius_norm() < 1e-13);

    for (int m = 0; m < 3; ++m) {
      const Vec shifted = e.symmetry_op.apply(e.state_vectors[m]);
      const Vec& next = e.state_vectors[(m + 1) % 3];
      double err = 0;
      for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(shifted[k] - next[k]));
      CHECK(err < 1e-12);
    }
  }
}

TEST_CASE("embedding is an isometry: vector inner products match the Gram") {
  for (double nbar : {0.0, 0.3, 1.0, 1.7, 2.0}) {
    const CoherentEnsemble e = build_ensemble(nbar);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        CHECK(std::abs(inner(e.state_vectors[j], e.state_vectors[k]) - e.gram(j, k)) <
              1e-10);
  }
}

TEST_CASE("gram matrix is circulant") {
  const CoherentEnsemble e = build_ensemble(0.9);
  CHECK(std::abs(e.gram(0, 1) - e.gram(1, 2)) < 1e-14);
  CHECK(std::abs(e.gram(1, 2) - e.gram(2, 0)) < 1e-14);
  CHECK(std::abs(e.gram(0, 2) - std::conj(e.gram(0, 1))) < 1e-14);
  for (int m = 0; m < 3; ++m) CHECK(std::abs(e.gram(m, m) - 1.0) < 1e-14);
}

TEST_CASE("gram eigenvalues: limits, ordering, trace") {
  const auto vac = gram_eigenvalues(build_ensemble(0.0));
  CHECK(vac[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(std::abs(vac[1]) < 1e-13);
  CHECK(std::abs(vac[2]) < 1e-13);

  const auto far = gram_eigenvalues(build_ensemble(50.0));
  for (double v : far) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

  for (double nbar : {0.2, 0.7, 1.0, 1.9}) {
    const CoherentEnsemble e = build_ensemble(nbar);
    const auto mu = gram_eigenvalues(e);
    CHECK(mu[0] >= mu[1]);
    CHECK(mu[1] >= mu[2]);
    CHECK(mu[2] >= 0.0);
    CHECK(mu[0] + mu[1] + mu[2] == doctest::Approx(3.0).epsilon(1e-12));

    // Same multiset as a direct eigendecomposition of the Gram.
    const auto direct = eigh(e.gram).values;
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mu[i] - direct[i]) < 1e-10);

    // And as the stored DFT-ordered values.
    std::array<double, 3> dft = e.dft_eigenvalues;
    std::sort(dft.begin(), dft.end(), std::greater<>());
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mu[i] - dft[i]) < 1e-12);
  }
}

TEST_CASE("dft eigenvalues follow the circulant formula") {
  for (double nbar : {0.3, 1.0, 1.8}) {
    const CoherentEnsemble e = build_ensemble(nbar);
    const Complex w = std::polar(1.0, 2.0 * kPi / 3.0);
    const Complex g1 = e.gram(0, 1);
    for (int c = 0; c < 3; ++c) {
      const double expected = 1.0 + 2.0 * (g1 * std::pow(w, -c)).real();
      CHECK(e.dft_eigenvalues[c] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("state vectors weight DFT modes by sqrt eigenvalue") {
  const CoherentEnsemble e = build_ensemble(1.1);
  for (int k = 0; k < 3; ++k)
    CHECK(std::norm(e.state_vectors[0][k]) ==
          doctest::Approx(e.dft_eigenvalues[k] / 3.0).epsilon(1e-12));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(build_ensemble(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_ensemble(1.0, {0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(build_ensemble(1.0, {1.2, -0.1, -0.1}), std::invalid_argument);
}

TEST_CASE("state projectors are rank-one with unit trace") {
  const CoherentEnsemble e = build_ensemble(0.8);
  for (int m = 0; m < 3; ++m) {
    const HermitianMatrix p = state_projector(e, m);
    CHECK(p.trace() == doctest::Approx(1.0).epsilon(1e-12));
    const auto vals = eigh(p).values;
    CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(std::abs(vals[1]) < 1e-11);
  }
}

}  // TEST_SUITE
