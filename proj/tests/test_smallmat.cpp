#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "seqbound/smallmat.hpp"
#include "test_support.hpp"

using namespace seqbound;

namespace {

HermitianMatrix reconstruct(const EigenDecomposition& ed) {
  const int dim = static_cast<int>(ed.values.size());
  HermitianMatrix sum(dim);
  for (int i = 0; i < dim; ++i)
    sum += HermitianMatrix::outer(ed.vectors[i]).scaled(ed.values[i]);
  return sum;
}

double overlap_mod(const Vec& a, const Vec& b) {
  Complex s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::abs(s);
}

}  // namespace

TEST_SUITE("smallmat") {

TEST_CASE("eigh of the identity") {
  const auto ed = eigh(HermitianMatrix::identity(3));
  for (double v : ed.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(reconstruct(ed).frobenius_norm() == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("eigh of the all-ones matrix") {
  HermitianMatrix j(3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c <= r; ++c) j.set(r, c, 1.0);
  const auto ed = eigh(j);
  CHECK(ed.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(ed.values[1]) < 1e-12);
  CHECK(std::abs(ed.values[2]) < 1e-12);
}

TEST_CASE("eigh reconstruction and orthonormality on random matrices") {
  auto g = testutil::make_rng(11);
  for (int dim : {2, 3, 5, 8}) {
    for (int rep = 0; rep < 6; ++rep) {
      const HermitianMatrix m = testutil::random_hermitian(dim, g);
      const auto ed = eigh(m);

      HermitianMatrix diff = reconstruct(ed);
      diff -= m;
      CHECK(diff.frobenius_norm() <= 1e-10);

      for (int i = 0; i < dim; ++i) {
        CHECK(overlap_mod(ed.vectors[i], ed.vectors[i]) == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = i + 1; k < dim; ++k)
          CHECK(overlap_mod(ed.vectors[i], ed.vectors[k]) < 1e-10);
      }
      for (int i = 0; i + 1 < dim; ++i) CHECK(ed.values[i] >= ed.values[i + 1]);

      double value_sum = 0;
      for (double v : ed.values) value_sum += v;
      CHECK(value_sum == doctest::Approx(m.trace()).epsilon(1e-12));
    }
  }
}

TEST_CASE("max_eig picks the top pair") {
  const std::array<double, 3> d{2.0, -1.0, 0.0};
  const auto [val, vec] = max_eig(HermitianMatrix::diagonal(d));
  CHECK(val == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(vec[0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(vec[1]) < 1e-10);
  CHECK(std::abs(vec[2]) < 1e-10);

  CHECK(max_eig(HermitianMatrix::identity(4).scaled(-1.0)).first ==
        doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("max_eig of a rank-one projector recovers the vector") {
  auto g = testutil::make_rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const Vec v = testutil::random_unit(3, g);
    const auto [val, u] = max_eig(HermitianMatrix::outer(v));
    CHECK(val == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(overlap_mod(u, v) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("max_eig commutes with identity shifts") {
  auto g = testutil::make_rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const HermitianMatrix m = testutil::random_hermitian(3, g);
    const double base = max_eig(m).first;
    for (double c : {0.5, -2.0, 10.0})
      CHECK(max_eig(m.shifted(c)).first == doctest::Approx(base + c).epsilon(1e-12));
  }
}

TEST_CASE("is_psd thresholds") {
  CHECK(is_psd(HermitianMatrix::identity(3), 0.0));
  const std::array<double, 3> small_neg{1.0, -1e-6, 1.0};
  CHECK_FALSE(is_psd(HermitianMatrix::diagonal(small_neg), 1e-9));
  const std::array<double, 3> tiny_neg{1.0, -1e-12, 1.0};
  CHECK(is_psd(HermitianMatrix::diagonal(tiny_neg), 1e-9));
}

TEST_CASE("is_psd agrees with quadratic forms") {
  auto g = testutil::make_rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    // PSD by construction: every quadratic form stays above -1e-9.
    const HermitianMatrix p = testutil::random_psd(3, g);
    CHECK(is_psd(p, 1e-9));
    for (int i = 0; i < 50; ++i)
      CHECK(p.expectation(testutil::random_unit(3, g)) >= -1e-9);

    // Shift the minimum eigenvalue to -1e-3: the bottom eigenvector is an
    // explicit witness.
    const HermitianMatrix dented = p.shifted(-min_eigenvalue(p) - 1e-3);
    CHECK_FALSE(is_psd(dented, 1e-9));
    const auto ed = eigh(dented);
    CHECK(dented.expectation(ed.vectors.back()) < -1e-4);
  }
}

TEST_CASE("psd_sqrt squares back") {
  auto g = testutil::make_rng(15);
  for (int rep = 0; rep < 8; ++rep) {
    const HermitianMatrix p = testutil::random_psd(3, g);
    const ComplexMatrix r = psd_sqrt(p).full();
    HermitianMatrix diff = HermitianMatrix::hermitized(r * r);
    diff -= p;
    CHECK(diff.frobenius_norm() <= 1e-10);
  }
}

TEST_CASE("psd_inv_sqrt inverts on the range") {
  auto g = testutil::make_rng(16);

  // Full rank: W p W = identity.
  const HermitianMatrix p = testutil::random_psd(3, g).shifted(0.5);
  const ComplexMatrix w = psd_inv_sqrt(p, 1e-14).full();
  HermitianMatrix res = HermitianMatrix::hermitized(w * p.full() * w);
  res -= HermitianMatrix::identity(3);
  CHECK(res.frobenius_norm() <= 1e-10);

  // Rank one: W p W is the projector onto the range.
  const Vec v = testutil::random_unit(3, g);
  const HermitianMatrix rank1 = HermitianMatrix::outer(v).scaled(2.5);
  const ComplexMatrix w1 = psd_inv_sqrt(rank1, 1e-14).full();
  HermitianMatrix proj = HermitianMatrix::hermitized(w1 * rank1.full() * w1);
  proj -= HermitianMatrix::outer(v);
  CHECK(proj.frobenius_norm() <= 1e-10);
}

TEST_CASE("conjugation by a unitary preserves the spectrum") {
  auto g = testutil::make_rng(17);
  const HermitianMatrix m = testutil::random_hermitian(3, g);

  ComplexMatrix v(3);  // diag(1, w, w^2), the cyclic-shift unitary
  const Complex w = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);
  v(0, 0) = 1.0;
  v(1, 1) = w;
  v(2, 2) = w * w;

  const auto before = eigh(m).values;
  const auto after = eigh(conjugated(v, m)).values;
  for (int i = 0; i < 3; ++i)
    CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-12));
}

TEST_CASE("writes reject non-finite entries") {
  HermitianMatrix m(2);
  CHECK_THROWS_AS(m.set(0, 0, std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK_THROWS_AS(m.set(1, 0, Complex(0.0, std::numeric_limits<double>::infinity())),
                  std::invalid_argument);
}

TEST_CASE("hermitian storage mirrors the upper triangle") {
  HermitianMatrix m(3);
  m.set(0, 1, Complex(0.25, -0.5));
  CHECK(m(1, 0) == Complex(0.25, 0.5));
  CHECK(m(0, 1) == Complex(0.25, -0.5));
  m.set(2, 2, Complex(1.0, 0.75));  // imaginary part dropped on the diagonal
  CHECK(m(2, 2) == Complex(1.0, 0.0));
}

}  // TEST_SUITE
