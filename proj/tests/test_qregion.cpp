#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "seqbound/mem.hpp"
#include "seqbound/qregion.hpp"
#include "seqbound/vertexenum.hpp"
#include "test_support.hpp"

using namespace seqbound;

namespace {

constexpr std::array<std::array<int, 3>, 6> kPerms{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

std::filesystem::path temp_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() / tag;
  std::filesystem::create_directories(dir);
  return dir;
}

std::array<double, 3> povm_q(const CoherentEnsemble& e, const Povm& povm) {
  std::array<double, 3> q{};
  for (int m = 0; m < 3; ++m) q[m] = povm.elements[m].expectation(e.state_vectors[m]);
  return q;
}

}  // namespace

TEST_SUITE("qregion") {

TEST_CASE("grid sampling: counts, normalization, clipping") {
  const auto single = sample_priors(1, SampleScheme::grid);
  REQUIRE(single.size() == 1);
  for (double v : single[0]) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));

  for (int n : {2, 3, 5, 21}) {
    const auto pts = sample_priors(n, SampleScheme::grid);
    CHECK(pts.size() == static_cast<size_t>(n) * (n + 1) / 2);
    for (const auto& p : pts) {
      CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
      for (double v : p) CHECK(v >= 1e-6 * (1.0 - 1e-5));
    }
  }

  // Corners survive as clipped near-corners.
  const auto pts = sample_priors(3, SampleScheme::grid);
  bool corner_found = false;
  for (const auto& p : pts)
    corner_found = corner_found || (p[0] > 1.0 - 1e-5 && p[1] < 2e-6 && p[2] < 2e-6);
  CHECK(corner_found);
}

TEST_CASE("fibonacci sampling stays on the simplex") {
  const auto pts = sample_priors(40, SampleScheme::fibonacci);
  CHECK(pts.size() <= 40);
  CHECK(pts.size() >= 35);
  for (const auto& p : pts) {
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : p) CHECK(v >= 1e-6 * (1.0 - 1e-5));
  }
  CHECK(pts == sample_priors(40, SampleScheme::fibonacci));  // deterministic
  CHECK_THROWS_AS(sample_priors(0, SampleScheme::grid), std::invalid_argument);
}

TEST_CASE("centroid prior produces one plane at the equal-prior optimum") {
  const CoherentEnsemble e = build_ensemble(1.0);
  const std::array<double, 3> centroid{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const SupportingPlanes sp = supporting_halfspaces(e, std::span(&centroid, 1));
  REQUIRE(sp.planes.size() == 1);
  CHECK(sp.mem_failures == 0);
  const double opt = srm_value(e);
  CHECK(sp.planes[0].offset >= opt - 1e-9);
  CHECK(sp.planes[0].offset <= opt + 2e-7);
  for (double v : sp.planes[0].normal) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("vacuum offsets reduce to the top prior") {
  const CoherentEnsemble e = build_ensemble(0.0);
  const auto priors = sample_priors(4, SampleScheme::grid);
  const SupportingPlanes sp = supporting_halfspaces(e, priors);
  for (const Halfspace3& h : sp.planes) {
    const double top = *std::max_element(h.normal.begin(), h.normal.end());
    CHECK(h.offset >= top - 1e-9);
    CHECK(h.offset <= top + 2e-7);
  }
}

TEST_CASE("plane set is closed under coordinate permutations") {
  const CoherentEnsemble e = build_ensemble(0.7);
  auto g = testutil::make_rng(41);
  std::vector<std::array<double, 3>> priors;
  for (int i = 0; i < 5; ++i) priors.push_back(testutil::random_prior(g));
  const SupportingPlanes sp = supporting_halfspaces(e, priors);

  for (const Halfspace3& h : sp.planes) {
    for (const auto& perm : kPerms) {
      std::array<double, 3> n{};
      for (int i = 0; i < 3; ++i) n[i] = h.normal[perm[i]];
      bool found = false;
      for (const Halfspace3& other : sp.planes)
        found = found || (testutil::dist3(other.normal, n) < 1e-12 &&
                          std::abs(other.offset - h.offset) < 1e-12);
      CHECK(found);
    }
  }
}

TEST_CASE("assembled polytope: box faces first, unit points feasible") {
  const CoherentEnsemble e = build_ensemble(1.0);
  QPolytope poly = build_qpolytope(e, sample_priors(5, SampleScheme::grid));
  REQUIRE(poly.halfspaces.size() > kBoxFaceCount);
  CHECK(poly.n_supporting() == static_cast<int>(poly.halfspaces.size()) - 6);

  for (int m = 0; m < 3; ++m) {
    CHECK(poly.halfspaces[m].normal[m] == 1.0);
    CHECK(poly.halfspaces[m].offset == 1.0);
    CHECK(poly.halfspaces[m + 3].normal[m] == -1.0);
    CHECK(poly.halfspaces[m + 3].offset == 0.0);
  }

  // Guessing strategies: q = e_m is achievable, so it must stay inside.
  for (int m = 0; m < 3; ++m) {
    std::array<double, 3> unit{};
    unit[m] = 1.0;
    for (const Halfspace3& h : poly.halfspaces) {
      const double lhs = h.normal[0] * unit[0] + h.normal[1] * unit[1] +
                         h.normal[2] * unit[2];
      CHECK(lhs <= h.offset + 1e-9);
    }
  }

  CHECK_THROWS_AS(assemble_qpolytope({}), std::invalid_argument);
}

TEST_CASE("vertex set inherits the permutation symmetry") {
  const CoherentEnsemble e = build_ensemble(1.0);
  QPolytope poly = build_qpolytope(e, sample_priors(6, SampleScheme::grid));
  const VertexSet vs = enumerate_vertices(poly);
  REQUIRE(!vs.points.empty());
  for (const auto& v : vs.points) {
    for (const auto& perm : kPerms) {
      const std::array<double, 3> image{v[perm[0]], v[perm[1]], v[perm[2]]};
      CHECK(testutil::contains_point(vs.points, image, 1e-7));
    }
  }
}

TEST_CASE("refining the prior set shrinks the region") {
  const CoherentEnsemble e = build_ensemble(1.3);
  const auto coarse = sample_priors(4, SampleScheme::grid);
  const auto fine = sample_priors(7, SampleScheme::grid);  // denominators 3 | 6

  QPolytope big = build_qpolytope(e, coarse);
  std::vector<std::array<double, 3>> both = coarse;
  both.insert(both.end(), fine.begin(), fine.end());
  QPolytope small = build_qpolytope(e, both);

  // The refined halfspace set contains the coarse one, so containment is
  // exact at the polytope level; slack covers vertex coordinate conditioning.
  const VertexSet vs = enumerate_vertices(small);
  for (const auto& v : vs.points)
    for (const Halfspace3& h : big.halfspaces) {
      const double lhs =
          h.normal[0] * v[0] + h.normal[1] * v[1] + h.normal[2] * v[2];
      CHECK(lhs <= h.offset + 1e-7);
    }
}

TEST_CASE("every receiver strategy lands inside the region") {
  auto g = testutil::make_rng(42);
  for (double nbar : {0.5, 1.4}) {
    const CoherentEnsemble e = build_ensemble(nbar);
    QPolytope poly = build_qpolytope(e, sample_priors(8, SampleScheme::grid));
    for (int rep = 0; rep < 100; ++rep) {
      const std::array<double, 3> q = povm_q(e, testutil::random_povm(g));
      for (const Halfspace3& h : poly.halfspaces) {
        const double lhs = h.normal[0] * q[0] + h.normal[1] * q[1] +
                           h.normal[2] * q[2];
        CHECK(lhs <= h.offset + 1e-9);
      }
    }
  }
}

TEST_CASE("halfspace cache: name, round trip, miss handling") {
  CHECK(halfspace_cache_name(1.0, "grid", 141) == "halfspaces_grid_141_nbar_1.csv");
  CHECK(halfspace_cache_name(0.25, "grid", 21) == "halfspaces_grid_21_nbar_0.25.csv");

  const CoherentEnsemble e = build_ensemble(0.6);
  const SupportingPlanes sp = supporting_halfspaces(e, sample_priors(4, SampleScheme::grid));

  const auto dir = temp_dir("seqbound-cache-test");
  const auto file = dir / halfspace_cache_name(0.6, "grid", 4);
  save_halfspaces(file, sp.planes);
  const auto loaded = load_halfspaces(file);
  REQUIRE(loaded.has_value());
  REQUIRE(loaded->size() == sp.planes.size());
  for (size_t i = 0; i < sp.planes.size(); ++i) {
    CHECK((*loaded)[i].offset == sp.planes[i].offset);  // full-precision round trip
    for (int k = 0; k < 3; ++k) CHECK((*loaded)[i].normal[k] == sp.planes[i].normal[k]);
  }

  CHECK_FALSE(load_halfspaces(dir / "missing.csv").has_value());

  const auto bad = dir / "corrupt.csv";
  std::ofstream(bad) << "1,2\nnot,numbers,at,all\n";
  CHECK_FALSE(load_halfspaces(bad).has_value());
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
