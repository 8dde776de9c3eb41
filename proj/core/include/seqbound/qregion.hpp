#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqbound/ensembles.hpp"

namespace seqbound {

// Closed halfspace {q : normal . q <= offset}.
struct Halfspace3 {
  std::array<double, 3> normal{};
  double offset = 0.0;
};

inline constexpr int kBoxFaceCount = 6;

// Outer polytope of the receiver-achievable conditional-success triples:
// the probability box plus certified supporting planes. Canonical halfspace
// order: the 6 box faces first (q_m <= 1 then -q_m <= 0), then supporting
// planes sorted by (normal, offset). vertices is filled by
// enumerate_vertices.
struct QPolytope {
  std::vector<Halfspace3> halfspaces;
  std::vector<std::array<double, 3>> vertices;
  int n_supporting() const { return static_cast<int>(halfspaces.size()) - kBoxFaceCount; }
};

enum class SampleScheme { grid, fibonacci };

// Deterministic prior samples on the simplex, every component clipped to at
// least 1e-6 (then renormalized). grid: the regular triangular lattice with
// n points per edge, n(n+1)/2 points total. fibonacci: n golden-ratio
// low-discrepancy points folded onto the simplex.
std::vector<std::array<double, 3>> sample_priors(int n, SampleScheme scheme);

// Certified supporting planes of the achievable region: one minimum-error
// solve per sorted-prior equivalence class (the ensemble is invariant under
// all 6 coordinate permutations, so permuted priors share their certified
// offset), expanded to all 6 permutations, deduplicated at 1e-9, sorted.
// mem_failures counts solves that hit the iteration cap; their certified
// offsets remain valid and are used anyway.
struct SupportingPlanes {
  std::vector<Halfspace3> planes;
  int mem_failures = 0;
};
SupportingPlanes supporting_halfspaces(const CoherentEnsemble& e,
                                       std::span<const std::array<double, 3>> priors,
                                       int workers = 0);

// Prepends the box faces and validates. Throws std::invalid_argument if no
// supporting planes are given.
QPolytope assemble_qpolytope(std::vector<Halfspace3> supporting);

// supporting_halfspaces + assemble_qpolytope.
QPolytope build_qpolytope(const CoherentEnsemble& e,
                          std::span<const std::array<double, 3>> priors, int workers = 0);

// Cache of supporting planes, keyed by (mean_photon, scheme, n) in the file
// name. Rows are p1,p2,p3,offset at full double precision.
std::string halfspace_cache_name(double mean_photon, std::string_view scheme, int n);
std::optional<std::vector<Halfspace3>> load_halfspaces(const std::filesystem::path& file);
void save_halfspaces(const std::filesystem::path& file, std::span<const Halfspace3> planes);

}  // namespace seqbound
