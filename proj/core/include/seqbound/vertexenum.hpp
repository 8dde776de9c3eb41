#pragma once

#include <array>
#include <vector>

#include "seqbound/qregion.hpp"

namespace seqbound {

// Vertices of a bounded halfspace intersection in R^3.
struct VertexSet {
  std::vector<std::array<double, 3>> points;
  // Indices into the polytope's halfspace list of the 3 planes whose exact
  // intersection is the point; sorted ascending per triple.
  std::vector<std::array<int, 3>> generating_triples;
  int dropped_infeasible = 0;  // hull artifacts removed by the feasibility filter
  bool joggled = false;        // offsets were perturbed upward (<= 1e-12) to
                               // recover from a degenerate hull configuration
};

// Enumerates all vertices by mapping halfspaces to polar-dual points around
// an interior point, building the 3-D convex hull, and mapping hull facets
// back to plane-triple intersections. Deterministic; fills p.vertices.
// Throws std::runtime_error if the intersection has no interior point (it
// cannot be unbounded or empty when the box faces and the trivial strategies
// are present).
VertexSet enumerate_vertices(QPolytope& p);

}  // namespace seqbound
