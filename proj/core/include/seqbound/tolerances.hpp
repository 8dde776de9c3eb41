#pragma once

// Numerical thresholds shared by the solver modules. The test suite asserts
// against these exact values, so they are part of the library contract:
// loosening one here silently loosens every certificate built on top of it.
namespace seqbound::tol {

// Jacobi eigensolver (smallmat)
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double jacobi_offdiag = 1e-13;   // off-diagonal Frobenius, relative
inline constexpr double eig_reconstruction = 1e-10;

// POVM validity and dual feasibility slack (mem)
inline constexpr double psd_slack = 1e-9;
inline constexpr double mem_gap = 1e-7;
inline constexpr int mem_max_iterations = 10000;
inline constexpr double isqrt_rank_cutoff = 1e-14;  // relative to top eigenvalue

// Prior handling (ensembles, qregion)
inline constexpr double prior_sum = 1e-12;
inline constexpr double prior_clip = 1e-6;

// Polytope assembly (qregion)
inline constexpr double halfspace_dedup = 1e-9;

// Vertex enumeration (vertexenum)
inline constexpr double vertex_dedup = 1e-7;
inline constexpr double vertex_feasibility = 1e-7;
inline constexpr double joggle_magnitude = 1e-12;

// Dense revised simplex (simplex). Tight pivot tolerances matter: the
// cutting-plane loops add cuts with violations near 1e-7, and an LP that
// absorbs them into its own feasibility slack never converges.
inline constexpr double lp_pivot = 1e-11;
inline constexpr double lp_cost = 1e-11;
inline constexpr double lp_feasibility = 1e-9;
inline constexpr int lp_refactor_interval = 64;

// Cutting-plane solver (dpsolver)
inline constexpr double dp_violation = 1e-7;
inline constexpr double dp_objective_change = 1e-9;
inline constexpr int dp_stall_rounds = 50;
inline constexpr int dp_max_rounds = 10000;

// Cross-validation between symmetric and general solver modes
inline constexpr double mode_agreement = 1e-6;
inline constexpr double mode_defect = 1e-5;

}  // namespace seqbound::tol
