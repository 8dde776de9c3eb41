#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqbound/ensembles.hpp"
#include "seqbound/smallmat.hpp"
#include "seqbound/tolerances.hpp"
#include "seqbound/vertexenum.hpp"

namespace seqbound {

// Solver for the dual feasibility problem
//
//   minimize trace(X)  subject to  X >= H_v for every listed 3x3 body H_v,
//
// where H_v = sum_m (q_m * weight) |state_m><state_m| for a polytope vertex
// q. Symmetric mode restricts X to be diagonal in the cyclic-shift
// eigenbasis (3 real variables); general mode optimizes the full Hermitian
// X (9 real variables) and exists to validate the reduction.

enum class DpMode { symmetric, general };

// One PSD constraint body together with the vertex that produced it.
struct ConstraintMatrix {
  std::array<double, 3> q;
  HermitianMatrix h;
};

ConstraintMatrix make_constraint(const CoherentEnsemble& e,
                                 const std::array<double, 3>& q,
                                 double weight = 1.0 / 3.0);

// Constraint bodies for every vertex, engine-ready (q dropped).
std::vector<HermitianMatrix> build_constraints(const CoherentEnsemble& e,
                                               const VertexSet& vertices,
                                               double weight = 1.0 / 3.0);

// One linear cut u'Xu >= offset kept by the cutting-plane loop. source is
// the index of the constraint body whose violated eigenvector produced the
// cut, or -1 for structural cuts (diagonal nonnegativity and seeds without
// a body). multiplier is backfilled from the final LP dual weights; the
// primal module folds multiplier * u u' into measurement operators.
struct CutRecord {
  int source = -1;
  Vec u;
  double offset = 0;
  double multiplier = 0;
};

struct DpOptions {
  double violation_tol = tol::dp_violation;
  double objective_change_tol = tol::dp_objective_change;
  int stall_rounds = tol::dp_stall_rounds;
  int max_rounds = tol::dp_max_rounds;
  int workers = 1;  // concurrency of the violation scan only
};

struct DualSolution {
  HermitianMatrix x{3};
  double trace_value = 0;
  double max_violation = 0;  // exact full-scan value at the reported x
  int iterations = 0;        // cutting-plane rounds consumed
  DpMode mode = DpMode::symmetric;
  std::vector<CutRecord> cuts;

  // Inflating by the worst violation keeps the bound valid whatever the
  // solver state: X + max(0, violation) * I dominates every body.
  double certified() const;
};

// No objective progress over stall_rounds while violations persist. best is
// the least certified bound seen across full scans (cuts omitted).
struct DpStallError : std::runtime_error {
  DpStallError(const std::string& what, DualSolution best_solution)
      : std::runtime_error(what), best(std::move(best_solution)) {}
  DualSolution best;
};

// Symmetric and general mode disagree beyond the defect threshold.
struct SolverDefectError : std::runtime_error {
  SolverDefectError(const std::string& what, double sym, double gen)
      : std::runtime_error(what), symmetric_trace(sym), general_trace(gen) {}
  double symmetric_trace;
  double general_trace;
};

// Cutting-plane engine over arbitrary 3x3 bodies (also used by the primal
// module with effective operators in place of vertex bodies). Each round
// solves the LP over the current cuts, scans bodies in descending-trace
// order for the worst eigenvalue violation (early exit above 10x tolerance,
// full scan every 10th round and at convergence), and adds the violated
// eigenvector as a cut. seed_cuts are appended after the three structural
// diagonal cuts.
DualSolution solve_dp_core(const std::vector<HermitianMatrix>& constraints,
                           DpMode mode, const std::vector<CutRecord>& seed_cuts,
                           const DpOptions& opts = {});

DualSolution solve_dp_prime(const CoherentEnsemble& e, const VertexSet& vertices,
                            DpMode mode, const DpOptions& opts = {});

// trace(X) + 3 * max(0, worst violation over the vertex bodies): a valid
// upper bound on the sequential success probability for any Hermitian X.
double certify(const CoherentEnsemble& e, const HermitianMatrix& x,
               const VertexSet& vertices);

// Runs both modes and returns (symmetric trace, general trace). Throws
// SolverDefectError when they disagree beyond tol::mode_defect.
std::pair<double, double> symmetrize_check(const CoherentEnsemble& e,
                                           const VertexSet& vertices,
                                           const DpOptions& opts = {});

}  // namespace seqbound
