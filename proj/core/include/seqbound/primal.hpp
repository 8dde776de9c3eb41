#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqbound/dpsolver.hpp"
#include "seqbound/ensembles.hpp"
#include "seqbound/mem.hpp"

namespace seqbound {

// Explicit two-step strategies: the sender-side measurement chooses an entry
// of a finite receiver library, the receiver then applies that entry. The
// achieved success probability lower-bounds the sequential optimum and
// sandwiches the dual certificate from below.

struct BobEntry {
  Povm povm;                            // receiver POVM, 3 outcomes
  std::array<double, 3> q{};            // q_m = <state_m|B_m|state_m>
  std::array<double, 3> source_priors{};  // priors whose MEM produced it
};

struct BobLibrary {
  std::vector<BobEntry> entries;
};

// Minimum-error POVMs on a triangular prior lattice sized to at most n
// priors (largest k with k(k+1)/2 <= n), plus the three one-outcome
// guessing strategies. Entries with coinciding q-triples (within 1e-9) are
// merged, keeping the first.
BobLibrary default_library(const CoherentEnsemble& e, int n, int workers = 0);

// F_w = sum_m (1/3) q_m^(w) |state_m><state_m|: the operator whose pairing
// with the sender element A_w contributes that branch's success probability.
std::vector<HermitianMatrix> effective_operators(const CoherentEnsemble& e,
                                                 const BobLibrary& lib);

struct PrimalResult {
  double success_value = 0;      // sum_w tr(A_w F_w), recomputed from the POVM
  Povm alice_povm;               // one element per library entry
  std::vector<int> chosen_bob_indices;  // entries with trace(A_w) > 1e-6
  double certified_upper = 0;    // dual bound on the library optimum
  int iterations = 0;
  bool converged = false;
  double gap() const { return certified_upper - success_value; }
};

class AliceConvergenceError : public std::runtime_error {
 public:
  AliceConvergenceError(const std::string& msg, PrimalResult best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const PrimalResult& best() const { return best_; }

 private:
  PrimalResult best_;
};

struct OptimizeAliceOptions {
  // Fixed-point phase: cheap, usually lands within a few hundred steps on
  // easy libraries and is kept short because the cutting-plane phase closes
  // the gap reliably when it does not.
  int fixed_point_iterations = 600;
  double gap_tol = tol::mem_gap;
  // Cutting-plane phase: the certified gap is about 3x the final violation,
  // so the scan tolerance sits below a third of gap_tol.
  double dp_violation_tol = 3e-8;
  int workers = 1;
};

// Maximizes sum_w tr(A_w F_w) over sender POVMs. Runs the fixed-point
// machinery first; if its duality gap stays above gap_tol, re-solves the
// dual by cutting planes and reads the sender POVM off the LP multipliers.
// Throws AliceConvergenceError (carrying the best feasible result, still a
// valid lower bound) if neither phase certifies the gap.
PrimalResult optimize_alice(const CoherentEnsemble& e, const BobLibrary& lib,
                            const OptimizeAliceOptions& opts = {});

}  // namespace seqbound
