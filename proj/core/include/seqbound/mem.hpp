#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqbound/ensembles.hpp"
#include "seqbound/smallmat.hpp"
#include "seqbound/tolerances.hpp"

namespace seqbound {

// A positive operator valued measure: PSD elements summing to the identity.
struct Povm {
  std::vector<HermitianMatrix> elements;
};

// Each element PSD within tol and the sum within tol of the identity
// (Frobenius).
bool is_valid_povm(const Povm& p, double tol = tol::psd_slack);

// Minimum-error discrimination result for the half-slot states under the
// given priors. certified_upper = trace(dual_y) is a valid upper bound on
// the optimum whether or not the iteration converged, because dual_y is
// inflated to exact dual feasibility.
struct MemResult {
  std::array<double, 3> priors{};
  double success_value = 0.0;
  Povm povm;
  std::array<double, 3> q{};  // q_m = <beta_m|B_m|beta_m>
  HermitianMatrix dual_y{3};
  double certified_upper = 0.0;
  int iterations = 0;
  bool converged = false;
  double gap() const { return certified_upper - success_value; }
};

class MemConvergenceError : public std::runtime_error {
 public:
  MemConvergenceError(const std::string& msg, MemResult partial)
      : std::runtime_error(msg), partial_(std::move(partial)) {}
  const MemResult& partial() const { return partial_; }
  double gap() const { return partial_.gap(); }

 private:
  MemResult partial_;
};

// Generic weighted-operator discrimination: maximize sum_j tr(P_j R_j) over
// POVMs {P_j}, for arbitrary PSD operators R_j. This is the machinery behind
// solve_mem (R_m = p_m |beta_m><beta_m|) and the sender-side optimization in
// the primal module (R_w = effective operators).
struct WeightedMemOptions {
  double gap_tol = tol::mem_gap;
  int max_iterations = tol::mem_max_iterations;
  int tiebreak_outcome = 0;  // receives the completeness remainder
};

struct WeightedMemState {
  std::vector<HermitianMatrix> povm;
  HermitianMatrix dual_y{1};   // inflated to exact feasibility: dual_y >= R_j
  double value = 0.0;          // sum_j tr(P_j R_j)
  double certified_upper = 0.0;
  int iterations = 0;
  bool converged = false;
};

WeightedMemState solve_weighted_mem(std::span<const HermitianMatrix> ops,
                                    const WeightedMemOptions& opts = {});

// Minimum-error measurement for the ensemble's half-slot states. Throws
// MemConvergenceError (carrying the still-valid partial result) if the gap
// tolerance is not reached within the iteration cap.
MemResult solve_mem(const CoherentEnsemble& e, const std::array<double, 3>& priors);

// Square-root-measurement success value, optimal for the symmetric ensemble
// with equal priors: (1/9) (sqrt(mu_0) + sqrt(mu_1) + sqrt(mu_2))^2.
// Throws std::invalid_argument for unequal priors.
double srm_value(const CoherentEnsemble& e);

// Two-state minimum-error success probability
// 1/2 (1 + sqrt(1 - 4 p (1-p) k^2)) for overlap modulus k and prior p.
double helstrom_binary(double overlap_mod, double prior);

}  // namespace seqbound
