#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace seqbound {

// Optimal pair for the LP dual pairing used by the cutting-plane solvers:
//
//   minimize  c.x   over free x        maximize  b.y
//   subject to w_j . x >= b_j  (all j)  subject to sum_j y_j w_j = c, y >= 0
//
// x and y are reported together; objective = c.x = b.y at optimality.
struct LpSolution {
  std::vector<double> x;  // size k, the free minimizer
  std::vector<double> y;  // size n, nonnegative column multipliers
  double objective = 0;
  int iterations = 0;  // simplex pivots over both phases
};

struct LpError : std::runtime_error {
  explicit LpError(const std::string& what) : std::runtime_error(what) {}
};

// Two-phase dense revised simplex over the column form (right-hand problem
// above). The basis is k x k, so k is expected to stay small (<= 9 here)
// while n may reach tens of thousands of columns.
//
// columns is k x n column-major: columns[j*k + i] is component i of w_j.
// col_offsets is b (size n), rhs is c (size k). Redundant equality rows are
// detected in phase 1 and neutralized, which pins the matching component of
// x to an arbitrary consistent value. Throws LpError when the column system
// is infeasible (no y >= 0 reaches rhs) or unbounded.
LpSolution solve_min_free(int k, int n, const double* columns,
                          const double* col_offsets, const double* rhs);

LpSolution solve_min_free(int k, const std::vector<double>& columns,
                          const std::vector<double>& col_offsets,
                          const std::vector<double>& rhs);

}  // namespace seqbound
