#include "seqbound/dpsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "seqbound/simplex.hpp"
#include "parallel.hpp"

namespace seqbound {

namespace {

int mode_dim(DpMode mode) { return mode == DpMode::symmetric ? 3 : 9; }

// Parameter layout: x[0..2] diagonal; general mode appends the off-diagonal
// parts of X(j,k) for (j,k) in (0,1),(0,2),(1,2) as re, im pairs.
HermitianMatrix assemble_x(DpMode mode, const std::vector<double>& x) {
  HermitianMatrix m(3);
  m.set(0, 0, x[0]);
  m.set(1, 1, x[1]);
  m.set(2, 2, x[2]);
  if (mode == DpMode::general) {
    m.set(0, 1, Complex(x[3], x[4]));
    m.set(0, 2, Complex(x[5], x[6]));
    m.set(1, 2, Complex(x[7], x[8]));
  }
  return m;
}

// Coefficients of u'Xu as a linear form in the parameter vector.
void cut_column(DpMode mode, const Vec& u, double* w) {
  for (int i = 0; i < 3; ++i) w[i] = std::norm(u[i]);
  if (mode == DpMode::general) {
    int at = 3;
    for (int j = 0; j < 3; ++j) {
      for (int k = j + 1; k < 3; ++k) {
        const Complex c = std::conj(u[j]) * u[k];
        w[at++] = 2.0 * c.real();
        w[at++] = -2.0 * c.imag();
      }
    }
  }
}

// Upper bound on the top eigenvalue of (h - x) by Gershgorin discs; a cheap
// prefilter that lets the scan skip bodies that cannot beat the running
// maximum.
double gershgorin_max(const HermitianMatrix& h, const HermitianMatrix& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < 3; ++r) {
    double row = (h(r, r) - x(r, r)).real();
    for (int c = 0; c < 3; ++c) {
      if (c != r) row += std::abs(h(r, c) - x(r, c));
    }
    best = std::max(best, row);
  }
  return best;
}

struct ScanOutcome {
  double max_violation = -std::numeric_limits<double>::infinity();
  int worst = -1;
  bool full = false;  // the reported maximum is exact over all bodies
};

// Bodies visited in the precomputed descending-trace order. When early exit
// is allowed the scan stops at the first violation above the threshold; a
// scan that runs to completion is exact because the prefilter only skips
// bodies bounded by the current maximum.
ScanOutcome scan_violations(const std::vector<HermitianMatrix>& constraints,
                            const std::vector<int>& order, const HermitianMatrix& x,
                            bool allow_early, double early_threshold, int workers) {
  ScanOutcome out;
  if (!allow_early && workers != 1) {
    std::vector<double> viol(constraints.size());
    detail::parallel_for(constraints.size(), workers, [&](std::size_t i) {
      HermitianMatrix d = constraints[i];
      d -= x;
      viol[i] = max_eig(d).first;
    });
    for (const int i : order) {
      if (viol[i] > out.max_violation) {
        out.max_violation = viol[i];
        out.worst = i;
      }
    }
    out.full = true;
    return out;
  }
  for (const int i : order) {
    const double bound = gershgorin_max(constraints[i], x);
    if (bound <= out.max_violation &&
        (!allow_early || bound <= early_threshold)) {
      continue;
    }
    HermitianMatrix d = constraints[i];
    d -= x;
    const double v = max_eig(d).first;
    if (v > out.max_violation) {
      out.max_violation = v;
      out.worst = i;
    }
    if (allow_early && v > early_threshold) return out;
  }
  out.full = true;
  return out;
}

}  // namespace

double DualSolution::certified() const {
  return trace_value + 3.0 * std::max(0.0, max_violation);
}

ConstraintMatrix make_constraint(const CoherentEnsemble& e,
                                 const std::array<double, 3>& q, double weight) {
  ConstraintMatrix c{q, HermitianMatrix(3)};
  for (int m = 0; m < 3; ++m) {
    HermitianMatrix proj = HermitianMatrix::outer(e.state_vectors[m]);
    c.h += proj.scaled(q[m] * weight);
  }
  return c;
}

std::vector<HermitianMatrix> build_constraints(const CoherentEnsemble& e,
                                               const VertexSet& vertices,
                                               double weight) {
  std::vector<HermitianMatrix> bodies;
  bodies.reserve(vertices.points.size());
  for (const auto& q : vertices.points) {
    bodies.push_back(make_constraint(e, q, weight).h);
  }
  return bodies;
}

DualSolution solve_dp_core(const std::vector<HermitianMatrix>& constraints,
                           DpMode mode, const std::vector<CutRecord>& seed_cuts,
                           const DpOptions& opts) {
  if (constraints.empty()) {
    throw std::invalid_argument("solve_dp_core: no constraint bodies");
  }
  const int k = mode_dim(mode);
  const std::size_t n = constraints.size();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> traces(n);
  for (std::size_t i = 0; i < n; ++i) traces[i] = constraints[i].trace();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return traces[a] > traces[b]; });

  // LP objective: trace(X) depends on the diagonal parameters only.
  std::vector<double> c_lp(k, 0.0);
  c_lp[0] = c_lp[1] = c_lp[2] = 1.0;

  std::vector<CutRecord> cuts;
  std::vector<double> w_flat;  // k per cut, column-major
  std::vector<double> offsets;
  const auto push_cut = [&](CutRecord cut) {
    w_flat.resize(w_flat.size() + k);
    cut_column(mode, cut.u, w_flat.data() + w_flat.size() - k);
    offsets.push_back(cut.offset);
    cuts.push_back(std::move(cut));
  };
  for (int i = 0; i < 3; ++i) {
    Vec e_i(3, Complex(0, 0));
    e_i[i] = Complex(1, 0);
    push_cut({-1, std::move(e_i), 0.0, 0.0});
  }
  for (const CutRecord& seed : seed_cuts) push_cut(seed);

  DualSolution best;
  double best_certified = std::numeric_limits<double>::infinity();
  double prev_obj = 3.0;  // trace at the feasible start X = identity
  int rounds_since_progress = 0;

  LpSolution lp;
  DualSolution current;
  current.mode = mode;
  for (int round = 1; round <= opts.max_rounds; ++round) {
    lp = solve_min_free(k, static_cast<int>(cuts.size()), w_flat.data(),
                        offsets.data(), c_lp.data());
    current.x = assemble_x(mode, lp.x);
    current.trace_value = current.x.trace();
    current.iterations = round;

    const bool force_full = (round % 10 == 0);
    const ScanOutcome sc =
        scan_violations(constraints, order, current.x, !force_full,
                        10.0 * opts.violation_tol, opts.workers);

    if (sc.full) {
      current.max_violation = sc.max_violation;
      if (current.certified() < best_certified) {
        best_certified = current.certified();
        best = current;
        best.cuts.clear();
      }
      if (sc.max_violation <= opts.violation_tol &&
          std::abs(current.trace_value - prev_obj) <= opts.objective_change_tol) {
        for (std::size_t j = 0; j < cuts.size(); ++j) {
          cuts[j].multiplier = lp.y[j];
        }
        current.cuts = std::move(cuts);
        return current;
      }
    }

    if (current.trace_value > prev_obj + opts.objective_change_tol) {
      rounds_since_progress = 0;
    } else if (++rounds_since_progress >= opts.stall_rounds) {
      const ScanOutcome fin = scan_violations(constraints, order, current.x,
                                              false, 0.0, opts.workers);
      current.max_violation = fin.max_violation;
      if (current.certified() < best_certified) {
        best = current;
        best.cuts.clear();
      }
      throw DpStallError("cutting-plane stall: no objective progress over " +
                             std::to_string(opts.stall_rounds) +
                             " rounds with violations above tolerance",
                         best);
    }
    prev_obj = current.trace_value;

    // Worst violator becomes a cut through its top eigenvector. Adding an
    // already-satisfied cut is harmless and lets the objective-change test
    // settle when violations are gone but the objective still moved.
    HermitianMatrix d = constraints[sc.worst];
    d -= current.x;
    Vec u = max_eig(d).second;
    const double off = constraints[sc.worst].expectation(u);
    push_cut({sc.worst, std::move(u), off, 0.0});
  }

  const ScanOutcome fin =
      scan_violations(constraints, order, current.x, false, 0.0, opts.workers);
  current.max_violation = fin.max_violation;
  if (current.certified() < best_certified) {
    best = current;
    best.cuts.clear();
  }
  throw DpStallError("cutting-plane round cap exceeded", best);
}

DualSolution solve_dp_prime(const CoherentEnsemble& e, const VertexSet& vertices,
                            DpMode mode, const DpOptions& opts) {
  if (vertices.points.empty()) {
    throw std::invalid_argument("solve_dp_prime: empty vertex set");
  }
  const std::vector<HermitianMatrix> bodies = build_constraints(e, vertices);

  // Seed with the unit-vertex constraints when those vertices are present:
  // the state vector itself is the natural test direction against
  // (1/3)|state><state|.
  std::vector<CutRecord> seeds;
  for (int m = 0; m < 3; ++m) {
    int found = -1;
    for (std::size_t i = 0; i < vertices.points.size() && found < 0; ++i) {
      double dist = 0;
      for (int j = 0; j < 3; ++j) {
        const double target = j == m ? 1.0 : 0.0;
        dist = std::max(dist, std::abs(vertices.points[i][j] - target));
      }
      if (dist <= 1e-6) found = static_cast<int>(i);
    }
    if (found < 0) continue;
    const Vec& u = e.state_vectors[m];
    seeds.push_back({found, u, bodies[found].expectation(u), 0.0});
  }
  return solve_dp_core(bodies, mode, seeds, opts);
}

double certify(const CoherentEnsemble& e, const HermitianMatrix& x,
               const VertexSet& vertices) {
  double worst = 0;
  for (const auto& q : vertices.points) {
    HermitianMatrix d = make_constraint(e, q).h;
    d -= x;
    worst = std::max(worst, max_eig(d).first);
  }
  return x.trace() + 3.0 * worst;
}

std::pair<double, double> symmetrize_check(const CoherentEnsemble& e,
                                           const VertexSet& vertices,
                                           const DpOptions& opts) {
  const DualSolution sym = solve_dp_prime(e, vertices, DpMode::symmetric, opts);
  const DualSolution gen = solve_dp_prime(e, vertices, DpMode::general, opts);
  if (std::abs(sym.trace_value - gen.trace_value) > tol::mode_defect) {
    throw SolverDefectError("symmetric and general mode disagree",
                            sym.trace_value, gen.trace_value);
  }
  return {sym.trace_value, gen.trace_value};
}

}  // namespace seqbound
