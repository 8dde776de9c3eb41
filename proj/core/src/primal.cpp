#include "seqbound/primal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqbound/qregion.hpp"
#include "parallel.hpp"

namespace seqbound {

namespace {

std::array<double, 3> povm_q(const CoherentEnsemble& e, const Povm& p) {
  std::array<double, 3> q{};
  for (int m = 0; m < 3; ++m) {
    q[m] = p.elements[m].expectation(e.state_vectors[m]);
  }
  return q;
}

bool q_close(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  }
  return true;
}

PrimalResult from_fixed_point(const WeightedMemState& st,
                              const std::vector<HermitianMatrix>& ops) {
  PrimalResult r;
  r.alice_povm.elements = st.povm;
  r.success_value = 0;
  for (std::size_t w = 0; w < ops.size(); ++w) {
    double s = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        s += (st.povm[w](i, j) * ops[w](j, i)).real();
      }
    }
    r.success_value += s;
  }
  r.certified_upper = st.certified_upper;
  r.iterations = st.iterations;
  r.converged = st.converged;
  return r;
}

void fill_chosen(PrimalResult& r) {
  r.chosen_bob_indices.clear();
  for (std::size_t w = 0; w < r.alice_povm.elements.size(); ++w) {
    if (r.alice_povm.elements[w].trace() > 1e-6) {
      r.chosen_bob_indices.push_back(static_cast<int>(w));
    }
  }
}

}  // namespace

BobLibrary default_library(const CoherentEnsemble& e, int n, int workers) {
  if (n < 1) throw std::invalid_argument("default_library: n must be >= 1");
  const int k = static_cast<int>(
      std::floor((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0));
  const auto priors = sample_priors(std::max(1, k), SampleScheme::grid);

  std::vector<BobEntry> mem_entries(priors.size());
  detail::parallel_for(priors.size(), workers, [&](std::size_t i) {
    Povm povm;
    try {
      povm = solve_mem(e, priors[i]).povm;
    } catch (const MemConvergenceError& err) {
      // Any iterate is a valid strategy; only its q-triple matters here.
      povm = err.partial().povm;
    }
    mem_entries[i] = {std::move(povm), {}, priors[i]};
  });

  BobLibrary lib;
  const auto add = [&](BobEntry entry) {
    entry.q = povm_q(e, entry.povm);
    for (const BobEntry& kept : lib.entries) {
      if (q_close(kept.q, entry.q)) return;
    }
    lib.entries.push_back(std::move(entry));
  };
  for (BobEntry& entry : mem_entries) add(std::move(entry));
  for (int m = 0; m < 3; ++m) {
    Povm guess;
    guess.elements.assign(3, HermitianMatrix(3));
    guess.elements[m] = HermitianMatrix::identity(3);
    // One-outcome strategy: q is the unit triple e_m, priors degenerate.
    std::array<double, 3> degenerate{};
    degenerate[m] = 1.0;
    add({std::move(guess), {}, degenerate});
  }
  return lib;
}

std::vector<HermitianMatrix> effective_operators(const CoherentEnsemble& e,
                                                 const BobLibrary& lib) {
  std::vector<HermitianMatrix> ops;
  ops.reserve(lib.entries.size());
  for (const BobEntry& entry : lib.entries) {
    ops.push_back(make_constraint(e, entry.q).h);
  }
  return ops;
}

PrimalResult optimize_alice(const CoherentEnsemble& e, const BobLibrary& lib,
                            const OptimizeAliceOptions& opts) {
  if (lib.entries.empty()) {
    throw std::invalid_argument("optimize_alice: empty library");
  }
  const std::vector<HermitianMatrix> ops = effective_operators(e, lib);
  const int n = static_cast<int>(ops.size());

  WeightedMemOptions fp_opts;
  fp_opts.gap_tol = opts.gap_tol;
  fp_opts.max_iterations = opts.fixed_point_iterations;
  int tiebreak = 0;
  double top_trace = -std::numeric_limits<double>::infinity();
  for (int w = 0; w < n; ++w) {
    const double t = ops[w].trace();
    if (t > top_trace) {
      top_trace = t;
      tiebreak = w;
    }
  }
  fp_opts.tiebreak_outcome = tiebreak;
  const WeightedMemState fixed = solve_weighted_mem(ops, fp_opts);
  PrimalResult fallback = from_fixed_point(fixed, ops);
  fill_chosen(fallback);
  if (fixed.converged) return fallback;

  // Cutting-plane certification of the library optimum: solve the dual
  // min trace(Y) over {Y >= F_w}, then assemble the sender POVM from the LP
  // multipliers; every cut contributes multiplier * u u' to its source
  // operator's element, which sums to the identity by LP feasibility.
  DpOptions dp_opts;
  dp_opts.violation_tol = opts.dp_violation_tol;
  dp_opts.workers = opts.workers;
  DualSolution dual;
  try {
    dual = solve_dp_core(ops, DpMode::general, {}, dp_opts);
  } catch (const DpStallError& err) {
    fallback.certified_upper =
        std::min(fallback.certified_upper, err.best.certified());
    throw AliceConvergenceError(
        "sender optimization: cutting-plane phase stalled", fallback);
  }

  PrimalResult r;
  r.alice_povm.elements.assign(n, HermitianMatrix(3));
  HermitianMatrix structural(3);
  for (const CutRecord& cut : dual.cuts) {
    if (cut.multiplier == 0) continue;
    const HermitianMatrix term =
        HermitianMatrix::outer(cut.u).scaled(cut.multiplier);
    if (cut.source >= 0) {
      r.alice_povm.elements[cut.source] += term;
    } else {
      structural += term;
    }
  }
  // Structural-cut mass belongs to no operator; parking it on the entry
  // that values it most keeps completeness and can only raise the value.
  int park = 0;
  double park_gain = -std::numeric_limits<double>::infinity();
  for (int w = 0; w < n; ++w) {
    double g = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        g += (structural(i, j) * ops[w](j, i)).real();
      }
    }
    if (g > park_gain) {
      park_gain = g;
      park = w;
    }
  }
  r.alice_povm.elements[park] += structural;

  r.success_value = 0;
  for (int w = 0; w < n; ++w) {
    double s = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        s += (r.alice_povm.elements[w](i, j) * ops[w](j, i)).real();
      }
    }
    r.success_value += s;
  }
  r.certified_upper = dual.certified();
  r.iterations = fixed.iterations + dual.iterations;
  r.converged = (r.certified_upper - r.success_value) <= opts.gap_tol;
  fill_chosen(r);
  if (!r.converged) {
    // Keep whichever phase achieved more; both are valid lower bounds.
    PrimalResult best = r.success_value >= fallback.success_value ? r : fallback;
    best.certified_upper = std::min(r.certified_upper, fallback.certified_upper);
    throw AliceConvergenceError(
        "sender optimization: duality gap above tolerance", best);
  }
  return r;
}

}  // namespace seqbound
