#include "seqbound/mem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seqbound {

namespace {

// Optimal re-split of each outcome pair: for C = P_i + P_j the exchange
// maximizing tr(R_i P_i) + tr(R_j P_j) puts the positive spectral part of
// C^{1/2}(R_i - R_j)C^{1/2} on outcome i. The multiplicative update moves
// mass between outcomes at a rate proportional to the operator weights, so
// it stalls on pairs whose weights are orders of magnitude apart; this
// exchange is closed form and never decreases the objective.
void resplit_pairs(std::span<const HermitianMatrix> ops,
                   std::vector<HermitianMatrix>& povm) {
  const int n = static_cast<int>(povm.size());
  const int dim = povm.front().dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const HermitianMatrix c = povm[i] + povm[j];
      const ComplexMatrix g = psd_sqrt(c).full();
      const EigenDecomposition ed = eigh(conjugated(g, ops[i] - ops[j]));
      HermitianMatrix x(dim);
      for (int k = 0; k < dim; ++k)
        if (ed.values[k] > 0) x += HermitianMatrix::outer(ed.vectors[k]);
      povm[i] = conjugated(g, x);
      povm[j] = c - povm[i];
    }
  }
}

}  // namespace

bool is_valid_povm(const Povm& p, double tol) {
  if (p.elements.empty()) return false;
  const int dim = p.elements.front().dim();
  HermitianMatrix sum(dim);
  for (const HermitianMatrix& el : p.elements) {
    if (el.dim() != dim || !is_psd(el, tol)) return false;
    sum += el;
  }
  return (sum - HermitianMatrix::identity(dim)).frobenius_norm() <= tol;
}

WeightedMemState solve_weighted_mem(std::span<const HermitianMatrix> ops,
                                    const WeightedMemOptions& opts) {
  if (ops.empty()) throw std::invalid_argument("empty operator list");
  const int n = static_cast<int>(ops.size());
  const int dim = ops.front().dim();
  for (const HermitianMatrix& r : ops)
    if (r.dim() != dim) throw std::invalid_argument("dimension mismatch in operator list");
  if (opts.tiebreak_outcome < 0 || opts.tiebreak_outcome >= n)
    throw std::invalid_argument("tiebreak outcome out of range");

  std::vector<ComplexMatrix> r_full;
  r_full.reserve(n);
  for (const HermitianMatrix& r : ops) r_full.push_back(r.full());

  WeightedMemState st;
  st.povm.assign(n, HermitianMatrix::identity(dim).scaled(1.0 / n));

  double prev_value = 0;
  double prev_gap = std::numeric_limits<double>::infinity();
  bool ascent_mode = false;
  int noise_stalls = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    st.iterations = it;
    if (!ascent_mode) {
      // The update P_j <- S^{-1/2} R_j P_j R_j S^{-1/2} with S = sum_j R_j P_j R_j
      // is evaluated in Gram form: with M_j = R_j P_j^{1/2}, each new element is
      // (S^{-1/2} M_j)(S^{-1/2} M_j)†, positive by construction even when S is
      // nearly singular and the naive product form would amplify rounding noise
      // into eigenvalues far below zero.
      ComplexMatrix s(dim);
      std::vector<ComplexMatrix> m_fac;
      m_fac.reserve(n);
      for (int j = 0; j < n; ++j) {
        ComplexMatrix m = r_full[j] * psd_sqrt(st.povm[j]).full();
        s += m * m.adjoint();
        m_fac.push_back(std::move(m));
      }
      const ComplexMatrix isq =
          psd_inv_sqrt(HermitianMatrix::hermitized(s), tol::isqrt_rank_cutoff).full();
      HermitianMatrix t(dim);
      for (int j = 0; j < n; ++j) {
        ComplexMatrix a = isq * m_fac[j];
        st.povm[j] = HermitianMatrix::hermitized(a * a.adjoint());
        t += st.povm[j];
      }
      // In exact arithmetic the elements sum to the projector onto range(S),
      // so t has eigenvalue clusters at 1 and 0; renormalizing by t^{-1/2}
      // (the 0.5 cutoff splits the clusters) absorbs the conditioning error
      // of the inverse square root while keeping every element positive.
      const ComplexMatrix tq = psd_inv_sqrt(t, 0.5).full();
      HermitianMatrix acc(dim);
      for (int j = 0; j < n; ++j) {
        st.povm[j] = conjugated(tq, st.povm[j]);
        acc += st.povm[j];
      }
      // Completeness remainder (null space of S plus rounding) goes to the
      // designated outcome so the iterate is always an exact POVM.
      st.povm[opts.tiebreak_outcome] += HermitianMatrix::identity(dim) - acc;
    } else {
      resplit_pairs(ops, st.povm);
    }

    // Certificate: Y = herm(sum_j R_j P_j) inflated until Y >= R_j for all j.
    ComplexMatrix y(dim);
    double value = 0;
    for (int j = 0; j < n; ++j) {
      ComplexMatrix m = r_full[j] * st.povm[j].full();
      for (int i = 0; i < dim; ++i) value += m(i, i).real();
      y += m;
    }
    HermitianMatrix yh = HermitianMatrix::hermitized(y);
    double delta = 0;
    for (int j = 0; j < n; ++j)
      delta = std::max(delta, max_eig(ops[j] - yh).first);
    st.dual_y = yh.shifted(delta);
    st.value = value;
    st.certified_upper = st.dual_y.trace();
    if (st.certified_upper - st.value <= opts.gap_tol) {
      st.converged = true;
      return st;
    }
    const double gain = value - prev_value;
    if (!ascent_mode) {
      // The multiplicative step moves exchange modes at a rate set by the
      // smallest operator weights; once its per-step gain falls well below
      // the open gap, hand over to the direct pair exchanges for good.
      if (it >= 2 && gain <= 0.25 * prev_gap) ascent_mode = true;
    } else if (gain <= 1e-15 * std::max(1.0, std::abs(value))) {
      // Exchange-stationary to rounding precision twice in a row: no further
      // progress is available from either move, stop early with the
      // certificate of the final iterate.
      if (++noise_stalls >= 2) break;
    } else {
      noise_stalls = 0;
    }
    prev_value = value;
    prev_gap = st.certified_upper - st.value;
  }
  return st;
}

namespace {

int lowest_max_prior_index(const std::array<double, 3>& p) {
  int best = 0;
  for (int m = 1; m < 3; ++m)
    if (p[m] > p[best]) best = m;
  return best;
}

}  // namespace

MemResult solve_mem(const CoherentEnsemble& e, const std::array<double, 3>& priors) {
  double sum = 0;
  for (double v : priors) {
    if (!std::isfinite(v) || v < 0) throw std::invalid_argument("priors must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol::prior_sum) throw std::invalid_argument("priors must sum to 1");

  std::vector<HermitianMatrix> ops;
  ops.reserve(3);
  for (int m = 0; m < 3; ++m) ops.push_back(state_projector(e, m).scaled(priors[m]));

  WeightedMemOptions opts;
  opts.tiebreak_outcome = lowest_max_prior_index(priors);
  WeightedMemState st = solve_weighted_mem(ops, opts);

  MemResult res;
  res.priors = priors;
  res.povm.elements = std::move(st.povm);
  for (int m = 0; m < 3; ++m)
    res.q[m] = std::clamp(res.povm.elements[m].expectation(e.state_vectors[m]), 0.0, 1.0);
  res.success_value = 0;
  for (int m = 0; m < 3; ++m) res.success_value += priors[m] * res.q[m];
  res.dual_y = st.dual_y;
  res.certified_upper = st.certified_upper;
  res.iterations = st.iterations;
  res.converged = st.converged;
  if (!res.converged)
    throw MemConvergenceError("minimum-error solve missed the gap tolerance", res);
  return res;
}

double srm_value(const CoherentEnsemble& e) {
  for (int m = 1; m < 3; ++m)
    if (std::abs(e.priors[m] - e.priors[0]) > tol::prior_sum)
      throw std::invalid_argument("square-root-measurement value requires equal priors");
  const std::array<double, 3> mu = gram_eigenvalues(e);
  const double s = std::sqrt(mu[0]) + std::sqrt(mu[1]) + std::sqrt(mu[2]);
  return s * s / 9.0;
}

double helstrom_binary(double overlap_mod, double prior) {
  if (!(overlap_mod >= 0.0 && overlap_mod <= 1.0))
    throw std::invalid_argument("overlap modulus outside [0,1]");
  if (!(prior >= 0.0 && prior <= 1.0)) throw std::invalid_argument("prior outside [0,1]");
  const double disc = 1.0 - 4.0 * prior * (1.0 - prior) * overlap_mod * overlap_mod;
  return 0.5 * (1.0 + std::sqrt(std::max(0.0, disc)));
}

}  // namespace seqbound
