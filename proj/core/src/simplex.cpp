#include "seqbound/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "seqbound/tolerances.hpp"

namespace seqbound {

namespace {

// Dense revised simplex with an explicit basis inverse, eta updates, and
// periodic refactorization. Rows are sign-flipped up front so the artificial
// identity basis starts feasible; Bland's rule (lowest improving index) makes
// the pivot sequence deterministic and cycle-free.
class RevisedSimplex {
 public:
  RevisedSimplex(int k, int n, const double* columns, const double* col_offsets,
                 const double* rhs)
      : k_(k), n_(n), ncols_(n + k), b_(col_offsets) {
    sgn_.assign(k_, 1.0);
    c_.assign(k_, 0.0);
    for (int i = 0; i < k_; ++i) {
      sgn_[i] = rhs[i] < 0 ? -1.0 : 1.0;
      c_[i] = sgn_[i] * rhs[i];
    }
    w_.assign(static_cast<std::size_t>(k_) * ncols_, 0.0);
    for (int j = 0; j < n_; ++j) {
      const double* src = columns + static_cast<std::size_t>(j) * k_;
      double* dst = &w_[static_cast<std::size_t>(j) * k_];
      for (int i = 0; i < k_; ++i) dst[i] = sgn_[i] * src[i];
    }
    for (int i = 0; i < k_; ++i) {
      w_[static_cast<std::size_t>(n_ + i) * k_ + i] = 1.0;  // artificials
    }
  }

  LpSolution solve() {
    basis_.resize(k_);
    in_basis_.assign(ncols_, 0);
    banned_.assign(k_, 0);
    binv_.assign(static_cast<std::size_t>(k_) * k_, 0.0);
    yb_ = c_;
    for (int i = 0; i < k_; ++i) {
      basis_[i] = n_ + i;
      in_basis_[n_ + i] = 1;
      binv_[static_cast<std::size_t>(i) * k_ + i] = 1.0;
    }

    std::vector<double> obj(ncols_, 0.0);
    for (int i = 0; i < k_; ++i) obj[n_ + i] = -1.0;
    run_phase(obj);
    double infeasibility = 0;
    double cscale = 1.0;
    for (int i = 0; i < k_; ++i) cscale = std::max(cscale, c_[i]);
    for (int r = 0; r < k_; ++r) {
      if (basis_[r] >= n_) infeasibility += yb_[r];
    }
    if (infeasibility > tol::lp_feasibility * cscale) {
      throw LpError("no nonnegative combination reaches the right-hand side");
    }
    drive_out_artificials();

    std::fill(obj.begin(), obj.end(), 0.0);
    for (int j = 0; j < n_; ++j) obj[j] = b_[j];
    run_phase(obj);
    return extract(obj);
  }

 private:
  int k_, n_, ncols_;
  const double* b_;
  std::vector<double> w_;    // k x ncols column-major, rows pre-flipped
  std::vector<double> c_;    // flipped rhs, >= 0
  std::vector<double> sgn_;  // row flip signs
  std::vector<int> basis_;   // column index basic in each row
  std::vector<char> in_basis_;
  std::vector<char> banned_;  // artificials may never re-enter once out
  std::vector<double> binv_;  // k x k row-major basis inverse
  std::vector<double> yb_;    // basic variable values, kept >= 0
  int pivots_since_refactor_ = 0;
  int total_pivots_ = 0;

  const double* col(int j) const { return &w_[static_cast<std::size_t>(j) * k_]; }

  void compute_pi(std::vector<double>& pi, const std::vector<double>& obj) const {
    std::fill(pi.begin(), pi.end(), 0.0);
    for (int r = 0; r < k_; ++r) {
      const double ob = obj[basis_[r]];
      if (ob == 0) continue;
      const double* brow = &binv_[static_cast<std::size_t>(r) * k_];
      for (int i = 0; i < k_; ++i) pi[i] += ob * brow[i];
    }
  }

  // Lowest-index column with positive reduced cost; artificials start basic
  // and are banned once they leave, so only real columns are priced.
  int price(const std::vector<double>& pi, const std::vector<double>& obj) const {
    for (int j = 0; j < n_; ++j) {
      if (in_basis_[j]) continue;
      const double* wj = col(j);
      double r = obj[j];
      for (int i = 0; i < k_; ++i) r -= pi[i] * wj[i];
      if (r > tol::lp_cost) return j;
    }
    return -1;
  }

  void direction(int j, std::vector<double>& d) const {
    const double* wj = col(j);
    for (int i = 0; i < k_; ++i) {
      const double* brow = &binv_[static_cast<std::size_t>(i) * k_];
      double s = 0;
      for (int t = 0; t < k_; ++t) s += brow[t] * wj[t];
      d[i] = s;
    }
  }

  // Minimum ratio row; near-ties resolved toward the smallest basic column
  // index (Bland's leaving rule). Returns -1 on an unbounded ray.
  int ratio_test(const std::vector<double>& d) const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k_; ++i) {
      if (d[i] > tol::lp_pivot) best = std::min(best, yb_[i] / d[i]);
    }
    if (!std::isfinite(best)) return -1;
    const double tie = best + tol::lp_pivot * (1.0 + std::abs(best));
    int row = -1;
    int low = std::numeric_limits<int>::max();
    for (int i = 0; i < k_; ++i) {
      if (d[i] > tol::lp_pivot && yb_[i] / d[i] <= tie && basis_[i] < low) {
        low = basis_[i];
        row = i;
      }
    }
    return row;
  }

  void pivot(int j, int r, const std::vector<double>& d) {
    const double theta = yb_[r] / d[r];
    for (int i = 0; i < k_; ++i) yb_[i] -= theta * d[i];
    yb_[r] = theta;
    const double inv = 1.0 / d[r];
    double* rrow = &binv_[static_cast<std::size_t>(r) * k_];
    for (int t = 0; t < k_; ++t) rrow[t] *= inv;
    for (int i = 0; i < k_; ++i) {
      if (i == r || d[i] == 0) continue;
      double* irow = &binv_[static_cast<std::size_t>(i) * k_];
      const double f = d[i];
      for (int t = 0; t < k_; ++t) irow[t] -= f * rrow[t];
    }
    const int leaving = basis_[r];
    in_basis_[leaving] = 0;
    if (leaving >= n_) banned_[leaving - n_] = 1;
    basis_[r] = j;
    in_basis_[j] = 1;
    clamp_basics();
    ++total_pivots_;
    if (++pivots_since_refactor_ >= tol::lp_refactor_interval) refactor();
  }

  void clamp_basics() {
    for (int i = 0; i < k_; ++i) {
      if (yb_[i] < 0) {
        if (yb_[i] < -tol::lp_feasibility) throw LpError("lost basic feasibility");
        yb_[i] = 0;
      }
    }
  }

  // Rebuild the basis inverse by Gauss-Jordan with partial pivoting, then
  // recompute basic values against the exact right-hand side.
  void refactor() {
    const std::size_t kk = static_cast<std::size_t>(k_);
    std::vector<double> m(kk * kk), inv(kk * kk, 0.0);
    for (int cidx = 0; cidx < k_; ++cidx) {
      const double* wb = col(basis_[cidx]);
      for (int i = 0; i < k_; ++i) m[kk * i + cidx] = wb[i];
    }
    for (int i = 0; i < k_; ++i) inv[kk * i + i] = 1.0;
    for (int p = 0; p < k_; ++p) {
      int pr = p;
      double pv = std::abs(m[kk * p + p]);
      for (int i = p + 1; i < k_; ++i) {
        const double v = std::abs(m[kk * i + p]);
        if (v > pv) {
          pv = v;
          pr = i;
        }
      }
      if (pv <= 1e-30) throw LpError("singular basis");
      if (pr != p) {
        for (int t = 0; t < k_; ++t) {
          std::swap(m[kk * p + t], m[kk * pr + t]);
          std::swap(inv[kk * p + t], inv[kk * pr + t]);
        }
      }
      const double scale = 1.0 / m[kk * p + p];
      for (int t = 0; t < k_; ++t) {
        m[kk * p + t] *= scale;
        inv[kk * p + t] *= scale;
      }
      for (int i = 0; i < k_; ++i) {
        if (i == p) continue;
        const double f = m[kk * i + p];
        if (f == 0) continue;
        for (int t = 0; t < k_; ++t) {
          m[kk * i + t] -= f * m[kk * p + t];
          inv[kk * i + t] -= f * inv[kk * p + t];
        }
      }
    }
    binv_ = std::move(inv);
    for (int i = 0; i < k_; ++i) {
      const double* brow = &binv_[kk * i];
      double s = 0;
      for (int t = 0; t < k_; ++t) s += brow[t] * c_[t];
      yb_[i] = s;
    }
    clamp_basics();
    pivots_since_refactor_ = 0;
  }

  void run_phase(const std::vector<double>& obj) {
    std::vector<double> pi(k_), d(k_);
    const long cap = 50000L + 50L * static_cast<long>(ncols_);
    for (long it = 0;; ++it) {
      if (it > cap) throw LpError("simplex iteration cap exceeded");
      compute_pi(pi, obj);
      const int j = price(pi, obj);
      if (j < 0) return;
      direction(j, d);
      const int r = ratio_test(d);
      if (r < 0) throw LpError("objective unbounded above");
      pivot(j, r, d);
    }
  }

  // Swap remaining basic artificials (value ~0 after phase 1) for real
  // columns where a usable pivot exists; rows admitting none are redundant
  // equalities and keep their artificial pinned at zero with cost zero.
  void drive_out_artificials() {
    std::vector<double> d(k_);
    for (int r = 0; r < k_; ++r) {
      if (basis_[r] < n_) continue;
      int found = -1;
      const double* brow = &binv_[static_cast<std::size_t>(r) * k_];
      for (int j = 0; j < n_ && found < 0; ++j) {
        if (in_basis_[j]) continue;
        const double* wj = col(j);
        double dr = 0;
        for (int t = 0; t < k_; ++t) dr += brow[t] * wj[t];
        if (std::abs(dr) > tol::lp_feasibility) found = j;
      }
      if (found < 0) continue;
      direction(found, d);
      pivot(found, r, d);
    }
  }

  LpSolution extract(const std::vector<double>& obj) {
    LpSolution s;
    s.iterations = total_pivots_;
    s.y.assign(n_, 0.0);
    double objective = 0;
    for (int r = 0; r < k_; ++r) {
      if (basis_[r] < n_) {
        s.y[basis_[r]] = yb_[r];
        objective += b_[basis_[r]] * yb_[r];
      } else if (yb_[r] > tol::lp_feasibility) {
        throw LpError("artificial variable left positive");
      }
    }
    std::vector<double> pi(k_);
    compute_pi(pi, obj);
    s.x.assign(k_, 0.0);
    for (int i = 0; i < k_; ++i) s.x[i] = sgn_[i] * pi[i];
    s.objective = objective;
    return s;
  }
};

}  // namespace

LpSolution solve_min_free(int k, int n, const double* columns,
                          const double* col_offsets, const double* rhs) {
  if (k < 1 || n < 1) throw std::invalid_argument("solve_min_free: empty problem");
  for (int i = 0; i < k; ++i) {
    if (!std::isfinite(rhs[i])) throw std::invalid_argument("solve_min_free: non-finite rhs");
  }
  return RevisedSimplex(k, n, columns, col_offsets, rhs).solve();
}

LpSolution solve_min_free(int k, const std::vector<double>& columns,
                          const std::vector<double>& col_offsets,
                          const std::vector<double>& rhs) {
  if (k < 1 || static_cast<int>(rhs.size()) != k ||
      columns.size() != col_offsets.size() * static_cast<std::size_t>(k)) {
    throw std::invalid_argument("solve_min_free: inconsistent dimensions");
  }
  return solve_min_free(k, static_cast<int>(col_offsets.size()), columns.data(),
                        col_offsets.data(), rhs.data());
}

}  // namespace seqbound
