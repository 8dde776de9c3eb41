#pragma once

// Shared fixtures for the unit suites: deterministic random matrices, POVMs
// and priors, an independent Fock-series overlap oracle, and a brute-force
// vertex oracle that mirrors the polytope contract (triple intersections,
// determinant filter, feasibility filter, dedup).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "seqbound/ensembles.hpp"
#include "seqbound/mem.hpp"
#include "seqbound/qregion.hpp"
#include "seqbound/smallmat.hpp"

namespace testutil {

using seqbound::Complex;
using seqbound::ComplexMatrix;
using seqbound::Halfspace3;
using seqbound::HermitianMatrix;
using seqbound::Vec;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline seqbound::HermitianMatrix random_hermitian(int dim, std::mt19937_64& g) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  HermitianMatrix m(dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < r; ++c) m.set(r, c, Complex(d(g), d(g)));
    m.set(r, r, Complex(d(g), 0.0));
  }
  return m;
}

inline HermitianMatrix random_psd(int dim, std::mt19937_64& g) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ComplexMatrix a(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = Complex(d(g), d(g));
  return HermitianMatrix::hermitized(a * a.adjoint());
}

inline Vec random_unit(int dim, std::mt19937_64& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(dim);
  double n2 = 0;
  for (Complex& z : v) {
    z = Complex(d(g), d(g));
    n2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& z : v) z *= inv;
  return v;
}

inline std::array<double, 3> random_prior(std::mt19937_64& g, double floor = 0.0) {
  std::exponential_distribution<double> d(1.0);
  std::array<double, 3> p{d(g) + floor, d(g) + floor, d(g) + floor};
  const double s = p[0] + p[1] + p[2];
  for (double& v : p) v /= s;
  return p;
}

// Random valid 3-outcome POVM on dimension 3: random PSD pieces normalized
// by the inverse square root of their sum. The ridge keeps the sum
// invertible.
inline seqbound::Povm random_povm(std::mt19937_64& g) {
  std::vector<HermitianMatrix> pieces;
  HermitianMatrix total(3);
  for (int m = 0; m < 3; ++m) {
    pieces.push_back(random_psd(3, g).shifted(1e-3));
    total += pieces.back();
  }
  const ComplexMatrix w = seqbound::psd_inv_sqrt(total, 1e-14).full();
  seqbound::Povm povm;
  for (const HermitianMatrix& piece : pieces)
    povm.elements.push_back(seqbound::conjugated(w, piece));
  return povm;
}

// Coherent overlap from number-basis coefficients c_n = e^{-|a|^2/2} a^n /
// sqrt(n!), summed term by term. Independent of the closed form under test.
inline Complex fock_overlap(Complex a, Complex b, int n_max = 60) {
  const double pref = std::exp(-0.5 * (std::norm(a) + std::norm(b)));
  Complex sum(1.0, 0.0);
  Complex term(1.0, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    term *= std::conj(a) * b / double(n);
    sum += term;
  }
  return pref * sum;
}

inline double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline bool contains_point(const std::vector<std::array<double, 3>>& set,
                           const std::array<double, 3>& p, double tol) {
  for (const auto& q : set)
    if (dist3(p, q) <= tol) return true;
  return false;
}

inline bool same_point_set(const std::vector<std::array<double, 3>>& a,
                           const std::vector<std::array<double, 3>>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a)
    if (!contains_point(b, p, tol)) return false;
  for (const auto& p : b)
    if (!contains_point(a, p, tol)) return false;
  return true;
}

// All feasible triple intersections, near-degenerate triples (|det| below
// 1e-10) skipped, duplicates within 1e-7 merged. Cubic in the plane count;
// reference only.
inline std::vector<std::array<double, 3>> brute_vertices(
    const std::vector<Halfspace3>& hs, double feas_tol = 1e-7) {
  const int n = static_cast<int>(hs.size());
  std::vector<std::array<double, 3>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const auto& a = hs[i].normal;
        const auto& b = hs[j].normal;
        const auto& c = hs[k].normal;
        const double det = a[0] * (b[1] * c[2] - b[2] * c[1]) -
                           a[1] * (b[0] * c[2] - b[2] * c[0]) +
                           a[2] * (b[0] * c[1] - b[1] * c[0]);
        if (std::abs(det) < 1e-10) continue;
        const std::array<double, 3> rhs{hs[i].offset, hs[j].offset, hs[k].offset};
        std::array<double, 3> x{};
        for (int col = 0; col < 3; ++col) {
          std::array<std::array<double, 3>, 3> m{a, b, c};
          m[0][col] = rhs[0];
          m[1][col] = rhs[1];
          m[2][col] = rhs[2];
          const double d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
          x[col] = d / det;
        }
        bool feasible = true;
        for (const Halfspace3& h : hs) {
          const double lhs =
              h.normal[0] * x[0] + h.normal[1] * x[1] + h.normal[2] * x[2];
          if (lhs > h.offset + feas_tol) {
            feasible = false;
            break;
          }
        }
        if (feasible && !contains_point(out, x, 1e-7)) out.push_back(x);
      }
  return out;
}

// Box faces in the canonical order used by the polytope assembly: upper
// q_m <= 1 first, then lower -q_m <= 0.
inline std::vector<Halfspace3> box_faces() {
  std::vector<Halfspace3> faces;
  for (int m = 0; m < 3; ++m) {
    Halfspace3 h;
    h.normal[m] = 1.0;
    h.offset = 1.0;
    faces.push_back(h);
  }
  for (int m = 0; m < 3; ++m) {
    Halfspace3 h;
    h.normal[m] = -1.0;
    h.offset = 0.0;
    faces.push_back(h);
  }
  return faces;
}

// Plane sets shaped like certified supporting planes: prior-vector normals
// with offsets in (max prior, 1), so the unit points stay feasible and every
// plane clips the all-ones corner.
inline std::vector<Halfspace3> random_certified_planes(int count, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Halfspace3> planes;
  for (int i = 0; i < count; ++i) {
    const std::array<double, 3> p = random_prior(g, 0.05);
    const double top = *std::max_element(p.begin(), p.end());
    Halfspace3 h;
    h.normal = p;
    h.offset = top + 0.02 + (0.96 - top) * u(g);
    planes.push_back(h);
  }
  return planes;
}

}  // namespace testutil
