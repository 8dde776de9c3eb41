#include "seqbound/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seqbound/tolerances.hpp"

namespace seqbound {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 16) throw std::invalid_argument("matrix dimension out of range [1,16]");
}

void check_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("non-finite matrix entry");
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
  check_dim(dim);
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix ComplexMatrix::scaled(Complex s) const {
  ComplexMatrix r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0;
  for (const Complex& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

Vec ComplexMatrix::apply(std::span<const Complex> v) const {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("dimension mismatch");
  Vec r(dim_);
  for (int i = 0; i < dim_; ++i) {
    Complex acc = 0;
    for (int j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[j];
    r[i] = acc;
  }
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
  const int n = a.dim_;
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

HermitianMatrix::HermitianMatrix(int dim)
    : dim_(dim), tri_(static_cast<size_t>(dim) * (dim + 1) / 2) {
  check_dim(dim);
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  HermitianMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim_; ++i) m.set(i, i, d[i]);
  return m;
}

HermitianMatrix HermitianMatrix::outer(std::span<const Complex> v) {
  HermitianMatrix m(static_cast<int>(v.size()));
  for (int r = 0; r < m.dim_; ++r)
    for (int c = 0; c <= r; ++c) m.set(r, c, v[r] * std::conj(v[c]));
  return m;
}

HermitianMatrix HermitianMatrix::hermitized(const ComplexMatrix& m) {
  HermitianMatrix h(m.dim());
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c <= r; ++c) h.set(r, c, 0.5 * (m(r, c) + std::conj(m(c, r))));
  return h;
}

Complex HermitianMatrix::operator()(int r, int c) const {
  if (r >= c) return tri_[idx(r, c)];
  return std::conj(tri_[idx(c, r)]);
}

void HermitianMatrix::set(int r, int c, Complex z) {
  check_finite(z);
  if (r == c) {
    tri_[idx(r, c)] = z.real();
  } else if (r > c) {
    tri_[idx(r, c)] = z;
  } else {
    tri_[idx(c, r)] = std::conj(z);
  }
}

double HermitianMatrix::trace() const {
  double t = 0;
  for (int i = 0; i < dim_; ++i) t += tri_[idx(i, i)].real();
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0;
  for (int r = 0; r < dim_; ++r) {
    s += std::norm(tri_[idx(r, r)]);
    for (int c = 0; c < r; ++c) s += 2.0 * std::norm(tri_[idx(r, c)]);
  }
  return std::sqrt(s);
}

ComplexMatrix HermitianMatrix::full() const {
  ComplexMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = (*this)(r, c);
  return m;
}

Vec HermitianMatrix::apply(std::span<const Complex> v) const {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("dimension mismatch");
  Vec r(dim_);
  for (int i = 0; i < dim_; ++i) {
    Complex acc = 0;
    for (int j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[j];
    r[i] = acc;
  }
  return r;
}

double HermitianMatrix::expectation(std::span<const Complex> u) const {
  Vec mu = apply(u);
  Complex acc = 0;
  for (int i = 0; i < dim_; ++i) acc += std::conj(u[i]) * mu[i];
  return acc.real();
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (size_t i = 0; i < tri_.size(); ++i) {
    tri_[i] += o.tri_[i];
    check_finite(tri_[i]);
  }
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (size_t i = 0; i < tri_.size(); ++i) {
    tri_[i] -= o.tri_[i];
    check_finite(tri_[i]);
  }
  return *this;
}

HermitianMatrix HermitianMatrix::scaled(double s) const {
  HermitianMatrix r(*this);
  for (Complex& z : r.tri_) {
    z *= s;
    check_finite(z);
  }
  return r;
}

HermitianMatrix HermitianMatrix::shifted(double c) const {
  HermitianMatrix r(*this);
  for (int i = 0; i < dim_; ++i) r.tri_[idx(i, i)] += c;
  return r;
}

namespace {

// One two-sided Jacobi rotation zeroing A(p,q). The 2x2 block
// [[a_pp, g],[conj(g), a_qq]] is phase-rotated to a real symmetric block and
// diagonalized with the stable tangent parametrization; the combined complex
// rotation J has J_pp = cos, J_pq = sin, J_qp = -sin·e^{-i phi},
// J_qq = cos·e^{-i phi} with phi = arg(g). Applied as A <- J† A J, V <- V J.
void jacobi_rotate(std::vector<Vec>& a, std::vector<Vec>& v, int p, int q) {
  const Complex g = a[p][q];
  const double absg = std::abs(g);
  if (absg == 0.0) return;
  const Complex phase = g / absg;
  const double app = a[p][p].real();
  const double aqq = a[q][q].real();
  const double tau = (aqq - app) / (2.0 * absg);
  const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex jp = c;                          // J_pp
  const Complex jq = s;                          // J_pq
  const Complex kp = -s * std::conj(phase);      // J_qp
  const Complex kq = c * std::conj(phase);       // J_qq
  const int n = static_cast<int>(a.size());
  // A <- A J on columns p, q
  for (int r = 0; r < n; ++r) {
    const Complex arp = a[r][p], arq = a[r][q];
    a[r][p] = arp * jp + arq * kp;
    a[r][q] = arp * jq + arq * kq;
  }
  // A <- J† A on rows p, q
  for (int col = 0; col < n; ++col) {
    const Complex apc = a[p][col], aqc = a[q][col];
    a[p][col] = std::conj(jp) * apc + std::conj(kp) * aqc;
    a[q][col] = std::conj(jq) * apc + std::conj(kq) * aqc;
  }
  // rounding hygiene on the pivot block
  a[p][q] = 0.0;
  a[q][p] = 0.0;
  a[p][p] = a[p][p].real();
  a[q][q] = a[q][q].real();
  // V <- V J
  for (int r = 0; r < n; ++r) {
    const Complex vrp = v[r][p], vrq = v[r][q];
    v[r][p] = vrp * jp + vrq * kp;
    v[r][q] = vrp * jq + vrq * kq;
  }
}

double offdiag_frobenius(const std::vector<Vec>& a) {
  const int n = static_cast<int>(a.size());
  double s = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (r != c) s += std::norm(a[r][c]);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& m) {
  const int n = m.dim();
  std::vector<Vec> a(n, Vec(n)), v(n, Vec(n));
  for (int r = 0; r < n; ++r) {
    v[r][r] = 1.0;
    for (int c = 0; c < n; ++c) a[r][c] = m(r, c);
  }
  const double scale = std::max(1.0, m.frobenius_norm());
  double off = offdiag_frobenius(a);
  int sweep = 0;
  while (off > tol::jacobi_offdiag * scale) {
    if (++sweep > tol::jacobi_max_sweeps)
      throw EighError("jacobi sweep cap exceeded", off);
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    off = offdiag_frobenius(a);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a[i][i].real() > a[j][j].real(); });
  EigenDecomposition d;
  d.values.reserve(n);
  d.vectors.reserve(n);
  for (int k : order) {
    d.values.push_back(a[k][k].real());
    Vec col(n);
    for (int r = 0; r < n; ++r) col[r] = v[r][k];
    d.vectors.push_back(std::move(col));
  }
  return d;
}

std::pair<double, Vec> max_eig(const HermitianMatrix& m) {
  EigenDecomposition d = eigh(m);
  return {d.values.front(), std::move(d.vectors.front())};
}

double min_eigenvalue(const HermitianMatrix& m) { return eigh(m).values.back(); }

bool is_psd(const HermitianMatrix& m, double tol) {
  if (tol < 0) throw std::invalid_argument("negative tolerance");
  return min_eigenvalue(m) >= -tol;
}

namespace {

HermitianMatrix spectral_map(const HermitianMatrix& m, double (*f)(double, double),
                             double aux) {
  EigenDecomposition d = eigh(m);
  HermitianMatrix r(m.dim());
  for (int k = 0; k < m.dim(); ++k) {
    const double w = f(d.values[k], aux);
    if (w == 0.0) continue;
    const Vec& u = d.vectors[k];
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j <= i; ++j)
        r.set(i, j, r(i, j) + w * u[i] * std::conj(u[j]));
  }
  return r;
}

}  // namespace

HermitianMatrix psd_sqrt(const HermitianMatrix& m) {
  return spectral_map(
      m, [](double lam, double) { return lam > 0.0 ? std::sqrt(lam) : 0.0; }, 0.0);
}

HermitianMatrix psd_inv_sqrt(const HermitianMatrix& m, double rel_cutoff) {
  const double top = max_eig(m).first;
  const double cut = std::max(0.0, top) * rel_cutoff;
  return spectral_map(
      m, [](double lam, double c) { return lam > c ? 1.0 / std::sqrt(lam) : 0.0; }, cut);
}

HermitianMatrix conjugated(const ComplexMatrix& s, const HermitianMatrix& m) {
  return HermitianMatrix::hermitized(s * m.full() * s.adjoint());
}

}  // namespace seqbound
