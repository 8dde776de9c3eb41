#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seqbound {

using Complex = std::complex<double>;
using Vec = std::vector<Complex>;

// Thrown when the Jacobi sweep cap is reached before the off-diagonal mass
// falls under tolerance. Carries the residual for diagnostics.
class EighError : public std::runtime_error {
 public:
  EighError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// General dense complex matrix, row-major, for small dimensions (<= 16).
// Plumbing for products and conjugations; Hermitian operators live in
// HermitianMatrix, which guarantees symmetry structurally.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int dim);
  static ComplexMatrix identity(int dim);

  int dim() const { return dim_; }
  Complex& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  Complex operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

  ComplexMatrix adjoint() const;
  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix scaled(Complex s) const;
  double frobenius_norm() const;
  Vec apply(std::span<const Complex> v) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

 private:
  int dim_;
  std::vector<Complex> a_;
};

// Hermitian matrix storing the lower triangle only; the upper triangle is
// mirrored on read and diagonal imaginary parts are dropped at write time,
// so rounding can never break Hermitian symmetry. Rejects non-finite
// entries at every write.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int dim);
  static HermitianMatrix identity(int dim);
  static HermitianMatrix diagonal(std::span<const double> d);
  // vv† for a complex vector v.
  static HermitianMatrix outer(std::span<const Complex> v);
  // (m + m†)/2, collapsing a nearly Hermitian product back onto the type.
  static HermitianMatrix hermitized(const ComplexMatrix& m);

  int dim() const { return dim_; }
  Complex operator()(int r, int c) const;
  // Writes the lower-triangle slot backing (r,c); passing r < c stores the
  // conjugate at (c,r) so (r,c) reads back as z.
  void set(int r, int c, Complex z);

  double trace() const;
  double frobenius_norm() const;
  ComplexMatrix full() const;
  Vec apply(std::span<const Complex> v) const;
  // u† M u, exactly real by symmetry.
  double expectation(std::span<const Complex> u) const;

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix scaled(double s) const;
  // m + c·I
  HermitianMatrix shifted(double c) const;

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }

 private:
  int dim_;
  std::vector<Complex> tri_;  // packed row-major lower triangle
  size_t idx(int r, int c) const { return static_cast<size_t>(r) * (r + 1) / 2 + c; }
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  std::vector<Vec> vectors;    // vectors[i] pairs with values[i]; orthonormal
};

// Full eigendecomposition by cyclic complex Jacobi rotations. Deterministic;
// throws EighError if 100 sweeps do not reach the off-diagonal tolerance.
EigenDecomposition eigh(const HermitianMatrix& m);

// Largest eigenvalue with a unit eigenvector.
std::pair<double, Vec> max_eig(const HermitianMatrix& m);

double min_eigenvalue(const HermitianMatrix& m);

// True iff the minimum eigenvalue is >= -tol.
bool is_psd(const HermitianMatrix& m, double tol);

// Spectral square root with negative eigenvalues clamped to zero.
HermitianMatrix psd_sqrt(const HermitianMatrix& m);

// Pseudo inverse square root: eigenvalues <= rel_cutoff * lambda_max are
// treated as an exact null space and mapped to zero.
HermitianMatrix psd_inv_sqrt(const HermitianMatrix& m, double rel_cutoff);

// s · m · s†
HermitianMatrix conjugated(const ComplexMatrix& s, const HermitianMatrix& m);

}  // namespace seqbound
