#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jlt {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Raised when the QR iteration exhausts its iteration budget.
/// `converged` holds the eigenvalues deflated before the failure.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, std::vector<cplx> converged, std::size_t active)
      : std::runtime_error(what), converged_(std::move(converged)), active_(active) {}
  const std::vector<cplx>& converged() const noexcept { return converged_; }
  std::size_t unconverged_count() const noexcept { return active_; }

private:
  std::vector<cplx> converged_;
  std::size_t active_;
};

struct EigenOptions {
  bool balance = true;
  // Total QR sweeps allowed is max_sweeps_per_row * n.
  std::size_t max_sweeps_per_row = 40;
};

/// All eigenvalues of a square matrix, with algebraic multiplicity.
///
/// Balancing, Householder reduction to upper Hessenberg form, then the
/// implicitly shifted single-shift complex QR algorithm with Wilkinson
/// shifts and an exceptional shift after every 10 iterations without
/// deflation. Order of the returned values is unspecified.
std::vector<cplx> eigenvalues(const ComplexMatrix& m, const EigenOptions& opts = {});

/// Nonincreasing singular values; length min(rows, cols).
struct SingularSpectrum {
  std::vector<double> values;
};

/// One-sided (Hestenes) Jacobi SVD, values only.
SingularSpectrum singular_values(const ComplexMatrix& m);

/// (sum mu_n^p)^(1/p); p must be positive.
double schatten_norm(const ComplexMatrix& m, double p);
/// sum mu_n^p, without the final root.
double schatten_norm_pow(const ComplexMatrix& m, double p);
double schatten_norm_pow(const SingularSpectrum& s, double p);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

/// det_n(I - m) = prod over eigenvalues mu of m of (1 - mu) exp(sum_{j<n} mu^j / j).
/// Accumulated in the log domain; an eigenvalue exactly equal to 1 gives 0.
cplx regularized_det(const ComplexMatrix& m, int n);

/// Plain determinant via LU with partial pivoting.
cplx determinant(const ComplexMatrix& m);

/// Solve a tridiagonal system; sub/diag/super have sizes n-1, n, n-1.
std::vector<cplx> solve_tridiagonal(std::span<const cplx> sub, std::span<const cplx> diag,
                                    std::span<const cplx> super, std::span<const cplx> rhs);

}  // namespace jlt
