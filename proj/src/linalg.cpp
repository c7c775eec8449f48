#include "jlt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jlt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("ComplexMatrix: shape mismatch in product");
  ComplexMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("ComplexMatrix: shape mismatch in sum");
  ComplexMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("ComplexMatrix: shape mismatch in difference");
  ComplexMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
  return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
  ComplexMatrix r = a;
  for (auto& z : r.data_) z *= s;
  return r;
}

// ---------------------------------------------------------------------------
// Eigenvalues

namespace {

// Parlett-Reinsch diagonal scaling by powers of two.
void balance(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(h(j, i));
        r += abs1(h(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) h(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) h(j, i) *= f;
      }
    }
  }
}

bool is_hessenberg(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j)
      if (h(i, j) != cplx{}) return false;
  return true;
}

// Householder reduction to upper Hessenberg form (similarity, in place).
void reduce_to_hessenberg(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3 || is_hessenberg(h)) return;
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = h(k + 1, k);
    const cplx phase = x0 == cplx{} ? cplx{1.0} : x0 / std::abs(x0);
    const cplx alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), cplx{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    if (vnorm == 0.0) continue;
    const double beta = 2.0 / vnorm;
    // Left: H <- (I - beta v v*) H
    for (std::size_t j = k; j < n; ++j) {
      cplx s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
    }
    // Right: H <- H (I - beta v v*)
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{};
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = cplx{};
  }
}

struct Givens {
  double c = 1.0;
  cplx s{};
};

// Rotation G = [[c, s], [-conj(s), c]] with G [x; y] = [r; 0].
Givens make_givens(cplx x, cplx y) {
  if (y == cplx{}) return {1.0, cplx{}};
  if (x == cplx{}) return {0.0, std::conj(y) / std::abs(y)};
  const double ax = std::abs(x);
  const double r = std::hypot(ax, std::abs(y));
  return {ax / r, (x / ax) * std::conj(y) / r};
}

// The rotations below spell out the complex products in real arithmetic; the
// library multiply carries inf/nan recovery that dominates the QR sweep.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void rotate_rows(ComplexMatrix& h, const Givens& g, std::size_t k, std::size_t j0, std::size_t j1) {
  const cplx s = g.s, sc = -std::conj(g.s);
  for (std::size_t j = j0; j <= j1; ++j) {
    const cplx a = h(k, j), b = h(k + 1, j);
    h(k, j) = g.c * a + mul(s, b);
    h(k + 1, j) = mul(sc, a) + g.c * b;
  }
}

void rotate_cols(ComplexMatrix& h, const Givens& g, std::size_t k, std::size_t i0, std::size_t i1) {
  const cplx s = std::conj(g.s), sn = -g.s;
  for (std::size_t i = i0; i <= i1; ++i) {
    const cplx a = h(i, k), b = h(i, k + 1);
    h(i, k) = a * g.c + mul(b, s);
    h(i, k + 1) = mul(a, sn) + b * g.c;
  }
}

std::pair<cplx, cplx> eig2x2(cplx a, cplx b, cplx c, cplx d) {
  const cplx half_tr = 0.5 * (a + d);
  const cplx half_diff = 0.5 * (a - d);
  const cplx disc = std::sqrt(half_diff * half_diff + b * c);
  // Larger-modulus root first, second from the determinant when safe.
  const cplx r1 = std::abs(half_tr + disc) >= std::abs(half_tr - disc) ? half_tr + disc : half_tr - disc;
  const cplx det = a * d - b * c;
  cplx r2 = half_tr + half_tr - r1;
  if (r1 != cplx{} && std::abs(det) > 0.0) {
    const cplx alt = det / r1;
    if (std::isfinite(alt.real()) && std::isfinite(alt.imag())) r2 = alt;
  }
  return {r1, r2};
}

}  // namespace

std::vector<cplx> eigenvalues(const ComplexMatrix& m, const EigenOptions& opts) {
  if (!m.square()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (!m.all_finite()) throw std::invalid_argument("eigenvalues: non-finite entry");
  const std::size_t n = m.rows();
  std::vector<cplx> w;
  w.reserve(n);
  if (n == 0) return w;
  ComplexMatrix h = m;
  if (opts.balance) balance(h);
  reduce_to_hessenberg(h);

  double hnorm = 0.0;
  for (const auto& z : h.entries()) hnorm = std::max(hnorm, abs1(z));
  const double small = std::numeric_limits<double>::min() * (static_cast<double>(n) / kEps);

  const std::size_t max_iter = opts.max_sweeps_per_row * std::max<std::size_t>(n, 1);
  std::size_t total_iter = 0;
  std::size_t stall = 0;

  // Active block is rows/cols [lo, hi]; eigenvalues beyond hi have converged.
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  while (hi >= 0) {
    const std::size_t i = static_cast<std::size_t>(hi);
    // Locate the lowest negligible subdiagonal entry.
    std::size_t lo = i;
    while (lo > 0) {
      const cplx sub = h(lo, lo - 1);
      double tst = abs1(h(lo - 1, lo - 1)) + abs1(h(lo, lo));
      if (tst == 0.0) tst = hnorm;
      if (abs1(sub) <= small || abs1(sub) <= kEps * tst) {
        h(lo, lo - 1) = cplx{};
        break;
      }
      --lo;
    }
    if (lo == i) {
      w.push_back(h(i, i));
      --hi;
      stall = 0;
      continue;
    }
    if (lo + 1 == i) {
      auto [e1, e2] = eig2x2(h(lo, lo), h(lo, i), h(i, lo), h(i, i));
      w.push_back(e1);
      w.push_back(e2);
      hi -= 2;
      stall = 0;
      continue;
    }
    if (total_iter >= max_iter) {
      throw ConvergenceError("eigenvalues: QR iteration did not converge", w, i + 1);
    }
    ++total_iter;
    ++stall;

    cplx shift;
    if (stall % 10 == 0) {
      shift = h(i, i) + 0.75 * (abs1(h(i, i - 1)) + abs1(h(i - 1, i - 2)));
    } else {
      auto [e1, e2] = eig2x2(h(i - 1, i - 1), h(i - 1, i), h(i, i - 1), h(i, i));
      shift = std::abs(e1 - h(i, i)) <= std::abs(e2 - h(i, i)) ? e1 : e2;
    }

    // Implicit single-shift QR sweep over the active block.
    Givens g = make_givens(h(lo, lo) - shift, h(lo + 1, lo));
    rotate_rows(h, g, lo, lo, i);
    rotate_cols(h, g, lo, lo, std::min(lo + 2, i));
    for (std::size_t k = lo + 1; k < i; ++k) {
      g = make_givens(h(k, k - 1), h(k + 1, k - 1));
      rotate_rows(h, g, k, k - 1, i);
      h(k + 1, k - 1) = cplx{};
      rotate_cols(h, g, k, lo, std::min(k + 2, i));
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Singular values

SingularSpectrum singular_values(const ComplexMatrix& m) {
  SingularSpectrum out;
  if (m.empty()) return out;
  // Work on columns of a tall matrix.
  const ComplexMatrix a0 = m.rows() >= m.cols() ? m : m.adjoint();
  const std::size_t rows = a0.rows();
  const std::size_t cols = a0.cols();
  // Column-major copy for cache-friendly column sweeps.
  std::vector<std::vector<cplx>> col(cols, std::vector<cplx>(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) col[j][i] = a0(i, j);

  constexpr int kMaxSweeps = 80;
  const double tol = kEps * std::sqrt(static_cast<double>(rows));
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{};
        auto& cp = col[p];
        auto& cq = col[q];
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(cp[i]);
          beta += std::norm(cq[i]);
          gamma += std::conj(cp[i]) * cq[i];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx phase = std::conj(gamma) / g;  // rotates column q so that <p, q> is real
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const cplx x = cp[i];
          const cplx y = cq[i] * phase;
          cp[i] = c * x - s * y;
          cq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  out.values.reserve(cols);
  for (const auto& c : col) {
    double s = 0.0;
    for (const auto& z : c) s += std::norm(z);
    out.values.push_back(std::sqrt(s));
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

double schatten_norm_pow(const SingularSpectrum& s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten_norm: p must be positive");
  double acc = 0.0;
  for (double mu : s.values)
    if (mu > 0.0) acc += std::pow(mu, p);
  return acc;
}

double schatten_norm_pow(const ComplexMatrix& m, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten_norm: p must be positive");
  return schatten_norm_pow(singular_values(m), p);
}

double schatten_norm(const ComplexMatrix& m, double p) {
  return std::pow(schatten_norm_pow(m, p), 1.0 / p);
}

double operator_norm(const ComplexMatrix& m) {
  const auto s = singular_values(m);
  return s.values.empty() ? 0.0 : s.values.front();
}

// ---------------------------------------------------------------------------
// Determinants

cplx regularized_det(const ComplexMatrix& m, int n) {
  if (!m.square()) throw std::invalid_argument("regularized_det: matrix must be square");
  if (n < 1) throw std::invalid_argument("regularized_det: order must be >= 1");
  cplx log_sum{};
  for (const cplx mu : eigenvalues(m)) {
    const cplx one_minus = 1.0 - mu;
    if (one_minus == cplx{}) return cplx{};
    log_sum += std::log(one_minus);
    cplx power = 1.0;
    for (int j = 1; j < n; ++j) {
      power *= mu;
      log_sum += power / static_cast<double>(j);
    }
  }
  return std::exp(log_sum);
}

cplx determinant(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("determinant: matrix must be square");
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  cplx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return cplx{};
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    const cplx pivot = a(k, k);
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / pivot;
      if (f == cplx{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

std::vector<cplx> solve_tridiagonal(std::span<const cplx> sub, std::span<const cplx> diag,
                                    std::span<const cplx> super, std::span<const cplx> rhs) {
  const std::size_t n = diag.size();
  if (rhs.size() != n || (n > 0 && (sub.size() != n - 1 || super.size() != n - 1)))
    throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
  if (n == 0) return {};
  std::vector<cplx> dl(sub.begin(), sub.end()), d(diag.begin(), diag.end()),
      du(super.begin(), super.end()), du2(n > 2 ? n - 2 : 0), b(rhs.begin(), rhs.end());
  // Gaussian elimination with partial pivoting (LAPACK gtsv layout).
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == cplx{}) throw std::domain_error("solve_tridiagonal: singular system");
      const cplx fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      if (i + 2 < n) du2[i] = cplx{};
    } else {
      const cplx fact = d[i] / dl[i];
      d[i] = dl[i];
      const cplx temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const cplx bt = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bt - fact * b[i + 1];
    }
  }
  if (d[n - 1] == cplx{}) throw std::domain_error("solve_tridiagonal: singular system");
  std::vector<cplx> x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n > 1) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t ii = n; ii-- > 2;) {
    const std::size_t i = ii - 2;
    x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  }
  return x;
}

}  // namespace jlt
