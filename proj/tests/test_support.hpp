#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "jlt/linalg.hpp"
#include "jlt/operator.hpp"

namespace jlt::test {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  cplx gauss(double sigma = 1.0) {
    std::normal_distribution<double> n(0.0, sigma / std::sqrt(2.0));
    return {n(gen_), n(gen_)};
  }
  cplx disk(double radius) { return std::polar(radius * std::sqrt(uniform()), uniform(0.0, 6.283185307179586)); }

  ComplexMatrix matrix(std::size_t rows, std::size_t cols, double sigma = 1.0) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = gauss(sigma);
    return m;
  }

  ComplexMatrix hermitian(std::size_t n) {
    const ComplexMatrix a = matrix(n, n);
    return cplx{0.5} * (a + a.adjoint());
  }

  PerturbationSpec perturbation(int max_width, double magnitude) {
    const int w = integer(1, max_width);
    std::vector<cplx> da(w), db(w), dc(w);
    for (int k = 0; k < w; ++k) {
      da[k] = disk(magnitude);
      db[k] = disk(magnitude);
      dc[k] = disk(magnitude);
    }
    return {integer(-4, 4), da, db, dc};
  }

private:
  std::mt19937_64 gen_;
};

inline bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

// Greedy matching of two multisets of complex numbers; true when every a has a
// distinct partner in b within tol.
inline bool same_multiset(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const cplx x : a) {
    std::size_t best = b.size();
    double d = tol;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (std::abs(b[j] - x) <= d) {
        d = std::abs(b[j] - x);
        best = j;
      }
    if (best == b.size()) return false;
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return true;
}

}  // namespace jlt::test
