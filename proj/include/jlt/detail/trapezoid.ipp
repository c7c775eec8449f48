#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jlt {

template <class F>
double periodic_trapezoid(F&& f, double rel_tol, std::size_t min_nodes, double abs_tol) {
  constexpr std::size_t kMaxNodes = std::size_t{1} << 20;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::size_t n = 1;
  while (n < min_nodes) n <<= 1;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += f(two_pi * static_cast<double>(i) / static_cast<double>(n));
  double estimate = sum * two_pi / static_cast<double>(n);
  while (n < kMaxNodes) {
    // Add the midpoints of the current grid.
    double mid = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      mid += f(two_pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    sum += mid;
    n <<= 1;
    const double next = sum * two_pi / static_cast<double>(n);
    if (std::abs(next - estimate) <= std::max(rel_tol * std::abs(next), abs_tol)) return next;
    estimate = next;
  }
  throw QuadratureError("periodic_trapezoid: no convergence within 2^20 nodes", estimate);
}

}  // namespace jlt
