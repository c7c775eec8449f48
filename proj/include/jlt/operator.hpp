#pragma once

// Complex Jacobi operators J on l^2(Z) that differ from the free operator J0
// (a = c = 1, b = 0) on a finite window of sites:
//
//   (J u)(k) = a_{k-1} u(k-1) + b_k u(k) + c_k u(k+1).

#include <cstdint>
#include <vector>

#include "jlt/linalg.hpp"

namespace jlt {

/// Inclusive range of lattice sites.
struct SiteRange {
  std::int64_t first = 0;
  std::int64_t last = -1;

  std::size_t size() const noexcept { return last >= first ? static_cast<std::size_t>(last - first + 1) : 0; }
  bool empty() const noexcept { return last < first; }
  bool contains(std::int64_t k) const noexcept { return k >= first && k <= last; }
  bool contains(const SiteRange& r) const noexcept { return r.empty() || (contains(r.first) && contains(r.last)); }
  friend bool operator==(const SiteRange&, const SiteRange&) = default;
};

/// Finitely supported deviations (a_k - 1, b_k, c_k - 1) for k in
/// [offset, offset + width). Immutable once built.
class PerturbationSpec {
public:
  PerturbationSpec() = default;
  PerturbationSpec(std::int64_t offset, std::vector<cplx> da, std::vector<cplx> db, std::vector<cplx> dc);

  /// Single diagonal entry b_site = value.
  static PerturbationSpec diagonal(std::int64_t site, cplx value);

  std::int64_t offset() const noexcept { return offset_; }
  std::size_t width() const noexcept { return db_.size(); }
  const std::vector<cplx>& da() const noexcept { return da_; }
  const std::vector<cplx>& db() const noexcept { return db_; }
  const std::vector<cplx>& dc() const noexcept { return dc_; }

  /// Sites carrying coefficient deviations.
  SiteRange window() const noexcept {
    return {offset_, offset_ + static_cast<std::int64_t>(width()) - 1};
  }
  /// Smallest site range holding every nonzero entry of J - J0 (rows and columns).
  SiteRange support() const noexcept;

  cplx a(std::int64_t k) const noexcept { return 1.0 + deviation(da_, k); }
  cplx b(std::int64_t k) const noexcept { return deviation(db_, k); }
  cplx c(std::int64_t k) const noexcept { return 1.0 + deviation(dc_, k); }
  cplx a_minus_one(std::int64_t k) const noexcept { return deviation(da_, k); }
  cplx c_minus_one(std::int64_t k) const noexcept { return deviation(dc_, k); }

  /// Every deviation multiplied by t.
  PerturbationSpec scaled(double t) const;

  bool is_zero() const noexcept;

  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;

private:
  cplx deviation(const std::vector<cplx>& v, std::int64_t k) const noexcept {
    const std::int64_t i = k - offset_;
    return (i >= 0 && i < static_cast<std::int64_t>(v.size())) ? v[static_cast<std::size_t>(i)] : cplx{};
  }

  std::int64_t offset_ = 0;
  std::vector<cplx> da_, db_, dc_;
};

/// Nonnegative sequence indexed from `offset`.
struct RealSequence {
  std::int64_t offset = 0;
  std::vector<double> values;

  double at(std::int64_t k) const noexcept {
    const std::int64_t i = k - offset;
    return (i >= 0 && i < static_cast<std::int64_t>(values.size())) ? values[static_cast<std::size_t>(i)] : 0.0;
  }
  SiteRange range() const noexcept { return {offset, offset + static_cast<std::int64_t>(values.size()) - 1}; }
  /// Sites with nonzero entries, in increasing order.
  std::vector<std::int64_t> support() const;
};

/// d_k = max(|a_{k-1}-1|, |a_k-1|, |b_k|, |c_{k-1}-1|, |c_k-1|), stored on the
/// window widened by one site on each side.
RealSequence d_sequence(const PerturbationSpec& pert);

/// (sum |x_k|^p)^(1/p) for p >= 1.
double lp_norm(const RealSequence& seq, double p);
/// sum |x_k|^p for p >= 1.
double lp_norm_pow(const RealSequence& seq, double p);

/// J - J0 = D^{1/2} U D^{1/2}.
///
/// U is tridiagonal: U delta_k = u_minus[k] delta_{k-1} + u_zero[k] delta_k + u_plus[k] delta_{k+1}
/// with u_minus = (c_{k-1}-1)/sqrt(d_{k-1} d_k), u_zero = b_k/d_k,
/// u_plus = (a_k-1)/sqrt(d_{k+1} d_k), and 0/0 read as 1. Away from the stored
/// range every entry of U is 1.
struct FactorizationResult {
  RealSequence d_half;
  std::int64_t offset = 0;  // first site of the u arrays
  std::vector<cplx> u_minus, u_zero, u_plus;

  cplx um(std::int64_t k) const noexcept { return pick(u_minus, k); }
  cplx u0(std::int64_t k) const noexcept { return pick(u_zero, k); }
  cplx up(std::int64_t k) const noexcept { return pick(u_plus, k); }

  /// Matrix of U on `range` (row/column i corresponds to site range.first + i).
  ComplexMatrix u_block(const SiteRange& range) const;
  /// Matrix of D^{1/2} U D^{1/2} on `range`.
  ComplexMatrix reconstruct(const SiteRange& range) const;

private:
  cplx pick(const std::vector<cplx>& v, std::int64_t k) const noexcept {
    const std::int64_t i = k - offset;
    return (i >= 0 && i < static_cast<std::int64_t>(v.size())) ? v[static_cast<std::size_t>(i)] : cplx{1.0};
  }
};

FactorizationResult factorize(const PerturbationSpec& pert);

/// Finite section of J on [n_min, n_max] with Dirichlet cutoff. The section
/// must contain the perturbation support.
ComplexMatrix truncate(const PerturbationSpec& pert, std::int64_t n_min, std::int64_t n_max);

/// Finite section of J - J0 on `range` (no containment requirement).
ComplexMatrix difference_block(const PerturbationSpec& pert, const SiteRange& range);

}  // namespace jlt
