#pragma once

// The regularized perturbation determinant
//
//   g(lambda) = det_n(I - (lambda - J0)^{-1} (J - J0)),   n = ceil(p),
//
// evaluated exactly on the finite block where J - J0 lives, and its second
// representation det_n(I - G(lambda) U) with G = D^{1/2} (lambda - J0)^{-1} D^{1/2}.

#include "jlt/linalg.hpp"
#include "jlt/operator.hpp"
#include "jlt/resolvent.hpp"

namespace jlt {

/// Determinant order ceil(p) for p > 0, computed on the exact input.
int regularization_order(double p);

/// Constant in |det_ceil(p)(I - C)| <= exp(Gamma_p ||C||_p^p): 1/p for p <= 1,
/// 1/2 at p = 2, and the general upper bound e (2 + log p) otherwise.
double gamma_p(double p);

class DetContext {
public:
  DetContext(PerturbationSpec pert, int reg_order);
  /// Order taken as ceil(p).
  static DetContext for_p(PerturbationSpec pert, double p);

  const PerturbationSpec& pert() const noexcept { return pert_; }
  int reg_order() const noexcept { return reg_order_; }
  /// Perturbation window widened by one site on each side.
  const SiteRange& support_window() const noexcept { return window_; }
  const FactorizationResult& factorization() const noexcept { return fact_; }
  /// Sites k with d_k > 0, increasing.
  const std::vector<std::int64_t>& d_support() const noexcept { return d_support_; }

private:
  PerturbationSpec pert_;
  int reg_order_;
  SiteRange window_;
  FactorizationResult fact_;
  std::vector<std::int64_t> d_support_;
  ComplexMatrix delta_;  // J - J0 on window_
  friend cplx perturbation_determinant(const DetContext&, const BandPoint&);
  friend ComplexMatrix resolvent_block_product(const DetContext&, const BandPoint&);
  friend cplx cleared_determinant(const DetContext&, cplx);
};

/// P (lambda - J0)^{-1} P (J - J0) P on the support window.
ComplexMatrix resolvent_block_product(const DetContext& ctx, const BandPoint& bp);

/// g(lambda): plain determinant of the block times exp(sum_{j<n} tr(B^j)/j).
cplx perturbation_determinant(const DetContext& ctx, cplx lambda);
cplx perturbation_determinant(const DetContext& ctx, const BandPoint& bp);

/// (1 - z^2) det(I - (lambda - J0)^{-1} (J - J0)) with lambda = z + 1/z.
/// The singular part of the resolvent at z = +-1 has rank one, so the factor
/// removes the only poles: the result is analytic across |z| = 1 and has the
/// zeros of g(z + 1/z) in the unit disk, with multiplicity, for every order.
cplx cleared_determinant(const DetContext& ctx, cplx z);

/// G(lambda) restricted to the support of d.
ComplexMatrix G_matrix(const DetContext& ctx, cplx lambda);

/// U restricted to the support of d (same index order as G_matrix).
ComplexMatrix U_block_on_d_support(const DetContext& ctx);

/// det_n(I - G U) through the eigenvalues of G U.
cplx determinant_via_G(const DetContext& ctx, cplx lambda);

struct LogBound {
  double lhs;  // log |g(lambda)|
  double rhs;  // Gamma_p 3^p ||G(lambda)||_{S_p}^p
};

/// Both sides of log|g| <= Gamma_p 3^p ||G||_p^p. The context order must be ceil(p).
LogBound log_g_bound(const DetContext& ctx, cplx lambda, double p);

}  // namespace jlt
