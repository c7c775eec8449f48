#include "jlt/detfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jlt {

int regularization_order(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("regularization_order: p must be positive");
  return static_cast<int>(std::ceil(p));
}

double gamma_p(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("gamma_p: p must be positive");
  if (p <= 1.0) return 1.0 / p;
  if (p == 2.0) return 0.5;
  return std::numbers::e * (2.0 + std::log(p));
}

DetContext::DetContext(PerturbationSpec pert, int reg_order) : pert_(std::move(pert)), reg_order_(reg_order) {
  if (reg_order_ < 1) throw std::invalid_argument("DetContext: regularization order must be >= 1");
  if (pert_.width() > 0) window_ = {pert_.offset() - 1, pert_.offset() + static_cast<std::int64_t>(pert_.width())};
  fact_ = factorize(pert_);
  d_support_ = fact_.d_half.support();
  delta_ = difference_block(pert_, window_);
}

DetContext DetContext::for_p(PerturbationSpec pert, double p) {
  return DetContext(std::move(pert), regularization_order(p));
}

ComplexMatrix resolvent_block_product(const DetContext& ctx, const BandPoint& bp) {
  const SiteRange& w = ctx.window_;
  const std::size_t n = w.size();
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r(i, j) = free_green(bp, w.first + static_cast<std::int64_t>(i), w.first + static_cast<std::int64_t>(j));
  return r * ctx.delta_;
}

cplx perturbation_determinant(const DetContext& ctx, cplx lambda) {
  return perturbation_determinant(ctx, inverse_joukowski(lambda));
}

cplx perturbation_determinant(const DetContext& ctx, const BandPoint& bp) {
  if (ctx.window_.empty()) return 1.0;
  const ComplexMatrix b = resolvent_block_product(ctx, bp);
  const std::size_t n = b.rows();
  cplx det = determinant(ComplexMatrix::identity(n) - b);
  if (ctx.reg_order_ > 1 && det != cplx{}) {
    cplx correction{};
    ComplexMatrix power = b;
    for (int j = 1; j < ctx.reg_order_; ++j) {
      if (j > 1) power = power * b;
      correction += power.trace() / static_cast<double>(j);
    }
    det *= std::exp(correction);
  }
  return det;
}

cplx cleared_determinant(const DetContext& ctx, cplx z) {
  const std::size_t n = ctx.window_.size();
  if (n == 0) return 1.0;
  // (1 - z^2) (lambda - J0)^{-1} has entries z^{|i-j|+1}.
  std::vector<cplx> powers(n + 1);
  powers[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) powers[k] = powers[k - 1] * z;
  const cplx w = 1.0 - z * z;
  const ComplexMatrix id = ComplexMatrix::identity(n);
  if (std::abs(w) > 0.25) {
    ComplexMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = powers[(i > j ? i - j : j - i) + 1] / w;
    return w * determinant(id - r * ctx.delta_);
  }
  // Near z = +-1 split the resolvent as (z/w) v u^T + M with v_i = z^i,
  // u_j = z^{-j} and M regular, then use det(A - v b^T) = det A - b^T adj(A) v
  // so that nothing is divided by w.
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t gap = j - i;
      cplx sum = 0.0;
      for (std::size_t k = 0; k < gap; ++k) sum += std::pow(z * z, static_cast<int>(k));
      m(i, j) = -std::pow(z, 1 - static_cast<int>(gap)) * sum;
    }
  ComplexMatrix vb(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx b = 0.0;  // (Delta^T u)_j
    for (std::size_t k = 0; k < n; ++k) b += std::pow(z, -static_cast<int>(k)) * ctx.delta_(k, j);
    for (std::size_t i = 0; i < n; ++i) vb(i, j) = powers[i] * b;
  }
  const ComplexMatrix a = id - m * ctx.delta_;
  const cplx det_a = determinant(a);
  return w * det_a - z * (det_a - determinant(a - vb));
}

ComplexMatrix G_matrix(const DetContext& ctx, cplx lambda) {
  const BandPoint bp = inverse_joukowski(lambda);
  const auto& sites = ctx.d_support();
  const auto& dh = ctx.factorization().d_half;
  const std::size_t n = sites.size();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g(i, j) = dh.at(sites[i]) * free_green(bp, sites[i], sites[j]) * dh.at(sites[j]);
  return g;
}

ComplexMatrix U_block_on_d_support(const DetContext& ctx) {
  const auto& sites = ctx.d_support();
  const auto& f = ctx.factorization();
  const std::size_t n = sites.size();
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t row = sites[i], col = sites[j];
      if (row == col) u(i, j) = f.u0(col);
      else if (row + 1 == col) u(i, j) = f.um(col);
      else if (row == col + 1) u(i, j) = f.up(col);
    }
  return u;
}

cplx determinant_via_G(const DetContext& ctx, cplx lambda) {
  const ComplexMatrix g = G_matrix(ctx, lambda);
  if (g.empty()) return 1.0;
  return regularized_det(g * U_block_on_d_support(ctx), ctx.reg_order());
}

LogBound log_g_bound(const DetContext& ctx, cplx lambda, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("log_g_bound: p must be >= 1");
  if (ctx.reg_order() != regularization_order(p))
    throw std::invalid_argument("log_g_bound: context order differs from ceil(p)");
  const cplx g = perturbation_determinant(ctx, lambda);
  const ComplexMatrix gm = G_matrix(ctx, lambda);
  const double rhs = gm.empty() ? 0.0 : gamma_p(p) * std::pow(3.0, p) * schatten_norm_pow(gm, p);
  return {std::log(std::abs(g)), rhs};
}

}  // namespace jlt
