#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jlt/detfun.hpp"
#include "jlt/zeros.hpp"
#include "test_support.hpp"

using namespace jlt;
using jlt::test::Rng;

namespace {

const double kSqrt5 = std::sqrt(5.0);

// P (lambda - J0_N)^{-1} P (J - J0) P on the perturbation window widened by one,
// with resolvent columns from tridiagonal solves on an N-site free section.
ComplexMatrix truncated_block(const PerturbationSpec& pert, cplx lambda, std::size_t n_sites) {
  const SiteRange w{pert.offset() - 1, pert.offset() + static_cast<std::int64_t>(pert.width())};
  const std::int64_t first = w.first - static_cast<std::int64_t>(n_sites / 2);
  const std::vector<cplx> off(n_sites - 1, cplx{-1.0}), diag(n_sites, lambda);
  const std::size_t m = w.size();
  ComplexMatrix r(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<cplx> rhs(n_sites);
    rhs[static_cast<std::size_t>(w.first + static_cast<std::int64_t>(j) - first)] = 1.0;
    const auto col = solve_tridiagonal(off, diag, off, rhs);
    for (std::size_t i = 0; i < m; ++i) r(i, j) = col[static_cast<std::size_t>(w.first + static_cast<std::int64_t>(i) - first)];
  }
  return r * difference_block(pert, w);
}

}  // namespace

TEST_CASE("regularization order and Gamma_p") {
  CHECK(regularization_order(1.0) == 1);
  CHECK(regularization_order(0.3) == 1);
  CHECK(regularization_order(1.5) == 2);
  CHECK(regularization_order(2.0) == 2);
  CHECK(regularization_order(2.0000001) == 3);
  CHECK(regularization_order(3.0) == 3);
  CHECK_THROWS_AS(regularization_order(0.0), std::invalid_argument);

  CHECK(gamma_p(1.0) == 1.0);
  CHECK(gamma_p(0.5) == 2.0);
  CHECK(gamma_p(2.0) == 0.5);
  CHECK(gamma_p(3.0) == doctest::Approx(8.4227).epsilon(1e-4));
  CHECK(gamma_p(1.5) == doctest::Approx(std::exp(1.0) * (2.0 + std::log(1.5))));
  CHECK_THROWS_AS(gamma_p(0.0), std::invalid_argument);
}

TEST_CASE("context windows") {
  const DetContext ctx(PerturbationSpec(2, {0.0, 0.5}, {1.0, 0.0}, {0.0, 0.0}), 2);
  CHECK(ctx.reg_order() == 2);
  CHECK(ctx.support_window() == SiteRange{1, 4});
  CHECK(ctx.d_support() == std::vector<std::int64_t>{2, 3, 4});
  CHECK(DetContext::for_p(PerturbationSpec(), 2.5).reg_order() == 3);
  CHECK_THROWS_AS(DetContext(PerturbationSpec(), 0), std::invalid_argument);
}

TEST_CASE("perturbation determinant examples") {
  for (int n = 1; n <= 3; ++n) {
    const DetContext zero(PerturbationSpec(), n);
    CHECK(perturbation_determinant(zero, 3.0) == cplx{1.0});
    CHECK(perturbation_determinant(zero, cplx{0.1, 0.2}) == cplx{1.0});
  }
  const DetContext b1(PerturbationSpec::diagonal(0, 1.0), 1);
  CHECK(std::abs(perturbation_determinant(b1, 3.0) - (1.0 - 1.0 / kSqrt5)) <= 1e-15);
  CHECK(std::abs(perturbation_determinant(b1, 3.0) - 0.5527864) <= 1e-7);
  CHECK(std::abs(perturbation_determinant(b1, kSqrt5)) <= 1e-15);
  CHECK_THROWS_AS(perturbation_determinant(b1, 1.0), BandDomainError);
  // Order 2 adds exp(tr B) = exp(1/sqrt 5) for the 1x1 block.
  const DetContext b1_2(PerturbationSpec::diagonal(0, 1.0), 2);
  CHECK(std::abs(perturbation_determinant(b1_2, 3.0) - (1.0 - 1.0 / kSqrt5) * std::exp(1.0 / kSqrt5)) <= 1e-14);
}

TEST_CASE("finite-block determinant matches a large truncation") {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const PerturbationSpec pert = rng.perturbation(5, 1.0);
    cplx lambda;
    do lambda = {rng.uniform(-4.0, 4.0), rng.uniform(-2.0, 2.0)};
    while (dist_to_band(lambda) < 0.1);
    const ComplexMatrix oracle = truncated_block(pert, lambda, 500);
    for (int n = 1; n <= 3; ++n) {
      const cplx g = perturbation_determinant(DetContext(pert, n), lambda);
      const cplx h = regularized_det(oracle, n);
      CHECK(std::abs(g - h) <= 1e-10 * (1.0 + std::abs(h)));
    }
  }
}

TEST_CASE("G representation") {
  const DetContext b1(PerturbationSpec::diagonal(0, 1.0), 1);
  const ComplexMatrix g = G_matrix(b1, 3.0);
  REQUIRE(g.rows() == 1);
  CHECK(std::abs(g(0, 0) - 0.4472136) <= 1e-7);
  CHECK(std::abs(determinant_via_G(b1, 3.0) - 0.5527864) <= 1e-7);

  const DetContext zero(PerturbationSpec(), 2);
  CHECK(G_matrix(zero, 3.0).empty());
  CHECK(U_block_on_d_support(zero).empty());
  CHECK(determinant_via_G(zero, 3.0) == cplx{1.0});
}

TEST_CASE("representations agree") {
  Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    const PerturbationSpec pert = rng.perturbation(5, rng.uniform(0.05, 2.0));
    cplx lambda;
    do lambda = {rng.uniform(-5.0, 5.0), rng.uniform(-3.0, 3.0)};
    while (dist_to_band(lambda) < 0.02);
    const DetContext ctx(pert, rng.integer(1, 3));
    const cplx g = perturbation_determinant(ctx, lambda);
    CHECK(std::abs(g - determinant_via_G(ctx, lambda)) <= 1e-9 * (1.0 + std::abs(g)));
  }
}

TEST_CASE("g tends to one at infinity") {
  Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    const PerturbationSpec pert = rng.perturbation(5, 1.5);
    const double d1 = lp_norm(d_sequence(pert), 1.0);
    for (int n = 1; n <= 3; ++n) {
      const DetContext ctx(pert, n);
      CHECK(std::abs(perturbation_determinant(ctx, 1e6) - 1.0) <= 1e-4 * d1);
      CHECK(std::abs(perturbation_determinant(ctx, cplx{0.0, -1e6}) - 1.0) <= 1e-4 * d1);
    }
  }
}

TEST_CASE("zeros do not depend on the regularization order") {
  Rng rng(44);
  int checked = 0;
  for (int t = 0; t < 15; ++t) {
    const PerturbationSpec pert = rng.perturbation(4, 1.5);
    const DetContext c1(pert, 1), c2(pert, 2), c3(pert, 3);
    for (const auto& s : discrete_spectrum(pert, 1.0, 0.1)) {
      const double rho = 0.05 * dist_to_band(s.lambda);
      for (const auto* ctx : {&c1, &c2, &c3}) {
        const AnalyticFn g = [ctx](cplx l) { return perturbation_determinant(*ctx, l); };
        CHECK(winding_number(g, Circle{s.lambda, rho}) == s.multiplicity);
      }
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("cleared determinant") {
  Rng rng(45);
  for (int t = 0; t < 20; ++t) {
    const PerturbationSpec pert = rng.perturbation(4, 1.0);
    const DetContext ctx(pert, 1);
    const cplx z = std::polar(rng.uniform(0.05, 0.95), rng.uniform(-3.0, 3.0));
    const cplx expected = (1.0 - z * z) * perturbation_determinant(ctx, z + 1.0 / z);
    CHECK(std::abs(cleared_determinant(ctx, z) - expected) <= 1e-11 * (1.0 + std::abs(expected)));
    // Both evaluation paths agree where they meet, and the result is finite on |z| = 1.
    for (const cplx w : {std::sqrt(cplx{0.74}), std::sqrt(cplx{0.76}), std::sqrt(cplx{0.78, 0.1}), -std::sqrt(cplx{0.9, -0.05})}) {
      const cplx e = (1.0 - w * w) * perturbation_determinant(ctx, w + 1.0 / w);
      CHECK(std::abs(cleared_determinant(ctx, w) - e) <= 1e-10 * (1.0 + std::abs(e)));
    }
    for (const cplx w : {cplx{1.0}, cplx{-1.0}, std::polar(1.0, 0.7)}) {
      const cplx v = cleared_determinant(ctx, w);
      CHECK(std::isfinite(v.real()));
      CHECK(std::isfinite(v.imag()));
    }
  }
  const DetContext b1(PerturbationSpec::diagonal(0, 1.0), 1);
  CHECK(std::abs(cleared_determinant(b1, (kSqrt5 - 1.0) / 2.0)) <= 1e-15);
  CHECK(cleared_determinant(DetContext(PerturbationSpec(), 1), 0.3) == cplx{1.0});
}

TEST_CASE("log |g| bound examples") {
  const LogBound zero = log_g_bound(DetContext(PerturbationSpec(), 1), 3.0, 1.0);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  const LogBound b1 = log_g_bound(DetContext(PerturbationSpec::diagonal(0, 1.0), 1), 3.0, 1.0);
  CHECK(b1.lhs == doctest::Approx(std::log(1.0 - 1.0 / kSqrt5)));
  CHECK(b1.lhs == doctest::Approx(-0.5927).epsilon(1e-4));
  CHECK(b1.rhs == doctest::Approx(3.0 / kSqrt5));
  CHECK(b1.lhs <= b1.rhs);

  const LogBound b3i = log_g_bound(DetContext(PerturbationSpec::diagonal(0, cplx{0.0, 3.0}), 2), 3.0, 2.0);
  CHECK(b3i.rhs == doctest::Approx(0.5 * 9.0 * 9.0 / 5.0));
  CHECK(b3i.lhs <= b3i.rhs);

  CHECK_THROWS(log_g_bound(DetContext(PerturbationSpec(), 1), 3.0, 2.0));
}

TEST_CASE("log |g| bound on random samples") {
  Rng rng(46);
  for (const double p : {1.0, 2.0}) {
    for (int t = 0; t < 100; ++t) {
      const PerturbationSpec pert = rng.perturbation(5, std::pow(10.0, rng.uniform(-2.0, 0.5)));
      cplx lambda;
      do lambda = {rng.uniform(-5.0, 5.0), rng.uniform(-3.0, 3.0)};
      while (dist_to_band(lambda) < 0.01);
      const LogBound b = log_g_bound(DetContext::for_p(pert, p), lambda, p);
      CHECK(b.lhs <= b.rhs + 1e-12 * (1.0 + std::abs(b.rhs)));
    }
  }
}
