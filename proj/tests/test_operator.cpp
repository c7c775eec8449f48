#include <doctest.h>

#include <cmath>

#include "jlt/linalg.hpp"
#include "jlt/operator.hpp"
#include "test_support.hpp"

using namespace jlt;
using jlt::test::Rng;

namespace {

PerturbationSpec single_site(cplx da, cplx db, cplx dc) { return {0, {da}, {db}, {dc}}; }

// Entrywise comparison allowing a few ulps of the entry size.
bool nearly_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j) - b(i, j)) > 4e-16 * std::max(1.0, std::abs(b(i, j)))) return false;
  return true;
}

}  // namespace

TEST_CASE("perturbation spec validation and accessors") {
  CHECK_THROWS_AS(PerturbationSpec(0, {1.0}, {}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationSpec(0, {NAN}, {0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationSpec(0, {0.0}, {cplx{0.0, INFINITY}}, {0.0}), std::invalid_argument);

  const PerturbationSpec p(3, {0.5, 0.0}, {1.0, 2.0}, {0.0, cplx{0.0, 1.0}});
  CHECK(p.a(3) == cplx{1.5});
  CHECK(p.a(10) == cplx{1.0});
  CHECK(p.b(4) == cplx{2.0});
  CHECK(p.b(2) == cplx{});
  CHECK(p.c(4) == cplx{1.0, 1.0});
  CHECK(p.window() == SiteRange{3, 4});
  CHECK(p.support() == SiteRange{3, 5});
  CHECK(PerturbationSpec().is_zero());
  CHECK(PerturbationSpec().support().empty());
  CHECK(PerturbationSpec(0, {0.0}, {0.0}, {0.0}).is_zero());
}

TEST_CASE("d-sequence examples") {
  SUBCASE("b0 = 1") {
    const RealSequence d = d_sequence(PerturbationSpec::diagonal(0, 1.0));
    CHECK(d.at(0) == 1.0);
    CHECK(d.at(-1) == 0.0);
    CHECK(d.at(1) == 0.0);
    CHECK(d.support() == std::vector<std::int64_t>{0});
  }
  SUBCASE("a0 = 1.5") {
    const RealSequence d = d_sequence(single_site(0.5, 0.0, 0.0));
    CHECK(d.at(0) == 0.5);
    CHECK(d.at(1) == 0.5);
    CHECK(d.at(-1) == 0.0);
    CHECK(d.at(2) == 0.0);
  }
  SUBCASE("a0 = 2, b0 = 1, c0 = 1 + i") {
    const RealSequence d = d_sequence(single_site(1.0, 1.0, cplx{0.0, 1.0}));
    CHECK(d.at(0) == 1.0);
    CHECK(d.at(1) == 1.0);
  }
  SUBCASE("stored on the window widened by one") {
    const RealSequence d = d_sequence(PerturbationSpec(5, {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}));
    CHECK(d.range() == SiteRange{4, 7});
  }
}

TEST_CASE("lp norms") {
  CHECK(lp_norm({0, {1.0}}, 1.0) == doctest::Approx(1.0));
  CHECK(lp_norm({0, {0.5, 0.5}}, 2.0) == doctest::Approx(0.7071068));
  CHECK(lp_norm({0, {1.0, 1.0}}, 1.5) == doctest::Approx(1.5874011));
  CHECK(lp_norm_pow({0, {1.0, 2.0}}, 2.0) == doctest::Approx(5.0));
  CHECK(lp_norm({0, {}}, 2.0) == 0.0);
  CHECK_THROWS_AS(lp_norm({0, {1.0}}, 0.5), std::invalid_argument);
}

TEST_CASE("d scales linearly with the perturbation") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const PerturbationSpec p = rng.perturbation(5, 1.5);
    const double s = rng.uniform(0.01, 5.0);
    const RealSequence d = d_sequence(p), ds = d_sequence(p.scaled(s));
    REQUIRE(d.range() == ds.range());
    for (std::size_t i = 0; i < d.values.size(); ++i)
      CHECK(ds.values[i] == doctest::Approx(s * d.values[i]).epsilon(1e-15));
  }
}

TEST_CASE("d_k = 0 forces the five neighbouring deviations to vanish") {
  Rng rng(22);
  for (int t = 0; t < 30; ++t) {
    std::vector<cplx> da(6), db(6), dc(6);
    for (int k = 0; k < 6; ++k) {
      if (rng.uniform() < 0.4) da[k] = rng.disk(1.0);
      if (rng.uniform() < 0.4) db[k] = rng.disk(1.0);
      if (rng.uniform() < 0.4) dc[k] = rng.disk(1.0);
    }
    const PerturbationSpec p(0, da, db, dc);
    const RealSequence d = d_sequence(p);
    for (std::int64_t k = -2; k <= 8; ++k) {
      if (d.at(k) != 0.0) continue;
      CHECK(p.a_minus_one(k - 1) == cplx{});
      CHECK(p.a_minus_one(k) == cplx{});
      CHECK(p.b(k) == cplx{});
      CHECK(p.c_minus_one(k - 1) == cplx{});
      CHECK(p.c_minus_one(k) == cplx{});
    }
  }
}

TEST_CASE("factorization examples") {
  SUBCASE("b0 = 1") {
    const FactorizationResult f = factorize(PerturbationSpec::diagonal(0, 1.0));
    CHECK(f.d_half.at(0) == 1.0);
    CHECK(f.d_half.support() == std::vector<std::int64_t>{0});
    CHECK(f.u0(0) == cplx{1.0});
    const ComplexMatrix r = f.reconstruct({-1, 1});
    CHECK(r(1, 1) == cplx{1.0});
    CHECK(r(0, 0) == cplx{});
    CHECK(r(0, 1) == cplx{});
  }
  SUBCASE("zero perturbation") {
    const FactorizationResult f = factorize(PerturbationSpec(0, {0.0}, {0.0}, {0.0}));
    const ComplexMatrix r = f.reconstruct({-2, 2});
    for (const cplx z : r.entries()) CHECK(z == cplx{});
    for (std::int64_t k = -3; k <= 3; ++k) {
      CHECK(f.um(k) == cplx{1.0});
      CHECK(f.u0(k) == cplx{1.0});
      CHECK(f.up(k) == cplx{1.0});
    }
  }
  SUBCASE("a0 = 0.5, c0 = 1.5") {
    const PerturbationSpec p = single_site(-0.5, 0.0, 0.5);
    const FactorizationResult f = factorize(p);
    CHECK(f.d_half.at(0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(f.d_half.at(1) == doctest::Approx(std::sqrt(0.5)));
    CHECK(std::abs(f.um(1) - 1.0) <= 1e-15);
    CHECK(std::abs(f.up(0) + 1.0) <= 1e-15);
    const ComplexMatrix r = f.reconstruct({0, 1});
    CHECK(std::abs(r(1, 0) + 0.5) <= 1e-15);
    CHECK(std::abs(r(0, 1) - 0.5) <= 1e-15);
    CHECK(r(0, 0) == cplx{});
  }
}

TEST_CASE("factorization reconstructs J - J0 and has bounded entries") {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const PerturbationSpec p = rng.perturbation(6, rng.uniform(0.01, 3.0));
    const FactorizationResult f = factorize(p);
    const SiteRange range{p.offset() - 3, p.offset() + static_cast<std::int64_t>(p.width()) + 3};
    const ComplexMatrix diff = truncate(p, range.first, range.last) - truncate(PerturbationSpec(), range.first, range.last);
    CHECK(nearly_equal(f.reconstruct(range), diff));
    CHECK(nearly_equal(difference_block(p, range), diff));
    for (const auto* v : {&f.u_minus, &f.u_zero, &f.u_plus})
      for (const cplx u : *v) CHECK(std::abs(u) <= 1.0);
    CHECK(operator_norm(f.u_block(range)) <= 3.0 + 1e-9);
  }
}

TEST_CASE("truncation") {
  const ComplexMatrix free3 = truncate(PerturbationSpec(), -1, 1);
  CHECK(free3 == (ComplexMatrix{{0.0, 1.0, 0.0}, {1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}}));
  const ComplexMatrix b3 = truncate(PerturbationSpec::diagonal(0, 1.0), -1, 1);
  CHECK(b3 == (ComplexMatrix{{0.0, 1.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 1.0, 0.0}}));

  // Subdiagonal a_k at (k+1, k), superdiagonal c_k at (k, k+1).
  const ComplexMatrix ac = truncate(single_site(1.0, 0.0, 2.0), 0, 1);
  CHECK(ac(1, 0) == cplx{2.0});
  CHECK(ac(0, 1) == cplx{3.0});

  CHECK_THROWS_AS(truncate(PerturbationSpec::diagonal(5, 1.0), -1, 1), std::invalid_argument);
  CHECK_THROWS_AS(truncate(single_site(1.0, 0.0, 0.0), -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(truncate(PerturbationSpec(), 2, 1), std::invalid_argument);
}
