#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "jlt/detfun.hpp"
#include "jlt/zeros.hpp"
#include "test_support.hpp"

using namespace jlt;
using jlt::test::Rng;

namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kPi = std::numbers::pi;

AnalyticFn from_roots(std::vector<cplx> roots) {
  return [roots](cplx z) {
    cplx v = 1.0;
    for (const cplx& a : roots) v *= 1.0 - z / a;
    return v;
  };
}

AnalyticFn cleared(const PerturbationSpec& pert) {
  auto ctx = std::make_shared<DetContext>(pert, 1);
  return [ctx](cplx z) { return cleared_determinant(*ctx, z); };
}

int total(const std::vector<ZeroEstimate>& zs) {
  int m = 0;
  for (const auto& z : zs) m += z.multiplicity;
  return m;
}

}  // namespace

TEST_CASE("winding number examples") {
  const Circle unit{0.0, 1.0};
  CHECK(winding_number([](cplx z) { return z * z; }, unit) == 2);
  CHECK(winding_number([](cplx) { return cplx{1.0}; }, unit) == 0);
  CHECK(winding_number([](cplx) { return cplx{1.0}; }, Rectangle{{-1.0, -1.0}, {2.0, 0.5}}) == 0);
  CHECK(winding_number([](cplx z) { return z - 0.5; }, unit) == 1);
  CHECK(winding_number([](cplx z) { return z - 0.5; }, Rectangle{{0.0, -1.0}, {1.0, 1.0}}) == 1);
  CHECK(winding_number([](cplx z) { return z - 0.5; }, AnnularSector{0.4, 0.6, -0.1, 0.1}) == 1);
  CHECK(winding_number([](cplx z) { return z - 0.5; }, AnnularSector{0.6, 0.9, -0.1, 0.1}) == 0);
  CHECK(winding_number([](cplx z) { return 1.0 / (z - 0.5); }, unit) == -1);
  CHECK_THROWS_AS(winding_number([](cplx z) { return z - 1.0; }, unit), ZeroOnContourError);
}

TEST_CASE("contour points") {
  CHECK(std::abs(contour_point(Circle{1.0, 2.0}, 0.25) - cplx{1.0, 2.0}) <= 1e-15);
  CHECK(contour_point(Rectangle{{0.0, 0.0}, {1.0, 1.0}}, 0.0) == cplx{0.0, 0.0});
  const AnnularSector s{0.5, 1.0, 0.0, kPi / 2};
  CHECK(s.diameter() > 0.0);
  CHECK(std::abs(s.center()) > 0.5);
}

TEST_CASE("find_zeros examples") {
  auto zs = find_zeros([](cplx z) { return 1.0 - 4.0 * z * z; }, 0.01, 0.9, 1e-10);
  REQUIRE(zs.size() == 2);
  CHECK(zs[0].multiplicity == 1);
  CHECK(zs[1].multiplicity == 1);
  CHECK(jlt::test::same_multiset({zs[0].z, zs[1].z}, {0.5, -0.5}, 1e-12));

  zs = find_zeros([](cplx z) { return (1.0 - z / 0.3) * (1.0 - z / 0.3); }, 0.01, 0.9, 1e-10);
  REQUIRE(zs.size() == 1);
  CHECK(zs[0].multiplicity == 2);
  CHECK(std::abs(zs[0].z - 0.3) <= 1e-9);

  zs = find_zeros(cleared(PerturbationSpec::diagonal(0, cplx{0.0, 3.0})), 0.01, 0.99, 1e-10);
  REQUIRE(zs.size() == 1);
  CHECK(zs[0].multiplicity == 1);
  // z^{-1} - z = 3i  =>  z = -i (3 - sqrt 5) / 2
  CHECK(std::abs(zs[0].z - cplx{0.0, -(3.0 - kSqrt5) / 2.0}) <= 1e-12);
  CHECK(std::abs(zs[0].z - cplx{0.0, -0.3819660}) <= 1e-7);

  CHECK(find_zeros([](cplx z) { return std::exp(z); }, 0.01, 0.9, 1e-8).empty());
}

TEST_CASE("find_zeros reports the depth cap") {
  ZeroSearchOptions opts;
  opts.max_depth = 2;
  try {
    // Double roots are not polished by Newton, so they need the full subdivision.
    find_zeros([](cplx z) { return (1.0 - z / 0.3) * (1.0 - z / 0.3); }, 0.01, 0.9, 1e-12, opts);
    FAIL("expected ZeroSearchError");
  } catch (const ZeroSearchError& e) {
    CHECK_FALSE(e.unresolved().empty());
  }
}

TEST_CASE("find_zeros on random root sets") {
  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> roots;
    const int n = rng.integer(1, 6);
    while (static_cast<int>(roots.size()) < n) {
      const cplx a = std::polar(rng.uniform(0.1, 0.85), rng.uniform(-kPi, kPi));
      bool apart = true;
      for (const cplx& b : roots) apart = apart && std::abs(a - b) > 0.02;
      if (apart) roots.push_back(a);
    }
    const auto zs = find_zeros(from_roots(roots), 0.05, 0.9, 1e-10);
    std::vector<cplx> found;
    for (const auto& z : zs) {
      CHECK(z.multiplicity == 1);
      found.push_back(z.z);
    }
    CHECK(jlt::test::same_multiset(found, roots, 1e-9));
    for (std::size_t i = 1; i < zs.size(); ++i) CHECK(std::abs(zs[i - 1].z) <= std::abs(zs[i].z));
  }
}

TEST_CASE("counting") {
  const AnalyticFn f = [](cplx z) { return 1.0 - 4.0 * z * z; };
  CHECK(count_zeros_in_disk(f, 0.6) == 2);
  CHECK(count_zeros_in_disk(f, 0.4) == 0);
  CHECK(count_zeros_in_disk(cleared(PerturbationSpec::diagonal(0, 1.0)), 0.7) == 1);
  CHECK(count_zeros_in_disk(cleared(PerturbationSpec::diagonal(0, 1.0)), 0.6) == 0);
  CHECK_THROWS_AS(count_zeros_in_disk(f, 0.5), ZeroOnContourError);

  // Counting consistency and monotonicity in r.
  const std::vector<AnalyticFn> fns{
      f, from_roots({0.2, cplx{0.0, 0.5}, cplx{-0.7, 0.1}}), from_roots({0.3, 0.3, cplx{0.1, -0.6}}),
      [](cplx z) { return std::exp(z) * (1.0 - z / 0.6); }, [](cplx z) { return std::cos(4.0 * z); }};
  for (const auto& g : fns) {
    int prev = 0;
    for (const double r : {0.15, 0.35, 0.45, 0.55, 0.75, 0.95}) {
      const int n = count_zeros_in_disk(g, r);
      CHECK(n >= prev);
      CHECK(n == winding_number(g, Circle{0.0, r}));
      int weighted = 0;
      for (const auto& z : find_zeros(g, 1e-3, 0.99, 1e-10))
        if (std::abs(z.z) < r) weighted += z.multiplicity;
      CHECK(n == weighted);
      prev = n;
    }
  }
}

TEST_CASE("Jensen identity") {
  const AnalyticFn f = [](cplx z) { return 1.0 - 4.0 * z * z; };
  JensenResult j = jensen_check(f, 0.75);
  CHECK(j.zero_sum == doctest::Approx(2.0 * std::log(1.5)).epsilon(1e-12));
  CHECK(std::abs(j.mean_log - 0.8109302) <= 1e-7);
  CHECK(std::abs(j.zero_sum - j.mean_log) <= 1e-8);

  j = jensen_check(f, 0.25);
  CHECK(j.zero_sum == 0.0);
  CHECK(std::abs(j.mean_log) <= 1e-12);

  for (const double r : {0.2, 0.6, 0.9}) {
    j = jensen_check([](cplx z) { return std::exp(z); }, r);
    CHECK(j.zero_sum == 0.0);
    CHECK(std::abs(j.mean_log) <= 1e-12);
  }

  Rng rng(52);
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> roots;
    for (int k = rng.integer(1, 5); k > 0; --k) roots.push_back(std::polar(rng.uniform(0.1, 1.5), rng.uniform(-kPi, kPi)));
    const double r = rng.uniform(0.2, 0.95);
    double oracle = 0.0;
    bool near = false;
    for (const cplx& a : roots) {
      near = near || std::abs(std::abs(a) - r) < 0.01;
      if (std::abs(a) < r) oracle += std::log(r / std::abs(a));
    }
    if (near) continue;
    j = jensen_check(from_roots(roots), r);
    CHECK(std::abs(j.zero_sum - oracle) <= 1e-9);
    CHECK(std::abs(j.mean_log - oracle) <= 1e-8);
  }
}

TEST_CASE("Blaschke-type sums") {
  const std::vector<ZeroEstimate> half{{0.5, 1}};
  BlaschkeParams p;
  CHECK(blaschke_sum(half, p) == doctest::Approx(0.3535534).epsilon(1e-7));
  p.gamma = 2.0;
  CHECK(blaschke_sum(half, p) == doctest::Approx(1.0));
  p.gamma = 0.0;
  p.betas = {2.0};
  p.xis = {1.0};
  CHECK(blaschke_sum(half, p) == doctest::Approx(0.125));
  CHECK(blaschke_sum({}, p) == 0.0);
  CHECK(blaschke_sum({{0.5, 3}}, BlaschkeParams{}) == doctest::Approx(3.0 * 0.3535534).epsilon(1e-7));

  BlaschkeParams g;
  g.gamma = 1.0;
  CHECK(std::isinf(blaschke_sum({{0.0, 1}}, g)));
  g.gamma = 0.0;
  CHECK(std::isfinite(blaschke_sum({{0.0, 1}}, g)));

  BlaschkeParams bad;
  bad.betas = {1.0};
  CHECK_THROWS_AS(blaschke_sum(half, bad), std::invalid_argument);
  bad.xis = {cplx{0.5}};
  CHECK_THROWS_AS(blaschke_sum(half, bad), std::invalid_argument);
  CHECK_THROWS_AS(blaschke_sum({{1.5, 1}}, BlaschkeParams{}), std::invalid_argument);
}

TEST_CASE("discrete spectrum examples") {
  CHECK(discrete_spectrum(PerturbationSpec(), 2.0, 0.05).empty());

  auto s = discrete_spectrum(PerturbationSpec::diagonal(0, 1.0), 1.0, 0.05);
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s[0].lambda - kSqrt5) <= 1e-10);
  CHECK(s[0].multiplicity == 1);
  CHECK(s[0].provenance == Provenance::determinant_zero);
  CHECK(std::abs(s[0].z + 1.0 / s[0].z - s[0].lambda) <= 1e-8);

  s = discrete_spectrum(PerturbationSpec::diagonal(0, cplx{0.0, 3.0}), 2.0, 0.05);
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s[0].lambda - cplx{0.0, kSqrt5}) <= 1e-10);

  // Strong coupling: b0 = 40 pushes the preimage inside the default inner radius.
  s = discrete_spectrum(PerturbationSpec::diagonal(0, 40.0), 1.0, 0.05);
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s[0].lambda - std::sqrt(1604.0)) <= 1e-8);

  CHECK_THROWS_AS(discrete_spectrum(PerturbationSpec(), 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("spectral points are consistent") {
  Rng rng(53);
  for (int t = 0; t < 10; ++t) {
    const auto pert = rng.perturbation(4, 2.0);
    for (const auto& s : discrete_spectrum(pert, 2.0, 0.05)) {
      CHECK(s.multiplicity >= 1);
      CHECK(std::abs(s.z) < 1.0);
      CHECK(std::abs(s.z + 1.0 / s.z - s.lambda) <= 1e-8);
      CHECK(dist_to_band(s.lambda) >= 0.05);
    }
  }
}

TEST_CASE("truncated spectrum and matching") {
  auto t = truncated_spectrum(PerturbationSpec::diagonal(0, 1.0), 500, 0.05);
  REQUIRE(t.size() == 1);
  CHECK(std::abs(t[0].lambda - kSqrt5) <= 1e-10);
  CHECK(t[0].provenance == Provenance::truncated_eigensolver);
  CHECK(truncated_spectrum(PerturbationSpec(), 100, 0.05).empty());

  const auto d = discrete_spectrum(PerturbationSpec::diagonal(0, 1.0), 1.0, 0.05);
  SpectrumMatch m = match_spectra(d, t, 1e-4, 0.05);
  CHECK(m.ok);
  CHECK(m.clusters == 1);
  CHECK(m.max_deviation <= 1e-10);

  const SpectralPoint a{3.0, 0.0, 2, Provenance::determinant_zero};
  const SpectralPoint b{3.0 + 1e-6, 0.0, 1, Provenance::truncated_eigensolver};
  const SpectralPoint c{3.0 - 1e-6, 0.0, 1, Provenance::truncated_eigensolver};
  m = match_spectra({a}, {b, c}, 1e-4, 0.05);
  CHECK(m.ok);
  CHECK(m.clusters == 1);
  m = match_spectra({a}, {b}, 1e-4, 0.05);
  CHECK_FALSE(m.ok);
  CHECK_FALSE(m.issues.empty());
  // Unmatched points too close to the band are tolerated.
  const SpectralPoint near{2.01, 0.0, 1, Provenance::truncated_eigensolver};
  CHECK(match_spectra({}, {near}, 1e-4, 0.05).ok);
  CHECK_FALSE(match_spectra({}, {b}, 1e-4, 0.05).ok);
}

TEST_CASE("provenance strings") {
  for (const auto p : {Provenance::determinant_zero, Provenance::truncated_eigensolver})
    CHECK(provenance_from_string(to_string(p)) == p);
  CHECK(to_string(Provenance::determinant_zero) == "determinant-zero");
  CHECK_THROWS_AS(provenance_from_string("guess"), std::invalid_argument);
}
