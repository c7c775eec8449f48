#include "jlt/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "jlt/detfun.hpp"
#include "jlt/experiments.hpp"
#include "jlt/functionals.hpp"
#include "jlt/linalg.hpp"
#include "jlt/operator.hpp"
#include "jlt/parallel.hpp"
#include "jlt/resolvent.hpp"
#include "jlt/zeros.hpp"

namespace jlt {

namespace {

using Clock = std::chrono::steady_clock;
using ldouble = long double;
using lcplx = std::complex<long double>;

constexpr double kPi = std::numbers::pi;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double x) { return format_double(x); }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Relative deviation |a - b| / |b|, or |a - b| when b = 0.
template <class T>
double rel_dev(T a, T b) {
  const auto scale = std::abs(b);
  return static_cast<double>(scale > 0 ? std::abs(a - b) / scale : std::abs(a - b));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double gauss() { return std::normal_distribution<double>()(gen_); }
  cplx disk(double radius) { return std::polar(radius * std::sqrt(uniform()), uniform(0.0, 2.0 * kPi)); }
  cplx complex_gauss(double sigma) { return sigma * cplx{gauss(), gauss()} / std::numbers::sqrt2; }

private:
  std::mt19937_64 gen_;
};

std::uint64_t stream_seed(const AcceptanceOptions& o, int criterion) {
  return o.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(criterion);
}

PerturbationSpec random_perturbation(Rng& rng, int max_width, double magnitude) {
  const int w = rng.integer(1, max_width);
  std::vector<cplx> da(w), db(w), dc(w);
  for (int k = 0; k < w; ++k) {
    da[k] = rng.disk(magnitude);
    db[k] = rng.disk(magnitude);
    dc[k] = rng.disk(magnitude);
  }
  return {rng.integer(-3, 3), std::move(da), std::move(db), std::move(dc)};
}

// Real symmetric perturbation with a_k = c_k.
PerturbationSpec random_selfadjoint(Rng& rng, int max_width, double magnitude) {
  const int w = rng.integer(1, max_width);
  std::vector<cplx> da(w), db(w);
  for (int k = 0; k < w; ++k) {
    da[k] = rng.uniform(-std::min(magnitude, 0.9), magnitude);
    db[k] = rng.uniform(-magnitude, magnitude);
  }
  std::vector<cplx> dc = da;
  return {0, std::move(da), std::move(db), std::move(dc)};
}

cplx random_off_band(Rng& rng, double min_dist, double max_dist) {
  for (;;) {
    const cplx lambda{rng.uniform(-2.0 - max_dist, 2.0 + max_dist), rng.uniform(-max_dist, max_dist)};
    const double d = dist_to_band(lambda);
    if (d >= min_dist && d <= max_dist) return lambda;
  }
}

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double sigma) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_gauss(sigma);
  return m;
}

// ---- 1: Joukowski identities ----------------------------------------------

ldouble segment_distance(lcplx lambda) {
  const ldouble x = std::clamp(lambda.real(), ldouble{-2}, ldouble{2});
  return std::hypot(lambda.real() - x, lambda.imag());
}

CriterionResult joukowski_identities(const AcceptanceOptions&) {
  constexpr int kRadii = 50, kAngles = 100;
  std::vector<double> radii;
  for (int i = 0; i < kRadii; ++i) radii.push_back(1e-3 + (0.5 - 1e-3) * i / (kRadii - 1));
  // Accumulate towards the circle: 1 - r log-spaced from 0.5 down to 1e-3.
  for (int i = 1; i <= kRadii; ++i) radii.push_back(1.0 - 0.5 * std::pow(2e-3, static_cast<double>(i) / kRadii));

  double worst_bound = 0.0, worst_identity = 0.0, worst_dist = 0.0, worst_disc = 0.0;
  std::size_t points = 0, failures = 0;
  for (const double r : radii) {
    for (int k = 0; k < kAngles; ++k) {
      const cplx z = std::polar(r, 2.0 * kPi * k / kAngles);
      ++points;
      const lcplx zl(z.real(), z.imag());
      const lcplx lambda_l = zl + ldouble{1} / zl;
      const ldouble dist_l = segment_distance(lambda_l);

      // Two-sided distance bound.
      const DistanceBounds b = joukowski_distance_bounds(z);
      const double dist = static_cast<double>(dist_l);
      const double excess = std::max((b.lower - dist) / dist, (dist - b.upper) / dist);
      worst_bound = std::max(worst_bound, excess);

      // |lambda^2 - 4| = |(z^2 - 1)/z|^2, both sides in extended precision.
      const ldouble lhs = std::abs(lambda_l * lambda_l - ldouble{4});
      const ldouble rhs = std::norm((zl * zl - ldouble{1}) / zl);
      const double id_dev = rel_dev(lhs, rhs);
      worst_identity = std::max(worst_identity, id_dev);

      // Library discriminant on the double lambda against the same quantity in extended precision.
      const cplx lambda = joukowski(z);
      const lcplx ll(lambda.real(), lambda.imag());
      const double disc_dev = rel_dev(static_cast<ldouble>(band_discriminant(lambda)), std::abs(ll * ll - ldouble{4}));
      worst_disc = std::max(worst_disc, disc_dev);

      // Case formula in z against the direct segment distance.
      const double dist_dev = rel_dev(static_cast<ldouble>(dist_to_band_from_z(z)), dist_l);
      worst_dist = std::max(worst_dist, dist_dev);

      if (excess > 1e-12 || id_dev > 1e-12 || disc_dev > 1e-12 || dist_dev > 1e-12) ++failures;
    }
  }
  CriterionResult r;
  r.passed = failures == 0;
  r.detail = std::to_string(points) + " points, " + std::to_string(failures) + " failures; bound excess " +
             sci(worst_bound) + ", identity " + sci(worst_identity) + ", discriminant " + sci(worst_disc) +
             ", case-formula dist " + sci(worst_dist);
  return r;
}

// ---- 2: free Green's function against a large truncation -------------------

CriterionResult green_oracle(const AcceptanceOptions& o) {
  Rng rng(stream_seed(o, 2));
  constexpr std::size_t N = 2000;
  constexpr std::int64_t centre = N / 2, reach = 10;
  std::vector<cplx> lambdas;
  for (int i = 0; i < 50; ++i) lambdas.push_back(random_off_band(rng, 0.1, 4.0));

  std::vector<double> worst(lambdas.size(), 0.0);
  parallel_for(lambdas.size(), o.threads, [&](std::size_t i) {
    const cplx lambda = lambdas[i];
    // (lambda - J0_N) x = e_n: diagonal lambda, off-diagonals -1.
    const std::vector<cplx> off(N - 1, cplx{-1.0}), diag(N, lambda);
    for (std::int64_t n = -reach; n <= reach; ++n) {
      std::vector<cplx> rhs(N, cplx{});
      rhs[static_cast<std::size_t>(centre + n)] = 1.0;
      const std::vector<cplx> col = solve_tridiagonal(off, diag, off, rhs);
      for (std::int64_t m = -reach; m <= reach; ++m) {
        const double dev = std::abs(free_green(lambda, m, n) - col[static_cast<std::size_t>(centre + m)]);
        worst[i] = std::max(worst[i], dev);
      }
    }
  });
  const double w = *std::max_element(worst.begin(), worst.end());
  CriterionResult r;
  r.passed = w <= 1e-6;
  r.detail = "50 lambdas x 441 entries, max |G - inverse| " + sci(w);
  return r;
}

// ---- 3: determinant zeros against the truncated eigensolver ----------------

// Eigenvalue of J0 + b delta_0: z solves z^2 + b z - 1 = 0 with |z| < 1 and lambda = 2z + b.
cplx rank_one_eigenvalue(cplx b) {
  const lcplx bl(b.real(), b.imag());
  const lcplx s = std::sqrt(bl * bl + ldouble{4});
  lcplx z = (-bl + s) / ldouble{2};
  if (std::abs(z) >= 1) z = (-bl - s) / ldouble{2};
  const lcplx lambda = ldouble{2} * z + bl;
  return {static_cast<double>(lambda.real()), static_cast<double>(lambda.imag())};
}

CriterionResult spectrum_duality(const AcceptanceOptions& o) {
  constexpr double gap = 0.05, slack_gap = 0.9 * gap;
  Rng rng(stream_seed(o, 3));
  std::vector<PerturbationSpec> perts;
  for (int i = 0; i < 100; ++i) perts.push_back(random_perturbation(rng, 5, 2.0));

  struct Outcome {
    bool ok = false;
    double deviation = 0.0;
    std::size_t eigenvalues = 0;
    std::string issue;
  };
  std::vector<Outcome> out(perts.size());
  parallel_for(perts.size(), o.threads, [&](std::size_t i) {
    try {
      const auto zeros = discrete_spectrum(perts[i], 2.0, slack_gap);
      const auto eigs = truncated_spectrum(perts[i], 500, slack_gap);
      const SpectrumMatch m = match_spectra(zeros, eigs, 1e-4, gap);
      out[i].ok = m.ok;
      out[i].deviation = m.max_deviation;
      for (const auto& s : zeros) out[i].eigenvalues += static_cast<std::size_t>(s.multiplicity);
      if (!m.ok) out[i].issue = m.issues.empty() ? "mismatch" : m.issues.front();
    } catch (const std::exception& e) {
      out[i].issue = e.what();
    }
  });

  std::size_t failures = 0, total = 0;
  double worst = 0.0;
  std::string first_issue;
  for (std::size_t i = 0; i < out.size(); ++i) {
    total += out[i].eigenvalues;
    worst = std::max(worst, out[i].deviation);
    if (!out[i].ok) {
      ++failures;
      if (first_issue.empty()) first_issue = "perturbation " + std::to_string(i) + ": " + out[i].issue;
    }
  }

  // Rank-one closed forms.
  double worst_closed = 0.0;
  std::size_t closed_failures = 0;
  for (const cplx b : {cplx{0.5}, cplx{1.0}, cplx{-1.5}, cplx{3.0}, cplx{0.0, 3.0}, cplx{0.0, 2.5}, cplx{0.0, -3.0}}) {
    cplx expected = rank_one_eigenvalue(b);
    if (b.imag() == 0.0) expected = std::copysign(std::sqrt(4.0 + b.real() * b.real()), b.real());
    if (b == cplx{0.0, 3.0}) expected = {0.0, std::sqrt(5.0)};
    const auto found = discrete_spectrum(PerturbationSpec::diagonal(0, b), 2.0, 1e-3);
    if (found.size() != 1 || found[0].multiplicity != 1) {
      ++closed_failures;
      continue;
    }
    const double dev = std::abs(found[0].lambda - expected);
    worst_closed = std::max(worst_closed, dev);
    if (dev > 1e-8) ++closed_failures;
  }

  CriterionResult r;
  r.passed = failures == 0 && closed_failures == 0;
  r.detail = "100 perturbations, " + std::to_string(total) + " eigenvalues, " + std::to_string(failures) +
             " mismatches, max deviation " + sci(worst) + "; rank-one closed forms max error " + sci(worst_closed) +
             " (" + std::to_string(closed_failures) + " failures)";
  if (!first_issue.empty()) r.detail += "; " + first_issue;
  return r;
}

// ---- 4: Schatten norm of J - J0 against ||d||_p ----------------------------

CriterionResult schatten_equivalence(const AcceptanceOptions& o) {
  Rng rng(stream_seed(o, 4));
  const double ps[] = {1.0, 1.5, 2.0, 3.0};
  std::size_t failures = 0;
  double low = std::numeric_limits<double>::infinity(), high = 0.0;  // ||J - J0|| / ||d|| extremes
  for (int i = 0; i < 200; ++i) {
    const double magnitude = std::pow(10.0, rng.uniform(-2.0, 0.5));
    const PerturbationSpec pert =
        i % 2 == 0 ? random_perturbation(rng, 6, magnitude) : random_selfadjoint(rng, 6, magnitude);
    const RealSequence d = d_sequence(pert);
    const ComplexMatrix block = difference_block(pert, d.range());
    for (const double p : ps) {
      const double dn = lp_norm(d, p), sn = schatten_norm(block, p);
      low = std::min(low, sn / dn * std::pow(6.0, 1.0 / p));
      high = std::max(high, sn / dn / 3.0);
      if (!(std::pow(6.0, -1.0 / p) * dn <= sn * (1.0 + 1e-12) && sn <= 3.0 * dn * (1.0 + 1e-12))) ++failures;
    }
  }
  CriterionResult r;
  r.passed = failures == 0;
  r.detail = "800 checks, " + std::to_string(failures) + " failures; min ||J-J0||/(6^-1/p ||d||) " + num(low) +
             ", max ||J-J0||/(3 ||d||) " + num(high);
  return r;
}

// ---- 5: determinant algebra ----------------------------------------------

CriterionResult determinant_algebra(const AcceptanceOptions& o) {
  Rng rng(stream_seed(o, 5));
  std::size_t failures = 0;
  std::ostringstream detail;

  // det_n(I - AB) = det_n(I - BA) with rectangular A and B.
  double worst_comm = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto k = static_cast<std::size_t>(rng.integer(2, 10)), m = static_cast<std::size_t>(rng.integer(2, 10));
    const double sigma = rng.uniform(0.2, 1.2) / std::sqrt(static_cast<double>(std::max(k, m)));
    const ComplexMatrix a = random_matrix(rng, k, m, sigma), b = random_matrix(rng, m, k, sigma);
    for (int n = 1; n <= 3; ++n) {
      const cplx lhs = regularized_det(a * b, n), rhs = regularized_det(b * a, n);
      const double dev = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
      worst_comm = std::max(worst_comm, dev);
      if (!(dev <= 1e-9)) ++failures;
    }
  }
  detail << "commutation max rel " << sci(worst_comm);

  // |det_2(I - C)| <= exp(||C||_2^2 / 2) and |det_1(I - C)| <= exp(||C||_1), compared in logs.
  double margin1 = std::numeric_limits<double>::infinity(), margin2 = margin1;
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix c = random_matrix(rng, 20, 20, rng.uniform(0.05, 1.5) / std::sqrt(20.0));
    const double l1 = std::log(std::abs(regularized_det(c, 1))), l2 = std::log(std::abs(regularized_det(c, 2)));
    const double b1 = schatten_norm(c, 1.0), b2 = 0.5 * schatten_norm_pow(c, 2.0);
    margin1 = std::min(margin1, b1 - l1);
    margin2 = std::min(margin2, b2 - l2);
    if (!(l1 <= b1 * (1.0 + 1e-12))) ++failures;
    if (!(l2 <= b2 * (1.0 + 1e-12))) ++failures;
  }
  detail << "; det bounds min log margin n=1 " << sci(margin1) << ", n=2 " << sci(margin2);

  // Resolvent-product and G-representation of the perturbation determinant.
  double worst_rep = 0.0;
  const double ps[] = {1.0, 1.5, 2.0, 2.5, 3.0};
  for (int i = 0; i < 100; ++i) {
    const PerturbationSpec pert = random_perturbation(rng, 5, rng.uniform(0.1, 1.5));
    const cplx lambda = random_off_band(rng, 0.05, 4.0);
    const DetContext ctx = DetContext::for_p(pert, ps[i % 5]);
    const cplx g1 = perturbation_determinant(ctx, lambda), g2 = determinant_via_G(ctx, lambda);
    const double dev = std::abs(g1 - g2) / (1.0 + std::abs(g1));
    worst_rep = std::max(worst_rep, dev);
    if (!(dev <= 1e-9)) ++failures;
  }
  detail << "; representations max |g1-g2|/(1+|g1|) " << sci(worst_rep);

  CriterionResult r;
  r.passed = failures == 0;
  r.detail = std::to_string(failures) + " failures; " + detail.str();
  return r;
}

// ---- 6: log |g| bound ------------------------------------------------------

CriterionResult log_bound(const AcceptanceOptions& o) {
  Rng rng(stream_seed(o, 6));
  std::size_t failures = 0, samples = 0;
  double worst_ratio = -std::numeric_limits<double>::infinity();
  for (const double p : {1.0, 2.0}) {
    for (int i = 0; i < 100; ++i) {
      const PerturbationSpec pert = random_perturbation(rng, 5, std::pow(10.0, rng.uniform(-2.0, 0.3)));
      const cplx lambda = random_off_band(rng, 0.01, 4.0);
      const LogBound lb = log_g_bound(DetContext::for_p(pert, p), lambda, p);
      ++samples;
      if (lb.rhs > 0) worst_ratio = std::max(worst_ratio, lb.lhs / lb.rhs);
      if (!(lb.lhs <= lb.rhs + 1e-12 * (1.0 + std::abs(lb.rhs)))) ++failures;
    }
  }
  CriterionResult r;
  r.passed = failures == 0;
  r.detail = std::to_string(samples) + " samples, " + std::to_string(failures) +
             " failures; max log|g| / bound " + num(worst_ratio);
  return r;
}

// ---- 7: resolvent symbol norms -------------------------------------------

// Points at distance delta from [-2, 2], spread along the boundary of the
// delta-neighbourhood (two segments and two half circles).
cplx stadium_point(double delta, double s) {
  const double straight = 4.0, arc = kPi * delta;
  double t = s * 2.0 * (straight + arc);
  if (t < straight) return {-2.0 + t, delta};
  t -= straight;
  if (t < arc) return 2.0 + std::polar(delta, 0.5 * kPi - t / delta);
  t -= arc;
  if (t < straight) return {2.0 - t, -delta};
  t -= straight;
  return -2.0 + std::polar(delta, -0.5 * kPi - t / delta);
}

CriterionResult symbol_norms(const AcceptanceOptions& o) {
  std::size_t failures = 0;
  std::ostringstream detail;

  const double e1 = rel_dev(v_lambda_norm(3.0, 1.0), 2.0 * kPi / std::sqrt(5.0));
  const double e2 = rel_dev(v_lambda_norm_pow(3.0, 2.0), 6.0 * kPi / std::pow(5.0, 1.5));
  if (!(e1 <= 1e-9 && e2 <= 1e-9)) ++failures;
  detail << "closed forms rel err " << sci(e1) << ", " << sci(e2);

  Rng rng(stream_seed(o, 7));
  double worst_sym = 0.0;
  for (int i = 0; i < 20; ++i) {
    const cplx lambda = random_off_band(rng, 0.02, 3.0);
    for (const double p : {1.0, 1.5, 2.0, 3.0}) {
      const double v = v_lambda_norm(lambda, p);
      for (const cplx mirror : {-lambda, std::conj(lambda), -std::conj(lambda)})
        worst_sym = std::max(worst_sym, rel_dev(v_lambda_norm(mirror, p), v));
    }
  }
  if (!(worst_sym <= 1e-12)) ++failures;
  detail << "; reflection max rel " << sci(worst_sym);

  // sup of ||v||_p^p dist^{p-1} |lambda^2 - 4|^{1/2} over a 30 x 30 grid.
  constexpr int kDist = 30, kPos = 30;
  const double ps[] = {1.0, 1.5, 2.0};
  std::vector<double> sup(3 * kDist, 0.0);
  parallel_for(kDist, o.threads, [&](std::size_t i) {
    const double delta = 1e-3 * std::pow(1e4, static_cast<double>(i) / (kDist - 1));
    for (int j = 0; j < kPos; ++j) {
      const cplx lambda = stadium_point(delta, (j + 0.5) / kPos);
      const double dist = dist_to_band(lambda), disc = band_discriminant(lambda);
      for (std::size_t k = 0; k < 3; ++k) {
        const double ratio = v_lambda_norm_pow(lambda, ps[k]) * std::pow(dist, ps[k] - 1.0) * std::sqrt(disc);
        sup[3 * i + k] = std::max(sup[3 * i + k], ratio);
      }
    }
  });
  for (std::size_t k = 0; k < 3; ++k) {
    double s = 0.0;
    for (int i = 0; i < kDist; ++i) s = std::max(s, sup[3 * i + k]);
    if (!std::isfinite(s)) ++failures;
    detail << "; sup ratio p=" << num(ps[k]) << " " << num(s);
  }

  CriterionResult r;
  r.passed = failures == 0;
  r.detail = detail.str();
  return r;
}

// ---- 8: ratio behaviour on the rank-one family and domination -------------

CriterionResult ratio_behaviour(const AcceptanceOptions& o) {
  std::size_t failures = 0;
  std::ostringstream detail;
  const FunctionalSpec spec{FunctionalKind::main, 2.0, 0.5, 0.0, false};

  auto ratio_for = [&](double t, double& expected) {
    const PerturbationSpec pert = PerturbationSpec::diagonal(0, t);
    // Closed form: lambda = sqrt(4 + t^2), |lambda^2 - 4| = t^2, ||d||_2^2 = t^2.
    const double dist = t * t / (std::sqrt(4.0 + t * t) + 2.0);
    const auto eigs = discrete_spectrum(pert, 2.0, 0.5 * dist);
    expected = std::pow(dist, 2.5) / t / (t * t);
    if (eigs.size() != 1) return std::numeric_limits<double>::quiet_NaN();
    return lt_functional(eigs, spec) / lp_norm_pow(d_sequence(pert), 2.0);
  };

  double worst_rel = 0.0;
  detail << "ratios";
  for (int k = -6; k <= 3; ++k) {
    double expected = 0.0;
    const double ratio = ratio_for(std::ldexp(1.0, k), expected);
    if (!std::isfinite(ratio)) ++failures;
    worst_rel = std::max(worst_rel, rel_dev(ratio, expected));
    detail << (k == -6 ? " " : ", ") << sci(ratio);
  }
  double expected = 0.0;
  const double small = ratio_for(0.01, expected);
  if (!(small <= 1e-5)) ++failures;
  detail << "; max rel error vs closed form " << sci(worst_rel) << "; t=0.01 ratio " << sci(small) << " (closed form "
         << sci(expected) << ")";

  // Every eigenvalue of every ensemble trial satisfies dist^2 <= |lambda^2 - 4|.
  std::size_t eigenvalues = 0, violations = 0, trial_errors = 0;
  for (const auto model : {CoefficientModel::complex_general, CoefficientModel::selfadjoint_real,
                           CoefficientModel::diagonal_only}) {
    ExperimentConfig config;
    config.seed = stream_seed(o, 8);
    config.trials = 20;
    config.support_width = 4;
    config.magnitude = 1.5;
    config.coefficient_model = model;
    config.p_grid = {1.0, 2.0};
    config.truncation_size = 100;
    config.cross_check = false;
    const LTReport report = run_experiment(config, {o.threads, {}});
    for (const auto& t : report.trials) {
      if (!t.ok) ++trial_errors;
      for (const auto& s : t.spectrum) {
        ++eigenvalues;
        const double dist = dist_to_band(s.lambda);
        if (!(dist * dist <= band_discriminant(s.lambda) * (1.0 + 1e-12))) ++violations;
      }
    }
  }
  if (violations > 0 || trial_errors > 0) ++failures;
  detail << "; domination over " << eigenvalues << " ensemble eigenvalues: " << violations << " violations, "
         << trial_errors << " failed trials";

  CriterionResult r;
  r.passed = failures == 0;
  r.detail = detail.str();
  return r;
}

// ---- 9: Jensen identity and zero counting ----------------------------------

struct TestFunction {
  std::string name;
  AnalyticFn f;
  std::vector<cplx> roots;  // every zero within the unit disk, with repetition
};

AnalyticFn polynomial(std::vector<cplx> roots) {
  return [roots = std::move(roots)](cplx z) {
    cplx v = 1.0;
    for (const cplx a : roots) v *= 1.0 - z / a;
    return v;
  };
}

CriterionResult jensen_counting(const AcceptanceOptions&) {
  std::vector<TestFunction> fns;
  const std::vector<std::vector<cplx>> root_sets = {
      {0.5},
      {{0.3, 0.0}, {0.3, 0.0}},
      {{0.0, 0.5}, {0.0, -0.5}, {0.2, 0.0}},
      {{0.1, 0.6}, {0.7, 0.0}, {-0.4, -0.4}},
      {{0.4, 0.0}, {0.4, 0.0}, {0.4, 0.0}},
      {{-0.15, 0.1}, {0.35, -0.55}, {-0.8, 0.05}, {0.05, 0.85}, {0.6, 0.6}},
      {{0.55, 0.1}, {0.55, 0.1}, {-0.2, -0.7}, {1.5, 0.0}},
  };
  for (std::size_t i = 0; i < root_sets.size(); ++i) {
    std::vector<cplx> inside;
    for (const cplx a : root_sets[i])
      if (std::abs(a) < 1.0) inside.push_back(a);
    fns.push_back({"poly" + std::to_string(i), polynomial(root_sets[i]), inside});
  }
  fns.push_back({"exp-poly", [](cplx z) { return std::exp(z) * (1.0 - z / 0.6); }, {0.6}});
  fns.push_back({"cos", [](cplx z) { return std::cos(4.0 * z); }, {kPi / 8, -kPi / 8}});

  const double radii[] = {0.25, 0.45, 0.65, 0.8, 0.95};
  std::size_t failures = 0, checks = 0;
  double worst_jensen = 0.0;
  std::string first_issue;
  auto fail = [&](const std::string& what) {
    ++failures;
    if (first_issue.empty()) first_issue = what;
  };
  for (const auto& t : fns) {
    int previous = -1;
    for (const double r : radii) {
      ++checks;
      const std::string where = t.name + " r=" + num(r);
      int expected = 0;
      double zero_sum = 0.0;
      for (const cplx a : t.roots)
        if (std::abs(a) < r) {
          ++expected;
          zero_sum += std::log(r / std::abs(a));
        }
      const int counted = count_zeros_in_disk(t.f, r);
      const int wound = winding_number(t.f, Circle{0.0, r}, 200);
      int found = 0;
      for (const auto& z : find_zeros(t.f, 0.0, r, 1e-10)) found += z.multiplicity;
      if (counted != wound || counted != expected || found != expected) fail(where + ": count mismatch");
      if (counted < previous) fail(where + ": count not monotone in r");
      previous = counted;

      const JensenResult j = jensen_check(t.f, r);
      const double dev = std::max(std::abs(j.zero_sum - j.mean_log), std::abs(j.mean_log - zero_sum));
      worst_jensen = std::max(worst_jensen, dev);
      if (!(dev <= 1e-8)) fail(where + ": Jensen deviation " + sci(dev));
    }
  }
  CriterionResult r;
  r.passed = failures == 0;
  r.detail = std::to_string(fns.size()) + " functions x 5 radii, " + std::to_string(failures) +
             " failures; max Jensen deviation " + sci(worst_jensen);
  if (!first_issue.empty()) r.detail += "; " + first_issue;
  return r;
}

// ---- 10: reproducibility ---------------------------------------------------

ExperimentConfig reproducibility_config(const AcceptanceOptions& o) {
  ExperimentConfig c;
  c.seed = stream_seed(o, 10);
  c.trials = 16;
  c.support_width = 3;
  c.magnitude = 1.5;
  c.coefficient_model = CoefficientModel::complex_general;
  c.p_grid = {1.0, 1.5, 2.0, 3.0};
  c.tau_grid = {0.25, 0.5};
  c.truncation_size = 80;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (const char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

CriterionResult reproducibility(const AcceptanceOptions& o) {
  const ExperimentConfig config = reproducibility_config(o);
  const LTReport serial = run_experiment(config, {1, {}});
  const LTReport parallel = run_experiment(config, {8, {}});
  const std::string json1 = serialize_report(serial), json8 = serialize_report(parallel);
  const std::string csv1 = eigenvalue_csv(serial), csv8 = eigenvalue_csv(parallel);
  bool ok = json1 == json8 && csv1 == csv8;
  std::string detail = std::string("in-process threads 1 vs 8: ") + (ok ? "identical" : "DIFFERENT") + " (" +
                       std::to_string(json1.size()) + " bytes JSON, " + std::to_string(csv1.size()) + " bytes CSV)";

  if (!o.cli_path.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("jlt-repro-" + std::to_string(config.seed));
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << serialize_config(config);
    bool cli_ok = true;
    for (const int threads : {1, 8}) {
      const fs::path out = dir / ("t" + std::to_string(threads));
      const std::string cmd = shell_quote(o.cli_path) + " ensemble --config " + shell_quote((dir / "config.json").string()) +
                              " --threads " + std::to_string(threads) + " --out " + shell_quote(out.string()) +
                              " > /dev/null 2>&1";
      cli_ok = cli_ok && std::system(cmd.c_str()) == 0;
    }
    const std::string a = slurp(dir / "t1" / "report.json"), b = slurp(dir / "t8" / "report.json");
    const std::string ca = slurp(dir / "t1" / "eigenvalues.csv"), cb = slurp(dir / "t8" / "eigenvalues.csv");
    cli_ok = cli_ok && !a.empty() && a == b && ca == cb && a == json1 && ca == csv1;
    detail += std::string("; CLI subprocesses: ") + (cli_ok ? "identical" : "DIFFERENT");
    ok = ok && cli_ok;
    fs::remove_all(dir);
  }
  CriterionResult r;
  r.passed = ok;
  r.detail = detail;
  return r;
}

struct Criterion {
  const char* name;
  CriterionResult (*run)(const AcceptanceOptions&);
  double budget_seconds;  // 0 when no runtime limit applies
};

const Criterion kCriteria[kCriterionCount] = {
    {"joukowski-identities", joukowski_identities, 2.0},
    {"green-oracle", green_oracle, 60.0},
    {"spectrum-duality", spectrum_duality, 180.0},
    {"schatten-equivalence", schatten_equivalence, 0.0},
    {"determinant-algebra", determinant_algebra, 0.0},
    {"log-g-bound", log_bound, 0.0},
    {"symbol-norms", symbol_norms, 0.0},
    {"ratio-behaviour", ratio_behaviour, 0.0},
    {"jensen-counting", jensen_counting, 0.0},
    {"reproducibility", reproducibility, 0.0},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("run_criterion: unknown criterion " + std::to_string(id));
  const Criterion& c = kCriteria[id - 1];
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    r = c.run(opts);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.name = c.name;
  r.seconds = seconds_since(t0);
  if (c.budget_seconds > 0 && r.seconds > c.budget_seconds) {
    r.passed = false;
    r.detail += "; over the " + num(c.budget_seconds) + " s budget";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<int> ids = opts.only;
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  const auto t0 = Clock::now();
  std::vector<CriterionResult> results;
  for (const int id : ids) {
    CriterionResult r = run_criterion(id, opts);
    if (id == 10) {
      const double total = seconds_since(t0);
      r.detail += "; suite total " + num(std::round(total * 10) / 10) + " s";
      if (total > kSuiteBudgetSeconds) {
        r.passed = false;
        r.detail += " exceeds the budget";
      }
    }
    if (opts.on_result) opts.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d %-21s %9.3f s  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace jlt
