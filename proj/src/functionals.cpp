#include "jlt/functionals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jlt/resolvent.hpp"

namespace jlt {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool is_real(cplx lambda) { return std::abs(lambda.imag()) <= 1e-8 * (1.0 + std::abs(lambda)); }

}  // namespace

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::main: return "main";
    case FunctionalKind::l1: return "l1";
    case FunctionalKind::bgk: return "bgk";
    case FunctionalKind::thm4: return "thm4";
    case FunctionalKind::hs: return "hs";
    case FunctionalKind::sector_plus: return "sector_plus";
    case FunctionalKind::sector_minus: return "sector_minus";
  }
  return "?";
}

FunctionalKind functional_kind_from_string(const std::string& s) {
  for (const auto k : {FunctionalKind::main, FunctionalKind::l1, FunctionalKind::bgk, FunctionalKind::thm4,
                       FunctionalKind::hs, FunctionalKind::sector_plus, FunctionalKind::sector_minus})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown functional kind '" + s + "'");
}

void FunctionalSpec::validate() const {
  require(std::isfinite(p) && std::isfinite(tau) && std::isfinite(theta), "FunctionalSpec: non-finite parameter");
  const bool tau_open = tau > 0.0 && tau < 1.0;
  const bool tau_explore = exploratory && tau == 0.0;
  switch (kind) {
    case FunctionalKind::main:
      require(p > 1.0, "FunctionalSpec: main needs p > 1");
      require(tau_open || tau_explore, "FunctionalSpec: tau must lie in (0, 1)");
      break;
    case FunctionalKind::l1:
      require(p == 1.0, "FunctionalSpec: l1 needs p = 1");
      require(tau_open || tau_explore, "FunctionalSpec: tau must lie in (0, 1)");
      break;
    case FunctionalKind::bgk:
      require(p > 1.0, "FunctionalSpec: bgk needs p > 1");
      require(tau_open, "FunctionalSpec: tau must lie in (0, 1)");
      break;
    case FunctionalKind::thm4:
      require(p >= 1.5, "FunctionalSpec: thm4 needs p >= 3/2");
      require(tau_open || tau_explore, "FunctionalSpec: tau must lie in (0, 1)");
      break;
    case FunctionalKind::hs:
      require(p >= 1.0, "FunctionalSpec: hs needs p >= 1");
      break;
    case FunctionalKind::sector_plus:
    case FunctionalKind::sector_minus:
      require(p >= 1.5, "FunctionalSpec: sector sums need p >= 3/2");
      require(theta >= 0.0 && theta < 0.5 * std::numbers::pi, "FunctionalSpec: theta must lie in [0, pi/2)");
      break;
  }
}

double functional_term(cplx lambda, const FunctionalSpec& spec) {
  const double dist = dist_to_band(lambda);
  const double disc = band_discriminant(lambda);
  if (!(dist > 0.0)) throw std::invalid_argument("functional_term: eigenvalue on the band");
  const double p = spec.p, tau = spec.tau;
  switch (spec.kind) {
    case FunctionalKind::main: return std::pow(dist, p + tau) / std::sqrt(disc);
    case FunctionalKind::l1: return std::pow(dist, 1.0 + tau) / std::pow(disc, 0.5 + 0.25 * tau);
    case FunctionalKind::bgk: return std::pow(dist, p + 1.0 + tau) / disc;
    case FunctionalKind::thm4: return std::pow(dist, p + tau) / std::pow(disc, 0.5 + tau);
    case FunctionalKind::hs: {
      if (!is_real(lambda)) throw std::domain_error("functional_term: hs sum needs a real spectrum");
      const double x = lambda.real();
      if (x > 2.0) return std::pow(x - 2.0, p - 0.5);
      if (x < -2.0) return std::pow(-2.0 - x, p - 0.5);
      return 0.0;
    }
    case FunctionalKind::sector_plus: {
      const auto m = sector_membership(lambda, spec.theta);
      return (m == SectorMembership::plus || m == SectorMembership::both) ? std::pow(std::abs(lambda - 2.0), p - 0.5)
                                                                          : 0.0;
    }
    case FunctionalKind::sector_minus: {
      const auto m = sector_membership(lambda, spec.theta);
      return (m == SectorMembership::minus || m == SectorMembership::both) ? std::pow(std::abs(lambda + 2.0), p - 0.5)
                                                                           : 0.0;
    }
  }
  return 0.0;
}

double lt_functional(const std::vector<SpectralPoint>& eigs, const FunctionalSpec& spec) {
  spec.validate();
  double sum = 0.0;
  for (const auto& e : eigs) {
    if (e.multiplicity < 1) throw std::invalid_argument("lt_functional: multiplicity must be positive");
    sum += e.multiplicity * functional_term(e.lambda, spec);
  }
  return sum;
}

std::string to_string(SectorMembership m) {
  switch (m) {
    case SectorMembership::plus: return "plus";
    case SectorMembership::minus: return "minus";
    case SectorMembership::both: return "both";
    case SectorMembership::neither: return "neither";
  }
  return "?";
}

SectorMembership sector_membership(cplx lambda, double theta) {
  if (!(theta >= 0.0 && theta < 0.5 * std::numbers::pi))
    throw std::invalid_argument("sector_membership: theta must lie in [0, pi/2)");
  const double rhs = std::tan(theta) * std::abs(lambda.imag());
  const bool plus = 2.0 - lambda.real() < rhs;
  const bool minus = 2.0 + lambda.real() < rhs;
  if (plus && minus) return SectorMembership::both;
  if (plus) return SectorMembership::plus;
  if (minus) return SectorMembership::minus;
  return SectorMembership::neither;
}

CorollaryExponents corollary_exponents(double alpha, double beta, double tau) {
  require(alpha >= 0.0 && beta >= 0.0, "corollary_exponents: alpha and beta must be nonnegative");
  require(tau > 0.0 && tau < 1.0, "corollary_exponents: tau must lie in (0, 1)");
  const double eta1 = alpha + 1.0 + tau;
  const double eta2 = std::max(2.0 * beta + alpha - 1.0 + tau, 0.0);
  return {eta1, eta2, 0.5 * (eta1 - eta2)};
}

double corollary_sum(const std::vector<SpectralPoint>& eigs, const CorollaryExponents& e) {
  double sum = 0.0;
  for (const auto& s : eigs)
    sum += s.multiplicity * std::pow(dist_to_band(s.lambda), e.eta1) /
           std::pow(band_discriminant(s.lambda), e.band_exponent);
  return sum;
}

EmpiricalConstant empirical_constant(const std::vector<RatioSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("empirical_constant: no samples");
  EmpiricalConstant best{-1.0, {}};
  for (const auto& s : samples) {
    if (!(s.norm_pow > 0.0)) throw std::invalid_argument("empirical_constant: norms must be positive");
    if (!(s.value >= 0.0)) throw std::invalid_argument("empirical_constant: functional values must be nonnegative");
    const double r = s.value / s.norm_pow;
    if (r > best.value) best = {r, s.id};
  }
  return best;
}

std::string to_string(HalfPlaneRegion r) {
  switch (r) {
    case HalfPlaneRegion::psi1: return "psi1";
    case HalfPlaneRegion::psi2: return "psi2";
    case HalfPlaneRegion::left: return "left";
  }
  return "?";
}

HalfPlaneRegion half_plane_region(cplx lambda) {
  if (!(lambda.real() > 0.0)) return HalfPlaneRegion::left;
  return 2.0 - lambda.real() < std::abs(lambda.imag()) ? HalfPlaneRegion::psi1 : HalfPlaneRegion::psi2;
}

double psi1_sum(const std::vector<SpectralPoint>& eigs, double p, double tau) {
  const FunctionalSpec spec{FunctionalKind::thm4, p, tau, 0.0, false};
  double sum = 0.0;
  for (const auto& e : eigs)
    if (half_plane_region(e.lambda) == HalfPlaneRegion::psi1) sum += e.multiplicity * functional_term(e.lambda, spec);
  return sum;
}

double psi2_sum(const std::vector<SpectralPoint>& eigs, double p, double tau) {
  double sum = 0.0;
  for (const auto& e : eigs) {
    if (half_plane_region(e.lambda) != HalfPlaneRegion::psi2) continue;
    const double ratio = dist_to_band(e.lambda) / (2.0 - e.lambda.real());
    sum += e.multiplicity * std::pow(std::abs(e.lambda - 2.0), p - 0.5) * std::pow(ratio, p + tau);
  }
  return sum;
}

bool dominates_pointwise(cplx lambda, double rel_slack) {
  const double dist = dist_to_band(lambda);
  return dist * dist <= band_discriminant(lambda) * (1.0 + rel_slack);
}

bool selfadjoint_rewriting_holds(double lambda, double p, double rel_slack) {
  if (!(std::abs(lambda) > 2.0)) throw std::invalid_argument("selfadjoint_rewriting_holds: need |lambda| > 2");
  const double dist = std::abs(lambda) - 2.0;
  const double lhs = std::pow(dist, p) / std::sqrt(band_discriminant(lambda));
  const double rhs = 0.5 * std::pow(dist, p - 0.5);
  return lhs <= rhs * (1.0 + rel_slack);
}

}  // namespace jlt
