#pragma once

// Eigenvalue sums of Lieb-Thirring type over the discrete spectrum, sector
// membership, exponent bookkeeping and empirical constant estimation.

#include <string>
#include <vector>

#include "jlt/zeros.hpp"

namespace jlt {

enum class FunctionalKind { main, l1, bgk, thm4, hs, sector_plus, sector_minus };

std::string to_string(FunctionalKind k);
FunctionalKind functional_kind_from_string(const std::string& s);

/// Selection of a functional and its parameters.
///
///   main          dist^{p+tau} / |l^2-4|^{1/2}                  p > 1
///   l1            dist^{1+tau} / |l^2-4|^{1/2+tau/4}            p = 1
///   bgk           dist^{p+1+tau} / |l^2-4|                      p > 1
///   thm4          dist^{p+tau} / |l^2-4|^{1/2+tau}              p >= 3/2
///   hs            |l+2|^{p-1/2} (l < -2), |l-2|^{p-1/2} (l > 2) p >= 1, real spectrum
///   sector_plus   |l-2|^{p-1/2} over Omega_theta^+              p >= 3/2
///   sector_minus  |l+2|^{p-1/2} over Omega_theta^-              p >= 3/2
///
/// tau must lie in (0, 1) for main, l1, bgk and thm4; `exploratory` admits
/// tau = 0 for main, l1 and thm4.
struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::main;
  double p = 2.0;
  double tau = 0.5;
  double theta = 0.0;
  bool exploratory = false;

  /// Throws std::invalid_argument when the parameters are out of range for the kind.
  void validate() const;
};

/// Summand for one eigenvalue (0 outside the sector for sector kinds).
/// Throws for hs when lambda is not real.
double functional_term(cplx lambda, const FunctionalSpec& spec);

/// Multiplicity-weighted sum of functional_term over eigs.
double lt_functional(const std::vector<SpectralPoint>& eigs, const FunctionalSpec& spec);

enum class SectorMembership { plus, minus, both, neither };

std::string to_string(SectorMembership m);

/// Omega_theta^{+-} = {2 -+ Re lambda < tan(theta) |Im lambda|}, strict.
SectorMembership sector_membership(cplx lambda, double theta);

struct CorollaryExponents {
  double eta1;
  double eta2;
  double band_exponent;  // (eta1 - eta2) / 2
};

/// eta1 = alpha + 1 + tau, eta2 = (2 beta + alpha - 1 + tau)_+.
CorollaryExponents corollary_exponents(double alpha, double beta, double tau);

/// sum m dist^{eta1} / |lambda^2 - 4|^{(eta1 - eta2)/2}.
double corollary_sum(const std::vector<SpectralPoint>& eigs, const CorollaryExponents& e);

struct RatioSample {
  double value;     // functional value
  double norm_pow;  // ||d||_p^p
  std::string id;
};

struct EmpiricalConstant {
  double value;
  std::string arg_max;
};

/// max value / norm_pow over the samples.
EmpiricalConstant empirical_constant(const std::vector<RatioSample>& samples);

/// Right half-plane split used with the sector sums: psi1 = {Re > 0,
/// 2 - Re < |Im|}, psi2 = {Re > 0} minus psi1; left for Re <= 0.
enum class HalfPlaneRegion { psi1, psi2, left };

std::string to_string(HalfPlaneRegion r);
HalfPlaneRegion half_plane_region(cplx lambda);

/// Sum of the thm4 terms over eigenvalues in psi1.
double psi1_sum(const std::vector<SpectralPoint>& eigs, double p, double tau);

/// sum over psi2 of |lambda - 2|^{p-1/2} (dist / (2 - Re lambda))^{p+tau}.
double psi2_sum(const std::vector<SpectralPoint>& eigs, double p, double tau);

/// dist^2 <= |lambda^2 - 4| (up to relative slack).
bool dominates_pointwise(cplx lambda, double rel_slack = 1e-12);

/// Real lambda with |lambda| > 2: dist^p / |lambda^2 - 4|^{1/2} <= |lambda -+ 2|^{p-1/2} / 2.
bool selfadjoint_rewriting_holds(double lambda, double p, double rel_slack = 1e-12);

}  // namespace jlt
