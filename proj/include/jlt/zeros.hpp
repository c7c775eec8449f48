#pragma once

// Argument-principle zero finding for functions analytic in (part of) the
// unit disk, and the discrete spectrum of J as the zeros of
// h(z) = g(z + 1/z) on the disk.

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "jlt/linalg.hpp"
#include "jlt/operator.hpp"

namespace jlt {

using AnalyticFn = std::function<cplx(cplx)>;

struct Circle {
  cplx center;
  double radius;
};

/// Axis-aligned rectangle with corners lo (lower left) and hi (upper right).
struct Rectangle {
  cplx lo;
  cplx hi;
};

/// {r e^{i phi} : r0 <= r <= r1, phi0 <= phi <= phi1}; r0 may be 0.
struct AnnularSector {
  double r0, r1;
  double phi0, phi1;

  cplx center() const;
  double diameter() const;
};

using Contour = std::variant<Circle, Rectangle, AnnularSector>;

/// Point on the positively oriented boundary, t in [0, 1).
cplx contour_point(const Contour& c, double t);

class ZeroOnContourError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class WindingError : public std::runtime_error {
public:
  WindingError(const std::string& what, double raw) : std::runtime_error(what), raw_(raw) {}
  double raw_value() const noexcept { return raw_; }

private:
  double raw_;
};

/// Total change of arg f along the contour divided by 2 pi.
///
/// Segments are bisected while the phase jump exceeds pi/4 or |f| changes by
/// more than a factor 4; the count is accepted once `nodes` and 2 `nodes`
/// starting points give the same integer with residue below 0.25.
int winding_number(const AnalyticFn& f, const Contour& contour, int nodes = 64);

struct ZeroEstimate {
  cplx z;
  int multiplicity;
};

class ZeroSearchError : public std::runtime_error {
public:
  ZeroSearchError(const std::string& what, std::vector<ZeroEstimate> found, std::vector<AnnularSector> unresolved)
      : std::runtime_error(what), found_(std::move(found)), unresolved_(std::move(unresolved)) {}
  const std::vector<ZeroEstimate>& found() const noexcept { return found_; }
  const std::vector<AnnularSector>& unresolved() const noexcept { return unresolved_; }

private:
  std::vector<ZeroEstimate> found_;
  std::vector<AnnularSector> unresolved_;
};

struct ZeroSearchOptions {
  int max_depth = 60;
  int nodes = 32;
  int angular_sectors = 8;
};

/// Zeros of f in r_min <= |z| <= r_max with multiplicity.
///
/// Polar boxes are quadrisected by winding number until their diameter is at
/// most `tol`. Simple zeros are polished by Newton iteration (central
/// difference derivative); clusters of multiplicity m > 1 are reported at the
/// centroid of the enclosed zeros, from the first moment of f'/f on a circle.
/// Output is ordered by (|z|, arg z).
std::vector<ZeroEstimate> find_zeros(const AnalyticFn& f, double r_min, double r_max, double tol,
                                     const ZeroSearchOptions& opts = {});

/// N_f(D_r): zeros in |z| < r with multiplicity (winding on |z| = r).
int count_zeros_in_disk(const AnalyticFn& f, double r);

struct JensenResult {
  double zero_sum;  // sum over |z_k| < r of log(r/|z_k|)
  double mean_log;  // (2 pi)^{-1} integral of log|f(r e^{i theta})|
};

/// Both sides of Jensen's identity for f with f(0) = 1.
JensenResult jensen_check(const AnalyticFn& f, double r);

struct BlaschkeParams {
  double alpha = 0.0;
  std::vector<double> betas;
  std::vector<cplx> xis;
  double gamma = 0.0;
  double tau = 0.5;
};

/// sum m (1-|z|)^{alpha+1+tau} |z|^{-(gamma-1+tau)_+} prod_j |z - xi_j|^{(beta_j-1+tau)_+}.
/// A zero at the origin with gamma - 1 + tau > 0 yields +infinity.
double blaschke_sum(const std::vector<ZeroEstimate>& zeros, const BlaschkeParams& params);

enum class Provenance { determinant_zero, truncated_eigensolver };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct SpectralPoint {
  cplx lambda;
  cplx z;
  int multiplicity = 1;
  Provenance provenance = Provenance::determinant_zero;

  friend bool operator==(const SpectralPoint&, const SpectralPoint&) = default;
};

struct SpectrumOptions {
  double tol = 1e-7;  // terminal box diameter in the z-plane
  ZeroSearchOptions search;
};

/// Eigenvalues of J with dist(lambda, [-2, 2]) >= band_gap, as zeros of
/// g(z + 1/z) with g of order ceil(p).
std::vector<SpectralPoint> discrete_spectrum(const PerturbationSpec& pert, double p, double band_gap,
                                             const SpectrumOptions& opts = {});

/// Eigenvalues of the n-site section centred on the perturbation, keeping
/// those with dist >= band_gap. Each value carries multiplicity 1.
std::vector<SpectralPoint> truncated_spectrum(const PerturbationSpec& pert, std::size_t n, double band_gap);

struct SpectrumMatch {
  bool ok = true;
  double max_deviation = 0.0;     // largest distance within matched pairs
  std::size_t clusters = 0;
  std::vector<std::string> issues;
};

/// Groups points of `a` and `b` lying within `tol` of each other into clusters
/// and compares total multiplicities per cluster. Points with
/// dist < required_gap may stay unmatched.
SpectrumMatch match_spectra(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b, double tol,
                            double required_gap);

}  // namespace jlt
