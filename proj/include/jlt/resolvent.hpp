#pragma once

// Geometry of C \ [-2, 2] through the Joukowski map z -> z + 1/z, the kernel
// of (lambda - J0)^{-1}, and the multiplier symbol v_lambda(theta) = 1/(lambda - 2 cos theta).

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "jlt/linalg.hpp"
#include "jlt/operator.hpp"

namespace jlt {

/// Points closer than this to [-2, 2] are treated as on the band.
inline constexpr double kBandProximity = 1e-14;

struct BandPoint {
  cplx lambda;
  cplx z;       // preimage with |z| < 1
  double dist;  // dist(lambda, [-2, 2])
  double disc;  // |lambda^2 - 4|
};

class BandDomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// The root of z^2 - lambda z + 1 = 0 inside the unit disk.
BandPoint inverse_joukowski(cplx lambda);

/// z + 1/z.
cplx joukowski(cplx z);

/// BandPoint for lambda = z + 1/z, taking 0 < |z| < 1 as given.
BandPoint band_point_from_z(cplx z);

/// Euclidean distance to the segment [-2, 2].
double dist_to_band(cplx lambda);

/// Same distance written in terms of the preimage z (|z| < 1): the three
/// cases Re(lambda) <= -2, >= 2 and in between.
double dist_to_band_from_z(cplx z);

/// |lambda^2 - 4| evaluated as |lambda - 2| |lambda + 2|.
double band_discriminant(cplx lambda);

/// Two-sided bounds 0.5 Q <= dist <= ((1 + sqrt 2)/2) Q with
/// Q = |z^2 - 1| (1 - |z|) / |z|.
struct DistanceBounds {
  double lower;
  double upper;
};
DistanceBounds joukowski_distance_bounds(cplx z);

/// Matrix element <delta_m, (lambda - J0)^{-1} delta_n> = z^{|m-n|} / (1/z - z).
cplx free_green(cplx lambda, std::int64_t m, std::int64_t n);
cplx free_green(const BandPoint& bp, std::int64_t m, std::int64_t n);

class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

private:
  double last_estimate_;
};

/// Periodic trapezoidal rule on [0, 2 pi) with node doubling until two
/// successive estimates agree to max(rel_tol |I|, abs_tol); at most 2^20 nodes.
template <class F>
double periodic_trapezoid(F&& f, double rel_tol = 1e-10, std::size_t min_nodes = 16, double abs_tol = 0.0);

/// integral_0^{2 pi} |lambda - 2 cos theta|^{-p} d theta.
double v_lambda_norm_pow(cplx lambda, double p);
/// ||v_lambda||_{L^p(0, 2 pi)}.
double v_lambda_norm(cplx lambda, double p);

/// Finitely supported complex sequence indexed from `offset`.
struct ComplexSequence {
  std::int64_t offset = 0;
  std::vector<cplx> values;

  cplx at(std::int64_t k) const noexcept {
    const std::int64_t i = k - offset;
    return (i >= 0 && i < static_cast<std::int64_t>(values.size())) ? values[static_cast<std::size_t>(i)] : cplx{};
  }
  SiteRange range() const noexcept { return {offset, offset + static_cast<std::int64_t>(values.size()) - 1}; }
  double lq_norm(double q) const;
};

/// Evaluates v(theta) = (2 pi)^{-1/2} sum_j c_j e^{i j theta} from its
/// coefficient sequence c = F^{-1} v.
cplx eval_fourier_series(const ComplexSequence& coeffs, double theta);

/// ||v||_{L^q(0, 2 pi)} for a trigonometric polynomial given by coefficients.
double fourier_series_lq_norm(const ComplexSequence& coeffs, double q);

/// Finite section of K F^{-1} M_v F on `window` x `window`: entries
/// (2 pi)^{-1/2} k_m c_{m-n}. The window must contain the support of k.
ComplexMatrix multiplier_matrix(const ComplexSequence& k, const ComplexSequence& coeffs, const SiteRange& window);

/// Smallest window holding every nonzero entry of multiplier_matrix(k, coeffs, .).
SiteRange multiplier_window(const ComplexSequence& k, const ComplexSequence& coeffs);

/// (2 pi)^{-1/q} ||k||_q ||v||_{L^q}.
double multiplier_schatten_bound(const ComplexSequence& k, const ComplexSequence& coeffs, double q);

}  // namespace jlt

#include "jlt/detail/trapezoid.ipp"
