#include "jlt/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jlt {

namespace {

constexpr double kPi = std::numbers::pi;

cplx int_power(cplx z, std::int64_t k) {
  if (k == 0) return 1.0;
  if (k <= 8) {
    cplx r = z;
    for (std::int64_t i = 1; i < k; ++i) r *= z;
    return r;
  }
  return std::polar(std::pow(std::abs(z), static_cast<double>(k)), static_cast<double>(k) * std::arg(z));
}

}  // namespace

cplx joukowski(cplx z) { return z + 1.0 / z; }

double dist_to_band(cplx lambda) {
  const double re = lambda.real();
  if (std::abs(re) <= 2.0) return std::abs(lambda.imag());
  return re > 0 ? std::abs(lambda - 2.0) : std::abs(lambda + 2.0);
}

double dist_to_band_from_z(cplx z) {
  const cplx lambda = joukowski(z);
  const double az = std::abs(z);
  if (lambda.real() <= -2.0) return std::norm(1.0 + z) / az;
  if (lambda.real() >= 2.0) return std::norm(1.0 - z) / az;
  return std::abs(z.imag()) * (1.0 - az * az) / (az * az);
}

double band_discriminant(cplx lambda) { return std::abs(lambda - 2.0) * std::abs(lambda + 2.0); }

BandPoint inverse_joukowski(cplx lambda) {
  const double dist = dist_to_band(lambda);
  if (!(dist > kBandProximity)) throw BandDomainError("inverse_joukowski: lambda lies on the band [-2, 2]");
  // sqrt(lambda - 2) sqrt(lambda + 2) is the branch of sqrt(lambda^2 - 4)
  // behaving like lambda at infinity; (lambda + s)/2 is then the outer root.
  const cplx s = std::sqrt(lambda - 2.0) * std::sqrt(lambda + 2.0);
  cplx outer = 0.5 * (lambda + s);
  cplx z = 1.0 / outer;
  if (std::abs(z) > 1.0) z = outer;
  return {lambda, z, dist, band_discriminant(lambda)};
}

BandPoint band_point_from_z(cplx z) {
  const double az = std::abs(z);
  if (!(az > 0.0 && az < 1.0)) throw BandDomainError("band_point_from_z: need 0 < |z| < 1");
  const cplx lambda = joukowski(z);
  return {lambda, z, dist_to_band(lambda), band_discriminant(lambda)};
}

DistanceBounds joukowski_distance_bounds(cplx z) {
  const double az = std::abs(z);
  const double q = std::abs(z * z - 1.0) * (1.0 - az) / az;
  return {0.5 * q, 0.5 * (1.0 + std::numbers::sqrt2) * q};
}

cplx free_green(const BandPoint& bp, std::int64_t m, std::int64_t n) {
  const std::int64_t k = m > n ? m - n : n - m;
  return int_power(bp.z, k) / (1.0 / bp.z - bp.z);
}

cplx free_green(cplx lambda, std::int64_t m, std::int64_t n) { return free_green(inverse_joukowski(lambda), m, n); }

double v_lambda_norm_pow(cplx lambda, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("v_lambda_norm: p must be >= 1");
  if (!(dist_to_band(lambda) > kBandProximity))
    throw BandDomainError("v_lambda_norm: lambda lies on the band [-2, 2]");
  const double dist = dist_to_band(lambda);
  // Resolve the peak of width ~dist before testing for convergence.
  const auto min_nodes = static_cast<std::size_t>(std::clamp(8.0 / dist, 16.0, 65536.0));
  return periodic_trapezoid(
      [lambda, p](double theta) { return std::pow(std::abs(lambda - 2.0 * std::cos(theta)), -p); }, 1e-10,
      min_nodes);
}

double v_lambda_norm(cplx lambda, double p) { return std::pow(v_lambda_norm_pow(lambda, p), 1.0 / p); }

double ComplexSequence::lq_norm(double q) const {
  double s = 0.0;
  for (const auto& v : values) s += std::pow(std::abs(v), q);
  return std::pow(s, 1.0 / q);
}

cplx eval_fourier_series(const ComplexSequence& coeffs, double theta) {
  cplx s{};
  for (std::size_t i = 0; i < coeffs.values.size(); ++i) {
    const double j = static_cast<double>(coeffs.offset + static_cast<std::int64_t>(i));
    s += coeffs.values[i] * std::polar(1.0, j * theta);
  }
  return s / std::sqrt(2.0 * kPi);
}

double fourier_series_lq_norm(const ComplexSequence& coeffs, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("fourier_series_lq_norm: q must be positive");
  const double span = static_cast<double>(coeffs.values.size() + static_cast<std::size_t>(std::abs(coeffs.offset)));
  const auto min_nodes = static_cast<std::size_t>(std::max(64.0, 8.0 * (span + 1.0)));
  const double integral = periodic_trapezoid(
      [&coeffs, q](double theta) { return std::pow(std::abs(eval_fourier_series(coeffs, theta)), q); }, 1e-12,
      min_nodes);
  return std::pow(integral, 1.0 / q);
}

SiteRange multiplier_window(const ComplexSequence& k, const ComplexSequence& coeffs) {
  const SiteRange kr = k.range();
  const SiteRange cr = coeffs.range();
  if (kr.empty() || cr.empty()) return kr;
  // Column n = m - j for m in supp k and j in supp c.
  return {std::min(kr.first, kr.first - cr.last), std::max(kr.last, kr.last - cr.first)};
}

ComplexMatrix multiplier_matrix(const ComplexSequence& k, const ComplexSequence& coeffs, const SiteRange& window) {
  SiteRange nonzero{0, -1};
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    if (k.values[i] == cplx{}) continue;
    const std::int64_t m = k.offset + static_cast<std::int64_t>(i);
    nonzero = nonzero.empty() ? SiteRange{m, m} : SiteRange{std::min(nonzero.first, m), std::max(nonzero.last, m)};
  }
  if (!window.contains(nonzero)) throw std::invalid_argument("multiplier_matrix: window misses part of supp k");
  const std::size_t n = window.size();
  ComplexMatrix out(n, n);
  const double scale = 1.0 / std::sqrt(2.0 * kPi);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t m = window.first + static_cast<std::int64_t>(i);
    const cplx km = k.at(m);
    if (km == cplx{}) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t col = window.first + static_cast<std::int64_t>(j);
      out(i, j) = scale * km * coeffs.at(m - col);
    }
  }
  return out;
}

double multiplier_schatten_bound(const ComplexSequence& k, const ComplexSequence& coeffs, double q) {
  return std::pow(2.0 * kPi, -1.0 / q) * k.lq_norm(q) * fourier_series_lq_norm(coeffs, q);
}

}  // namespace jlt
