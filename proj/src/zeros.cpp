#include "jlt/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include "jlt/detfun.hpp"
#include "jlt/resolvent.hpp"

namespace jlt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroThreshold = 1e-13;
constexpr int kMaxBisections = 50;

// Maps an angle into [base, base + 2 pi).
double wrap_from(double phi, double base) {
  double d = std::fmod(phi - base, kTwoPi);
  if (d < 0) d += kTwoPi;
  return base + d;
}

struct ContourPointVisitor {
  double t;

  cplx operator()(const Circle& c) const { return c.center + std::polar(c.radius, kTwoPi * t); }

  cplx operator()(const Rectangle& r) const {
    const double w = r.hi.real() - r.lo.real();
    const double h = r.hi.imag() - r.lo.imag();
    double s = t * 2.0 * (w + h);
    if (s < w) return {r.lo.real() + s, r.lo.imag()};
    s -= w;
    if (s < h) return {r.hi.real(), r.lo.imag() + s};
    s -= h;
    if (s < w) return {r.hi.real() - s, r.hi.imag()};
    s -= w;
    return {r.lo.real(), r.hi.imag() - s};
  }

  cplx operator()(const AnnularSector& a) const {
    const double dphi = a.phi1 - a.phi0;
    const double outer = a.r1 * dphi, ray = a.r1 - a.r0, inner = a.r0 * dphi;
    double s = t * (outer + 2.0 * ray + inner);
    if (s < outer) return std::polar(a.r1, a.phi0 + s / a.r1);
    s -= outer;
    if (s < ray) return std::polar(a.r1 - s, a.phi1);
    s -= ray;
    if (s < inner) return std::polar(a.r0, a.phi1 - s / a.r0);
    s -= inner;
    return std::polar(a.r0 + s, a.phi0);
  }
};

void check_finite(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw std::domain_error("winding_number: function is not finite on the contour");
}

// A sample dipping below kZeroThreshold times its neighbours signals a zero on
// or next to the contour. The scale is local because determinant-type
// functions can vary over many orders of magnitude along one contour.
void check_dip(cplx v, double neighbour_scale) {
  if (v == cplx{} || std::abs(v) < kZeroThreshold * neighbour_scale)
    throw ZeroOnContourError("winding_number: zero on or near the contour");
}

class PhaseTracker {
public:
  PhaseTracker(const AnalyticFn& f, const Contour& c) : f_(f), c_(c) {}

  double segment(double ta, cplx fa, double tb, cplx fb, int depth) {
    const double dphi = std::arg(fb / fa);
    const double ratio = std::abs(fb) / std::abs(fa);
    if (std::abs(dphi) <= 0.25 * kPi && ratio <= 4.0 && ratio >= 0.25) return dphi;
    if (depth >= kMaxBisections) throw ZeroOnContourError("winding_number: phase does not resolve (zero near contour)");
    const double tm = 0.5 * (ta + tb);
    const cplx fm = f_(contour_point(c_, tm));
    check_finite(fm);
    check_dip(fm, std::max(std::abs(fa), std::abs(fb)));
    return segment(ta, fa, tm, fm, depth + 1) + segment(tm, fm, tb, fb, depth + 1);
  }

private:
  const AnalyticFn& f_;
  const Contour& c_;
};

double raw_winding(const AnalyticFn& f, const Contour& contour, int nodes) {
  PhaseTracker tracker(f, contour);
  const auto n = static_cast<std::size_t>(nodes);
  std::vector<cplx> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = f(contour_point(contour, static_cast<double>(i) / nodes));
    check_finite(vals[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    check_dip(vals[i], std::max(std::abs(vals[(i + n - 1) % n]), std::abs(vals[(i + 1) % n])));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += tracker.segment(static_cast<double>(i) / nodes, vals[i], static_cast<double>(i + 1) / nodes,
                             vals[(i + 1) % n], 0);
  }
  return total / kTwoPi;
}

bool inside(const AnnularSector& a, cplx z, double slack) {
  const double r = std::abs(z);
  if (r < a.r0 - slack || r > a.r1 + slack) return false;
  if (r <= slack) return a.r0 <= slack;
  const double phi = wrap_from(std::arg(z), a.phi0 - slack / std::max(r, 1e-300));
  return phi <= a.phi1 + slack / r;
}

cplx central_derivative(const AnalyticFn& f, cplx z, double h) { return (f(z + h) - f(z - h)) / (2.0 * h); }

// Newton iteration from the box centre; succeeds only if it converges to a
// point of the box.
bool newton_iterate(const AnalyticFn& f, const AnnularSector& box, cplx& out) {
  const double diam = box.diameter();
  const cplx c0 = box.center();
  cplx z = c0;
  const double h = 1e-6 * std::max(std::abs(z), 1e-2);
  double last_step = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 0; it < 60; ++it) {
    const cplx fz = f(z);
    if (fz == cplx{}) {
      converged = true;
      break;
    }
    const cplx df = central_derivative(f, z, h);
    if (df == cplx{}) return false;
    const cplx step = fz / df;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
    z -= step;
    if (std::abs(z - c0) > 1.5 * diam + 1e-12) return false;
    last_step = std::abs(step);
    if (last_step <= 1e-14 * std::max(1.0, std::abs(z))) {
      converged = true;
      break;
    }
  }
  if (!converged && !(last_step <= 1e-10 * std::max(1.0, std::abs(z)))) return false;
  if (!inside(box, z, 1e-12 + 1e-9 * diam)) return false;
  out = z;
  return true;
}

bool newton_in_box(const AnalyticFn& f, const AnnularSector& box, cplx& out) {
  try {
    return newton_iterate(f, box, out);
  } catch (const std::domain_error&) {
    return false;  // iterate left the domain of f
  }
}

// Centroid of the m zeros inside a circle around c, from the first Fourier
// moment of log f on that circle.
// Mean of the m zeros inside |w - c| < rho from the first Fourier moment of
// log f on the circle. Node counts double until two estimates agree; the
// aliasing error decays like (rho / distance to the next zero)^n.
bool circle_centroid(const AnalyticFn& f, cplx c, double rho, int m, cplx& out) {
  bool have_prev = false;
  cplx prev{};
  for (int n = 64; n <= 8192; n *= 2) {
    std::vector<cplx> vals(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) vals[static_cast<std::size_t>(j)] = f(c + std::polar(rho, kTwoPi * j / n));
    double phase = std::arg(vals[0]);
    cplx moment{};
    for (int j = 0; j < n; ++j) {
      const cplx v = vals[static_cast<std::size_t>(j)];
      if (j > 0) phase += std::arg(v / vals[static_cast<std::size_t>(j - 1)]);
      const double theta = kTwoPi * j / n;
      const cplx psi{std::log(std::abs(v)), phase - m * theta};
      moment += psi * std::polar(1.0, theta);
    }
    const double total = phase - std::arg(vals[0]) + std::arg(vals[0] / vals[static_cast<std::size_t>(n - 1)]);
    if (std::abs(total - kTwoPi * m) > 0.5) {
      have_prev = false;
      continue;
    }
    const cplx est = c - rho * moment / (static_cast<double>(m) * n);
    if (have_prev && std::abs(est - prev) <= 1e-12 * rho) {
      out = est;
      return true;
    }
    prev = est;
    have_prev = true;
  }
  return false;
}

cplx cluster_location(const AnalyticFn& f, const AnnularSector& box, int m, double anchor) {
  const cplx c = box.center();
  const double floor = 0.5 * box.diameter();
  for (double rho = std::max(anchor, floor); rho >= floor * 0.999; rho *= 0.5) {
    try {
      if (winding_number(f, Circle{c, rho}, 64) != m) continue;
      cplx z;
      if (circle_centroid(f, c, rho, m, z)) return z;
    } catch (const std::exception&) {
    }
  }
  return c;
}

std::array<AnnularSector, 4> split(const AnnularSector& a, double frac) {
  const double rm = a.r0 + frac * (a.r1 - a.r0);
  const double pm = a.phi0 + frac * (a.phi1 - a.phi0);
  return {AnnularSector{a.r0, rm, a.phi0, pm}, AnnularSector{a.r0, rm, pm, a.phi1},
          AnnularSector{rm, a.r1, a.phi0, pm}, AnnularSector{rm, a.r1, pm, a.phi1}};
}

struct Box {
  AnnularSector sector;
  int winding;
  int depth;
  double anchor;  // size of the earliest ancestor holding the same zeros
};

bool order_by_modulus_then_arg(cplx a, cplx b) {
  const double ra = std::abs(a), rb = std::abs(b);
  if (ra != rb) return ra < rb;
  return std::arg(a) < std::arg(b);
}

}  // namespace

cplx AnnularSector::center() const { return std::polar(0.5 * (r0 + r1), 0.5 * (phi0 + phi1)); }

double AnnularSector::diameter() const {
  const double dphi = phi1 - phi0;
  if (dphi >= kPi) return 2.0 * r1;
  const cplx p00 = std::polar(r0, phi0), p01 = std::polar(r0, phi1);
  const cplx p10 = std::polar(r1, phi0), p11 = std::polar(r1, phi1);
  return std::max({std::abs(p10 - p11), std::abs(p00 - p11), std::abs(p10 - p01), r1 - r0});
}

cplx contour_point(const Contour& c, double t) { return std::visit(ContourPointVisitor{t}, c); }

int winding_number(const AnalyticFn& f, const Contour& contour, int nodes) {
  if (nodes < 4) throw std::invalid_argument("winding_number: need at least 4 nodes");
  double prev = raw_winding(f, contour, nodes);
  for (int n = 2 * nodes; n <= 16 * nodes; n *= 2) {
    const double next = raw_winding(f, contour, n);
    const double k = std::round(next);
    if (std::abs(next - k) < 0.25 && std::round(prev) == k && std::abs(prev - k) < 0.25) return static_cast<int>(k);
    prev = next;
  }
  throw WindingError("winding_number: argument change does not settle to an integer", prev);
}

std::vector<ZeroEstimate> find_zeros(const AnalyticFn& f, double r_min, double r_max, double tol,
                                     const ZeroSearchOptions& opts) {
  if (!(r_min >= 0.0 && r_max > r_min)) throw std::invalid_argument("find_zeros: need 0 <= r_min < r_max");
  if (!(tol > 0.0)) throw std::invalid_argument("find_zeros: tol must be positive");
  if (opts.angular_sectors < 1) throw std::invalid_argument("find_zeros: need at least one angular sector");

  const int k = opts.angular_sectors;
  const double width = kTwoPi / k;
  std::deque<Box> queue;
  bool placed = false;
  // Sector rays start off the real axis, where zeros of real functions sit;
  // other rotations are tried if a zero lands on a ray anyway.
  for (const double shift : {0.137, 0.291, 0.413, 0.577, 0.731, 0.853}) {
    queue.clear();
    try {
      for (int s = 0; s < k; ++s) {
        const AnnularSector a{r_min, r_max, -kPi + (s + shift) * width, -kPi + (s + 1 + shift) * width};
        const int w = winding_number(f, a, opts.nodes);
        if (w < 0) throw WindingError("find_zeros: negative winding number", w);
        if (w > 0) queue.push_back({a, w, 0, a.diameter()});
      }
      placed = true;
      break;
    } catch (const ZeroOnContourError&) {
    } catch (const WindingError&) {
    }
  }
  if (!placed) throw ZeroOnContourError("find_zeros: zero on the boundary of the search annulus");

  std::vector<ZeroEstimate> found;
  std::vector<AnnularSector> unresolved;
  while (!queue.empty()) {
    const Box box = queue.front();
    queue.pop_front();
    const double diam = box.sector.diameter();
    if (box.winding == 1) {
      cplx z;
      if (newton_in_box(f, box.sector, z)) {
        found.push_back({z, 1});
        continue;
      }
    }
    if (diam <= tol) {
      found.push_back({cluster_location(f, box.sector, box.winding, box.anchor), box.winding});
      continue;
    }
    if (box.depth >= opts.max_depth) {
      unresolved.push_back(box.sector);
      continue;
    }
    bool split_ok = false;
    for (const double frac : {0.5, 0.47, 0.53, 0.44, 0.56, 0.41}) {
      const auto children = split(box.sector, frac);
      std::array<int, 4> w{};
      try {
        int sum = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          w[i] = winding_number(f, children[i], opts.nodes);
          if (w[i] < 0) throw WindingError("find_zeros: negative winding number", w[i]);
          sum += w[i];
        }
        if (sum != box.winding) continue;
      } catch (const ZeroOnContourError&) {
        continue;
      } catch (const WindingError&) {
        continue;
      }
      for (std::size_t i = 0; i < 4; ++i) {
        if (w[i] == 0) continue;
        const double anchor = w[i] == box.winding ? box.anchor : children[i].diameter();
        queue.push_back({children[i], w[i], box.depth + 1, anchor});
      }
      split_ok = true;
      break;
    }
    if (split_ok) continue;
    if (diam <= 1e3 * tol) found.push_back({cluster_location(f, box.sector, box.winding, box.anchor), box.winding});
    else unresolved.push_back(box.sector);
  }
  // A zero on an edge shared by two boxes is reported from both.
  std::vector<ZeroEstimate> merged;
  for (const auto& z : found) {
    auto hit = std::find_if(merged.begin(), merged.end(),
                            [&](const ZeroEstimate& m) { return std::abs(m.z - z.z) <= tol; });
    if (hit == merged.end()) merged.push_back(z);
    else hit->multiplicity += z.multiplicity;
  }
  found = std::move(merged);
  std::sort(found.begin(), found.end(),
            [](const ZeroEstimate& a, const ZeroEstimate& b) { return order_by_modulus_then_arg(a.z, b.z); });
  if (!unresolved.empty()) {
    std::ostringstream msg;
    msg << "find_zeros: " << unresolved.size() << " box(es) left unresolved";
    throw ZeroSearchError(msg.str(), std::move(found), std::move(unresolved));
  }
  return found;
}

int count_zeros_in_disk(const AnalyticFn& f, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("count_zeros_in_disk: radius must be positive");
  return winding_number(f, Circle{0.0, r}, 64);
}

JensenResult jensen_check(const AnalyticFn& f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("jensen_check: r must lie in (0, 1)");
  const cplx f0 = f(0.0);
  if (std::abs(f0 - 1.0) > 1e-12) throw std::invalid_argument("jensen_check: f(0) must equal 1");
  // Winding first so that a zero on the circle surfaces as an error.
  const int n = count_zeros_in_disk(f, r);
  double zero_sum = 0.0;
  if (n > 0) {
    for (const auto& z : find_zeros(f, 0.0, r, 1e-10)) zero_sum += z.multiplicity * std::log(r / std::abs(z.z));
  }
  const double integral = periodic_trapezoid(
      [&f, r](double theta) { return std::log(std::abs(f(std::polar(r, theta)))); }, 1e-13, 64, 1e-14);
  return {zero_sum, integral / kTwoPi};
}

double blaschke_sum(const std::vector<ZeroEstimate>& zeros, const BlaschkeParams& params) {
  if (!(params.alpha >= 0.0) || !(params.gamma >= 0.0))
    throw std::invalid_argument("blaschke_sum: alpha and gamma must be nonnegative");
  if (!(params.tau > 0.0 && params.tau < 1.0)) throw std::invalid_argument("blaschke_sum: tau must lie in (0, 1)");
  if (params.betas.size() != params.xis.size())
    throw std::invalid_argument("blaschke_sum: betas and xis differ in length");
  for (std::size_t j = 0; j < params.xis.size(); ++j) {
    if (!(params.betas[j] >= 0.0)) throw std::invalid_argument("blaschke_sum: betas must be nonnegative");
    if (std::abs(std::abs(params.xis[j]) - 1.0) > 1e-12)
      throw std::invalid_argument("blaschke_sum: every xi must lie on the unit circle");
  }
  const double outer = params.alpha + 1.0 + params.tau;
  const double origin = std::max(params.gamma - 1.0 + params.tau, 0.0);
  double sum = 0.0;
  for (const auto& zero : zeros) {
    const double r = std::abs(zero.z);
    if (!(r < 1.0)) throw std::invalid_argument("blaschke_sum: zeros must lie inside the unit disk");
    if (zero.multiplicity < 1) throw std::invalid_argument("blaschke_sum: multiplicity must be positive");
    if (r == 0.0 && origin > 0.0) return std::numeric_limits<double>::infinity();
    double term = std::pow(1.0 - r, outer);
    if (origin > 0.0) term /= std::pow(r, origin);
    for (std::size_t j = 0; j < params.xis.size(); ++j) {
      const double e = std::max(params.betas[j] - 1.0 + params.tau, 0.0);
      if (e > 0.0) term *= std::pow(std::abs(zero.z - params.xis[j]), e);
    }
    sum += zero.multiplicity * term;
  }
  return sum;
}

std::string to_string(Provenance p) {
  return p == Provenance::determinant_zero ? "determinant-zero" : "truncated-eigensolver";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "determinant-zero") return Provenance::determinant_zero;
  if (s == "truncated-eigensolver") return Provenance::truncated_eigensolver;
  throw std::invalid_argument("unknown provenance '" + s + "'");
}

std::vector<SpectralPoint> discrete_spectrum(const PerturbationSpec& pert, double p, double band_gap,
                                             const SpectrumOptions& opts) {
  if (!(p >= 1.0)) throw std::invalid_argument("discrete_spectrum: p must be >= 1");
  if (!(band_gap > 0.0)) throw std::invalid_argument("discrete_spectrum: band_gap must be positive");
  if (pert.is_zero()) return {};
  // Search on (1 - z^2) det(I - R Delta): same zeros as g(z + 1/z) in the
  // disk, but no pole at z = +-1 and no exponential factor, so contours may
  // pass close to the band.
  const DetContext ctx(pert, 1);
  const AnalyticFn h = [&ctx](cplx z) { return cleared_determinant(ctx, z); };

  // dist <= (1 + sqrt 2)(1 - |z|)/|z| caps |z| for dist >= band_gap, and
  // |lambda| <= ||J|| <= 2 + 3 ||d||_inf bounds |z| from below.
  double d_inf = 0.0;
  for (const double v : d_sequence(pert).values) d_inf = std::max(d_inf, v);
  const double c = 1.0 + std::numbers::sqrt2;
  double r_max = c / (c + band_gap);
  double r_min = std::min(1e-2, 0.5 / (3.0 + 3.0 * d_inf));

  std::vector<ZeroEstimate> zeros;
  for (int attempt = 0;; ++attempt) {
    try {
      zeros = find_zeros(h, r_min, r_max, opts.tol, opts.search);
      break;
    } catch (const ZeroOnContourError&) {
      if (attempt >= 4) throw;
      r_max += 0.1 * (1.0 - r_max);
      r_min *= 0.9;
    }
  }
  std::vector<SpectralPoint> out;
  for (const auto& zero : zeros) {
    const cplx lambda = joukowski(zero.z);
    if (dist_to_band(lambda) < band_gap) continue;
    out.push_back({lambda, zero.z, zero.multiplicity, Provenance::determinant_zero});
  }
  return out;
}

std::vector<SpectralPoint> truncated_spectrum(const PerturbationSpec& pert, std::size_t n, double band_gap) {
  if (n == 0) throw std::invalid_argument("truncated_spectrum: empty section");
  const SiteRange support = pert.support();
  if (n < support.size()) throw std::invalid_argument("truncated_spectrum: section smaller than the support");
  const std::int64_t mid = support.empty() ? 0 : support.first + (support.last - support.first) / 2;
  const std::int64_t first = mid - static_cast<std::int64_t>(n - 1) / 2;
  std::int64_t shift = 0;
  if (!support.empty() && first + static_cast<std::int64_t>(n) - 1 < support.last)
    shift = support.last - (first + static_cast<std::int64_t>(n) - 1);
  const ComplexMatrix m = truncate(pert, first + shift, first + shift + static_cast<std::int64_t>(n) - 1);
  std::vector<SpectralPoint> out;
  for (const cplx lambda : eigenvalues(m)) {
    if (dist_to_band(lambda) < band_gap) continue;
    out.push_back({lambda, inverse_joukowski(lambda).z, 1, Provenance::truncated_eigensolver});
  }
  std::sort(out.begin(), out.end(),
            [](const SpectralPoint& a, const SpectralPoint& b) { return order_by_modulus_then_arg(a.z, b.z); });
  return out;
}

SpectrumMatch match_spectra(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b, double tol,
                            double required_gap) {
  struct Item {
    cplx lambda;
    int mult;
    bool from_a;
  };
  std::vector<Item> items;
  for (const auto& s : a) items.push_back({s.lambda, s.multiplicity, true});
  for (const auto& s : b) items.push_back({s.lambda, s.multiplicity, false});

  // Single-linkage clustering at distance tol.
  std::vector<std::size_t> parent(items.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j)
      if (std::abs(items[i].lambda - items[j].lambda) <= tol) parent[find(i)] = find(j);

  SpectrumMatch result;
  std::vector<std::vector<std::size_t>> clusters(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) clusters[find(i)].push_back(i);
  for (const auto& cl : clusters) {
    if (cl.empty()) continue;
    ++result.clusters;
    int ma = 0, mb = 0;
    bool all_near_band = true;
    for (const std::size_t i : cl) {
      (items[i].from_a ? ma : mb) += items[i].mult;
      if (dist_to_band(items[i].lambda) >= required_gap) all_near_band = false;
    }
    for (const std::size_t i : cl) {
      if (!items[i].from_a) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (const std::size_t j : cl)
        if (!items[j].from_a) nearest = std::min(nearest, std::abs(items[i].lambda - items[j].lambda));
      if (std::isfinite(nearest)) result.max_deviation = std::max(result.max_deviation, nearest);
    }
    if (ma != mb && !all_near_band) {
      result.ok = false;
      std::ostringstream msg;
      msg.precision(10);
      msg << "cluster at " << items[cl.front()].lambda << ": multiplicity " << ma << " vs " << mb;
      result.issues.push_back(msg.str());
    }
  }
  return result;
}

}  // namespace jlt
