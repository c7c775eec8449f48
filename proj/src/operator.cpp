#include "jlt/operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jlt {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

PerturbationSpec::PerturbationSpec(std::int64_t offset, std::vector<cplx> da, std::vector<cplx> db,
                                   std::vector<cplx> dc)
    : offset_(offset), da_(std::move(da)), db_(std::move(db)), dc_(std::move(dc)) {
  if (da_.size() != db_.size() || dc_.size() != db_.size())
    throw std::invalid_argument("PerturbationSpec: da, db, dc must have equal length");
  for (const auto* v : {&da_, &db_, &dc_})
    if (!std::all_of(v->begin(), v->end(), finite))
      throw std::invalid_argument("PerturbationSpec: non-finite deviation");
}

PerturbationSpec PerturbationSpec::diagonal(std::int64_t site, cplx value) {
  return PerturbationSpec(site, {cplx{}}, {value}, {cplx{}});
}

SiteRange PerturbationSpec::support() const noexcept {
  SiteRange r{0, -1};
  auto include = [&r](std::int64_t k) {
    if (r.empty()) {
      r = {k, k};
    } else {
      r.first = std::min(r.first, k);
      r.last = std::max(r.last, k);
    }
  };
  for (std::size_t i = 0; i < width(); ++i) {
    const std::int64_t k = offset_ + static_cast<std::int64_t>(i);
    if (db_[i] != cplx{}) include(k);
    if (da_[i] != cplx{} || dc_[i] != cplx{}) {
      include(k);
      include(k + 1);
    }
  }
  return r;
}

PerturbationSpec PerturbationSpec::scaled(double t) const {
  auto scale = [t](std::vector<cplx> v) {
    for (auto& z : v) z *= t;
    return v;
  };
  return PerturbationSpec(offset_, scale(da_), scale(db_), scale(dc_));
}

bool PerturbationSpec::is_zero() const noexcept {
  auto zero = [](const std::vector<cplx>& v) {
    return std::all_of(v.begin(), v.end(), [](cplx z) { return z == cplx{}; });
  };
  return zero(da_) && zero(db_) && zero(dc_);
}

std::vector<std::int64_t> RealSequence::support() const {
  std::vector<std::int64_t> s;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0) s.push_back(offset + static_cast<std::int64_t>(i));
  return s;
}

RealSequence d_sequence(const PerturbationSpec& pert) {
  RealSequence d;
  d.offset = pert.offset() - 1;
  const std::size_t len = pert.width() + 2;
  d.values.resize(pert.width() == 0 ? 0 : len);
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    const std::int64_t k = d.offset + static_cast<std::int64_t>(i);
    d.values[i] = std::max({std::abs(pert.a_minus_one(k - 1)), std::abs(pert.a_minus_one(k)),
                            std::abs(pert.b(k)), std::abs(pert.c_minus_one(k - 1)),
                            std::abs(pert.c_minus_one(k))});
  }
  return d;
}

double lp_norm_pow(const RealSequence& seq, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double x : seq.values)
    if (x != 0.0) s += std::pow(std::abs(x), p);
  return s;
}

double lp_norm(const RealSequence& seq, double p) { return std::pow(lp_norm_pow(seq, p), 1.0 / p); }

namespace {

// num / den with the 0/0 -> 1 convention. Rounding in the denominator can push
// the modulus a few ulps past 1; such values are pulled back onto the circle.
cplx u_entry(cplx num, double den) {
  if (num == cplx{} && den == 0.0) return 1.0;
  if (den == 0.0) throw std::logic_error("factorize: nonzero deviation over vanishing d");
  cplx u = num / den;
  const double m = std::abs(u);
  if (m > 1.0) u /= m;
  return u;
}

}  // namespace

FactorizationResult factorize(const PerturbationSpec& pert) {
  FactorizationResult f;
  const RealSequence d = d_sequence(pert);
  f.d_half.offset = d.offset;
  f.d_half.values.reserve(d.values.size());
  for (double x : d.values) f.d_half.values.push_back(std::sqrt(x));

  // u arrays cover the d range plus one site on each side so every entry
  // coupling the support to its neighbours is stored explicitly.
  f.offset = d.offset - 1;
  const std::size_t len = d.values.empty() ? 0 : d.values.size() + 2;
  f.u_minus.resize(len);
  f.u_zero.resize(len);
  f.u_plus.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const std::int64_t k = f.offset + static_cast<std::int64_t>(i);
    const double hk = f.d_half.at(k);
    f.u_minus[i] = u_entry(pert.c_minus_one(k - 1), f.d_half.at(k - 1) * hk);
    f.u_zero[i] = u_entry(pert.b(k), hk * hk);
    f.u_plus[i] = u_entry(pert.a_minus_one(k), f.d_half.at(k + 1) * hk);
  }
  return f;
}

ComplexMatrix FactorizationResult::u_block(const SiteRange& range) const {
  const std::size_t n = range.size();
  ComplexMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t k = range.first + static_cast<std::int64_t>(j);
    // Column k holds U delta_k.
    if (j > 0) u(j - 1, j) = um(k);
    u(j, j) = u0(k);
    if (j + 1 < n) u(j + 1, j) = up(k);
  }
  return u;
}

ComplexMatrix FactorizationResult::reconstruct(const SiteRange& range) const {
  ComplexMatrix m = u_block(range);
  const std::size_t n = range.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) == cplx{}) continue;
      m(i, j) *= d_half.at(range.first + static_cast<std::int64_t>(i)) *
                 d_half.at(range.first + static_cast<std::int64_t>(j));
    }
  return m;
}

ComplexMatrix difference_block(const PerturbationSpec& pert, const SiteRange& range) {
  const std::size_t n = range.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t k = range.first + static_cast<std::int64_t>(i);
    m(i, i) = pert.b(k);
    if (i + 1 < n) {
      m(i, i + 1) = pert.c_minus_one(k);
      m(i + 1, i) = pert.a_minus_one(k);
    }
  }
  return m;
}

ComplexMatrix truncate(const PerturbationSpec& pert, std::int64_t n_min, std::int64_t n_max) {
  const SiteRange range{n_min, n_max};
  if (range.empty()) throw std::invalid_argument("truncate: empty window");
  if (!range.contains(pert.support()))
    throw std::invalid_argument("truncate: window does not contain the perturbation support");
  const std::size_t n = range.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t k = n_min + static_cast<std::int64_t>(i);
    m(i, i) = pert.b(k);
    if (i + 1 < n) {
      m(i, i + 1) = pert.c(k);
      m(i + 1, i) = pert.a(k);
    }
  }
  return m;
}

}  // namespace jlt
