#include "jlt/experiments.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "jlt/detfun.hpp"
#include "jlt/parallel.hpp"
#include "jlt/resolvent.hpp"

namespace jlt {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; fixed across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx disk_sample(std::mt19937_64& rng, double radius) {
  const double r = radius * std::sqrt(unit(rng));
  const double t = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, t);
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

std::string digest(const PerturbationSpec& pert) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(pert.offset()));
  for (const auto* seq : {&pert.da(), &pert.db(), &pert.dc()})
    for (const cplx v : *seq) {
      mix(std::bit_cast<std::uint64_t>(v.real()));
      mix(std::bit_cast<std::uint64_t>(v.imag()));
    }
  return hex64(h);
}

bool is_real(cplx z) { return std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z)); }

std::string describe(cplx z) {
  std::ostringstream s;
  s << format_double(z.real()) << (z.imag() < 0 ? "" : "+") << format_double(z.imag()) << "i";
  return s.str();
}

std::vector<FunctionalSpec> selected_functionals(const ExperimentConfig& c) {
  std::vector<FunctionalSpec> out;
  for (const double p : c.p_grid) {
    for (const double tau : c.tau_grid) {
      if (p > 1.0) out.push_back({FunctionalKind::main, p, tau, 0.0, false});
      if (p == 1.0) out.push_back({FunctionalKind::l1, p, tau, 0.0, false});
      if (p > 1.0) out.push_back({FunctionalKind::bgk, p, tau, 0.0, false});
      if (p >= 1.5) out.push_back({FunctionalKind::thm4, p, tau, 0.0, false});
    }
    if (c.coefficient_model == CoefficientModel::selfadjoint_real) out.push_back({FunctionalKind::hs, p, 0.0, 0.0});
    if (p >= 1.5)
      for (const double theta : c.theta_grid) {
        out.push_back({FunctionalKind::sector_plus, p, 0.0, theta, false});
        out.push_back({FunctionalKind::sector_minus, p, 0.0, theta, false});
      }
  }
  return out;
}

CheckResult check_spectrum_checks(const std::vector<SpectralPoint>& spectrum) {
  for (const auto& s : spectrum)
    if (!dominates_pointwise(s.lambda)) return {"domination", false, "dist^2 > |l^2-4| at " + describe(s.lambda)};
  return {"domination", true, ""};
}

void run_trial(const ExperimentConfig& config, TrialRecord& rec) {
  const PerturbationSpec& pert = rec.pert;
  const double gap = config.band_gap;
  // Search slightly below the gap so that the cross-check sees eigenvalues
  // sitting just across it on either side.
  const std::vector<SpectralPoint> wide = discrete_spectrum(pert, config.p_grid.front(), 0.9 * gap);
  for (const auto& s : wide)
    if (dist_to_band(s.lambda) >= gap) rec.spectrum.push_back(s);

  const RealSequence d = d_sequence(pert);
  for (const double p : config.p_grid) rec.d_norms.emplace_back(p, lp_norm(d, p));

  for (const auto& spec : selected_functionals(config)) {
    const double value = lt_functional(rec.spectrum, spec);
    const double norm_pow = lp_norm_pow(d, spec.p);
    rec.functionals.push_back({spec.kind, spec.p, spec.tau, spec.theta, value, norm_pow > 0 ? value / norm_pow : 0.0});
  }

  rec.checks.push_back(check_spectrum_checks(rec.spectrum));

  if (config.cross_check) {
    const auto truncated = truncated_spectrum(pert, config.truncation_size, 0.9 * gap);
    const SpectrumMatch m = match_spectra(wide, truncated, 1e-4, gap);
    std::string detail = "max deviation " + format_double(m.max_deviation);
    for (const auto& issue : m.issues) detail += "; " + issue;
    rec.checks.push_back({"truncation_match", m.ok, detail});
    if (config.coefficient_model == CoefficientModel::selfadjoint_real) {
      bool real = true;
      for (const auto& s : truncated) real = real && is_real(s.lambda);
      rec.checks.push_back({"truncation_real", real, ""});
    }
  }

  if (config.coefficient_model == CoefficientModel::selfadjoint_real) {
    bool real = true, rewriting = true;
    for (const auto& s : rec.spectrum) {
      real = real && is_real(s.lambda);
      for (const double p : config.p_grid) rewriting = rewriting && selfadjoint_rewriting_holds(s.lambda.real(), p);
    }
    rec.checks.push_back({"real_spectrum", real, ""});
    rec.checks.push_back({"selfadjoint_rewriting", rewriting, ""});
  }

  const FactorizationResult fact = factorize(pert);
  if (!d.range().empty()) {
    const double u_norm = operator_norm(fact.u_block(d.range()));
    rec.checks.push_back({"u_norm", u_norm <= 3.0 + 1e-9, "||U|| = " + format_double(u_norm)});
    const ComplexMatrix delta = difference_block(pert, d.range());
    bool equiv = true;
    std::string detail;
    for (const double p : config.p_grid) {
      const double dn = lp_norm(d, p);
      const double sn = schatten_norm(delta, p);
      const bool ok = std::pow(6.0, -1.0 / p) * dn <= sn * (1.0 + 1e-12) && sn <= 3.0 * dn * (1.0 + 1e-12);
      if (!ok) detail += "p=" + format_double(p) + " ";
      equiv = equiv && ok;
    }
    rec.checks.push_back({"schatten_equivalence", equiv, detail});
  }

  bool bound = true;
  std::string bound_detail;
  for (const double p : config.p_grid) {
    if (p != 1.0 && p != 2.0) continue;
    const DetContext ctx = DetContext::for_p(pert, p);
    for (const cplx lambda : {cplx{3.0, 0.0}, cplx{0.0, 2.5}, cplx{-2.2, 0.3}}) {
      const LogBound lb = log_g_bound(ctx, lambda, p);
      if (!(lb.lhs <= lb.rhs + 1e-12)) {
        bound = false;
        bound_detail += "p=" + format_double(p) + " at " + describe(lambda) + " ";
      }
    }
  }
  rec.checks.push_back({"log_g_bound", bound, bound_detail});
}

// ---- JSON helpers ----------------------------------------------------------

json jd(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double read_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ReportFormatError("expected a number");
}

json jc(cplx z) { return json::array({jd(z.real()), jd(z.imag())}); }

cplx read_complex(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ReportFormatError("expected a [re, im] pair");
  return {read_double(j[0]), read_double(j[1])};
}

json complex_array(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx z : v) a.push_back(jc(z));
  return a;
}

std::vector<cplx> read_complex_array(const json& j) {
  if (!j.is_array()) throw ReportFormatError("expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(read_complex(e));
  return out;
}

json perturbation_json(const PerturbationSpec& p) {
  return {{"offset", p.offset()}, {"da", complex_array(p.da())}, {"db", complex_array(p.db())},
          {"dc", complex_array(p.dc())}};
}

PerturbationSpec perturbation_from_json(const json& j) {
  return PerturbationSpec(j.at("offset").get<std::int64_t>(), read_complex_array(j.at("da")),
                          read_complex_array(j.at("db")), read_complex_array(j.at("dc")));
}

json double_array(const std::vector<double>& v) {
  json a = json::array();
  for (const double x : v) a.push_back(jd(x));
  return a;
}

std::vector<double> read_double_array(const json& j) {
  if (!j.is_array()) throw ReportFormatError("expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(read_double(e));
  return out;
}

json config_json(const ExperimentConfig& c) {
  return {{"seed", c.seed},
          {"trials", c.trials},
          {"support_width", c.support_width},
          {"magnitude", jd(c.magnitude)},
          {"coefficient_model", to_string(c.coefficient_model)},
          {"p_grid", double_array(c.p_grid)},
          {"tau_grid", double_array(c.tau_grid)},
          {"theta_grid", double_array(c.theta_grid)},
          {"band_gap", jd(c.band_gap)},
          {"truncation_size", c.truncation_size},
          {"cross_check", c.cross_check},
          {"a_floor", jd(c.a_floor)}};
}

// Missing keys keep their defaults, so config files may be partial.
ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const std::set<std::string> known{"seed",      "trials",     "support_width",   "magnitude",
                                           "coefficient_model", "p_grid", "tau_grid", "theta_grid",
                                           "band_gap",  "truncation_size", "cross_check", "a_floor"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  ExperimentConfig c;
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
  if (j.contains("support_width")) c.support_width = j["support_width"].get<std::size_t>();
  if (j.contains("magnitude")) c.magnitude = read_double(j["magnitude"]);
  if (j.contains("coefficient_model"))
    c.coefficient_model = coefficient_model_from_string(j["coefficient_model"].get<std::string>());
  if (j.contains("p_grid")) c.p_grid = read_double_array(j["p_grid"]);
  if (j.contains("tau_grid")) c.tau_grid = read_double_array(j["tau_grid"]);
  if (j.contains("theta_grid")) c.theta_grid = read_double_array(j["theta_grid"]);
  if (j.contains("band_gap")) c.band_gap = read_double(j["band_gap"]);
  if (j.contains("truncation_size")) c.truncation_size = j["truncation_size"].get<std::size_t>();
  if (j.contains("cross_check")) c.cross_check = j["cross_check"].get<bool>();
  if (j.contains("a_floor")) c.a_floor = read_double(j["a_floor"]);
  return c;
}

json spectral_point_json(const SpectralPoint& s) {
  return {{"lambda", jc(s.lambda)},
          {"z", jc(s.z)},
          {"multiplicity", s.multiplicity},
          {"provenance", to_string(s.provenance)}};
}

SpectralPoint spectral_point_from_json(const json& j) {
  return {read_complex(j.at("lambda")), read_complex(j.at("z")), j.at("multiplicity").get<int>(),
          provenance_from_string(j.at("provenance").get<std::string>())};
}

json trial_json(const TrialRecord& r) {
  json spectrum = json::array(), norms = json::array(), funcs = json::array(), checks = json::array();
  for (const auto& s : r.spectrum) spectrum.push_back(spectral_point_json(s));
  for (const auto& [p, n] : r.d_norms) norms.push_back({{"p", jd(p)}, {"norm", jd(n)}});
  for (const auto& f : r.functionals)
    funcs.push_back({{"kind", to_string(f.kind)},
                     {"p", jd(f.p)},
                     {"tau", jd(f.tau)},
                     {"theta", jd(f.theta)},
                     {"value", jd(f.value)},
                     {"ratio", jd(f.ratio)}});
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"index", r.index},       {"id", r.id},          {"digest", r.digest},
          {"perturbation", perturbation_json(r.pert)}, {"ok", r.ok},     {"error", r.error},
          {"spectrum", spectrum},   {"d_norms", norms},    {"functionals", funcs},
          {"checks", checks}};
}

TrialRecord trial_from_json(const json& j) {
  TrialRecord r;
  r.index = j.at("index").get<std::size_t>();
  r.id = j.at("id").get<std::string>();
  r.digest = j.at("digest").get<std::string>();
  r.pert = perturbation_from_json(j.at("perturbation"));
  r.ok = j.at("ok").get<bool>();
  r.error = j.at("error").get<std::string>();
  for (const auto& s : j.at("spectrum")) r.spectrum.push_back(spectral_point_from_json(s));
  for (const auto& n : j.at("d_norms")) r.d_norms.emplace_back(read_double(n.at("p")), read_double(n.at("norm")));
  for (const auto& f : j.at("functionals"))
    r.functionals.push_back({functional_kind_from_string(f.at("kind").get<std::string>()), read_double(f.at("p")),
                             read_double(f.at("tau")), read_double(f.at("theta")), read_double(f.at("value")),
                             read_double(f.at("ratio"))});
  for (const auto& c : j.at("checks"))
    r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("detail").get<std::string>()});
  return r;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string to_string(CoefficientModel m) {
  switch (m) {
    case CoefficientModel::selfadjoint_real: return "selfadjoint-real";
    case CoefficientModel::complex_general: return "complex-general";
    case CoefficientModel::diagonal_only: return "diagonal-only";
  }
  return "?";
}

CoefficientModel coefficient_model_from_string(const std::string& s) {
  for (const auto m :
       {CoefficientModel::selfadjoint_real, CoefficientModel::complex_general, CoefficientModel::diagonal_only})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown coefficient model '" + s + "'");
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("config: " + msg);
  };
  require(trials > 0, "trials must be positive");
  require(support_width > 0, "support_width must be positive");
  require(std::isfinite(magnitude) && magnitude >= 0.0, "magnitude must be finite and nonnegative");
  require(!p_grid.empty() && !tau_grid.empty(), "p_grid and tau_grid must be nonempty");
  for (const double p : p_grid) require(std::isfinite(p) && p >= 1.0, "every p must be >= 1");
  for (const double t : tau_grid) require(t > 0.0 && t < 1.0, "every tau must lie in (0, 1)");
  for (const double t : theta_grid) require(t >= 0.0 && t < 0.5 * std::numbers::pi, "every theta must lie in [0, pi/2)");
  require(band_gap > 0.0 && band_gap < 1.0, "band_gap must lie in (0, 1)");
  require(truncation_size >= 10 * (support_width + 2), "truncation_size must be >= 10 (support_width + 2)");
  require(a_floor > 0.0 && a_floor <= 1.0, "a_floor must lie in (0, 1]");
}

PerturbationSpec generate_trial(const ExperimentConfig& config, std::size_t i) {
  std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1)));
  const std::size_t w = config.support_width;
  const double mag = config.magnitude;
  std::vector<cplx> da(w), db(w), dc(w);
  switch (config.coefficient_model) {
    case CoefficientModel::selfadjoint_real: {
      const double lo = std::max(-mag, config.a_floor - 1.0);
      for (std::size_t k = 0; k < w; ++k) {
        da[k] = lo + (mag - lo) * unit(rng);
        dc[k] = da[k];
        db[k] = mag * (2.0 * unit(rng) - 1.0);
      }
      break;
    }
    case CoefficientModel::complex_general:
      for (std::size_t k = 0; k < w; ++k) {
        da[k] = disk_sample(rng, mag);
        db[k] = disk_sample(rng, mag);
        dc[k] = disk_sample(rng, mag);
      }
      break;
    case CoefficientModel::diagonal_only:
      for (std::size_t k = 0; k < w; ++k) db[k] = disk_sample(rng, mag);
      break;
  }
  return PerturbationSpec(0, std::move(da), std::move(db), std::move(dc));
}

std::vector<PerturbationSpec> generate_ensemble(const ExperimentConfig& config) {
  config.validate();
  std::vector<PerturbationSpec> out;
  out.reserve(config.trials);
  for (std::size_t i = 0; i < config.trials; ++i) out.push_back(generate_trial(config, i));
  return out;
}

void aggregate(LTReport& report) {
  report.aggregates.clear();
  report.suites.clear();
  report.failures = 0;
  struct Acc {
    AggregateEntry entry;
    std::vector<RatioSample> samples;
  };
  std::vector<Acc> accs;
  for (const auto& t : report.trials) {
    if (!t.ok) {
      ++report.failures;
      continue;
    }
    for (const auto& c : t.checks) {
      auto [it, inserted] = report.suites.try_emplace(c.name, true);
      it->second = it->second && c.passed;
    }
    for (const auto& f : t.functionals) {
      auto it = std::find_if(accs.begin(), accs.end(), [&f](const Acc& a) {
        return a.entry.kind == f.kind && a.entry.p == f.p && a.entry.tau == f.tau && a.entry.theta == f.theta;
      });
      if (it == accs.end()) {
        accs.push_back({{f.kind, f.p, f.tau, f.theta, 0.0, 0.0, ""}, {}});
        it = accs.end() - 1;
      }
      // Zero perturbations carry no information about the constant. The stored
      // ratio is used as is so that aggregates match the records bit for bit.
      double norm = 0.0;
      for (const auto& [p, n] : t.d_norms)
        if (p == f.p) norm = n;
      if (norm > 0.0) it->samples.push_back({f.ratio, 1.0, t.id});
    }
  }
  for (auto& a : accs) {
    if (!a.samples.empty()) {
      const EmpiricalConstant c = empirical_constant(a.samples);
      a.entry.max_ratio = c.value;
      a.entry.arg_max = c.arg_max;
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& s : a.samples) lo = std::min(lo, s.value / s.norm_pow);
      a.entry.min_ratio = lo;
    }
    report.aggregates.push_back(a.entry);
  }
}

LTReport run_experiment(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  LTReport report;
  report.config = config;
  report.trials.resize(config.trials);
  report.trial_seconds.assign(config.trials, 0.0);

  parallel_for(config.trials, opts.threads, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord& rec = report.trials[i];
    rec.index = i;
    rec.id = "trial-" + std::to_string(i);
    rec.pert = generate_trial(config, i);
    rec.digest = digest(rec.pert);
    try {
      if (opts.trial_hook) opts.trial_hook(i);
      run_trial(config, rec);
    } catch (const std::exception& e) {
      // Keep identity and input, drop partial results.
      TrialRecord failed;
      failed.index = i;
      failed.id = rec.id;
      failed.digest = rec.digest;
      failed.pert = rec.pert;
      failed.ok = false;
      failed.error = e.what();
      rec = std::move(failed);
    }
    report.trial_seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  aggregate(report);
  report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string serialize_report(const LTReport& report) {
  json trials = json::array(), aggregates = json::array(), suites = json::object();
  for (const auto& t : report.trials) trials.push_back(trial_json(t));
  for (const auto& a : report.aggregates)
    aggregates.push_back({{"kind", to_string(a.kind)},
                          {"p", jd(a.p)},
                          {"tau", jd(a.tau)},
                          {"theta", jd(a.theta)},
                          {"max_ratio", jd(a.max_ratio)},
                          {"min_ratio", jd(a.min_ratio)},
                          {"arg_max", a.arg_max}});
  for (const auto& [name, ok] : report.suites) suites[name] = ok;
  const json j = {{"schema", "lt-report"},      {"version", kReportVersion}, {"config", config_json(report.config)},
                  {"trials", trials},           {"aggregates", aggregates},  {"suites", suites},
                  {"failures", report.failures}};
  return j.dump(1) + "\n";
}

LTReport parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ReportFormatError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("schema", "") != "lt-report") throw ReportFormatError("not an lt-report document");
    const int version = j.at("version").get<int>();
    if (version != kReportVersion)
      throw ReportVersionError("report version " + std::to_string(version) + " is not supported (expected " +
                               std::to_string(kReportVersion) + ")");
    LTReport r;
    r.config = config_from_json(j.at("config"));
    for (const auto& t : j.at("trials")) r.trials.push_back(trial_from_json(t));
    for (const auto& a : j.at("aggregates"))
      r.aggregates.push_back({functional_kind_from_string(a.at("kind").get<std::string>()), read_double(a.at("p")),
                              read_double(a.at("tau")), read_double(a.at("theta")), read_double(a.at("max_ratio")),
                              read_double(a.at("min_ratio")), a.at("arg_max").get<std::string>()});
    for (const auto& [name, ok] : j.at("suites").items()) r.suites[name] = ok.get<bool>();
    r.failures = j.at("failures").get<std::size_t>();
    if (r.trials.size() != r.config.trials) throw ReportFormatError("trial count differs from the config");
    return r;
  } catch (const json::exception& e) {
    throw ReportFormatError(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ReportFormatError(std::string("malformed report: ") + e.what());
  }
}

void save_report(const LTReport& report, const std::filesystem::path& path) {
  write_file(path, serialize_report(report));
}

LTReport load_report(const std::filesystem::path& path) { return parse_report(read_file(path)); }

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig c = config_from_json(j);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string serialize_config(const ExperimentConfig& config) { return config_json(config).dump(1) + "\n"; }

PerturbationSpec parse_perturbation(const std::string& text) {
  try {
    return perturbation_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("perturbation file: ") + e.what());
  } catch (const ReportFormatError& e) {
    throw std::invalid_argument(std::string("perturbation file: ") + e.what());
  }
}

std::string serialize_perturbation(const PerturbationSpec& pert) { return perturbation_json(pert).dump() + "\n"; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string eigenvalue_csv_header() { return "trial,re_lambda,im_lambda,multiplicity,dist,disc,z_re,z_im,provenance\n"; }

std::string eigenvalue_csv_row(const std::string& trial, const SpectralPoint& s) {
  std::string row = trial;
  for (const double v : {s.lambda.real(), s.lambda.imag()}) row += "," + format_double(v);
  row += "," + std::to_string(s.multiplicity);
  for (const double v : {dist_to_band(s.lambda), band_discriminant(s.lambda), s.z.real(), s.z.imag()})
    row += "," + format_double(v);
  row += "," + to_string(s.provenance) + "\n";
  return row;
}

std::string eigenvalue_csv(const LTReport& report) {
  std::string out = eigenvalue_csv_header();
  for (const auto& t : report.trials)
    for (const auto& s : t.spectrum) out += eigenvalue_csv_row(t.id, s);
  return out;
}

}  // namespace jlt
