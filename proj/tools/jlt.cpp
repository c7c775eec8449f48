// Command-line front end: spectra, determinant scans, norm tables, seeded
// ensembles and the acceptance suites.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jlt/acceptance.hpp"
#include "jlt/detfun.hpp"
#include "jlt/experiments.hpp"
#include "jlt/linalg.hpp"
#include "jlt/resolvent.hpp"
#include "jlt/zeros.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace jlt;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

// Writes to <out>/<name> when --out was given, to stdout otherwise.
void emit(const std::string& out_dir, const std::string& name, const std::string& text) {
  if (out_dir.empty())
    std::cout << text;
  else
    write_file(fs::path(out_dir) / name, text);
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

struct Common {
  std::string format = "csv";
  std::string out;
  unsigned threads = 1;
};

void add_common(CLI::App* app, Common& c, bool with_threads) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", c.out, "Output directory (stdout when omitted)");
  if (with_threads) app->add_option("--threads", c.threads, "Worker threads (never changes output)")->check(CLI::PositiveNumber);
}

// ---- spectrum ---------------------------------------------------------------

struct SpectrumArgs {
  Common common;
  std::string input;
  double p = 2.0;
  double band_gap = 0.05;
  std::size_t truncation = 0;
};

int cmd_spectrum(const SpectrumArgs& a) {
  const PerturbationSpec pert = parse_perturbation(read_file(a.input));
  std::vector<SpectralPoint> points = discrete_spectrum(pert, a.p, a.band_gap);
  if (a.truncation > 0) {
    const auto eigs = truncated_spectrum(pert, a.truncation, a.band_gap);
    points.insert(points.end(), eigs.begin(), eigs.end());
  }
  if (a.common.format == "csv") {
    std::string text = eigenvalue_csv_header();
    for (const auto& s : points) text += eigenvalue_csv_row("input", s);
    emit(a.common.out, "spectrum.csv", text);
  } else {
    json arr = json::array();
    for (const auto& s : points)
      arr.push_back({{"lambda", complex_json(s.lambda)},
                     {"z", complex_json(s.z)},
                     {"multiplicity", s.multiplicity},
                     {"dist", dist_to_band(s.lambda)},
                     {"disc", band_discriminant(s.lambda)},
                     {"provenance", to_string(s.provenance)}});
    emit(a.common.out, "spectrum.json", json{{"spectrum", arr}}.dump(1) + "\n");
  }
  return 0;
}

// ---- detscan ----------------------------------------------------------------

struct DetscanArgs {
  Common common;
  std::string input;
  double p = 2.0;
  double re_min = -4.0, re_max = 4.0, im_min = -2.0, im_max = 2.0;
  std::size_t steps = 81;
};

int cmd_detscan(const DetscanArgs& a) {
  const PerturbationSpec pert = parse_perturbation(read_file(a.input));
  const DetContext ctx = DetContext::for_p(pert, a.p);
  const std::size_t n = std::max<std::size_t>(a.steps, 2);
  std::string csv = csv_line({"re_lambda", "im_lambda", "abs_g", "re_g", "im_g"});
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx lambda{a.re_min + (a.re_max - a.re_min) * static_cast<double>(j) / static_cast<double>(n - 1),
                        a.im_min + (a.im_max - a.im_min) * static_cast<double>(i) / static_cast<double>(n - 1)};
      if (dist_to_band(lambda) < 1e-9) continue;  // g is not defined on the band
      const cplx g = perturbation_determinant(ctx, lambda);
      if (a.common.format == "csv")
        csv += csv_line({format_double(lambda.real()), format_double(lambda.imag()), format_double(std::abs(g)),
                         format_double(g.real()), format_double(g.imag())});
      else
        rows.push_back({{"lambda", complex_json(lambda)}, {"g", complex_json(g)}, {"abs_g", std::abs(g)}});
    }
  }
  if (a.common.format == "csv")
    emit(a.common.out, "detscan.csv", csv);
  else
    emit(a.common.out, "detscan.json", json{{"order", ctx.reg_order()}, {"grid", rows}}.dump(1) + "\n");
  return 0;
}

// ---- norms ------------------------------------------------------------------

struct NormsArgs {
  Common common;
  std::string input;
  std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0};
  std::vector<std::string> lambdas{"3", "2.5i", "-2.2+0.3i", "0+1i"};
};

cplx parse_complex(const std::string& text) {
  // Accepts "a", "bi", "a+bi", "a-bi".
  std::string s = text;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i') return std::stod(s);
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) {
    if (s.empty() || s == "+") return {0.0, 1.0};
    if (s == "-") return {0.0, -1.0};
    return {0.0, std::stod(s)};
  }
  const std::string im = s.substr(split);
  const double imag = im == "+" ? 1.0 : im == "-" ? -1.0 : std::stod(im);
  return {std::stod(s.substr(0, split)), imag};
}

int cmd_norms(const NormsArgs& a) {
  std::string symbol_csv = csv_line({"re_lambda", "im_lambda", "p", "v_norm", "dist", "disc"});
  json symbol = json::array();
  for (const auto& text : a.lambdas) {
    const cplx lambda = parse_complex(text);
    for (const double p : a.p_grid) {
      const double v = v_lambda_norm(lambda, p);
      symbol_csv += csv_line({format_double(lambda.real()), format_double(lambda.imag()), format_double(p),
                              format_double(v), format_double(dist_to_band(lambda)),
                              format_double(band_discriminant(lambda))});
      symbol.push_back({{"lambda", complex_json(lambda)}, {"p", p}, {"v_norm", v}});
    }
  }
  std::string schatten_csv;
  json schatten = json::array();
  if (!a.input.empty()) {
    const PerturbationSpec pert = parse_perturbation(read_file(a.input));
    const RealSequence d = d_sequence(pert);
    const ComplexMatrix block = difference_block(pert, d.range());
    schatten_csv = csv_line({"p", "d_norm", "schatten_norm", "lower", "upper"});
    for (const double p : a.p_grid) {
      const double dn = lp_norm(d, p), sn = d.range().empty() ? 0.0 : schatten_norm(block, p);
      schatten_csv += csv_line({format_double(p), format_double(dn), format_double(sn),
                                format_double(std::pow(6.0, -1.0 / p) * dn), format_double(3.0 * dn)});
      schatten.push_back({{"p", p}, {"d_norm", dn}, {"schatten_norm", sn}});
    }
  }
  if (a.common.format == "csv") {
    emit(a.common.out, "symbol_norms.csv", symbol_csv);
    if (!a.input.empty()) {
      if (a.common.out.empty()) std::cout << "\n";
      emit(a.common.out, "schatten_norms.csv", schatten_csv);
    }
  } else {
    json j{{"symbol", symbol}};
    if (!a.input.empty()) j["schatten"] = schatten;
    emit(a.common.out, "norms.json", j.dump(1) + "\n");
  }
  return 0;
}

// ---- ensemble ---------------------------------------------------------------

struct EnsembleArgs {
  Common common;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> band_gap;
};

int cmd_ensemble(const EnsembleArgs& a) {
  ExperimentConfig config = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.band_gap) config.band_gap = *a.band_gap;
  config.validate();
  const LTReport report = run_experiment(config, {a.common.threads, {}});

  const fs::path dir = a.common.out.empty() ? fs::path(".") : fs::path(a.common.out);
  fs::create_directories(dir);
  save_report(report, dir / "report.json");
  write_file(dir / "eigenvalues.csv", eigenvalue_csv(report));
  json timings{{"total_seconds", report.total_seconds}, {"threads", a.common.threads}};
  timings["trial_seconds"] = report.trial_seconds;
  write_file(dir / "timings.json", timings.dump(1) + "\n");

  std::cout << report.trials.size() << " trials, " << report.failures << " failures, "
            << std::round(report.total_seconds * 1000) / 1000 << " s\n";
  for (const auto& [name, ok] : report.suites) std::cout << (ok ? "  pass " : "  FAIL ") << name << "\n";
  for (const auto& e : report.aggregates)
    std::cout << "  " << to_string(e.kind) << " p=" << e.p << " tau=" << e.tau << " max ratio " << e.max_ratio
              << " (" << e.arg_max << ")\n";
  // Per-trial failures are part of the report, not a run error.
  return 0;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::vector<int> only;
  std::string self;
};

int cmd_verify(const VerifyArgs& a) {
  AcceptanceOptions opts;
  opts.threads = a.threads;
  if (a.seed) opts.seed = *a.seed;
  opts.only = a.only;
  opts.cli_path = a.self;
  opts.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; };
  bool ok = true;
  for (const auto& r : run_acceptance(opts)) ok = ok && r.passed;
  std::cout << (ok ? "all criteria passed" : "some criteria FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi operator spectral toolkit"};
  app.require_subcommand(1);

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "Discrete eigenvalues of a perturbation file");
  spectrum->add_option("--input", sp.input, "Perturbation JSON")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--p", sp.p, "Schatten exponent selecting the determinant order")->check(CLI::Range(1.0, 1e6));
  spectrum->add_option("--band-gap", sp.band_gap, "Keep eigenvalues with dist >= gap")->check(CLI::PositiveNumber);
  spectrum->add_option("--truncation", sp.truncation, "Also list eigenvalues of an N-site section");
  add_common(spectrum, sp.common, false);

  DetscanArgs ds;
  auto* detscan = app.add_subcommand("detscan", "Perturbation determinant on a rectangular lambda grid");
  detscan->add_option("--input", ds.input, "Perturbation JSON")->required()->check(CLI::ExistingFile);
  detscan->add_option("--p", ds.p, "Schatten exponent selecting the determinant order")->check(CLI::Range(1.0, 1e6));
  detscan->add_option("--re-min", ds.re_min);
  detscan->add_option("--re-max", ds.re_max);
  detscan->add_option("--im-min", ds.im_min);
  detscan->add_option("--im-max", ds.im_max);
  detscan->add_option("--steps", ds.steps, "Grid points per axis")->check(CLI::Range(2, 4000));
  add_common(detscan, ds.common, false);

  NormsArgs nm;
  auto* norms = app.add_subcommand("norms", "Resolvent symbol norms and Schatten norms of J - J0");
  norms->add_option("--input", nm.input, "Perturbation JSON (adds the Schatten table)")->check(CLI::ExistingFile);
  norms->add_option("--p", nm.p_grid, "Exponents")->delimiter(',');
  norms->add_option("--lambda", nm.lambdas, "Spectral parameters such as 3, 2.5i, -2.2+0.3i")->delimiter(',');
  add_common(norms, nm.common, false);

  EnsembleArgs en;
  std::uint64_t seed_value = 0;
  double gap_value = 0.0;
  auto* ensemble = app.add_subcommand("ensemble", "Seeded ensemble run; writes report.json, eigenvalues.csv, timings.json");
  ensemble->add_option("--config", en.config, "Experiment config JSON")->check(CLI::ExistingFile);
  auto* seed_opt = ensemble->add_option("--seed", seed_value, "Overrides the config seed");
  auto* gap_opt = ensemble->add_option("--band-gap", gap_value, "Overrides the config band gap")->check(CLI::PositiveNumber);
  add_common(ensemble, en.common, true);

  VerifyArgs vf;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suites; exit code 0 when all pass");
  verify->add_option("--threads", vf.threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* verify_seed_opt = verify->add_option("--seed", verify_seed, "Seed for the randomized suites");
  verify->add_option("--only", vf.only, "Comma-separated criterion ids")->delimiter(',')->check(CLI::Range(1, kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every usage error exits 2 like runtime errors.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(sp);
    if (*detscan) return cmd_detscan(ds);
    if (*norms) return cmd_norms(nm);
    if (*ensemble) {
      if (*seed_opt) en.seed = seed_value;
      if (*gap_opt) en.band_gap = gap_value;
      return cmd_ensemble(en);
    }
    if (*verify) {
      if (*verify_seed_opt) vf.seed = verify_seed;
      std::error_code ec;
      const fs::path self = fs::canonical("/proc/self/exe", ec);
      if (!ec) vf.self = self.string();
      return cmd_verify(vf);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
