#pragma once

// Seeded random ensembles of perturbations, per-trial evaluation of spectra,
// functionals and invariant checks, and report persistence.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jlt/functionals.hpp"
#include "jlt/operator.hpp"
#include "jlt/zeros.hpp"

namespace jlt {

enum class CoefficientModel { selfadjoint_real, complex_general, diagonal_only };

std::string to_string(CoefficientModel m);
CoefficientModel coefficient_model_from_string(const std::string& s);

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t support_width = 1;
  double magnitude = 1.0;
  CoefficientModel coefficient_model = CoefficientModel::complex_general;
  std::vector<double> p_grid{2.0};
  std::vector<double> tau_grid{0.5};
  std::vector<double> theta_grid{0.7853981633974483};  // sector kinds only
  double band_gap = 0.05;
  std::size_t truncation_size = 500;
  bool cross_check = true;  // compare against the truncated eigensolver
  double a_floor = 0.1;     // lower bound on a_k = c_k in the selfadjoint model

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Perturbation of trial i; depends only on (config, i).
PerturbationSpec generate_trial(const ExperimentConfig& config, std::size_t i);

/// generate_trial for every trial index.
std::vector<PerturbationSpec> generate_ensemble(const ExperimentConfig& config);

struct FunctionalValue {
  FunctionalKind kind;
  double p;
  double tau;
  double theta;
  double value;
  double ratio;  // value / ||d||_p^p, 0 when d = 0

  friend bool operator==(const FunctionalValue&, const FunctionalValue&) = default;
};

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct TrialRecord {
  std::size_t index = 0;
  std::string id;
  std::string digest;  // FNV-1a of the perturbation entries
  PerturbationSpec pert;
  bool ok = true;
  std::string error;  // set when ok is false
  std::vector<SpectralPoint> spectrum;
  std::vector<std::pair<double, double>> d_norms;  // (p, ||d||_p)
  std::vector<FunctionalValue> functionals;
  std::vector<CheckResult> checks;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct AggregateEntry {
  FunctionalKind kind;
  double p;
  double tau;
  double theta;
  double max_ratio;
  double min_ratio;
  std::string arg_max;

  friend bool operator==(const AggregateEntry&, const AggregateEntry&) = default;
};

struct LTReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::vector<AggregateEntry> aggregates;
  std::map<std::string, bool> suites;  // check name -> passed on every trial
  std::size_t failures = 0;
  // Wall-clock timings; not serialized so that reports are reproducible.
  double total_seconds = 0.0;
  std::vector<double> trial_seconds;

  /// Equality ignores the timings.
  friend bool operator==(const LTReport& a, const LTReport& b) {
    return a.config == b.config && a.trials == b.trials && a.aggregates == b.aggregates && a.suites == b.suites &&
           a.failures == b.failures;
  }
};

struct RunOptions {
  unsigned threads = 1;
  /// Called before each trial; an exception thrown here fails that trial only.
  std::function<void(std::size_t)> trial_hook;
};

/// Runs every trial (in parallel when threads > 1) and assembles the report
/// in trial order.
LTReport run_experiment(const ExperimentConfig& config, const RunOptions& opts = {});

/// Recomputes aggregates, suite flags and the failure count from the trial records.
void aggregate(LTReport& report);

inline constexpr int kReportVersion = 1;

class ReportFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ReportVersionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string serialize_report(const LTReport& report);
LTReport parse_report(const std::string& text);

void save_report(const LTReport& report, const std::filesystem::path& path);
LTReport load_report(const std::filesystem::path& path);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

PerturbationSpec parse_perturbation(const std::string& text);
std::string serialize_perturbation(const PerturbationSpec& pert);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// Eigenvalue table: trial, re_lambda, im_lambda, multiplicity, dist, disc,
/// z_re, z_im, provenance.
std::string eigenvalue_csv(const LTReport& report);
std::string eigenvalue_csv_header();
std::string eigenvalue_csv_row(const std::string& trial, const SpectralPoint& s);

}  // namespace jlt
