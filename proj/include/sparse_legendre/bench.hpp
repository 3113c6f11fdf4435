#pragma once

// Trial generation and the experiment loop behind the benchmark CLI.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparse_legendre/poly.hpp"
#include "sparse_legendre/recovery.hpp"

namespace sleg {

enum class TrialMode { ExactSparse, Noisy };

struct TrialSpec {
  std::int64_t N = 1 << 17;
  std::int64_t s = 20;
  int trials = 100;
  TrialMode mode = TrialMode::ExactSparse;
  /// log10(s / sum b_m^2); required for (and only for) noisy trials.
  std::optional<double> noise_log_snr;
  std::uint64_t seed = 0;

  void validate() const;
};

/// s distinct degrees uniform on [0, N] with independent fair signs.
SparseExpansion gen_trial_poly(const TrialSpec& spec, int trial_index);

struct NoisyTrial {
  SparseExpansion expansion;
  std::vector<std::int64_t> support;
};

/// The +-1 signal of gen_trial_poly plus Gaussian noise (Box-Muller) on every
/// other degree, scaled so log10(s / sum b^2) equals spec.noise_log_snr.
NoisyTrial gen_noisy_trial(const TrialSpec& spec, int trial_index);

/// sqrt(sum over S of (truth(n) - recovered(n))^2).
double l2_error_on_support(const SparseExpansion& truth, const SparseExpansion& recovered,
                           const std::vector<std::int64_t>& S);

struct TrialRecord {
  int trial_index = 0;
  bool support_found = false;
  bool recovery_success = false;
  double l2_error_recovery = 0.0;
  double l2_error_baseline = 0.0;
  std::int64_t baseline_m = 0;
  double wall_time_recovery = 0.0;
  double oracle_time_recovery = 0.0;
  double wall_time_baseline = 0.0;
  std::uint64_t f_evaluations = 0;
  std::uint64_t baseline_evaluations = 0;
  std::uint64_t sft_samples = 0;
  int cg_iterations = 0;
};

struct ExperimentOptions {
  bool run_recovery = true;
  bool run_baseline = true;
  /// Baseline truncation M; with baseline_m_sweep > 0 the best M in [1, sweep] is kept per trial.
  std::int64_t baseline_m = 1;
  std::int64_t baseline_m_sweep = 0;
};

struct ExperimentSummary {
  TrialSpec spec;
  int trials = 0;
  int support_found = 0;
  int recovered = 0;
  /// Mean recovery error over trials whose support was found.
  double mean_l2_recovery = 0.0;
  double mean_l2_baseline = 0.0;
  double mean_wall_recovery = 0.0;
  double mean_oracle_recovery = 0.0;
  double mean_wall_baseline = 0.0;
  double mean_f_evaluations = 0.0;
  /// mean_f_evaluations / N.
  double eval_fraction = 0.0;
  double plan_seconds = 0.0;
  std::vector<TrialRecord> records;
};

inline constexpr int kCsvSchemaVersion = 1;

/// Schema comment line (with the tunables in effect) followed by the column header.
void write_csv_preamble(std::ostream& os, const RecoveryConfig& cfg, const ExperimentOptions& options);

/// Runs every trial, appending one CSV row per trial and one summary row.
/// Recovery failures are recorded, never thrown.
ExperimentSummary run_experiment(const TrialSpec& spec, const RecoveryConfig& cfg,
                                 const ExperimentOptions& options, std::ostream& csv);

/// As above, writing preamble and rows to a fresh file at `path`.
ExperimentSummary run_experiment(const TrialSpec& spec, const RecoveryConfig& cfg,
                                 const ExperimentOptions& options, const std::string& path);

/// One human-readable line.
std::string format_summary(const ExperimentSummary& summary);

}  // namespace sleg
