#include "sparse_legendre/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sparse_legendre/iserles.hpp"
#include "sparse_legendre/rng.hpp"

namespace sleg {

namespace {

constexpr std::uint64_t kSignalStream = 0x51;
constexpr std::uint64_t kNoiseStream = 0x52;
constexpr std::uint64_t kTrialConfigStream = 0x53;
constexpr std::uint64_t kPlanStream = 0x54;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::int64_t> support_of(const SparseExpansion& e) {
  std::vector<std::int64_t> out;
  for (const auto& [n, v] : e.entries()) out.push_back(n);
  return out;
}

}  // namespace

void TrialSpec::validate() const {
  if (N < 0) throw std::invalid_argument("TrialSpec: negative N");
  if (s < 1 || s > N + 1) throw std::invalid_argument("TrialSpec: s must lie in [1, N + 1]");
  if (trials < 1) throw std::invalid_argument("TrialSpec: trials must be positive");
  if ((mode == TrialMode::Noisy) != noise_log_snr.has_value()) {
    throw std::invalid_argument("TrialSpec: noise_log_snr is required exactly for noisy trials");
  }
}

SparseExpansion gen_trial_poly(const TrialSpec& spec, int trial_index) {
  spec.validate();
  std::mt19937_64 rng(detail::stream_seed(spec.seed ^ kSignalStream, static_cast<std::uint64_t>(trial_index)));
  // Floyd's sampling: s distinct values from [0, N] without a size-N buffer.
  std::set<std::int64_t> degrees;
  for (std::int64_t j = spec.N + 1 - spec.s; j <= spec.N; ++j) {
    const std::int64_t t = std::uniform_int_distribution<std::int64_t>(0, j)(rng);
    degrees.insert(degrees.count(t) ? j : t);
  }
  SparseExpansion e(Basis::Legendre, spec.N);
  std::bernoulli_distribution coin(0.5);
  for (std::int64_t n : degrees) e.set(n, coin(rng) ? 1.0 : -1.0);
  return e;
}

NoisyTrial gen_noisy_trial(const TrialSpec& spec, int trial_index) {
  spec.validate();
  TrialSpec signal_spec = spec;
  signal_spec.mode = TrialMode::ExactSparse;
  signal_spec.noise_log_snr.reset();
  NoisyTrial out;
  out.expansion = gen_trial_poly(signal_spec, trial_index);
  out.support = support_of(out.expansion);
  if (spec.mode != TrialMode::Noisy) return out;

  std::mt19937_64 rng(detail::stream_seed(spec.seed ^ kNoiseStream, static_cast<std::uint64_t>(trial_index)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> b;
  b.reserve(static_cast<std::size_t>(spec.N + 1));
  double spare = 0.0;
  bool have_spare = false;
  for (std::int64_t n = 0; n <= spec.N; ++n) {
    if (out.expansion.entries().count(n)) {
      b.push_back(0.0);
      continue;
    }
    if (have_spare) {
      b.push_back(spare);
      have_spare = false;
      continue;
    }
    double u1;
    do {
      u1 = unit(rng);
    } while (u1 <= 0.0);
    const double u2 = unit(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    b.push_back(radius * std::cos(2.0 * std::numbers::pi * u2));
    spare = radius * std::sin(2.0 * std::numbers::pi * u2);
    have_spare = true;
  }
  double energy = 0.0;
  for (double v : b) energy += v * v;
  if (energy > 0.0) {
    const double target = static_cast<double>(spec.s) * std::pow(10.0, -*spec.noise_log_snr);
    const double scale = std::sqrt(target / energy);
    for (std::int64_t n = 0; n <= spec.N; ++n) {
      if (b[n] != 0.0) out.expansion.set(n, b[n] * scale);
    }
  }
  return out;
}

double l2_error_on_support(const SparseExpansion& truth, const SparseExpansion& recovered,
                           const std::vector<std::int64_t>& S) {
  double acc = 0.0;
  for (std::int64_t n : S) {
    const double d = truth[n] - recovered[n];
    acc += d * d;
  }
  return std::sqrt(acc);
}

void write_csv_preamble(std::ostream& os, const RecoveryConfig& cfg, const ExperimentOptions& options) {
  os << "# sparse-legendre-bench schema=" << kCsvSchemaVersion << " r=" << fmt(cfg.r)
     << " sft_trials=" << cfg.sft.trials << " bucket_factor=" << fmt(cfg.sft.bucket_factor)
     << " sft_sparsity_factor=" << fmt(cfg.sft_sparsity_factor) << " candidate_factor=" << fmt(cfg.candidate_factor)
     << " m=" << (cfg.m > 0 ? std::to_string(cfg.m) : std::string("default")) << " cg_tol=" << fmt(cfg.cg_tol)
     << " expand_k=" << (cfg.expand_k ? std::to_string(*cfg.expand_k) : std::string("off"))
     << " baseline_m=" << options.baseline_m << " baseline_m_sweep=" << options.baseline_m_sweep << '\n';
  os << "kind,trial,N,s,log_snr,support_found,recovery_success,l2_recovery,l2_baseline,baseline_M,"
        "wall_recovery_s,oracle_recovery_s,wall_baseline_s,f_evaluations,eval_fraction,sft_samples,cg_iterations\n";
}

ExperimentSummary run_experiment(const TrialSpec& spec, const RecoveryConfig& cfg,
                                 const ExperimentOptions& options, std::ostream& csv) {
  spec.validate();
  cfg.validate();
  if (options.baseline_m < 0 || options.baseline_m_sweep < 0) {
    throw std::invalid_argument("run_experiment: negative baseline truncation");
  }
  ExperimentSummary summary;
  summary.spec = spec;
  const std::string snr = spec.noise_log_snr ? fmt(*spec.noise_log_snr) : std::string("inf");

  // One sampling plan per experiment; building it is a per-N setup cost.
  std::optional<SamplePlan> plan;
  if (options.run_recovery) {
    const auto t0 = std::chrono::steady_clock::now();
    plan.emplace(sample_chebyshev_points(cfg.sample_count(spec.N), spec.N, detail::stream_seed(cfg.seed, kPlanStream)));
    summary.plan_seconds = seconds_since(t0);
  }

  double sum_err_found = 0.0, sum_err_base = 0.0;
  double sum_wall = 0.0, sum_oracle = 0.0, sum_base = 0.0, sum_evals = 0.0;
  for (int t = 0; t < spec.trials; ++t) {
    const NoisyTrial trial = gen_noisy_trial(spec, t);
    const ExpansionSource source(trial.expansion);
    TrialRecord rec;
    rec.trial_index = t;

    if (options.run_recovery) {
      RecoveryConfig trial_cfg = cfg;
      trial_cfg.seed = detail::stream_seed(cfg.seed ^ kTrialConfigStream, static_cast<std::uint64_t>(t));
      const RecoveryResult res = recover_sparse_legendre(source, spec.N, trial_cfg, &*plan);
      const std::set<std::int64_t> found(res.identified_support.begin(), res.identified_support.end());
      rec.recovery_success = res.diagnostics.success;
      rec.support_found = rec.recovery_success &&
                          std::all_of(trial.support.begin(), trial.support.end(),
                                      [&](std::int64_t n) { return found.count(n) > 0; });
      rec.l2_error_recovery = l2_error_on_support(trial.expansion, res.expansion, trial.support);
      rec.wall_time_recovery = res.diagnostics.wall_seconds;
      rec.oracle_time_recovery = res.diagnostics.oracle_seconds;
      rec.f_evaluations = res.diagnostics.evaluations;
      rec.sft_samples = res.diagnostics.sft_samples;
      rec.cg_iterations = res.diagnostics.cg_iterations;
    }

    if (options.run_baseline) {
      const std::int64_t lo = options.baseline_m_sweep > 0 ? 1 : options.baseline_m;
      const std::int64_t hi = options.baseline_m_sweep > 0 ? options.baseline_m_sweep : options.baseline_m;
      rec.l2_error_baseline = std::numeric_limits<double>::infinity();
      for (std::int64_t M = lo; M <= hi; ++M) {
        MeteredSource metered(source);
        const auto t0 = std::chrono::steady_clock::now();
        const SparseExpansion dense = dense_iserles(metered, spec.N, cfg.r, M);
        const double elapsed = std::max(0.0, seconds_since(t0) - metered.seconds());
        const double err = l2_error_on_support(trial.expansion, dense, trial.support);
        if (M == lo) {
          rec.wall_time_baseline = elapsed;
          rec.baseline_evaluations = metered.evaluations();
        }
        if (err < rec.l2_error_baseline) {
          rec.l2_error_baseline = err;
          rec.baseline_m = M;
        }
      }
    }

    if (rec.support_found) {
      ++summary.support_found;
      sum_err_found += rec.l2_error_recovery;
    }
    if (rec.recovery_success) ++summary.recovered;
    sum_err_base += rec.l2_error_baseline;
    sum_wall += rec.wall_time_recovery;
    sum_oracle += rec.oracle_time_recovery;
    sum_base += rec.wall_time_baseline;
    sum_evals += static_cast<double>(rec.f_evaluations);

    csv << "trial," << t << ',' << spec.N << ',' << spec.s << ',' << snr << ',' << rec.support_found << ','
        << rec.recovery_success << ',' << fmt(rec.l2_error_recovery) << ',' << fmt(rec.l2_error_baseline) << ','
        << rec.baseline_m << ',' << fmt(rec.wall_time_recovery) << ',' << fmt(rec.oracle_time_recovery) << ','
        << fmt(rec.wall_time_baseline) << ',' << rec.f_evaluations << ','
        << fmt(static_cast<double>(rec.f_evaluations) / static_cast<double>(spec.N)) << ',' << rec.sft_samples << ','
        << rec.cg_iterations << '\n';
    summary.records.push_back(rec);
  }

  const double n = static_cast<double>(spec.trials);
  summary.trials = spec.trials;
  summary.mean_l2_recovery = summary.support_found ? sum_err_found / summary.support_found : 0.0;
  summary.mean_l2_baseline = sum_err_base / n;
  summary.mean_wall_recovery = sum_wall / n;
  summary.mean_oracle_recovery = sum_oracle / n;
  summary.mean_wall_baseline = sum_base / n;
  summary.mean_f_evaluations = sum_evals / n;
  summary.eval_fraction = summary.mean_f_evaluations / static_cast<double>(spec.N);

  csv << "summary," << spec.trials << ',' << spec.N << ',' << spec.s << ',' << snr << ','
      << fmt(summary.support_found / n) << ',' << fmt(summary.recovered / n) << ','
      << fmt(summary.mean_l2_recovery) << ',' << fmt(summary.mean_l2_baseline) << ",," << fmt(summary.mean_wall_recovery)
      << ',' << fmt(summary.mean_oracle_recovery) << ',' << fmt(summary.mean_wall_baseline) << ','
      << fmt(summary.mean_f_evaluations) << ',' << fmt(summary.eval_fraction) << ",,\n";
  csv.flush();
  return summary;
}

ExperimentSummary run_experiment(const TrialSpec& spec, const RecoveryConfig& cfg,
                                 const ExperimentOptions& options, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("run_experiment: cannot open " + path);
  write_csv_preamble(out, cfg, options);
  ExperimentSummary summary = run_experiment(spec, cfg, options, out);
  if (!out) throw std::runtime_error("run_experiment: write failed for " + path);
  return summary;
}

std::string format_summary(const ExperimentSummary& s) {
  std::ostringstream os;
  os << "N=" << s.spec.N << " s=" << s.spec.s;
  if (s.spec.noise_log_snr) os << " log_snr=" << fmt(*s.spec.noise_log_snr);
  os << " trials=" << s.trials << " support_found=" << s.support_found << '/' << s.trials
     << " mean_l2_recovery(found)=" << fmt(s.mean_l2_recovery) << " mean_l2_baseline=" << fmt(s.mean_l2_baseline)
     << " wall_recovery=" << fmt(s.mean_wall_recovery) << "s wall_baseline=" << fmt(s.mean_wall_baseline)
     << "s evals/N=" << fmt(s.eval_fraction) << " plan_setup=" << fmt(s.plan_seconds) << 's';
  return os.str();
}

}  // namespace sleg
