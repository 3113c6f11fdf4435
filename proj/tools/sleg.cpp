// Command-line front end: single recoveries and the benchmark sweeps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparse_legendre/bench.hpp"
#include "sparse_legendre/fourier.hpp"
#include "sparse_legendre/iserles.hpp"
#include "sparse_legendre/recovery.hpp"
#include "sparse_legendre/sampling.hpp"

namespace {

struct CommonFlags {
  std::int64_t n = 1 << 17;
  std::int64_t s = 20;
  double r = 1.0 - 1e-8;
  int trials = 100;
  std::uint64_t seed = 1;
  std::int64_t m_samples = 0;
  double cg_tol = 1e-10;
  std::int64_t expand_k = 0;
  std::int64_t baseline_m_sweep = 0;
  int sft_trials = 7;
  double bucket_factor = 4.0;
  std::string out;
};

void add_common(CLI::App* app, CommonFlags& f, bool with_trials) {
  app->add_option("--n", f.n, "Maximum Legendre degree N")->capture_default_str();
  app->add_option("--s", f.s, "Sparsity s")->capture_default_str();
  app->add_option("--r", f.r, "Resampling radius r in (0, 1]")->default_str("1 - 1e-8");
  if (with_trials) app->add_option("--trials", f.trials, "Trials per data point")->capture_default_str();
  app->add_option("--seed", f.seed, "Experiment seed")->capture_default_str();
  app->add_option("--m-samples", f.m_samples, "Sample points m (0: max(ceil(8 s log2(N+2)), 64))")
      ->capture_default_str();
  app->add_option("--cg-tol", f.cg_tol, "CG tolerance delta")->capture_default_str();
  app->add_option("--expand-k", f.expand_k, "Candidate expansion width k (0: off)")->capture_default_str();
  app->add_option("--baseline-m-sweep", f.baseline_m_sweep,
                  "Keep the best dense-baseline truncation M in [1, value] (0: M = 1)")
      ->capture_default_str();
  app->add_option("--sft-trials", f.sft_trials, "Sparse FFT repetitions (odd)")->capture_default_str();
  app->add_option("--bucket-factor", f.bucket_factor, "Sparse FFT buckets per term")->capture_default_str();
  app->add_option("--out", f.out, "Output CSV path")->required();
}

sleg::RecoveryConfig make_config(const CommonFlags& f) {
  sleg::RecoveryConfig cfg;
  cfg.s = f.s;
  cfg.r = f.r;
  cfg.m = f.m_samples;
  cfg.cg_tol = f.cg_tol;
  cfg.sft.trials = f.sft_trials;
  cfg.sft.bucket_factor = f.bucket_factor;
  if (f.expand_k > 0) cfg.expand_k = f.expand_k;
  cfg.seed = f.seed;
  cfg.validate();
  return cfg;
}

sleg::ExperimentOptions make_options(const CommonFlags& f) {
  sleg::ExperimentOptions opt;
  opt.baseline_m_sweep = f.baseline_m_sweep;
  return opt;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  return out;
}

sleg::SparseExpansion read_coefficients(const std::string& path, std::int64_t N) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  sleg::SparseExpansion e(sleg::Basis::Legendre, N);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::int64_t degree;
    double value;
    if (!(fields >> degree)) continue;  // blank line
    if (!(fields >> value)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'degree value'");
    e.add(degree, value);
  }
  return e;
}

int run_recover(const CommonFlags& f, const std::string& input) {
  const sleg::RecoveryConfig cfg = make_config(f);
  const sleg::SparseExpansion truth = read_coefficients(input, f.n);
  const sleg::ExpansionSource source(truth);
  const sleg::RecoveryResult res = sleg::recover_sparse_legendre(source, f.n, cfg);

  std::ofstream out = open_csv(f.out);
  out << "# sparse-legendre-recover schema=1 N=" << f.n << " s=" << f.s << " r=" << f.r
      << " success=" << res.diagnostics.success << '\n';
  out << "degree,coefficient,input\n";
  for (const auto& [n, v] : res.expansion.entries()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(n), v, truth[n]);
    out << buf;
  }
  const auto& d = res.diagnostics;
  std::cout << (d.success ? "success" : "FAILED: " + d.failure) << ": " << res.expansion.size()
            << " terms, f evaluations " << d.evaluations << " (" << 100.0 * static_cast<double>(d.evaluations) / static_cast<double>(f.n)
            << "% of N), cg iterations " << d.cg_iterations << ", residual " << d.cg_residual << ", wall "
            << d.wall_seconds << " s (+" << d.oracle_seconds << " s in f)\n";
  return d.success ? 0 : 1;
}

int run_bench_runtime(const CommonFlags& f) {
  const sleg::RecoveryConfig cfg = make_config(f);
  const sleg::ExperimentOptions opt = make_options(f);
  std::ofstream out = open_csv(f.out);
  sleg::write_csv_preamble(out, cfg, opt);
  std::int64_t lo = std::min<std::int64_t>(f.n, 1 << 14);
  for (std::int64_t N = lo; N <= f.n; N *= 2) {
    sleg::TrialSpec spec;
    spec.N = N;
    spec.s = f.s;
    spec.trials = f.trials;
    spec.seed = f.seed;
    std::cout << sleg::format_summary(sleg::run_experiment(spec, cfg, opt, out)) << std::endl;
  }
  return 0;
}

int run_bench_error(const CommonFlags& f) {
  const sleg::RecoveryConfig cfg = make_config(f);
  const sleg::ExperimentOptions opt = make_options(f);
  sleg::TrialSpec spec;
  spec.N = f.n;
  spec.s = f.s;
  spec.trials = f.trials;
  spec.seed = f.seed;
  std::cout << sleg::format_summary(sleg::run_experiment(spec, cfg, opt, f.out)) << std::endl;
  return 0;
}

int run_bench_noise(const CommonFlags& f, const std::vector<double>& snrs) {
  const sleg::RecoveryConfig cfg = make_config(f);
  const sleg::ExperimentOptions opt = make_options(f);
  std::ofstream out = open_csv(f.out);
  sleg::write_csv_preamble(out, cfg, opt);
  for (double snr : snrs) {
    sleg::TrialSpec spec;
    spec.N = f.n;
    spec.s = f.s;
    spec.trials = f.trials;
    spec.seed = f.seed;
    spec.mode = sleg::TrialMode::Noisy;
    spec.noise_log_snr = snr;
    std::cout << sleg::format_summary(sleg::run_experiment(spec, cfg, opt, out)) << std::endl;
  }
  return 0;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Quick versions of the library invariants, small enough for a smoke run.
int run_selftest() {
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    if (!ok) ++failures;
  };

  for (double r : {1.0, 0.9}) {
    const sleg::IserlesMap map(r, 64);
    const double dev =
        (map.forward_matrix() * map.inverse_matrix() - Eigen::MatrixXd::Identity(65, 65)).cwiseAbs().maxCoeff();
    report("inverse-identity", dev <= 1e-10, "r=" + fmt(r) + " max deviation " + fmt(dev));
  }

  {
    sleg::SparseExpansion f(sleg::Basis::Legendre, 256);
    f.set(40, 3.0);
    f.set(101, -1.5);
    const sleg::ExpansionSource src(f);
    sleg::RecoveryConfig cfg;
    cfg.s = 2;
    cfg.seed = 7;
    const auto res = sleg::recover_sparse_legendre(src, 256, cfg);
    const double err = std::hypot(res.expansion[40] - 3.0, res.expansion[101] + 1.5);
    report("legendre-recovery", res.diagnostics.success && err < 1e-8, "error " + fmt(err));
  }

  {
    auto g = [](double x) { return sleg::chebyshev_eval(3, x) - 2.0 * sleg::chebyshev_eval(9, x); };
    sleg::RecoveryConfig cfg;
    cfg.s = 2;
    const auto rec = sleg::recover_sparse_chebyshev(g, 1024, cfg);
    const double err = std::hypot(rec.expansion[3] - 1.0, rec.expansion[9] + 2.0);
    report("chebyshev-recovery", rec.success && err < 1e-10, "error " + fmt(err));
  }

  {
    const sleg::SamplePlan plan = sleg::sample_chebyshev_points(sleg::default_sample_count(10, 1 << 14), 1 << 14, 3);
    const std::vector<std::int64_t> S{3, 100, 512, 999, 2048, 4000, 7001, 9000, 12000, 16000};
    const double kappa = sleg::submatrix_condition(plan, S);
    report("conditioning", kappa <= 4.0, "kappa " + fmt(kappa));
  }

  std::cout << (failures ? "selftest FAILED" : "selftest passed") << std::endl;
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Legendre expansion recovery and benchmarks"};
  app.require_subcommand(1);

  CommonFlags recover_flags, runtime_flags, error_flags, noise_flags;
  std::string input;
  auto* recover = app.add_subcommand("recover", "Recover a sparse expansion given as a coefficient file");
  add_common(recover, recover_flags, false);
  recover->add_option("input", input, "Coefficient file: one 'degree value' pair per line")->required();

  auto* runtime = app.add_subcommand("bench-runtime", "Runtime and evaluation counts for N = 2^14 ... --n");
  add_common(runtime, runtime_flags, true);

  auto* error = app.add_subcommand("bench-error", "Error of recovery and the dense baseline on exactly sparse inputs");
  add_common(error, error_flags, true);

  std::vector<double> snrs{1.0, 1.5, 2.0, 2.5, 3.0};
  auto* noise = app.add_subcommand("bench-noise", "Error under Gaussian coefficient noise over a log-SNR grid");
  noise_flags.n = 1 << 14;
  add_common(noise, noise_flags, true);
  noise->add_option("--log-snr", snrs, "log10 signal-to-noise values")->capture_default_str();

  auto* selftest = app.add_subcommand("selftest", "Run quick invariant checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*recover) return run_recover(recover_flags, input);
    if (*runtime) return run_bench_runtime(runtime_flags);
    if (*error) return run_bench_error(error_flags);
    if (*noise) return run_bench_noise(noise_flags, snrs);
    if (*selftest) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
