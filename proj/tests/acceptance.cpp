// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sparse_legendre/bench.hpp"
#include "sparse_legendre/iserles.hpp"
#include "sparse_legendre/recovery.hpp"
#include "sparse_legendre/sampling.hpp"

using namespace sleg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, double secs, double budget, const std::string& detail) {
  const bool ok = pass && secs < budget;
  failures += !ok;
  std::printf("criterion %2d: %s  %s  [%.1fs, budget %.0fs]\n", id, ok ? "PASS" : "FAIL", detail.c_str(), secs, budget);
  std::fflush(stdout);
}

std::vector<std::int64_t> random_support(std::mt19937_64& rng, std::int64_t N, int s) {
  std::uniform_int_distribution<std::int64_t> deg(0, N);
  std::set<std::int64_t> S;
  while (static_cast<int>(S.size()) < s) S.insert(deg(rng));
  return {S.begin(), S.end()};
}

void identity() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::int64_t N : {16, 64, 256}) {
    for (double r : {1.0, 1.0 - 1e-8, 0.9}) worst = std::max(worst, oracle::inverse_identity_deviation(N, r));
  }
  std::ostringstream d;
  d << "max |G H - I| = " << worst << " (tol 1e-10)";
  report(1, worst <= 1e-10, seconds_since(t0), 10, d.str());
}

void finite_sums() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& [r, rq] : {std::pair{1.0, oracle::Rational(1)}, std::pair{0.9, oracle::Rational(9, 10)}}) {
    const IserlesMap map(r, 60);
    for (int i = 0; i <= 60; ++i) {
      for (int j = i; j <= 60; j += 2) {
        const double want = oracle::finite_sum_inverse(i, j, rq).convert_to<double>();
        worst = std::max(worst, std::abs(map.inverse_entry(i, j) - want) / std::abs(want));
      }
    }
  }
  std::ostringstream d;
  d << "max relative gap, exact finite sums vs closed form = " << worst << " (tol 1e-11)";
  report(2, worst <= 1e-11, seconds_since(t0), 1, d.str());
}

void decay() {
  const auto t0 = Clock::now();
  long checked = 0, bad = 0;
  for (double r : {1.0, 0.9}) {
    const auto rep = oracle::decay_bounds(200, 60, r);
    checked += rep.checked;
    bad += rep.violations;
  }
  std::ostringstream d;
  d << bad << " violations in " << checked << " row/column/diagonal checks";
  report(3, bad == 0 && checked > 0, seconds_since(t0), 10, d.str());
}

void ensembles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2718);
  long entry_bad = 0, entry_checked = 0, tail_bad = 0, tails = 0;
  for (int t = 0; t < 200; ++t) {
    const SparseExpansion f = oracle::sparse_ensemble(rng, 512, 10, 64);
    for (double r : {1.0, 1.0 - 1e-8}) {
      long n = 0;
      entry_bad += oracle::entry_bound_violations(f, 10, r, &n);
      entry_checked += n;
    }
    for (int k : {8, 16}) {
      const auto tb = oracle::tail_bound(f, 10, k);
      tail_bad += !(tb.tail < tb.bound);
      ++tails;
    }
  }
  std::ostringstream d;
  d << "entry bound: " << entry_bad << "/" << entry_checked << " violated; tail bound: " << tail_bad << "/" << tails
    << " violated";
  report(4, entry_bad == 0 && tail_bad == 0 && entry_checked > 0, seconds_since(t0), 30, d.str());
}

struct ScalingRun {
  std::int64_t N = 0;
  ExperimentSummary summary;
  double seconds = 0.0;
};

std::vector<ScalingRun> scaling_runs() {
  std::vector<ScalingRun> runs;
  for (int e = 14; e <= 17; ++e) {
    TrialSpec spec;
    spec.N = std::int64_t{1} << e;
    spec.s = 20;
    spec.trials = 100;
    spec.seed = 39;
    RecoveryConfig cfg;
    cfg.s = 20;
    cfg.seed = 7;
    std::ostringstream csv;
    const auto t0 = Clock::now();
    ScalingRun run;
    run.N = spec.N;
    run.summary = run_experiment(spec, cfg, ExperimentOptions{}, csv);
    run.seconds = seconds_since(t0);
    runs.push_back(std::move(run));
  }
  return runs;
}

void exact_sparse(const ScalingRun& run) {
  int good = 0;
  for (const auto& rec : run.summary.records) good += rec.support_found && rec.l2_error_recovery < 1e-5;
  std::ostringstream d;
  d << "N=2^17: " << good << "/100 trials with support found and error < 1e-5 (need >= 70); mean error "
    << run.summary.mean_l2_recovery << ", dense baseline " << run.summary.mean_l2_baseline;
  report(5, good >= 70, run.seconds, 900, d.str());
}

void scaling(const std::vector<ScalingRun>& runs) {
  double total = 0.0;
  bool decreasing = true;
  std::ostringstream d;
  d << "evals/N:";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    total += runs[i].seconds;
    d << ' ' << runs[i].summary.eval_fraction;
    if (i > 0) decreasing = decreasing && runs[i].summary.eval_fraction < runs[i - 1].summary.eval_fraction;
  }
  const double rec_growth = runs.back().summary.mean_wall_recovery / runs.front().summary.mean_wall_recovery;
  const double base_growth = runs.back().summary.mean_wall_baseline / runs.front().summary.mean_wall_baseline;
  d << "; recovery time x" << rec_growth << " (need < 2), baseline time x" << base_growth << " (need >= 6)";
  report(6, decreasing && rec_growth < 2.0 && base_growth >= 6.0, total, 1800, d.str());
}

void noise() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream d;
  for (double snr : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    TrialSpec spec;
    spec.N = 1 << 14;
    spec.s = 20;
    spec.trials = 100;
    spec.mode = TrialMode::Noisy;
    spec.noise_log_snr = snr;
    spec.seed = 41;
    RecoveryConfig cfg;
    cfg.s = 20;
    cfg.seed = 9;
    std::ostringstream csv;
    const auto sum = run_experiment(spec, cfg, ExperimentOptions{}, csv);
    if (snr >= 2.0 && !(sum.support_found > 0 && sum.mean_l2_recovery < sum.mean_l2_baseline)) pass = false;
    if (snr == 3.0 && sum.support_found < 90) pass = false;
    d << " snr " << snr << ": found " << sum.support_found << ", err " << sum.mean_l2_recovery << " vs baseline "
      << sum.mean_l2_baseline << ';';
  }
  report(7, pass, seconds_since(t0), 1800, d.str());
}

void known_support() {
  const auto t0 = Clock::now();
  const std::int64_t N = 1 << 14;
  TrialSpec spec;
  spec.N = N;
  spec.s = 10;
  spec.seed = 43;
  RecoveryConfig cfg;
  cfg.s = 10;
  cfg.cg_tol = 1e-10;
  double worst = 0.0, worst_orthonormal = 0.0;
  int ok = 0;
  for (int t = 0; t < 100; ++t) {
    const SparseExpansion f = gen_trial_poly(spec, t);
    std::vector<std::int64_t> S;
    for (const auto& [n, c] : f.entries()) S.push_back(n);
    const SamplePlan plan = sample_chebyshev_points(default_sample_count(10, N), N, 500 + static_cast<std::uint64_t>(t));
    const auto res = estimate_on_support(ExpansionSource(f), N, S, cfg, plan);
    const double err = l2_error_on_support(f, res.expansion, S);
    double orth = 0.0;
    for (std::int64_t n : S) {
      const double e = (f[n] - res.expansion[n]) / std::sqrt(2.0 * static_cast<double>(n) + 1.0);
      orth += e * e;
    }
    worst = std::max(worst, err);
    worst_orthonormal = std::max(worst_orthonormal, std::sqrt(orth));
    ok += res.diagnostics.success && err <= 1e-7;
  }
  std::ostringstream d;
  d << ok << "/100 within 1e-7; worst coefficient error " << worst << ", orthonormal " << worst_orthonormal;
  report(8, ok == 100, seconds_since(t0), 120, d.str());
}

void chebyshev() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(47);
  std::normal_distribution<double> g;
  int successes = 0, exact = 0;
  for (int t = 0; t < 100; ++t) {
    const int s = 1 + t % 8;
    SparseExpansion a(Basis::Chebyshev, 1024);
    while (static_cast<int>(a.size()) < s) a.set(std::uniform_int_distribution<std::int64_t>(0, 1024)(rng), g(rng));
    RecoveryConfig cfg;
    cfg.s = s;
    cfg.seed = 100 + static_cast<std::uint64_t>(t);
    const auto rec = recover_sparse_chebyshev([&a](double x) { return eval_expansion(a, x); }, 1024, cfg);
    if (!rec.success) continue;
    ++successes;
    double worst = 0.0;
    std::set<std::int64_t> degrees;
    for (const auto& [n, c] : a.entries()) degrees.insert(n);
    for (const auto& [n, c] : rec.expansion.entries()) degrees.insert(n);
    for (std::int64_t n : degrees) worst = std::max(worst, std::abs(rec.expansion[n] - a[n]));
    exact += worst < 1e-10;
  }
  std::ostringstream d;
  d << "success " << successes << "/100 (need >= 95), exact to 1e-10 in " << exact << "/" << successes;
  report(9, successes >= 95 && exact == successes, seconds_since(t0), 60, d.str());
}

void conditioning() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream d;
  for (std::int64_t N : {std::int64_t{1} << 14, std::int64_t{1} << 17}) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(N) + 53);
    std::uniform_int_distribution<int> size(1, 20);
    int ok = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const int s = size(rng);
      const SamplePlan plan = sample_chebyshev_points(default_sample_count(s, N), N, 900 + seed);
      const double kappa = submatrix_condition(plan, random_support(rng, N, s));
      worst = std::max(worst, kappa);
      ok += kappa <= 4.0;
    }
    pass = pass && ok >= 95;
    d << " N=" << N << ": " << ok << "/100 with kappa <= 4 (worst " << worst << ");";
  }
  report(10, pass, seconds_since(t0), 300, d.str());
}

}  // namespace

int main() {
  identity();
  finite_sums();
  decay();
  ensembles();
  const auto runs = scaling_runs();
  exact_sparse(runs.back());
  scaling(runs);
  noise();
  known_support();
  chebyshev();
  conditioning();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
