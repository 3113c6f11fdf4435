#include "sparse_legendre/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "sparse_legendre/iserles.hpp"
#include "sparse_legendre/lsq_cg.hpp"
#include "sparse_legendre/rng.hpp"

namespace sleg {

namespace {

constexpr std::uint64_t kSftStream = 1;
constexpr std::uint64_t kPlanStream = 2;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::int64_t scaled_count(double factor, std::int64_t s) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(factor * static_cast<double>(s))));
}

}  // namespace

void RecoveryConfig::validate() const {
  if (s < 1) throw std::invalid_argument("RecoveryConfig: s must be positive");
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("RecoveryConfig: r must lie in (0, 1]");
  if (!(sft_sparsity_factor >= 1.0)) throw std::invalid_argument("RecoveryConfig: sft_sparsity_factor must be >= 1");
  if (!(candidate_factor >= 1.0)) throw std::invalid_argument("RecoveryConfig: candidate_factor must be >= 1");
  if (m < 0) throw std::invalid_argument("RecoveryConfig: negative m");
  if (!(cg_tol > 0.0)) throw std::invalid_argument("RecoveryConfig: cg_tol must be positive");
  if (cg_max_iter < 1) throw std::invalid_argument("RecoveryConfig: cg_max_iter must be positive");
  if (expand_k && *expand_k < 1) throw std::invalid_argument("RecoveryConfig: expand_k must be >= 1");
  SftParams p = sft;
  p.s = s;
  p.validate();
}

std::int64_t RecoveryConfig::sample_count(std::int64_t N) const {
  return m > 0 ? m : default_sample_count(s, N);
}

std::vector<std::int64_t> identify_support(const LegendreSource& f, std::int64_t N, const RecoveryConfig& cfg,
                                           RecoveryDiagnostics* diag) {
  cfg.validate();
  if (N < 0) throw std::domain_error("identify_support: negative N");
  if (cfg.r != 1.0 && !f.has_complex()) {
    throw std::domain_error("identify_support: source is real-only; r must be 1");
  }
  const double r = cfg.r;
  PeriodicSampler sampler;
  sampler.band = Band{-N, N + 2};
  sampler.at = [&f, r](double x) { return f_r_value(f, r, x); };
  sampler.grid = [&f, r](double offset, std::span<Complex> out) { f.resampled_grid(r, offset, out); };

  SftParams params = cfg.sft;
  params.s = scaled_count(cfg.sft_sparsity_factor, cfg.s);
  params.seed = detail::stream_seed(cfg.seed, kSftStream);
  const SftResult sft_out = sft(sampler, params);
  if (diag) {
    diag->sft_samples = sft_out.samples;
    diag->sft_terms = sft_out.coefficients.size();
    diag->success = sft_out.success;
    if (!sft_out.success) diag->failure = "sparse FFT found no consistent frequencies";
  }
  if (!sft_out.success) return {};

  // u_j = f_r^(-j) / H_jj = f~_j + sum_{a > j} (H_ja / H_jj) f~_a. The mirror
  // frequency carries exactly -r^{2j+2} f_r^(-j), so both fold onto u_j.
  const double lr = r == 1.0 ? 0.0 : std::log(r);
  std::map<std::int64_t, Complex> score;
  for (const auto& [w, c] : sft_out.coefficients.entries()) {
    std::int64_t j;
    Complex u;
    if (w <= 0) {
      j = -w;
      u = c / inverse_diag(j, r);
    } else if (w >= 2) {
      j = w - 2;
      u = -c / (inverse_diag(j, r) * std::exp((2.0 * static_cast<double>(j) + 2.0) * lr));
    } else {
      continue;
    }
    if (j > N) continue;
    auto [it, fresh] = score.try_emplace(j, u);
    if (!fresh && std::abs(u) > std::abs(it->second)) it->second = u;
  }
  const auto cap = static_cast<std::size_t>(scaled_count(cfg.candidate_factor, cfg.s));

  // Greedy: take the largest |u|, then remove its leakage from the same-parity
  // candidates below it. Without this the first tail entries of a strong
  // degree (up to half its size) outrank weaker genuine degrees.
  const IserlesMap map(r, N);
  std::vector<std::int64_t> out;
  while (out.size() < cap && !score.empty()) {
    auto best = score.begin();
    for (auto it = score.begin(); it != score.end(); ++it) {
      if (std::abs(it->second) > std::abs(best->second)) best = it;
    }
    if (!(std::abs(best->second) > 0.0)) break;
    const std::int64_t a = best->first;
    const Complex ua = best->second;
    out.push_back(a);
    score.erase(best);
    for (auto it = score.begin(); it != score.end() && it->first < a; ++it) {
      const std::int64_t n = it->first;
      if ((a - n) % 2 != 0) continue;
      it->second -= (map.inverse_entry(n, a) / map.inverse_entry(n, n)) * ua;
    }
  }
  return out;
}

std::vector<std::int64_t> expand_candidates(const std::vector<std::int64_t>& A, std::int64_t k, std::int64_t N) {
  if (k < 1) throw std::invalid_argument("expand_candidates: k must be >= 1");
  std::set<std::int64_t> out;
  for (std::int64_t a : A) {
    if (a < 0 || a > N) throw std::out_of_range("expand_candidates: degree outside [0, N]");
    for (std::int64_t d = 0; d < k && a - 2 * d >= 0; ++d) out.insert(a - 2 * d);
  }
  return {out.begin(), out.end()};
}

RecoveryResult estimate_on_support(const LegendreSource& f, std::int64_t N, std::vector<std::int64_t> S,
                                   const RecoveryConfig& cfg, const SamplePlan& plan) {
  cfg.validate();
  if (plan.N() < N) throw std::invalid_argument("estimate_on_support: plan does not cover degree N");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  for (std::int64_t n : S) {
    if (n < 0 || n > N) throw std::out_of_range("estimate_on_support: degree outside [0, N]");
  }

  RecoveryResult result;
  result.expansion = SparseExpansion(Basis::Legendre, N);
  result.identified_support = S;
  RecoveryDiagnostics& diag = result.diagnostics;
  diag.plan_samples = plan.size();
  if (S.empty()) {
    diag.success = true;
    return result;
  }
  if (S.size() > plan.size()) {
    diag.failure = "more candidate degrees than sample points";
    return result;
  }

  const Eigen::VectorXd y = weighted_samples(f, plan);
  auto solve = [&](const std::vector<std::int64_t>& cols) {
    LsqProblem p = LsqProblem::from_matrix(sampling_matrix(plan, cols), y, cfg.cg_tol);
    p.max_iter = cfg.cg_max_iter;
    return cg_normal_solve(p);
  };
  LsqResult sol = solve(S);
  diag.cg_iterations = sol.iterations;
  if (static_cast<std::int64_t>(S.size()) > cfg.s && sol.converged) {
    std::vector<std::pair<double, std::int64_t>> ranked;
    for (std::size_t t = 0; t < S.size(); ++t) {
      ranked.emplace_back(std::abs(sol.z(static_cast<Eigen::Index>(t))) * std::sqrt(2.0 * static_cast<double>(S[t]) + 1.0), S[t]);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<std::int64_t> kept;
    for (std::int64_t t = 0; t < cfg.s; ++t) kept.push_back(ranked[static_cast<std::size_t>(t)].second);
    std::sort(kept.begin(), kept.end());
    S = kept;
    sol = solve(S);
    diag.cg_iterations += sol.iterations;
  }
  diag.cg_residual = sol.residual;
  if (!sol.converged) {
    diag.failure = "conjugate gradients did not converge";
    return result;
  }
  for (std::size_t t = 0; t < S.size(); ++t) {
    result.expansion.set(S[t], std::sqrt(2.0 * static_cast<double>(S[t]) + 1.0) * sol.z(static_cast<Eigen::Index>(t)));
  }
  diag.success = true;
  return result;
}

RecoveryResult recover_sparse_legendre(const LegendreSource& f, std::int64_t N, const RecoveryConfig& cfg,
                                       const SamplePlan* plan) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  MeteredSource metered(f);

  RecoveryDiagnostics id_diag;
  std::vector<std::int64_t> S = identify_support(metered, N, cfg, &id_diag);
  RecoveryResult result;
  if (!id_diag.success) {
    result.expansion = SparseExpansion(Basis::Legendre, N);
    result.diagnostics = id_diag;
  } else {
    if (cfg.expand_k) S = expand_candidates(S, *cfg.expand_k, N);
    std::optional<SamplePlan> own;
    if (!plan) {
      own.emplace(sample_chebyshev_points(cfg.sample_count(N) , N, detail::stream_seed(cfg.seed, kPlanStream)));
      plan = &*own;
    }
    result = estimate_on_support(metered, N, S, cfg, *plan);
    result.diagnostics.sft_samples = id_diag.sft_samples;
    result.diagnostics.sft_terms = id_diag.sft_terms;
  }
  result.diagnostics.evaluations = metered.evaluations();
  result.diagnostics.oracle_seconds = metered.seconds();
  result.diagnostics.wall_seconds = std::max(0.0, seconds_since(t0) - metered.seconds());
  return result;
}

ChebyshevRecovery recover_sparse_chebyshev(const std::function<double(double)>& g, std::int64_t N,
                                           const RecoveryConfig& cfg) {
  cfg.validate();
  if (N < 0) throw std::domain_error("recover_sparse_chebyshev: negative N");
  PeriodicSampler sampler;
  sampler.band = Band{-N, N};
  sampler.at = [&g](double x) { return Complex(g(std::cos(x)), 0.0); };
  SftParams params = cfg.sft;
  params.s = 2 * cfg.s;
  params.seed = detail::stream_seed(cfg.seed, kSftStream);
  const SftResult out = sft(sampler, params);

  ChebyshevRecovery rec;
  rec.expansion = SparseExpansion(Basis::Chebyshev, N);
  rec.samples = out.samples;
  rec.success = out.success;
  if (!out.success) return rec;

  // a_n from h^(n) and h^(-n); when both are present they are averaged.
  std::map<std::int64_t, std::pair<double, int>> folded;
  for (const auto& [w, c] : out.coefficients.entries()) {
    const std::int64_t n = std::abs(w);
    const double a = n == 0 ? c.real() : 2.0 * c.real();
    auto& slot = folded[n];
    slot.first += a;
    slot.second += 1;
  }
  std::vector<std::pair<double, std::int64_t>> ranked;
  for (const auto& [n, acc] : folded) ranked.emplace_back(acc.first / acc.second, n);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.first) != std::abs(b.first)) return std::abs(a.first) > std::abs(b.first);
    return a.second < b.second;
  });
  for (std::size_t t = 0; t < ranked.size() && static_cast<std::int64_t>(t) < cfg.s; ++t) {
    rec.expansion.set(ranked[t].second, ranked[t].first);
  }
  return rec;
}

}  // namespace sleg
