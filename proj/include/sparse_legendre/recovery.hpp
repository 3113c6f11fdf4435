#pragma once

// Sparse Legendre recovery: locate the energetic degrees with a sparse FFT of
// f_r, then estimate their coefficients by least squares on random
// Chebyshev-measure samples. Also the (exact) Chebyshev-sparse analogue.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sparse_legendre/fourier.hpp"
#include "sparse_legendre/poly.hpp"
#include "sparse_legendre/sampling.hpp"
#include "sparse_legendre/source.hpp"

namespace sleg {

struct RecoveryConfig {
  std::int64_t s = 1;
  double r = 1.0 - 1e-8;
  /// trials and bucket_factor are used as given; s and seed are derived from
  /// this config (sft_sparsity_factor * s, and `seed`).
  SftParams sft{};
  /// f_r's spectrum carries decaying tails next to every active degree, so the
  /// transform is asked for more terms than s.
  double sft_sparsity_factor = 4.0;
  /// Degrees handed to the estimation stage: ceil(candidate_factor * s).
  double candidate_factor = 1.0;
  /// Sample points; 0 selects default_sample_count(s, N).
  std::int64_t m = 0;
  double cg_tol = 1e-10;
  int cg_max_iter = 200;
  std::optional<std::int64_t> expand_k;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
  std::int64_t sample_count(std::int64_t N) const;
};

struct RecoveryDiagnostics {
  bool success = false;
  std::string failure;
  std::uint64_t sft_samples = 0;
  std::uint64_t plan_samples = 0;
  std::uint64_t evaluations = 0;
  std::size_t sft_terms = 0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  /// Time inside the algorithm, excluding f evaluations (reported separately).
  double wall_seconds = 0.0;
  double oracle_seconds = 0.0;
};

struct RecoveryResult {
  SparseExpansion expansion;
  std::vector<std::int64_t> identified_support;
  RecoveryDiagnostics diagnostics;
};

/// Sparse FFT of f_r on [-N, N+2], folded onto degrees (w <= 0 -> -w, w >= 2 ->
/// w - 2, w = 1 dropped) and ranked by |coefficient| / expected diagonal gain.
/// Returns up to ceil(candidate_factor * s) degrees, best first; empty when
/// the transform fails (diag->success = false) or f has no energy.
std::vector<std::int64_t> identify_support(const LegendreSource& f, std::int64_t N, const RecoveryConfig& cfg,
                                           RecoveryDiagnostics* diag = nullptr);

/// A together with every j <= a of a's parity with (a - j) / 2 < k, for a in A; sorted.
std::vector<std::int64_t> expand_candidates(const std::vector<std::int64_t>& A, std::int64_t k, std::int64_t N);

/// Least-squares coefficients on a given degree set. Keeps the s largest when
/// |S| > s and solves again on those.
RecoveryResult estimate_on_support(const LegendreSource& f, std::int64_t N, std::vector<std::int64_t> S,
                                   const RecoveryConfig& cfg, const SamplePlan& plan);

/// The full pipeline. `plan` may be shared between calls (it must cover degree N);
/// when null one is drawn from cfg.seed.
RecoveryResult recover_sparse_legendre(const LegendreSource& f, std::int64_t N, const RecoveryConfig& cfg,
                                       const SamplePlan* plan = nullptr);

struct ChebyshevRecovery {
  SparseExpansion expansion;
  bool success = false;
  std::uint64_t samples = 0;
};

/// g(cos x) = sum a_n T_n(cos x) has Fourier coefficients a_n / 2 at +-n (a_0 at 0).
ChebyshevRecovery recover_sparse_chebyshev(const std::function<double(double)>& g, std::int64_t N,
                                           const RecoveryConfig& cfg);

}  // namespace sleg
