#pragma once

// Random Chebyshev-measure sampling of the reweighted, orthonormalized
// Legendre system:
//   R~_{j,n} = sqrt(pi/2) (1 - x_j^2)^{1/4} sqrt(2n + 1) L_n(x_j) / sqrt(m + 1).
// Columns have unit expected norm. A coefficient vector c in this system
// relates to ordinary Legendre coefficients by c_n = f~_n / sqrt(2n + 1).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sparse_legendre/source.hpp"

namespace sleg {

/// m + 1 points in (-1, 1) with their Legendre recurrence checkpointed every
/// `stride` degrees, so L_n(x_j) costs O(stride) instead of O(n).
class SamplePlan {
 public:
  /// Stride 0 picks the smallest power of two >= 32 that keeps the checkpoint
  /// table under kCacheBudgetBytes.
  static constexpr std::int64_t kDefaultStride = 0;
  static constexpr std::size_t kCacheBudgetBytes = std::size_t{256} << 20;

  /// Takes ownership of explicit points; throws std::domain_error if any |x| >= 1.
  SamplePlan(std::vector<double> points, std::int64_t N, std::uint64_t seed = 0,
             std::int64_t stride = kDefaultStride);

  std::int64_t m() const { return static_cast<std::int64_t>(points_.size()) - 1; }
  std::int64_t N() const { return N_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t stride() const { return stride_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  double point(std::size_t j) const { return points_.at(j); }

  /// sqrt(pi/2) (1 - x_j^2)^{1/4} / sqrt(m + 1).
  double weight(std::size_t j) const;

  /// out[t] = L_{degrees[t]}(x_j), bit-identical to legendre_row. Degrees may come in any order.
  void legendre_at(std::size_t j, std::span<const std::int64_t> degrees, std::span<double> out) const;

  /// Text record: a header line, then "seed m N", then one point per line at full precision.
  void write(std::ostream& os) const;
  static SamplePlan read(std::istream& is, std::int64_t stride = kDefaultStride);

 private:
  std::vector<double> points_;
  std::int64_t N_;
  std::uint64_t seed_;
  std::int64_t stride_;
  std::int64_t checkpoints_ = 0;
  // For point j and checkpoint c: (L_{c*stride}, L_{c*stride+1}).
  std::vector<double> cache_;
};

/// x_j = cos(pi U_j), U_j uniform on (0, 1); draws with |x| = 1 are redrawn.
SamplePlan sample_chebyshev_points(std::int64_t m, std::int64_t N, std::uint64_t seed,
                                   std::int64_t stride = SamplePlan::kDefaultStride);

/// max(ceil(8 s log2(N + 2)), 64).
std::int64_t default_sample_count(std::int64_t s, std::int64_t N);

/// Row j of R~ restricted to the degrees in S (same order as S).
Eigen::VectorXd sampling_row(const SamplePlan& plan, std::size_t j, std::span<const std::int64_t> S);

/// R~ restricted to the columns S, (m + 1) x |S|.
Eigen::MatrixXd sampling_matrix(const SamplePlan& plan, std::span<const std::int64_t> S);

/// y_j = weight(j) f(x_j). Equals R~ c when f is a Legendre expansion with normalized coefficients c.
Eigen::VectorXd weighted_samples(const LegendreSource& f, const SamplePlan& plan);

/// kappa(R~_S^* R~_S) from power and inverse power iteration, each to 1e-8 relative.
/// Throws std::invalid_argument on empty S and std::runtime_error when the
/// smallest eigenvalue falls below 1e-14.
double submatrix_condition(const SamplePlan& plan, std::span<const std::int64_t> S);

}  // namespace sleg
