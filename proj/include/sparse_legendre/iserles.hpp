#pragma once

// The triangular map between Fourier coefficients of f_r and Legendre
// coefficients of f, its closed-form inverse, the dense O(N log N) baseline,
// and right-distance bookkeeping on sorted supports.
//
// Convention: column/row index j stands for the Fourier coefficient f_r^(-j).

#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "sparse_legendre/fourier.hpp"
#include "sparse_legendre/poly.hpp"
#include "sparse_legendre/source.hpp"

namespace sleg {

class IserlesMap {
 public:
  /// Throws std::domain_error unless 0 < r <= 1 and N >= 0.
  IserlesMap(double r, std::int64_t N);

  double r() const { return r_; }
  std::int64_t N() const { return N_; }

  /// g~_{i,(j-i)/2} on the upper triangle when i, j share parity, else 0.
  double forward_entry(std::int64_t i, std::int64_t j) const;
  /// Entry (i, j) of the inverse, from the closed form.
  double inverse_entry(std::int64_t i, std::int64_t j) const;

  Eigen::MatrixXd forward_matrix() const;
  Eigen::MatrixXd inverse_matrix() const;

 private:
  void check_index(std::int64_t i, std::int64_t j) const;

  double r_;
  std::int64_t N_;
};

/// C(2n, n) 4^{-n} r^{-n}; asserts r^{-n}/sqrt(pi n) (1 - 1/8n) <= value <= r^{-n}/sqrt(pi n).
double inverse_diag(std::int64_t n, double r);

/// f_r^(-j) for j in `band` (a subrange of [0, N]); result keys are -j.
FourierSparse apply_inverse(const SparseExpansion& ftilde, const IserlesMap& map, Band band);

/// Dense baseline: FFT of f_r on 2^k >= 2N + 4M + 4 points, then the sum
/// truncated after M + 1 terms for every degree. `grid_samples`, if given,
/// receives the number of f_r evaluations.
SparseExpansion dense_iserles(const LegendreSource& f, std::int64_t N, double r, std::int64_t M = 1,
                              std::uint64_t* grid_samples = nullptr);

/// Degrees [0, N] ordered by |coefficient| descending (ties: smaller degree first).
class SupportProfile {
 public:
  explicit SupportProfile(const SparseExpansion& f);

  const std::vector<std::int64_t>& ranking() const { return ranking_; }
  /// The first s entries of the ranking.
  std::vector<std::int64_t> top(std::int64_t s) const;

 private:
  std::vector<std::int64_t> ranking_;
};

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Smallest (a - j) / 2 over the top-s degrees a >= j of j's parity; infinity if none.
/// With exclude_self the zero distance a = j is skipped.
double right_distance(std::int64_t j, const SupportProfile& profile, std::int64_t s, bool exclude_self);

}  // namespace sleg
