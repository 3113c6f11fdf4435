#pragma once

// Legendre / Chebyshev evaluation, sparse expansions, and the log-space
// special-function scalars shared by the rest of the library.

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace sleg {

using Complex = std::complex<double>;

enum class Basis { Legendre, Chebyshev };

/// Sparse coefficient set {degree -> value} in a fixed basis, degrees in [0, N].
/// Exact zeros are never stored.
class SparseExpansion {
 public:
  SparseExpansion() = default;
  SparseExpansion(Basis basis, std::int64_t max_degree);

  Basis basis() const { return basis_; }
  std::int64_t max_degree() const { return max_degree_; }
  const std::map<std::int64_t, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Sets the coefficient of `degree`; assigning 0 erases the entry.
  void set(std::int64_t degree, double value);
  void add(std::int64_t degree, double value);
  double operator[](std::int64_t degree) const;

  /// Largest stored degree, or -1 when empty.
  std::int64_t top_degree() const;

  double norm1() const;
  double norm2() const;

 private:
  void check_degree(std::int64_t degree) const;

  Basis basis_ = Basis::Legendre;
  std::int64_t max_degree_ = 0;
  std::map<std::int64_t, double> entries_;
};

/// L_n(z) by the three-term recurrence.
template <typename Scalar>
Scalar legendre_eval(std::int64_t n, const Scalar& z) {
  if (n < 0) throw std::domain_error("legendre_eval: negative degree");
  if (n == 0) return Scalar(1.0);
  Scalar prev(1.0);
  Scalar cur = z;
  for (std::int64_t m = 1; m < n; ++m) {
    const double md = static_cast<double>(m);
    Scalar next = ((2.0 * md + 1.0) * z * cur - md * prev) / (md + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// [L_0(x), ..., L_N(x)] from one recurrence sweep. Same arithmetic as
/// legendre_eval, so entries agree bit-for-bit.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> legendre_row(const Scalar& x, std::int64_t N) {
  if (N < 0) throw std::domain_error("legendre_row: negative degree");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row(N + 1);
  row(0) = Scalar(1.0);
  if (N >= 1) row(1) = x;
  for (std::int64_t m = 1; m < N; ++m) {
    const double md = static_cast<double>(m);
    row(m + 1) = ((2.0 * md + 1.0) * x * row(m) - md * row(m - 1)) / (md + 1.0);
  }
  return row;
}

/// T_n(x) by T_{m+1} = 2x T_m - T_{m-1}.
template <typename Scalar>
Scalar chebyshev_eval(std::int64_t n, const Scalar& x) {
  if (n < 0) throw std::domain_error("chebyshev_eval: negative degree");
  if (n == 0) return Scalar(1.0);
  Scalar prev(1.0);
  Scalar cur = x;
  for (std::int64_t m = 1; m < n; ++m) {
    Scalar next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Sum of coefficient * basis polynomial at z. One recurrence sweep up to the
/// largest stored degree.
template <typename Scalar>
Scalar eval_expansion(const SparseExpansion& e, const Scalar& z) {
  Scalar acc(0.0);
  if (e.empty()) return acc;
  const std::int64_t top = e.top_degree();
  auto it = e.entries().begin();
  Scalar prev(1.0);
  Scalar cur = z;
  for (std::int64_t n = 0; n <= top; ++n) {
    Scalar value;
    if (n == 0) {
      value = Scalar(1.0);
    } else if (n == 1) {
      value = z;
    } else {
      const double md = static_cast<double>(n - 1);
      value = e.basis() == Basis::Legendre
                  ? Scalar(((2.0 * md + 1.0) * z * cur - md * prev) / (md + 1.0))
                  : Scalar(2.0 * z * cur - prev);
      prev = cur;
      cur = value;
    }
    if (it != e.entries().end() && it->first == n) {
      acc += it->second * value;
      ++it;
    }
  }
  return acc;
}

/// log of the Pochhammer symbol (a)_j for a > 0.
double log_pochhammer(double a, std::int64_t j);

/// log(C(2n, n) / 4^n).
double log_central_binomial_over_4n(std::int64_t n);

/// Entry g~_{i,j} of the truncated Fourier-to-Legendre map, evaluated in log space.
double gtilde(std::int64_t i, std::int64_t j, double r);

}  // namespace sleg
