#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner. Nothing here calls the closed forms under test except
// where a check explicitly compares against them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sparse_legendre/iserles.hpp"

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer factorial(int n) {
  Integer v = 1;
  for (int k = 2; k <= n; ++k) v *= k;
  return v;
}

inline Integer binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

inline Rational rpow(const Rational& r, int e) {
  Rational v = 1;
  const Rational base = e < 0 ? Rational(1) / r : r;
  for (int k = 0; k < std::abs(e); ++k) v *= base;
  return v;
}

// Finite-sum formulas for the inverse map. `alt_odd` swaps the odd-row
// binomial C(2k+1, k-a) for the C(2k+1, k+a) reading.
inline Rational finite_sum_inverse(int i, int j, const Rational& r, bool alt_odd = false) {
  if (i > j || (j - i) % 2 != 0) return 0;
  Rational acc = 0;
  if (i % 2 == 0) {
    const int a = i / 2, b = j / 2;
    for (int k = a; k <= b; ++k) {
      Rational term = Rational(factorial(2 * b + 2 * k)) /
                      Rational(factorial(b - k) * factorial(b + k) * factorial(2 * k));
      term *= Rational(binom(2 * k, k + a)) * Rational(1 + 2 * a, k + a + 1);
      term /= rpow(Rational(4), k);
      acc += (k % 2 ? -term : term);
    }
    acc *= rpow(r, -2 * a) / rpow(Rational(4), b);
    return b % 2 ? -acc : acc;
  }
  const int a = (i - 1) / 2, b = (j - 1) / 2;
  for (int k = a; k <= b; ++k) {
    Rational term = Rational(factorial(2 * b + 2 * k + 2)) /
                    Rational(factorial(b - k) * factorial(b + k + 1) * factorial(2 * k + 1));
    term *= Rational(alt_odd ? binom(2 * k + 1, k + a) : binom(2 * k + 1, k - a)) * Rational(2 + 2 * a, k + a + 2);
    term /= 2 * rpow(Rational(4), k);
    acc += (k % 2 ? -term : term);
  }
  acc *= rpow(r, -2 * a - 1) / (2 * rpow(Rational(4), b));
  return b % 2 ? -acc : acc;
}

// Forward entry at r = 1 as an exact product.
inline Rational forward_exact(int i, int j) {
  if (i > j || (j - i) % 2 != 0) return 0;
  const int d = (j - i) / 2;
  Rational v = Rational(rpow(Rational(4), i) * Rational(factorial(i) * factorial(i))) / Rational(factorial(2 * i));
  for (int l = 0; l < d; ++l) v *= Rational((i + 1 + l) * (2 * l + 1), (l + 1) * (2 * i + 2 * l + 3));
  return v;
}

// Inverse of the r = 1 forward matrix by exact back substitution.
inline std::vector<std::vector<Rational>> exact_inverse(int N) {
  std::vector<std::vector<Rational>> G(N + 1, std::vector<Rational>(N + 1));
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) G[i][j] = forward_exact(i, j);
  std::vector<std::vector<Rational>> H(N + 1, std::vector<Rational>(N + 1));
  for (int col = 0; col <= N; ++col) {
    for (int row = col; row >= 0; --row) {
      Rational acc = row == col ? Rational(1) : Rational(0);
      for (int k = row + 1; k <= col; ++k) acc -= G[row][k] * H[k][col];
      H[row][col] = acc / G[row][row];
    }
  }
  return H;
}

// max |G H - I| / max |H_{n,n}| over the assembled matrices.
inline double inverse_identity_deviation(std::int64_t N, double r) {
  const sleg::IserlesMap map(r, N);
  const Eigen::MatrixXd H = map.inverse_matrix();
  const Eigen::MatrixXd P = map.forward_matrix() * H;
  const double scale = H.diagonal().cwiseAbs().maxCoeff();
  return (P - Eigen::MatrixXd::Identity(N + 1, N + 1)).cwiseAbs().maxCoeff() / scale;
}

// Number of entries violating the row, column and diagonal decay bounds for
// degrees up to n_max and offsets up to x_max.
struct DecayReport {
  long checked = 0;
  long violations = 0;
};

inline DecayReport decay_bounds(int n_max, int x_max, double r) {
  const double e3 = std::cbrt(std::numbers::e);
  const double sqpi = std::sqrt(std::numbers::pi);
  const sleg::IserlesMap map(r, n_max + 2 * x_max);
  DecayReport rep;
  auto check = [&](bool ok) {
    ++rep.checked;
    rep.violations += !ok;
  };
  for (int n = 0; n <= n_max; ++n) {
    const double diag = std::abs(map.inverse_entry(n, n));
    // rows
    check(std::abs(map.inverse_entry(n, n + 2)) < 0.5 * diag);
    check(std::abs(map.inverse_entry(n, n + 4)) < 0.125 * diag);
    for (int x = 3; x <= x_max; ++x) {
      check(std::abs(map.inverse_entry(n, n + 2 * x)) < e3 / (2.0 * sqpi) * diag / (x * std::sqrt(x - 2.0)));
    }
    // columns
    if (n >= 2) check(std::abs(map.inverse_entry(n - 2, n)) < r * r / 2.0 * diag);
    if (n >= 4) check(std::abs(map.inverse_entry(n - 4, n)) < std::pow(r, 4) / 4.0 * diag);
    if (n >= 6) {
      for (int x = 3; x <= std::min(x_max, n / 2); ++x) {
        check(std::abs(map.inverse_entry(n - 2 * x, n)) <=
              e3 / std::sqrt(2.0 * std::numbers::pi) * std::pow(r, 2 * x) * diag / (x * std::sqrt(x - 2.0)));
      }
    }
  }
  // diagonal bracket, against an independent running product of C(2n, n) / 4^n
  long double cb = 1.0L;
  for (int n = 0; n <= std::max(n_max, 500); ++n) {
    const double diag = static_cast<double>(cb) * std::pow(r, -n);
    if (n == 0) {
      check(diag == 1.0);
    } else {
      const double upper = std::pow(r, -n) / std::sqrt(std::numbers::pi * n);
      check(diag <= upper && diag >= upper * (1.0 - 1.0 / (8.0 * n)));
    }
    check(std::abs(sleg::inverse_diag(n, r) - diag) <= 1e-13 * diag);
    cb *= (2.0L * n + 1.0L) / (2.0L * n + 2.0L);
  }
  return rep;
}

// Random s-sparse Legendre coefficients with Gaussian values on degrees in [lo, N].
inline sleg::SparseExpansion sparse_ensemble(std::mt19937_64& rng, std::int64_t N, int s, std::int64_t lo) {
  std::uniform_int_distribution<std::int64_t> deg(lo, N);
  std::normal_distribution<double> g;
  sleg::SparseExpansion f(sleg::Basis::Legendre, N);
  while (static_cast<int>(f.size()) < s) {
    const std::int64_t n = deg(rng);
    if (f[n] == 0.0) f.set(n, g(rng));
  }
  return f;
}

// Entry bound on f_r^(-j) - H_{j,j} f~_j for every j with right distance > 2.
// Returns the number of violated j; `checked` receives how many were tested.
inline long entry_bound_violations(const sleg::SparseExpansion& f, int s, double r, long* checked = nullptr) {
  const std::int64_t N = f.max_degree();
  const sleg::IserlesMap map(r, N);
  const sleg::FourierSparse fhat = sleg::apply_inverse(f, map, sleg::Band{0, N});
  const sleg::SupportProfile profile(f);
  const double tail = std::abs(f[profile.ranking().at(static_cast<std::size_t>(s))]);
  const double c = std::cbrt(std::numbers::e) / (2.0 * std::sqrt(std::numbers::pi));
  long bad = 0, n = 0;
  for (std::int64_t j = 0; j <= N; ++j) {
    const double d = sleg::right_distance(j, profile, s, false);
    if (!(d > 2.0)) continue;
    const double h = std::abs(map.inverse_entry(j, j));
    const double lhs = std::abs(fhat[-j].real() - map.inverse_entry(j, j) * f[j]);
    const double far = std::isinf(d) ? 0.0 : f.norm1() / (d * std::sqrt(d - 2.0));
    const double rhs = 31.0 / 20.0 * h * tail + c * far * h;
    ++n;
    // both sides vanish exactly when nothing of j's parity sits above j
    if (!(lhs < rhs || (lhs == 0.0 && rhs == 0.0))) ++bad;
  }
  if (checked) *checked = n;
  return bad;
}

// l1 mass of f_1's nonpositive-frequency coefficients outside the best s*k
// terms, and the bound it must stay under. Requires k > 5 and a smallest
// top-s degree above k.
struct TailCheck {
  double tail = 0.0;
  double bound = 0.0;
};

inline TailCheck tail_bound(const sleg::SparseExpansion& f, int s, int k) {
  const std::int64_t N = f.max_degree();
  const sleg::IserlesMap map(1.0, N);
  const sleg::FourierSparse fhat = sleg::apply_inverse(f, map, sleg::Band{0, N});
  std::vector<double> mags;
  for (std::int64_t j = 0; j <= N; ++j) mags.push_back(std::abs(fhat[-j]));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  TailCheck out;
  for (std::size_t t = static_cast<std::size_t>(s) * static_cast<std::size_t>(k); t < mags.size(); ++t) out.tail += mags[t];
  const sleg::SupportProfile profile(f);
  const auto top = profile.top(s);
  const double n_min = static_cast<double>(*std::min_element(top.begin(), top.end()));
  const double sigma_s = std::abs(f[profile.ranking().at(static_cast<std::size_t>(s))]);
  out.bound = 7.0 * std::sqrt(static_cast<double>(N)) * sigma_s +
              s * f.norm1() / (std::sqrt(n_min - 4.0) * std::sqrt(k - 5.0));
  return out;
}

}  // namespace oracle
