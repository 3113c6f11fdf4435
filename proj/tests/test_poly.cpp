#include <cmath>
#include <random>

#include "doctest.h"
#include "sparse_legendre/poly.hpp"

using namespace sleg;
using doctest::Approx;

namespace {

// (2i)! j! (i + 3/2)_j in the denominator, accumulated as a product of ratios.
long double gtilde_product(int i, int j, long double r) {
  long double v = 1.0L;
  for (int l = 1; l <= i; ++l) v *= 4.0L * l * l / ((2.0L * l - 1.0L) * (2.0L * l));  // 4^i (i!)^2 / (2i)!
  for (int l = 0; l < j; ++l) v *= (i + 1.0L + l) * (0.5L + l) / ((l + 1.0L) * (i + 1.5L + l));
  return v * std::pow(r, static_cast<long double>(i + 2 * j));
}

}  // namespace

TEST_CASE("legendre_eval small values") {
  CHECK(legendre_eval(0, 0.7) == 1.0);
  CHECK(legendre_eval(5, 1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(legendre_eval(2, 0.5) == Approx(-0.125).epsilon(1e-15));
  CHECK_THROWS_AS(legendre_eval(-1, 0.3), std::domain_error);
  // L_3(x) = (5x^3 - 3x) / 2 at a complex point
  const Complex z(0.3, -1.2);
  const Complex want = (5.0 * z * z * z - 3.0 * z) / 2.0;
  CHECK(std::abs(legendre_eval(3, z) - want) < 1e-14);
}

TEST_CASE("legendre_row examples and consistency") {
  const auto ones = legendre_row(1.0, 3);
  for (int n = 0; n <= 3; ++n) CHECK(ones(n) == Approx(1.0));
  const auto at0 = legendre_row(0.0, 4);
  CHECK(at0(0) == 1.0);
  CHECK(at0(1) == 0.0);
  CHECK(at0(2) == Approx(-0.5));
  CHECK(at0(3) == 0.0);
  CHECK(at0(4) == Approx(0.375));
  const auto half = legendre_row(0.5, 2);
  CHECK(half(1) == 0.5);
  CHECK(half(2) == Approx(-0.125));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double x = u(rng);
    const auto row = legendre_row(x, 150);
    for (int n = 0; n <= 150; n += 7) CHECK(row(n) == legendre_eval(n, x));
  }
}

TEST_CASE("legendre parity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const double x = u(rng);
    for (int n = 0; n <= 200; ++n) {
      const double a = legendre_eval(n, x);
      const double b = legendre_eval(n, -x);
      const double sign = n % 2 ? -1.0 : 1.0;
      CHECK(std::abs(b - sign * a) <= 1e-13 * std::max(1e-3, std::abs(a)));
    }
  }
}

TEST_CASE("chebyshev_eval") {
  CHECK(chebyshev_eval(7, 1.0) == Approx(1.0));
  CHECK(chebyshev_eval(2, 0.5) == Approx(-0.5));
  CHECK(chebyshev_eval(3, std::cos(0.4)) == Approx(std::cos(1.2)).epsilon(1e-14));
  for (int n = 0; n < 60; ++n) CHECK(chebyshev_eval(n, std::cos(0.77)) == Approx(std::cos(0.77 * n)).epsilon(1e-12));
}

TEST_CASE("SparseExpansion bookkeeping and evaluation") {
  SparseExpansion e(Basis::Legendre, 10);
  CHECK(eval_expansion(e, 0.4) == 0.0);
  e.set(0, 2.0);
  CHECK(eval_expansion(e, 0.3) == 2.0);
  e.set(0, 0.0);
  CHECK(e.empty());
  e.set(1, 1.0);
  e.set(3, -1.0);
  CHECK(eval_expansion(e, 1.0) == Approx(0.0));
  CHECK(e.top_degree() == 3);
  CHECK(e.norm1() == 2.0);
  CHECK(e.norm2() == Approx(std::sqrt(2.0)));
  e.add(3, 1.0);
  CHECK(e.size() == 1);
  CHECK_THROWS(e.set(11, 1.0));
  CHECK_THROWS(e.set(-1, 1.0));

  SparseExpansion c(Basis::Chebyshev, 8);
  c.set(2, 1.0);
  c.set(5, 3.0);
  const double x = 0.35;
  CHECK(eval_expansion(c, x) == Approx(chebyshev_eval(2, x) + 3.0 * chebyshev_eval(5, x)));
}

TEST_CASE("gtilde examples") {
  CHECK(gtilde(0, 0, 1.0) == Approx(1.0));
  CHECK(gtilde(1, 0, 0.5) == Approx(1.0));
  CHECK(gtilde(0, 1, 1.0) == Approx(1.0 / 3.0));
  CHECK(gtilde(1, 1, 1.0) == Approx(0.8));
  CHECK_THROWS_AS(gtilde(1, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS(gtilde(1, 1, 1.5), std::domain_error);
  CHECK(std::isfinite(gtilde(1000000, 1000000, 1.0)));
}

TEST_CASE("gtilde against a direct product") {
  for (double r : {1.0, 0.9, 1.0 - 1e-8}) {
    for (int i = 0; i <= 60; i += 3) {
      for (int j = 0; j <= 60; j += 4) {
        const double want = static_cast<double>(gtilde_product(i, j, r));
        CHECK(gtilde(i, j, r) == Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("gtilde ratio recurrence") {
  for (double r : {1.0, 0.9}) {
    for (int i = 0; i <= 100; i += 5) {
      for (int j = 0; j < 100; ++j) {
        const double ratio = gtilde(i, j + 1, r) / gtilde(i, j, r);
        const double want = r * r * (i + 1.0 + j) * (0.5 + j) / ((j + 1.0) * (i + 1.5 + j));
        CHECK(std::abs(ratio - want) <= 1e-12 * want);
      }
    }
  }
}

TEST_CASE("gtilde decreases in j past the diagonal when r < 1") {
  for (double r : {0.9, 0.99}) {
    for (int i = 0; i <= 50; ++i) {
      for (int j = i + 1; j < 200; ++j) CHECK(gtilde(i, j + 1, r) < gtilde(i, j, r));
    }
  }
}

TEST_CASE("central binomial scalar") {
  long double exact = 1.0L;
  for (int n = 0; n <= 3000; ++n) {
    CHECK(std::abs(log_central_binomial_over_4n(n) - static_cast<double>(std::log(exact))) <= 1e-14 * (1.0 + std::abs(std::log(exact))));
    exact *= (2.0L * n + 1.0L) / (2.0L * n + 2.0L);
  }
  CHECK(log_pochhammer(0.5, 0) == 0.0);
  CHECK(log_pochhammer(2.0, 3) == Approx(std::log(24.0)));
}
