#include "sparse_legendre/poly.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sleg {

SparseExpansion::SparseExpansion(Basis basis, std::int64_t max_degree)
    : basis_(basis), max_degree_(max_degree) {
  if (max_degree < 0) throw std::domain_error("SparseExpansion: negative max degree");
}

void SparseExpansion::check_degree(std::int64_t degree) const {
  if (degree < 0 || degree > max_degree_) {
    throw std::out_of_range("SparseExpansion: degree " + std::to_string(degree) +
                            " outside [0, " + std::to_string(max_degree_) + "]");
  }
}

void SparseExpansion::set(std::int64_t degree, double value) {
  check_degree(degree);
  if (value == 0.0) {
    entries_.erase(degree);
  } else {
    entries_[degree] = value;
  }
}

void SparseExpansion::add(std::int64_t degree, double value) {
  check_degree(degree);
  set(degree, (*this)[degree] + value);
}

double SparseExpansion::operator[](std::int64_t degree) const {
  auto it = entries_.find(degree);
  return it == entries_.end() ? 0.0 : it->second;
}

std::int64_t SparseExpansion::top_degree() const {
  return entries_.empty() ? -1 : entries_.rbegin()->first;
}

double SparseExpansion::norm1() const {
  double acc = 0.0;
  for (const auto& [n, v] : entries_) acc += std::abs(v);
  return acc;
}

double SparseExpansion::norm2() const {
  double acc = 0.0;
  for (const auto& [n, v] : entries_) acc += v * v;
  return std::sqrt(acc);
}

double log_pochhammer(double a, std::int64_t j) {
  if (j == 0) return 0.0;
  return std::lgamma(a + static_cast<double>(j)) - std::lgamma(a);
}

double log_central_binomial_over_4n(std::int64_t n) {
  if (n < 32) {
    double cb = 1.0;
    for (std::int64_t l = 0; l < n; ++l) cb *= (2.0 * static_cast<double>(l) + 1.0) / (2.0 * static_cast<double>(l) + 2.0);
    return std::log(cb);
  }
  // lgamma(2n+1) - 2 lgamma(n+1) would lose ~log10(n) digits to cancellation;
  // the Stirling series of the ratio itself is accurate to rounding here.
  const double nd = static_cast<double>(n);
  const double inv = 1.0 / nd;
  const double inv2 = inv * inv;
  const double tail = inv2 * (1.0 / 192.0 + inv2 * (-1.0 / 640.0 + inv2 * (17.0 / 14336.0 - inv2 * 31.0 / 18432.0)));
  return -0.5 * std::log(std::numbers::pi * nd) - 0.125 * inv + inv * tail;
}

double gtilde(std::int64_t i, std::int64_t j, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("gtilde: r must lie in (0, 1]");
  if (i < 0 || j < 0) throw std::domain_error("gtilde: negative index");
  const double id = static_cast<double>(i);
  // 2^{2i} (i!)^2 / (2i)! is the reciprocal of C(2i, i) / 4^i.
  double log_value = -log_central_binomial_over_4n(i);
  log_value += log_pochhammer(id + 1.0, j) + log_pochhammer(0.5, j) -
               std::lgamma(static_cast<double>(j) + 1.0) - log_pochhammer(id + 1.5, j);
  if (r != 1.0) log_value += (id + 2.0 * static_cast<double>(j)) * std::log(r);
  return std::exp(log_value);
}

}  // namespace sleg
