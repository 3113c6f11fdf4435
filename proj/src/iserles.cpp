#include "sparse_legendre/iserles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sleg {

namespace {

// log |C(1/2, d)| = log |Gamma(3/2) / (d! Gamma(3/2 - d))|. For d >= 1 the
// value is (-1)^{d-1} C(2d, d) / (4^d (2d - 1)), so no Gamma at a negative
// argument is needed.
double log_abs_half_binomial(std::int64_t d) {
  switch (d) {
    case 0: return 0.0;
    case 1: return std::log(0.5);
    case 2: return std::log(0.125);
    default: break;
  }
  return log_central_binomial_over_4n(d) - std::log(2.0 * static_cast<double>(d) - 1.0);
}

}  // namespace

IserlesMap::IserlesMap(double r, std::int64_t N) : r_(r), N_(N) {
  if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("IserlesMap: r must lie in (0, 1]");
  if (N < 0) throw std::domain_error("IserlesMap: negative N");
}

void IserlesMap::check_index(std::int64_t i, std::int64_t j) const {
  if (i < 0 || j < 0 || i > N_ || j > N_) {
    throw std::out_of_range("IserlesMap: index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside [0, " + std::to_string(N_) + "]^2");
  }
}

double IserlesMap::forward_entry(std::int64_t i, std::int64_t j) const {
  check_index(i, j);
  if (i > j || (j - i) % 2 != 0) return 0.0;
  return gtilde(i, (j - i) / 2, r_);
}

double IserlesMap::inverse_entry(std::int64_t i, std::int64_t j) const {
  check_index(i, j);
  if (i > j || (j - i) % 2 != 0) return 0.0;
  const std::int64_t d = (j - i) / 2;
  const std::int64_t h = (i + j) / 2;
  // Both parities collapse to
  //   (-1)^d C(2h, h) 4^{-h} r^{-i} (i + 1) / (h + 1) C(1/2, d),   h = (i + j) / 2,
  // and (-1)^d C(1/2, d) is -|C(1/2, d)| for every d >= 1.
  double log_mag = log_central_binomial_over_4n(h) + std::log(static_cast<double>(i) + 1.0) -
                   std::log(static_cast<double>(h) + 1.0) + log_abs_half_binomial(d);
  if (r_ != 1.0) log_mag -= static_cast<double>(i) * std::log(r_);
  const double mag = std::exp(log_mag);
  return d == 0 ? mag : -mag;
}

Eigen::MatrixXd IserlesMap::forward_matrix() const {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N_ + 1, N_ + 1);
  for (std::int64_t i = 0; i <= N_; ++i) {
    for (std::int64_t j = i; j <= N_; j += 2) G(i, j) = forward_entry(i, j);
  }
  return G;
}

Eigen::MatrixXd IserlesMap::inverse_matrix() const {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N_ + 1, N_ + 1);
  for (std::int64_t i = 0; i <= N_; ++i) {
    for (std::int64_t j = i; j <= N_; j += 2) H(i, j) = inverse_entry(i, j);
  }
  return H;
}

double inverse_diag(std::int64_t n, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("inverse_diag: r must lie in (0, 1]");
  if (n < 0) throw std::domain_error("inverse_diag: negative degree");
  const double nd = static_cast<double>(n);
  const double log_rn = r == 1.0 ? 0.0 : -nd * std::log(r);
  const double value = std::exp(log_central_binomial_over_4n(n) + log_rn);
  if (n > 0 && std::isfinite(value)) {
    const double upper = std::exp(log_rn) / std::sqrt(std::numbers::pi * nd);
    const double lower = upper * (1.0 - 1.0 / (8.0 * nd));
    constexpr double slack = 1e-14;
    if (value > upper * (1.0 + slack) || value < lower * (1.0 - slack)) {
      throw std::logic_error("inverse_diag: value escaped its bracket at n = " + std::to_string(n));
    }
  }
  return value;
}

FourierSparse apply_inverse(const SparseExpansion& ftilde, const IserlesMap& map, Band band) {
  if (ftilde.max_degree() > map.N()) throw std::out_of_range("apply_inverse: expansion degree exceeds map N");
  if (band.width() > 0 && (band.lo < 0 || band.hi > map.N())) {
    throw std::out_of_range("apply_inverse: band outside [0, N]");
  }
  FourierSparse out(Band{-band.hi, -band.lo});
  for (std::int64_t j = band.lo; j <= band.hi; ++j) {
    double acc = 0.0;
    for (auto it = ftilde.entries().lower_bound(j); it != ftilde.entries().end(); ++it) {
      if ((it->first - j) % 2 == 0) acc += map.inverse_entry(j, it->first) * it->second;
    }
    out.set(-j, Complex(acc, 0.0));
  }
  return out;
}

SparseExpansion dense_iserles(const LegendreSource& f, std::int64_t N, double r, std::int64_t M,
                              std::uint64_t* grid_samples) {
  if (M < 0) throw std::domain_error("dense_iserles: negative truncation M");
  if (N < 0) throw std::domain_error("dense_iserles: negative N");
  if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("dense_iserles: r must lie in (0, 1]");
  const Band band{-N - 2 * M, N + 2};
  const std::size_t size = next_pow2(static_cast<std::size_t>(2 * N + 4 * M + 4));
  std::vector<Complex> samples(size);
  f.resampled_grid(r, -std::numbers::pi, samples);
  if (grid_samples) *grid_samples = size;
  const FourierSparse spectrum = dft_dense(samples, band);

  SparseExpansion out(Basis::Legendre, N);
  const double lr = r == 1.0 ? 0.0 : std::log(r);
  double cb = 1.0;  // C(2i, i) / 4^i
  for (std::int64_t i = 0; i <= N; ++i) {
    const double id = static_cast<double>(i);
    // g~_{i,0} = r^i / cb, then the ratio recurrence in j.
    double g = std::exp(id * lr) / cb;
    double acc = 0.0;
    for (std::int64_t j = 0; j <= M; ++j) {
      acc += g * spectrum[-i - 2 * j].real();
      const double jd = static_cast<double>(j);
      g *= std::exp(2.0 * lr) * (id + 1.0 + jd) * (0.5 + jd) / ((jd + 1.0) * (id + 1.5 + jd));
    }
    out.set(i, acc);
    cb *= (2.0 * id + 1.0) / (2.0 * id + 2.0);
  }
  return out;
}

SupportProfile::SupportProfile(const SparseExpansion& f) {
  const std::int64_t N = f.max_degree();
  std::vector<std::pair<double, std::int64_t>> stored;
  for (const auto& [n, v] : f.entries()) stored.emplace_back(std::abs(v), n);
  std::sort(stored.begin(), stored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  ranking_.reserve(static_cast<std::size_t>(N) + 1);
  for (const auto& [mag, n] : stored) ranking_.push_back(n);
  for (std::int64_t n = 0; n <= N; ++n) {
    if (!f.entries().count(n)) ranking_.push_back(n);
  }
}

std::vector<std::int64_t> SupportProfile::top(std::int64_t s) const {
  const auto count = static_cast<std::size_t>(std::clamp<std::int64_t>(s, 0, static_cast<std::int64_t>(ranking_.size())));
  return {ranking_.begin(), ranking_.begin() + static_cast<std::ptrdiff_t>(count)};
}

double right_distance(std::int64_t j, const SupportProfile& profile, std::int64_t s, bool exclude_self) {
  double best = kInfiniteDistance;
  for (std::int64_t a : profile.top(s)) {
    if (a < j || (a - j) % 2 != 0) continue;
    if (exclude_self && a == j) continue;
    best = std::min(best, static_cast<double>((a - j) / 2));
  }
  return best;
}

}  // namespace sleg
