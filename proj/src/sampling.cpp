#include "sparse_legendre/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace sleg {

namespace {

constexpr const char* kPlanHeader = "sparse-legendre-plan v1";

}  // namespace

SamplePlan::SamplePlan(std::vector<double> points, std::int64_t N, std::uint64_t seed, std::int64_t stride)
    : points_(std::move(points)), N_(N), seed_(seed), stride_(stride) {
  if (N < 0) throw std::domain_error("SamplePlan: negative N");
  if (points_.empty()) throw std::domain_error("SamplePlan: no points");
  for (double x : points_) {
    if (!(std::abs(x) < 1.0)) throw std::domain_error("SamplePlan: points must lie strictly inside (-1, 1)");
  }
  if (stride_ == kDefaultStride) {
    stride_ = 32;
    while (points_.size() * static_cast<std::size_t>(N_ / stride_ + 1) * 2 * sizeof(double) > kCacheBudgetBytes) {
      stride_ *= 2;
    }
  }
  if (stride_ < 2) throw std::domain_error("SamplePlan: stride must be at least 2");
  if (N_ <= stride_) return;  // plain recurrence is already cheap

  checkpoints_ = N_ / stride_ + 1;
  cache_.resize(points_.size() * static_cast<std::size_t>(checkpoints_) * 2);
  // Run the recurrence for a block of points side by side; the per-point
  // chains are independent, so this vectorizes without changing any bits.
  constexpr std::size_t kBlock = 8;
  const std::size_t row = static_cast<std::size_t>(checkpoints_) * 2;
  for (std::size_t base = 0; base < points_.size(); base += kBlock) {
    const std::size_t len = std::min(kBlock, points_.size() - base);
    double x[kBlock] = {}, prev[kBlock], cur[kBlock];
    for (std::size_t b = 0; b < kBlock; ++b) {
      x[b] = b < len ? points_[base + b] : 0.0;
      prev[b] = 1.0;  // L_n
      cur[b] = x[b];  // L_{n+1}
    }
    std::int64_t n = 0;
    for (std::int64_t c = 0; c < checkpoints_; ++c) {
      for (; n < c * stride_; ++n) {
        const double md = static_cast<double>(n + 1);
        const double a = 2.0 * md + 1.0, d = md + 1.0;
        for (std::size_t b = 0; b < kBlock; ++b) {
          const double next = (a * x[b] * cur[b] - md * prev[b]) / d;
          prev[b] = cur[b];
          cur[b] = next;
        }
      }
      for (std::size_t b = 0; b < len; ++b) {
        double* slot = cache_.data() + (base + b) * row;
        slot[2 * c] = prev[b];
        slot[2 * c + 1] = cur[b];
      }
    }
  }
}

double SamplePlan::weight(std::size_t j) const {
  const double x = point(j);
  return std::sqrt(0.5 * std::numbers::pi) * std::pow(1.0 - x * x, 0.25) /
         std::sqrt(static_cast<double>(points_.size()));
}

void SamplePlan::legendre_at(std::size_t j, std::span<const std::int64_t> degrees, std::span<double> out) const {
  if (j >= points_.size()) throw std::out_of_range("SamplePlan: point index out of range");
  if (out.size() != degrees.size()) throw std::length_error("SamplePlan: output size mismatch");
  std::vector<std::size_t> order(degrees.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!std::is_sorted(degrees.begin(), degrees.end())) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return degrees[a] < degrees[b]; });
  }

  const double x = points_[j];
  const double* slot = cache_.empty() ? nullptr : cache_.data() + j * static_cast<std::size_t>(checkpoints_) * 2;
  // Invariant: prev = L_n(x), cur = L_{n+1}(x).
  double prev = 1.0, cur = x;
  std::int64_t n = 0;
  for (std::size_t t : order) {
    const std::int64_t target = degrees[t];
    if (target < 0 || target > N_) throw std::out_of_range("SamplePlan: degree outside [0, N]");
    if (slot) {
      const std::int64_t c = target / stride_;
      if (n > target || n < c * stride_) {
        n = c * stride_;
        prev = slot[2 * c];
        cur = slot[2 * c + 1];
      }
    } else if (n > target) {
      n = 0;
      prev = 1.0;
      cur = x;
    }
    while (n < target) {
      const double md = static_cast<double>(n + 1);
      const double next = ((2.0 * md + 1.0) * x * cur - md * prev) / (md + 1.0);
      prev = cur;
      cur = next;
      ++n;
    }
    out[t] = prev;
  }
}

void SamplePlan::write(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << kPlanHeader << '\n' << seed_ << ' ' << m() << ' ' << N_ << '\n';
  for (double x : points_) os << x << '\n';
  os.precision(old_precision);
}

SamplePlan SamplePlan::read(std::istream& is, std::int64_t stride) {
  std::string header;
  std::getline(is, header);
  if (header != kPlanHeader) throw std::runtime_error("SamplePlan::read: unrecognized header");
  std::uint64_t seed = 0;
  std::int64_t m = 0, N = 0;
  if (!(is >> seed >> m >> N) || m < 0) throw std::runtime_error("SamplePlan::read: malformed size line");
  std::vector<double> points(static_cast<std::size_t>(m) + 1);
  for (double& x : points) {
    if (!(is >> x)) throw std::runtime_error("SamplePlan::read: truncated point list");
  }
  return SamplePlan(std::move(points), N, seed, stride);
}

SamplePlan sample_chebyshev_points(std::int64_t m, std::int64_t N, std::uint64_t seed, std::int64_t stride) {
  if (m < 0) throw std::domain_error("sample_chebyshev_points: negative m");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> points(static_cast<std::size_t>(m) + 1);
  for (double& x : points) {
    do {
      x = std::cos(std::numbers::pi * unit(rng));
    } while (std::abs(x) >= 1.0);
  }
  return SamplePlan(std::move(points), N, seed, stride);
}

std::int64_t default_sample_count(std::int64_t s, std::int64_t N) {
  const double m = std::ceil(8.0 * static_cast<double>(s) * std::log2(static_cast<double>(N) + 2.0));
  return std::max<std::int64_t>(static_cast<std::int64_t>(m), 64);
}

Eigen::VectorXd sampling_row(const SamplePlan& plan, std::size_t j, std::span<const std::int64_t> S) {
  Eigen::VectorXd row(static_cast<Eigen::Index>(S.size()));
  plan.legendre_at(j, S, std::span<double>(row.data(), S.size()));
  const double w = plan.weight(j);
  for (std::size_t t = 0; t < S.size(); ++t) {
    row(static_cast<Eigen::Index>(t)) *= w * std::sqrt(2.0 * static_cast<double>(S[t]) + 1.0);
  }
  return row;
}

Eigen::MatrixXd sampling_matrix(const SamplePlan& plan, std::span<const std::int64_t> S) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(plan.size()), static_cast<Eigen::Index>(S.size()));
  for (std::size_t j = 0; j < plan.size(); ++j) A.row(static_cast<Eigen::Index>(j)) = sampling_row(plan, j, S).transpose();
  return A;
}

Eigen::VectorXd weighted_samples(const LegendreSource& f, const SamplePlan& plan) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(plan.size()));
  f.eval_plan(plan, std::span<double>(y.data(), plan.size()));
  for (std::size_t j = 0; j < plan.size(); ++j) y(static_cast<Eigen::Index>(j)) *= plan.weight(j);
  return y;
}

double submatrix_condition(const SamplePlan& plan, std::span<const std::int64_t> S) {
  if (S.empty()) throw std::invalid_argument("submatrix_condition: empty column set");
  if (S.size() > plan.size()) throw std::invalid_argument("submatrix_condition: more columns than rows");
  const Eigen::MatrixXd A = sampling_matrix(plan, S);
  const Eigen::MatrixXd gram = A.transpose() * A;
  const auto k = gram.rows();

  constexpr double kTol = 1e-8;
  constexpr int kMaxIter = 100000;
  auto start = [k]() {
    Eigen::VectorXd v(k);
    for (Eigen::Index t = 0; t < k; ++t) v(t) = 1.0 + 0.1 * static_cast<double>(t % 7);
    return v.normalized();
  };

  // Power iteration on the Gram matrix, Rayleigh quotient as the estimate.
  Eigen::VectorXd v = start();
  double lambda_max = v.dot(gram * v);
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd w = gram * v;
    v = w.normalized();
    const double next = v.dot(gram * v);
    const bool done = std::abs(next - lambda_max) <= kTol * std::abs(next);
    lambda_max = next;
    if (done) break;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(pivots.minCoeff() > 1e-14 * pivots.maxCoeff())) {
    throw std::runtime_error("submatrix_condition: Gram matrix is singular");
  }
  v = start();
  double lambda_min = 1.0 / v.dot(ldlt.solve(v));
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd w = ldlt.solve(v);
    v = w.normalized();
    const double next = v.dot(gram * v);
    const bool done = std::abs(next - lambda_min) <= kTol * std::abs(next);
    lambda_min = next;
    if (done) break;
  }
  // a rank-deficient Gram matrix can still pass the LDLT sign test on roundoff
  if (!(lambda_min >= 1e-12 * lambda_max)) throw std::runtime_error("submatrix_condition: Gram matrix is singular");
  return lambda_max / lambda_min;
}

}  // namespace sleg
