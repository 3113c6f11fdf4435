#include "sparse_legendre/source.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sparse_legendre/fourier.hpp"
#include "sparse_legendre/sampling.hpp"

namespace sleg {

namespace {

void check_r(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("resampling radius r must lie in (0, 1]");
}

}  // namespace

Complex LegendreSource::eval_complex(Complex z) const {
  if (z.imag() == 0.0) return eval(z.real());
  throw std::domain_error("source supports real arguments only; use r = 1");
}

void LegendreSource::resampled_grid(double r, double offset, std::span<Complex> out) const {
  const double step = 2.0 * std::numbers::pi / static_cast<double>(out.size());
  for (std::size_t u = 0; u < out.size(); ++u) {
    out[u] = f_r_value(*this, r, offset + step * static_cast<double>(u));
  }
}

void LegendreSource::eval_plan(const SamplePlan& plan, std::span<double> out) const {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = eval(plan.point(j));
}

Complex f_r_value(const LegendreSource& f, double r, double x) {
  check_r(r);
  const Complex e2(std::cos(2.0 * x), std::sin(2.0 * x));
  if (r == 1.0) return (1.0 - e2) * f.eval(std::cos(x));
  const Complex eix(std::cos(x), std::sin(x));
  const Complex z = 0.5 * (std::conj(eix) / r + r * eix);
  return (1.0 - r * r * e2) * f.eval_complex(z);
}

Complex f_r_sample(const SparseExpansion& f, double r, double x) {
  check_r(r);
  const Complex eix(std::cos(x), std::sin(x));
  const Complex z = r == 1.0 ? Complex(std::cos(x), 0.0) : 0.5 * (std::conj(eix) / r + r * eix);
  return (1.0 - r * r * eix * eix) * eval_expansion(f, z);
}

std::vector<double> resampled_spectrum(const SparseExpansion& f, double r) {
  check_r(r);
  const std::int64_t N = f.max_degree();
  std::vector<double> F(static_cast<std::size_t>(2 * N + 3), 0.0);
  if (f.empty()) return F;
  const std::int64_t top = f.top_degree();

  // L_k((w + 1/w) / 2) = sum_l c_l c_{k-l} w^{k-2l}, with c_l = C(2l, l) / 4^l.
  std::vector<double> c(static_cast<std::size_t>(top) + 1);
  c[0] = 1.0;
  for (std::int64_t l = 0; l < top; ++l) {
    c[l + 1] = c[l] * (2.0 * static_cast<double>(l) + 1.0) / (2.0 * static_cast<double>(l) + 2.0);
  }
  std::vector<double> rpow(F.size(), 1.0);
  if (r != 1.0) {
    const double lr = std::log(r);
    for (std::size_t q = 0; q < rpow.size(); ++q) rpow[q] = std::exp(static_cast<double>(static_cast<std::int64_t>(q) - N) * lr);
  }
  for (const auto& [k, a] : f.entries()) {
    for (std::int64_t l = 0; l <= k; ++l) {
      const std::size_t q = static_cast<std::size_t>(k - 2 * l + N);
      const double v = a * c[l] * c[k - l];
      F[q] += v * rpow[q];
      F[q + 2] -= v * rpow[q + 2];
    }
  }
  return F;
}

ExpansionSource::ExpansionSource(SparseExpansion f) : f_(std::move(f)) {
  if (f_.basis() != Basis::Legendre) throw std::invalid_argument("ExpansionSource: expected a Legendre expansion");
}

double ExpansionSource::eval(double x) const { return eval_expansion(f_, x); }

Complex ExpansionSource::eval_complex(Complex z) const { return eval_expansion(f_, z); }

const std::vector<double>& ExpansionSource::spectrum(double r) const {
  if (cached_r_ != r) {
    cached_spectrum_ = resampled_spectrum(f_, r);
    cached_r_ = r;
  }
  return cached_spectrum_;
}

void ExpansionSource::resampled_grid(double r, double offset, std::span<Complex> out) const {
  check_r(r);
  const std::size_t M = out.size();
  if (M == 0) return;
  std::lock_guard<std::mutex> lock(mutex_);
  const std::vector<double>& F = spectrum(r);
  const std::int64_t N = f_.max_degree();
  const double theta = std::remainder(offset, 2.0 * std::numbers::pi);

  // e^{i q theta} = hi[q / 512] * lo[q % 512]; direct polar evaluation keeps each factor exact to rounding.
  constexpr std::size_t kChunk = 512;
  std::vector<Complex> lo(kChunk), hi(F.size() / kChunk + 1);
  for (std::size_t t = 0; t < kChunk; ++t) lo[t] = std::polar(1.0, static_cast<double>(t) * theta);
  for (std::size_t t = 0; t < hi.size(); ++t) {
    hi[t] = std::polar(1.0, static_cast<double>(t * kChunk) * theta);
  }
  const Complex shift = std::polar(1.0, -static_cast<double>(N) * theta);

  std::vector<Complex> folded(M);
  const auto Mi = static_cast<std::int64_t>(M);
  for (std::size_t q = 0; q < F.size(); ++q) {
    if (F[q] == 0.0) continue;
    const std::int64_t p = static_cast<std::int64_t>(q) - N;
    std::int64_t b = p % Mi;
    if (b < 0) b += Mi;
    folded[static_cast<std::size_t>(b)] += F[q] * (hi[q / kChunk] * lo[q % kChunk]);
  }
  for (auto& v : folded) v *= shift;
  const std::vector<Complex> samples = dft_any(folded, true);
  std::copy(samples.begin(), samples.end(), out.begin());
}

void ExpansionSource::eval_plan(const SamplePlan& plan, std::span<double> out) const {
  std::vector<std::int64_t> degrees;
  std::vector<double> coeffs;
  for (const auto& [n, v] : f_.entries()) {
    degrees.push_back(n);
    coeffs.push_back(v);
  }
  std::vector<double> values(degrees.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    plan.legendre_at(j, degrees, values);
    double acc = 0.0;
    for (std::size_t t = 0; t < degrees.size(); ++t) acc += coeffs[t] * values[t];
    out[j] = acc;
  }
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() { sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

double MeteredSource::eval(double x) const {
  Stopwatch watch(seconds_);
  ++evaluations_;
  return inner_.eval(x);
}

Complex MeteredSource::eval_complex(Complex z) const {
  Stopwatch watch(seconds_);
  ++evaluations_;
  return inner_.eval_complex(z);
}

void MeteredSource::resampled_grid(double r, double offset, std::span<Complex> out) const {
  Stopwatch watch(seconds_);
  evaluations_ += out.size();
  inner_.resampled_grid(r, offset, out);
}

void MeteredSource::eval_plan(const SamplePlan& plan, std::span<double> out) const {
  Stopwatch watch(seconds_);
  evaluations_ += out.size();
  inner_.eval_plan(plan, out);
}

}  // namespace sleg
