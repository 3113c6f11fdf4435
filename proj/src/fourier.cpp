#include "sparse_legendre/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sparse_legendre/rng.hpp"

namespace sleg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Phase of -1^w without overflow concerns.
double parity_sign(std::int64_t w) { return (w & 1) ? -1.0 : 1.0; }

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = std::max<std::int64_t>(lo, 2); n < hi; ++n) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

int ceil_log2(std::int64_t q) {
  int bits = 0;
  while ((std::int64_t{1} << bits) < q) ++bits;
  return bits;
}

std::int64_t base_buckets(const SftParams& params) {
  return std::max<std::int64_t>(
      2, static_cast<std::int64_t>(std::ceil(params.bucket_factor * static_cast<double>(params.s))));
}

// Bucket counts to draw from: the primes in [B0, 2B0), topped up to a dozen.
// Two frequencies share a bucket only when the prime divides their gap, so a
// short pool lets one unlucky gap collide in most repetitions.
constexpr std::size_t kMinPrimePool = 12;

std::vector<std::int64_t> bucket_primes(const SftParams& params) {
  const std::int64_t B0 = base_buckets(params);
  std::vector<std::int64_t> pool = primes_in(B0, 2 * B0);
  std::int64_t n = pool.empty() ? 2 * B0 : pool.back() + 1;
  for (; pool.size() < kMinPrimePool; ++n) {
    if (is_prime(n)) pool.push_back(n);
  }
  return pool;
}

// Smallest angular distance between two phases.
double phase_gap(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  return std::abs(d);
}

struct Vote {
  Complex estimate;
  double residual;
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Complex median_estimate(const std::vector<Vote>& votes) {
  // Exact-fit votes, when present, outrank votes that carry collision residue.
  constexpr double kCleanResidual = 1e-9;
  std::vector<double> re, im;
  for (const auto& v : votes) {
    if (v.residual <= kCleanResidual) {
      re.push_back(v.estimate.real());
      im.push_back(v.estimate.imag());
    }
  }
  if (re.empty()) {
    for (const auto& v : votes) {
      re.push_back(v.estimate.real());
      im.push_back(v.estimate.imag());
    }
  }
  return {median_of(re), median_of(im)};
}

}  // namespace

void FourierSparse::set(std::int64_t w, Complex value) {
  if (!band_.contains(w)) throw std::out_of_range("FourierSparse: frequency outside band");
  if (value == Complex(0.0, 0.0)) {
    entries_.erase(w);
  } else {
    entries_[w] = value;
  }
}

Complex FourierSparse::operator[](std::int64_t w) const {
  auto it = entries_.find(w);
  return it == entries_.end() ? Complex(0.0, 0.0) : it->second;
}

void PeriodicSampler::sample_grid(double offset, std::span<Complex> out) const {
  if (grid) {
    grid(offset, out);
    return;
  }
  const double step = kTwoPi / static_cast<double>(out.size());
  for (std::size_t u = 0; u < out.size(); ++u) out[u] = at(offset + step * static_cast<double>(u));
}

void SftParams::validate() const {
  if (s < 1) throw std::invalid_argument("SftParams: s must be positive");
  if (trials < 1 || trials % 2 == 0) throw std::invalid_argument("SftParams: trials must be odd");
  if (!(bucket_factor >= 1.0)) throw std::invalid_argument("SftParams: bucket_factor must be >= 1");
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_radix2(std::vector<Complex>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::length_error("fft_radix2: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles taken directly from sin/cos per stage to avoid drift from repeated products.
    std::vector<Complex> tw(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(len);
      tw[k] = {std::cos(angle), std::sin(angle)};
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex t = tw[k] * data[i + k + half];
        data[i + k + half] = data[i + k] - t;
        data[i + k] += t;
      }
    }
  }
}

std::vector<Complex> dft_any(std::span<const Complex> data, bool inverse) {
  const std::size_t n = data.size();
  std::vector<Complex> out(data.begin(), data.end());
  if (n <= 1) return out;
  if ((n & (n - 1)) == 0) {
    fft_radix2(out, inverse);
    return out;
  }
  const double sign = inverse ? 1.0 : -1.0;
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<Complex> chirp(n);
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % two_n;
    const double angle = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<Complex> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = data[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  fft_radix2(a);
  fft_radix2(b);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_radix2(a, true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = chirp[k] * a[k] * scale;
  return out;
}

FourierSparse dft_dense(std::span<const Complex> samples, Band band) {
  const std::size_t M = samples.size();
  if (M == 0 || (M & (M - 1)) != 0) throw std::length_error("dft_dense: sample count must be a power of two");
  if (static_cast<std::int64_t>(M) < band.width()) throw std::length_error("dft_dense: fewer samples than band width");
  std::vector<Complex> X(samples.begin(), samples.end());
  fft_radix2(X);
  FourierSparse out(band);
  const double scale = 1.0 / static_cast<double>(M);
  const auto Mi = static_cast<std::int64_t>(M);
  for (std::int64_t w = band.lo; w <= band.hi; ++w) {
    out.set(w, X[static_cast<std::size_t>(floor_mod(w, Mi))] * (scale * parity_sign(w)));
  }
  return out;
}

std::vector<Complex> synthesize(const FourierSparse& coefficients, std::size_t M) {
  if (M == 0 || (M & (M - 1)) != 0) throw std::length_error("synthesize: size must be a power of two");
  if (static_cast<std::int64_t>(M) < coefficients.band().width()) {
    throw std::length_error("synthesize: grid smaller than band width");
  }
  std::vector<Complex> Y(M);
  const auto Mi = static_cast<std::int64_t>(M);
  for (const auto& [w, c] : coefficients.entries()) {
    Y[static_cast<std::size_t>(floor_mod(w, Mi))] += c * parity_sign(w);
  }
  fft_radix2(Y, true);
  return Y;
}

FourierSparse top_s_oracle(const PeriodicSampler& sampler, std::int64_t s) {
  const std::int64_t width = sampler.band.width();
  if (width > kDenseOracleLimit) throw std::length_error("top_s_oracle: band too wide for a dense transform");
  const std::size_t M = next_pow2(static_cast<std::size_t>(std::max<std::int64_t>(width, 1)));
  std::vector<Complex> samples(M);
  sampler.sample_grid(-std::numbers::pi, samples);
  FourierSparse dense = dft_dense(samples, sampler.band);

  double peak = 0.0;
  for (const auto& [w, c] : dense.entries()) peak = std::max(peak, std::abs(c));
  struct Ranked {
    double quantized;
    std::int64_t w;
    Complex c;
  };
  std::vector<Ranked> ranked;
  for (const auto& [w, c] : dense.entries()) {
    // Magnitudes equal to ~12 digits count as ties so the frequency tie-break applies.
    ranked.push_back({std::round(std::abs(c) / peak * 1e12), w, c});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.quantized != b.quantized) return a.quantized > b.quantized;
    if (std::abs(a.w) != std::abs(b.w)) return std::abs(a.w) < std::abs(b.w);
    return a.w < b.w;
  });
  FourierSparse out(sampler.band);
  for (std::size_t k = 0; k < ranked.size() && static_cast<std::int64_t>(k) < s; ++k) {
    if (ranked[k].quantized > 0.0) out.set(ranked[k].w, ranked[k].c);
  }
  return out;
}

std::uint64_t sft_sample_budget(const Band& band, const SftParams& params) {
  const std::int64_t B0 = base_buckets(params);
  const std::int64_t W = std::max<std::int64_t>(band.width(), 1);
  const int levels = ceil_log2((W + B0 - 1) / B0);
  return static_cast<std::uint64_t>(params.trials) * static_cast<std::uint64_t>(bucket_primes(params).back()) *
         static_cast<std::uint64_t>(levels + 1);
}

SftResult sft(const PeriodicSampler& sampler, const SftParams& params) {
  params.validate();
  SftResult result;
  result.coefficients = FourierSparse(sampler.band);
  const Band band = sampler.band;
  const std::int64_t W = band.width();
  if (W == 0) return result;

  const std::vector<std::int64_t> primes = bucket_primes(params);

  std::map<std::int64_t, std::vector<Vote>> votes;
  double peak = 0.0;

  for (int rep = 0; rep < params.trials; ++rep) {
    std::mt19937_64 rng(detail::stream_seed(params.seed, static_cast<std::uint64_t>(rep)));
    const std::int64_t B =
        primes[std::uniform_int_distribution<std::size_t>(0, primes.size() - 1)(rng)];
    const double x0 = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
    const std::int64_t q_max = (W + B - 1) / B;
    const int L = ceil_log2(q_max);
    const double scale = 1.0 / static_cast<double>(B);

    // buckets[l][b]: level 0 is the unshifted grid, level l+1 is shifted by eps_l.
    std::vector<std::vector<Complex>> buckets(static_cast<std::size_t>(L) + 1);
    std::vector<double> shifts(static_cast<std::size_t>(L) + 1, 0.0);
    std::vector<Complex> samples(static_cast<std::size_t>(B));
    for (int l = 0; l <= L; ++l) {
      if (l > 0) {
        shifts[l] = kTwoPi * std::ldexp(1.0, l - 1 - L) / static_cast<double>(B);
      }
      sampler.sample_grid(x0 + shifts[l], samples);
      buckets[l] = dft_any(samples);
      for (auto& v : buckets[l]) v *= scale;
    }
    result.samples += static_cast<std::uint64_t>(B) * static_cast<std::uint64_t>(L + 1);

    double rep_peak = 0.0;
    for (const auto& v : buckets[0]) rep_peak = std::max(rep_peak, std::abs(v));
    peak = std::max(peak, rep_peak);
    const double floor = rep_peak * 1e-10;

    for (std::int64_t b = 0; b < B; ++b) {
      const Complex base = buckets[0][b];
      if (!(std::abs(base) > floor)) continue;
      const std::int64_t w0 = band.lo + floor_mod(b - band.lo, B);
      if (w0 > band.hi) continue;
      const std::int64_t q_count = (band.hi - w0) / B + 1;

      // Bit t of the offset index comes from the shift at level L - t.
      std::int64_t v = 0;
      for (int t = 0; t < L; ++t) {
        const int level = L - t;
        const double measured =
            std::arg(buckets[level][b] / base) - static_cast<double>(w0) * shifts[level];
        const double denom = std::ldexp(1.0, t + 1);
        const double phase0 = kTwoPi * static_cast<double>(v) / denom;
        const double phase1 = kTwoPi * static_cast<double>(v + (std::int64_t{1} << t)) / denom;
        if (phase_gap(measured, phase1) < phase_gap(measured, phase0)) v += std::int64_t{1} << t;
      }
      if (v >= q_count) continue;
      const std::int64_t w = w0 + B * v;

      Complex mean(0.0, 0.0);
      std::vector<Complex> per_level(static_cast<std::size_t>(L) + 1);
      for (int l = 0; l <= L; ++l) {
        const double angle = -static_cast<double>(w) * std::fmod(x0 + shifts[l], kTwoPi);
        per_level[l] = buckets[l][b] * Complex(std::cos(angle), std::sin(angle));
        mean += per_level[l];
      }
      mean /= static_cast<double>(L + 1);
      double residual = 0.0;
      for (const auto& c : per_level) residual = std::max(residual, std::abs(c - mean));
      residual /= std::abs(mean);
      if (residual <= 0.5) votes[w].push_back({mean, residual});
    }
  }

  if (!(peak > 1e-250)) return result;  // no energy: the zero function

  // Two agreeing repetitions are already strong evidence: a wrong frequency has
  // to decode identically from two independent collisions. For real signals
  // +w and -w collide together, so a stricter quorum loses terms noticeably.
  const std::size_t min_votes =
      params.trials == 1 ? 1 : std::max<std::size_t>(2, static_cast<std::size_t>((params.trials + 3) / 4));
  struct Accepted {
    std::int64_t w;
    Complex c;
  };
  std::vector<Accepted> accepted;
  for (const auto& [w, list] : votes) {
    if (list.size() >= min_votes) accepted.push_back({w, median_estimate(list)});
  }
  result.accepted = accepted.size();
  if (accepted.empty()) {
    result.success = false;
    return result;
  }
  std::sort(accepted.begin(), accepted.end(), [](const Accepted& a, const Accepted& b) {
    const double ma = std::abs(a.c), mb = std::abs(b.c);
    if (ma != mb) return ma > mb;
    if (std::abs(a.w) != std::abs(b.w)) return std::abs(a.w) < std::abs(b.w);
    return a.w < b.w;
  });
  for (std::size_t k = 0; k < accepted.size() && static_cast<std::int64_t>(k) < params.s; ++k) {
    result.coefficients.set(accepted[k].w, accepted[k].c);
  }
  return result;
}

}  // namespace sleg
