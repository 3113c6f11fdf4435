#pragma once

// Dense DFT, a randomized sparse Fourier transform, and a dense top-s oracle.
// Periodic functions live on [-pi, pi); coefficients follow
//   f^(w) = (1 / 2pi) * integral f(x) exp(-i w x) dx.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "sparse_legendre/poly.hpp"

namespace sleg {

/// Closed integer frequency interval [lo, hi].
struct Band {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  std::int64_t width() const { return hi < lo ? 0 : hi - lo + 1; }
  bool contains(std::int64_t w) const { return w >= lo && w <= hi; }
};

/// Sparse map frequency -> complex coefficient; every key lies in `band`.
class FourierSparse {
 public:
  FourierSparse() = default;
  explicit FourierSparse(Band band) : band_(band) {}

  const Band& band() const { return band_; }
  const std::map<std::int64_t, Complex>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Assigning exactly 0 erases the entry.
  void set(std::int64_t w, Complex value);
  Complex operator[](std::int64_t w) const;

 private:
  Band band_;
  std::map<std::int64_t, Complex> entries_;
};

/// A 2pi-periodic function with known frequency support.
///
/// `grid` is an optional fast path filling out[u] = f(offset + 2pi u / out.size());
/// when absent, `sample_grid` falls back to pointwise calls of `at`.
struct PeriodicSampler {
  std::function<Complex(double)> at;
  std::function<void(double offset, std::span<Complex> out)> grid;
  Band band;

  void sample_grid(double offset, std::span<Complex> out) const;
};

struct SftParams {
  std::int64_t s = 1;
  int trials = 7;
  double bucket_factor = 4.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless s >= 1, trials odd and positive, bucket_factor >= 1.
  void validate() const;
};

struct SftResult {
  FourierSparse coefficients;
  bool success = true;
  std::uint64_t samples = 0;
  /// Frequencies that passed the vote, before truncation to s.
  std::size_t accepted = 0;
};

/// In-place unnormalized radix-2 transform (forward uses exp(-i...)); size must be a power of two.
void fft_radix2(std::vector<Complex>& data, bool inverse = false);

/// Unnormalized DFT of arbitrary length (Bluestein on top of fft_radix2).
std::vector<Complex> dft_any(std::span<const Complex> data, bool inverse = false);

std::size_t next_pow2(std::size_t n);

/// All coefficients in `band` from M equispaced samples x_t = -pi + 2pi t / M.
/// M must be a power of two and at least band.width().
FourierSparse dft_dense(std::span<const Complex> samples, Band band);

/// Evaluates the trigonometric polynomial on the grid dft_dense expects.
std::vector<Complex> synthesize(const FourierSparse& coefficients, std::size_t M);

/// Dense transform of the sampler's band, then the s largest magnitudes;
/// ties go to smaller |w|, then smaller w.
FourierSparse top_s_oracle(const PeriodicSampler& sampler, std::int64_t s);

inline constexpr std::int64_t kDenseOracleLimit = std::int64_t{1} << 24;

/// Randomized aliasing SFT. Each repetition subsamples on a random prime
/// number of buckets B in [ceil(bucket_factor * s), 2 ceil(bucket_factor * s)),
/// locates the dominant frequency of every bucket bit by bit from the phase
/// drift across geometrically growing shifts, and votes; coefficients are
/// medians over the repetitions that located the frequency cleanly.
SftResult sft(const PeriodicSampler& sampler, const SftParams& params);

/// Upper bound on sft's sample count for the given band and parameters.
std::uint64_t sft_sample_budget(const Band& band, const SftParams& params);

}  // namespace sleg
