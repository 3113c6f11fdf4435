#pragma once

// Functions f: [-1, 1] -> R as the algorithms see them: point evaluations,
// optionally off the real line, plus batched paths a source may accelerate.

#include <cstdint>
#include <mutex>
#include <span>
#include <vector>

#include "sparse_legendre/poly.hpp"

namespace sleg {

class SamplePlan;

/// Black-box access to f. Subclasses implement `eval`; everything else has a
/// pointwise default.
class LegendreSource {
 public:
  virtual ~LegendreSource() = default;

  virtual double eval(double x) const = 0;

  /// True when f can be evaluated at complex arguments (needed for r < 1).
  virtual bool has_complex() const { return false; }
  /// Throws std::domain_error unless has_complex().
  virtual Complex eval_complex(Complex z) const;

  /// out[u] = f_r(offset + 2pi u / out.size()).
  virtual void resampled_grid(double r, double offset, std::span<Complex> out) const;

  /// out[j] = f(plan point j).
  virtual void eval_plan(const SamplePlan& plan, std::span<double> out) const;
};

/// f_r(x) = (1 - r^2 e^{2ix}) f((r^{-1} e^{-ix} + r e^{ix}) / 2). At r = 1 only real
/// evaluations of f are used.
Complex f_r_value(const LegendreSource& f, double r, double x);

/// f_r for an expansion held in memory; throws std::domain_error unless 0 < r <= 1.
Complex f_r_sample(const SparseExpansion& f, double r, double x);

/// Fourier coefficients of f_r for a Legendre expansion, exactly, on [-N, N+2]
/// where N = f.max_degree(). Entry p + N holds the coefficient of e^{ipx}.
/// Cost is O(N * nnz(f)).
std::vector<double> resampled_spectrum(const SparseExpansion& f, double r);

/// A Legendre expansion as a source. Grid sampling of f_r folds the exact
/// spectrum, and plan evaluation uses the plan's recurrence checkpoints, so
/// neither pays the O(N) recurrence per point.
class ExpansionSource final : public LegendreSource {
 public:
  explicit ExpansionSource(SparseExpansion f);

  const SparseExpansion& expansion() const { return f_; }

  double eval(double x) const override;
  bool has_complex() const override { return true; }
  Complex eval_complex(Complex z) const override;
  void resampled_grid(double r, double offset, std::span<Complex> out) const override;
  void eval_plan(const SamplePlan& plan, std::span<double> out) const override;

 private:
  const std::vector<double>& spectrum(double r) const;

  SparseExpansion f_;
  mutable std::mutex mutex_;
  mutable double cached_r_ = -1.0;
  mutable std::vector<double> cached_spectrum_;
};

/// Forwards to another source while counting evaluations of f (or f_r) and the
/// time spent inside them.
class MeteredSource final : public LegendreSource {
 public:
  explicit MeteredSource(const LegendreSource& inner) : inner_(inner) {}

  std::uint64_t evaluations() const { return evaluations_; }
  double seconds() const { return seconds_; }

  double eval(double x) const override;
  bool has_complex() const override { return inner_.has_complex(); }
  Complex eval_complex(Complex z) const override;
  void resampled_grid(double r, double offset, std::span<Complex> out) const override;
  void eval_plan(const SamplePlan& plan, std::span<double> out) const override;

 private:
  const LegendreSource& inner_;
  mutable std::uint64_t evaluations_ = 0;
  mutable double seconds_ = 0.0;
};

/// Wraps a callable; real evaluations only, so recovery must run with r = 1.
template <typename F>
class CallableSource final : public LegendreSource {
 public:
  explicit CallableSource(F fn) : fn_(std::move(fn)) {}
  double eval(double x) const override { return fn_(x); }

 private:
  F fn_;
};

}  // namespace sleg
