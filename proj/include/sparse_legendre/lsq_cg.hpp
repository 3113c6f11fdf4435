#pragma once

// Conjugate gradients on the normal equations A^* A z = A^* y.

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace sleg {

struct LsqProblem {
  using Operator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  Operator apply_a;   // n -> m
  Operator apply_at;  // m -> n, the adjoint of apply_a
  Eigen::Index cols = 0;
  Eigen::VectorXd rhs;
  double tol = 1e-10;
  int max_iter = 200;
  /// Lower bound used for sigma_min(A)^2 in the stopping rule.
  double epsilon = 0.6;
  std::uint64_t probe_seed = 0x5eed;

  /// Wraps a dense matrix.
  static LsqProblem from_matrix(const Eigen::MatrixXd& A, Eigen::VectorXd y, double tol = 1e-10);
};

struct LsqResult {
  Eigen::VectorXd z;
  /// Final ||A^*(Az - y)||.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// ||A^*(A z_k - y)|| for k = 0, 1, ...
  std::vector<double> history;
  /// ||A z_k - y|| for k = 0, 1, ...
  std::vector<double> image_history;
};

/// Zero start; stops once ||A^*(Az - y)|| <= tol * sqrt(1 - epsilon) or after
/// max_iter iterations (converged = false). Throws std::invalid_argument when
/// a random probe shows apply_at is not the adjoint of apply_a (1e-10 relative).
LsqResult cg_normal_solve(const LsqProblem& p);

}  // namespace sleg
