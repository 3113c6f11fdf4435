#include "sparse_legendre/lsq_cg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sleg {

LsqProblem LsqProblem::from_matrix(const Eigen::MatrixXd& A, Eigen::VectorXd y, double tol) {
  LsqProblem p;
  p.apply_a = [A](const Eigen::VectorXd& v) -> Eigen::VectorXd { return A * v; };
  p.apply_at = [A](const Eigen::VectorXd& w) -> Eigen::VectorXd { return A.transpose() * w; };
  p.cols = A.cols();
  p.rhs = std::move(y);
  p.tol = tol;
  return p;
}

namespace {

void check_adjoint(const LsqProblem& p) {
  std::mt19937_64 rng(p.probe_seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(p.cols), w(p.rhs.size());
  for (auto& x : v) x = gauss(rng);
  for (auto& x : w) x = gauss(rng);
  const Eigen::VectorXd Av = p.apply_a(v);
  const Eigen::VectorXd Atw = p.apply_at(w);
  if (Av.size() != w.size() || Atw.size() != v.size()) {
    throw std::invalid_argument("cg_normal_solve: operator dimensions disagree with the problem");
  }
  const double lhs = Av.dot(w);
  const double rhs = v.dot(Atw);
  const double scale = std::max(Av.norm() * w.norm(), v.norm() * Atw.norm());
  if (std::abs(lhs - rhs) > 1e-10 * std::max(scale, 1e-300)) {
    throw std::invalid_argument("cg_normal_solve: apply_at is not the adjoint of apply_a");
  }
}

}  // namespace

LsqResult cg_normal_solve(const LsqProblem& p) {
  if (!(p.tol > 0.0)) throw std::invalid_argument("cg_normal_solve: tolerance must be positive");
  if (p.max_iter < 1) throw std::invalid_argument("cg_normal_solve: max_iter must be positive");
  if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) throw std::invalid_argument("cg_normal_solve: epsilon must lie in [0, 1)");
  LsqResult out;
  out.z = Eigen::VectorXd::Zero(p.cols);
  if (p.cols == 0) {
    out.converged = true;
    return out;
  }
  check_adjoint(p);

  const double threshold = p.tol * std::sqrt(1.0 - p.epsilon);
  Eigen::VectorXd r = p.rhs;         // y - Az
  Eigen::VectorXd g = p.apply_at(r);  // A^*(y - Az)
  Eigen::VectorXd dir = g;
  double gamma = g.squaredNorm();
  out.residual = std::sqrt(gamma);
  out.history.push_back(out.residual);
  out.image_history.push_back(r.norm());
  if (out.residual <= threshold) {
    out.converged = true;
    return out;
  }
  for (int it = 1; it <= p.max_iter; ++it) {
    const Eigen::VectorXd q = p.apply_a(dir);
    const double qq = q.squaredNorm();
    if (!(qq > 0.0)) break;  // A dir = 0: nothing left to reduce
    const double alpha = gamma / qq;
    out.z += alpha * dir;
    r -= alpha * q;
    g = p.apply_at(r);
    const double gamma_next = g.squaredNorm();
    out.iterations = it;
    out.residual = std::sqrt(gamma_next);
    out.history.push_back(out.residual);
    out.image_history.push_back(r.norm());
    if (out.residual <= threshold) {
      out.converged = true;
      break;
    }
    dir = g + (gamma_next / gamma) * dir;
    gamma = gamma_next;
  }
  return out;
}

}  // namespace sleg
