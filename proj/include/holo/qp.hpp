#pragma once
// Dense convex quadratic programming:
//
//   minimize 1/2 x'Qx + c'x   subject to   Ax >= b
//
// solve_qp is a Mehrotra predictor-corrector interior-point method on the
// reduced normal equations; brute_force_qp enumerates active sets and is the
// independent oracle for small instances.

#include <Eigen/Dense>

#include "holo/core.hpp"

namespace holo {

struct QPProblem {
  Eigen::MatrixXd Q;  // symmetric positive semidefinite
  Eigen::VectorXd c;
  Eigen::MatrixXd A;  // m x n, rows are constraints A_i x >= b_i
  Eigen::VectorXd b;

  int n() const { return static_cast<int>(Q.rows()); }
  int m() const { return static_cast<int>(A.rows()); }
  double objective(const Eigen::VectorXd& x) const {
    return 0.5 * x.dot(Q * x) + c.dot(x);
  }
  void validate() const;  // throws std::invalid_argument
};

enum class QPStatus { optimal, max_iterations, infeasible_certificate };

struct QPSolution {
  QPStatus status = QPStatus::optimal;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;  // duals of Ax >= b, nonnegative
  Eigen::VectorXd slack;   // Ax - b
  double objective = 0.0;
  int iterations = 0;
  // scaled KKT residuals at exit
  double primal_residual = 0.0, dual_residual = 0.0, gap = 0.0;
};

struct QPOptions {
  double tolerance = 1e-8;  // relative KKT tolerance
  int max_iterations = 200;
};

QPSolution solve_qp(const QPProblem& p, const QPOptions& opt = {});

// Enumerates all active sets of size <= n (requires m <= 16); exact KKT
// solve per candidate. Throws std::invalid_argument for larger m and
// std::runtime_error when no feasible candidate exists.
QPSolution brute_force_qp(const QPProblem& p);

}  // namespace holo
