#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace aqo {

/// min c'x subject to G x <= h.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd h;
};

struct LpOptions {
  int max_iters = 200;
  /// Relative tolerance on primal residual, dual residual and duality gap.
  double tolerance = 1e-9;
};

struct LpSolution {
  Eigen::VectorXd x;
  /// Inequality multipliers (z >= 0) and slacks (s = h - G x >= 0).
  Eigen::VectorXd z;
  Eigen::VectorXd s;
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

/// Mehrotra predictor-corrector interior-point method on the normal
/// equations G'(Z/S)G, factorized with a sparse LDL' (AMD ordering).
/// `x0` seeds the primal iterate; it need not be feasible. Throws
/// NumericalError (carrying the worst scaled residual) if the tolerances
/// are not met within max_iters, which also covers infeasible and
/// unbounded programs.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {}, const Eigen::VectorXd* x0 = nullptr);

}  // namespace aqo
