#include "aqo/lp.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aqo/errors.hpp"

namespace aqo {

namespace {

// Largest alpha in (0, 1] with v + alpha dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (dv(k) < 0.0) alpha = std::min(alpha, -v(k) / dv(k));
  }
  return alpha;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options, const Eigen::VectorXd* x0) {
  const Eigen::SparseMatrix<double>& G = lp.G;
  const Eigen::Index n = G.cols();
  const Eigen::Index m = G.rows();
  if (lp.c.size() != n || lp.h.size() != m) throw std::invalid_argument("solve_lp: dimension mismatch");
  if (m == 0) throw std::invalid_argument("solve_lp: no constraints");
  const Eigen::SparseMatrix<double> Gt = G.transpose();

  Eigen::VectorXd x = x0 != nullptr ? *x0 : Eigen::VectorXd::Zero(n);
  if (x.size() != n) throw std::invalid_argument("solve_lp: x0 has the wrong size");
  const double h_scale = 1.0 + lp.h.cwiseAbs().maxCoeff();
  const double c_scale = 1.0 + lp.c.cwiseAbs().maxCoeff();
  Eigen::VectorXd s = (lp.h - G * x).cwiseMax(1.0);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(m);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  bool analyzed = false;
  Eigen::SparseMatrix<double> K;

  double worst = INFINITY;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    const Eigen::VectorXd rd = lp.c + Gt * z;
    const Eigen::VectorXd rp = G * x + s - lp.h;
    const double mu = s.dot(z) / static_cast<double>(m);
    const double objective = lp.c.dot(x);
    const double pres = rp.cwiseAbs().maxCoeff() / h_scale;
    const double dres = rd.cwiseAbs().maxCoeff() / std::max(c_scale, 1.0 + z.cwiseAbs().maxCoeff());
    const double gap = s.dot(z) / (1.0 + std::abs(objective));
    worst = std::max({pres, dres, gap});
    // Once complementarity is exhausted the dual residual cannot improve
    // further; accept it if it is within 100x of the tolerance.
    const bool exhausted = gap <= 1e-6 * options.tolerance && dres <= 100.0 * options.tolerance;
    if (pres <= options.tolerance && gap <= options.tolerance && (dres <= options.tolerance || exhausted)) {
      LpSolution out;
      out.x = std::move(x);
      out.z = std::move(z);
      out.s = std::move(s);
      out.objective = objective;
      out.iterations = iter;
      out.primal_residual = pres;
      out.dual_residual = dres;
      out.gap = gap;
      return out;
    }

    const Eigen::VectorXd w = z.cwiseQuotient(s);
    K = Gt * w.asDiagonal() * G;
    // Relative diagonal shift: keeps the factorization stable when w spans
    // many orders of magnitude without biasing weakly weighted variables.
    Eigen::SparseMatrix<double> shifted = K;
    shifted.diagonal() = K.diagonal() * (1.0 + 1e-14) + Eigen::VectorXd::Constant(n, 1e-14);
    if (!analyzed) {
      ldlt.analyzePattern(shifted);
      analyzed = true;
    }
    ldlt.factorize(shifted);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalError("solve_lp: normal-equation factorization failed at iteration " + std::to_string(iter), worst);
    }

    // Newton step for a complementarity right-hand side rc (Z ds + S dz = rc).
    auto newton = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
      const Eigen::VectorXd t = (rc + z.cwiseProduct(rp)).cwiseQuotient(s);
      const Eigen::VectorXd r = -rd - Gt * t;
      dx = ldlt.solve(r);
      dx += ldlt.solve(r - K * dx);
      ds = -rp - G * dx;
      dz = (rc - z.cwiseProduct(ds)).cwiseQuotient(s);
    };

    Eigen::VectorXd dx, ds, dz;
    newton(-s.cwiseProduct(z), dx, ds, dz);
    const double alpha_aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_aff = (s + alpha_aff * ds).dot(z + alpha_aff * dz) / static_cast<double>(m);
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
    const Eigen::VectorXd rc = -s.cwiseProduct(z) - ds.cwiseProduct(dz) + Eigen::VectorXd::Constant(m, sigma * mu);
    newton(rc, dx, ds, dz);
    const double alpha = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)));
    x += alpha * dx;
    s += alpha * ds;
    z += alpha * dz;
    if (!x.allFinite() || !s.allFinite() || !z.allFinite()) {
      throw NumericalError("solve_lp: iterate diverged at iteration " + std::to_string(iter), worst);
    }
  }
  throw NumericalError("solve_lp: no convergence in " + std::to_string(options.max_iters) + " iterations", worst);
}

}  // namespace aqo
