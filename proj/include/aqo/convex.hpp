#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "aqo/lp.hpp"
#include "aqo/qubo.hpp"
#include "aqo/schedule.hpp"
#include "aqo/spectrum.hpp"

namespace aqo {

struct ConvexConfig {
  /// Excited eigenvectors kept per grid point.
  int p = 5;
  /// Trust-region radius on max |A - A_hat|; <= 0 selects 0.1 * f_bound.
  double eta = 0.0;
  /// Stopping tolerance on the interior minimum gap.
  double xi = 1e-4;
  int max_outer = 50;
  /// A cut is added while the block minimum eigenvalue is below -lmi_tol.
  double lmi_tol = 1e-7;
  int max_cut_rounds = 60;
  LpOptions lp;
};

/// Eigenvectors of H(i) at the incumbent schedule for i = 0..N:
/// phi0[i] = u_0(i), phi1[i] = [u_1(i) ... u_p(i)].
struct Projectors {
  int intervals = 0;
  int p = 0;
  std::vector<Eigen::VectorXcd> phi0;
  std::vector<Eigen::MatrixXcd> phi1;
  /// (N+1) x (p+1) eigenvalues lambda_0..lambda_p at the incumbent.
  Eigen::MatrixXd lambda;
};

Projectors build_projectors(const QuboInstance& inst, const Schedule& incumbent, int p);

struct SubproblemSolution {
  /// 2n x (N+1) coefficient table (boundary columns zero).
  Eigen::MatrixXd A_star;
  /// Bounds at grid points 1..N-1: eps0 = u0' H(A*) u0 and
  /// eps1 = lambda_min(Phi1' H(A*) Phi1), so the LMI holds exactly.
  Eigen::VectorXd eps0;
  Eigen::VectorXd eps1;
  /// The same bounds evaluated at A_hat (Rayleigh quotient and projected
  /// minimum eigenvalue of the incumbent).
  Eigen::VectorXd hat_eps0;
  Eigen::VectorXd hat_eps1;
  /// min_i eps1(i) - eps0(i) at A_star.
  double objective = 0.0;
  /// The same quantity at A_hat; objective >= hat_objective always.
  double hat_objective = 0.0;
  /// Optimal value of the final cutting-plane LP.
  double lp_objective = 0.0;
  int cut_count = 0;
  int cut_rounds = 0;
  bool cuts_converged = true;
  /// The LP optimum was worse than A_hat after exact evaluation, so A_hat is returned.
  bool kept_incumbent = false;
  /// min_i lambda_min(Phi1' (H(A*) - eps1 I) Phi1) for the returned eps1.
  double lmi_min_eigenvalue = 0.0;
  /// The same with the LP's own eps1, before exact re-evaluation.
  double lp_lmi_min_eigenvalue = 0.0;
};

/// Maximizes t subject to t <= eps1(i) - eps0(i), u0' H(i) u0 <= eps0(i),
/// Phi1' (H(i) - eps1(i) I) Phi1 >= 0, amplitude and slew limits of
/// `incumbent`, and |A - A_hat| <= eta entrywise. H(i) is affine in A, so
/// this is a linear program plus p x p LMIs; the LMIs are imposed by
/// spectral cutting planes.
SubproblemSolution solve_subproblem(const QuboInstance& inst, const Projectors& projectors, const Schedule& incumbent,
                                    double eta, const ConvexConfig& config);

struct ConvexIteration {
  int iter = 0;
  double surrogate_objective = 0.0;
  double true_min_gap = 0.0;
  int i_min = 0;
  int cuts_added = 0;
  double eta = 0.0;
  double wall_time_s = 0.0;
  bool accepted = false;
  /// max_i (lambda_0(i) - eps0(i)) and max_i (eps1(i) - lambda_1(i)) at the
  /// incumbent, both <= 0 up to rounding when the bounds are sound.
  double eps0_violation = 0.0;
  double eps1_violation = 0.0;
  double lmi_min_eigenvalue = 0.0;
};

enum class ConvexStop { BestCase, ReachedEndpoint, Stalled, TrustRegionCollapsed, MaxOuter };

std::string to_string(ConvexStop stop);

struct ConvexResult {
  Schedule schedule;
  std::vector<ConvexIteration> iterations;
  double initial_min_gap = 0.0;
  double final_min_gap = 0.0;
  int i_min = 0;
  double endpoint_gap = 0.0;
  ConvexStop stop = ConvexStop::MaxOuter;
  double wall_time_s = 0.0;
};

/// Iterative convex approximation: linearize around the incumbent, solve the
/// trust-region subproblem, accept A* only if the true interior minimum gap
/// improves (halving eta otherwise). Stops when the interior minimum is within
/// xi of min(Delta(0), Delta(N)), when an accepted step gains less than xi,
/// when eta falls below 1e-4 f_bound, or after max_outer iterations.
/// `init` supplies the grid, the limits and the starting table (normally zero).
ConvexResult optimize_convex(const QuboInstance& inst, const Schedule& init, const ConvexConfig& config = {});

/// Per-iteration report plus a summary, as JSON.
std::string to_json(const ConvexResult& result);

}  // namespace aqo
