#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "aqo/qubo.hpp"
#include "aqo/schedule.hpp"
#include "aqo/spectrum.hpp"

namespace aqo {

/// Levels closer than this are treated as degenerate by the gradient.
inline constexpr double kDegeneracyThreshold = 1e-8;

struct GapGradient {
  /// d Delta(i) / d f_j(i) = u1' H_j u1 - u0' H_j u0.
  double value = 0.0;
  /// lambda_1 within kDegeneracyThreshold of lambda_2: the gap is not
  /// differentiable here and `value` is one element of the subdifferential.
  bool degenerate = false;
};

/// Hellmann-Feynman derivative of the gap at grid point i with respect to
/// the coefficient of local term j at that point.
GapGradient gap_gradient(const QuboInstance& inst, const Schedule& schedule, int i, int j);

/// All derivatives d Delta(i) / d f_r(i) as a 2n x (N+1) table, read from a
/// profile with VectorMode::All (3 levels or more enable the degeneracy
/// test). At a degenerate
/// first excited level the minimum-norm convex combination of the candidate
/// gradients is used.
Eigen::MatrixXd gap_gradients(const SpectrumProfile& profile, int n_qubits);

/// -(1/beta) log sum_{i=1}^{N-1} exp(-beta Delta(i)), evaluated stably.
/// `weights`, if given, receives d softmin / d Delta(i) (zero at the ends).
double soft_min(const Eigen::VectorXd& gaps, double beta, Eigen::VectorXd* weights = nullptr);

struct DirectConfig {
  /// Soft-min temperatures, one ascent round each; must be nondecreasing.
  std::vector<double> betas{10.0, 50.0, 250.0};
  int max_iters = 300;
  /// Stop a round when the largest projected-gradient entry falls below this.
  double grad_tol = 1e-9;
  /// First trial step, as the largest per-entry change; 0 picks f_bound / 4.
  double initial_step = 0.0;
  double shrink = 0.5;
  double grow = 2.0;
  int max_backtracks = 40;
};

struct DirectResult {
  Schedule schedule;
  /// True interior minimum gap at the start and after every accepted step.
  std::vector<double> objective_history;
  double final_min_gap = 0.0;
  int i_min = 0;
  double wall_time_s = 0.0;
  /// The final round ended on a failed line search.
  bool stall = false;
  /// The interior minimum already met the endpoint gap at the start.
  bool best_case = false;
  int iterations = 0;
};

/// Projected gradient ascent on the soft-min of the interior gaps, with
/// beta continuation. A step is accepted only if it raises the soft-min
/// and does not lower the true interior minimum, so the result is never
/// worse than `init`. Stops early once the interior minimum reaches
/// min(Delta(0), Delta(N)).
DirectResult optimize_direct(const QuboInstance& inst, const Schedule& init, const DirectConfig& config = {});

/// {"objective_history", "final_min_gap", "i_min", "wall_time_s", "stall_flag", ...}
std::string to_json(const DirectResult& result);

}  // namespace aqo
