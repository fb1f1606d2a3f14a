#include "aqo/direct.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "aqo/eigensolver.hpp"
#include "aqo/hamiltonian.hpp"

namespace aqo {

namespace {

double local_expectation(int n, int term, const Eigen::VectorXcd& u) {
  Eigen::VectorXcd hu;
  apply_local_term(n, term, u, hu);
  return u.dot(hu).real();
}

Eigen::VectorXd term_expectations(int n, const Eigen::VectorXcd& u) {
  Eigen::VectorXd out(2 * n);
  for (int r = 0; r < 2 * n; ++r) out(r) = local_expectation(n, r, u);
  return out;
}

}  // namespace

GapGradient gap_gradient(const QuboInstance& inst, const Schedule& schedule, int i, int j) {
  if (i < 0 || i > schedule.intervals()) throw std::out_of_range("gap_gradient: grid index out of range");
  if (j < 0 || j >= schedule.term_count()) throw std::out_of_range("gap_gradient: term index out of range");
  const int n = inst.n_qubits();
  const int k = std::min<int>(3, 1 << n);
  const EigenSystem sys = lowest_eigenpairs(HamiltonianFamily(inst).at(schedule, i), k);
  GapGradient g;
  g.value = local_expectation(n, j, sys.vectors.col(1)) - local_expectation(n, j, sys.vectors.col(0));
  g.degenerate = k > 2 && sys.values(2) - sys.values(1) < kDegeneracyThreshold;
  return g;
}

Eigen::MatrixXd gap_gradients(const SpectrumProfile& profile, int n_qubits) {
  if (profile.levels < 2 || profile.eigenvectors.size() != static_cast<std::size_t>(profile.intervals + 1)) {
    throw std::invalid_argument("gap_gradients: need a profile with >= 2 levels and all eigenvectors");
  }
  const int N = profile.intervals;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(2 * n_qubits, N + 1);
  for (int i = 1; i < N; ++i) {
    const Eigen::MatrixXcd& v = profile.eigenvectors[static_cast<std::size_t>(i)];
    const Eigen::VectorXd e0 = term_expectations(n_qubits, v.col(0));
    Eigen::VectorXd g = term_expectations(n_qubits, v.col(1)) - e0;
    if (profile.levels > 2 && profile.eigenvalues(i, 2) - profile.eigenvalues(i, 1) < kDegeneracyThreshold) {
      const Eigen::VectorXd other = term_expectations(n_qubits, v.col(2)) - e0;
      const Eigen::VectorXd d = g - other;
      const double dd = d.squaredNorm();
      const double t = dd > 0.0 ? std::clamp(-other.dot(d) / dd, 0.0, 1.0) : 1.0;
      g = t * g + (1.0 - t) * other;
    }
    grad.col(i) = g;
  }
  return grad;
}

double soft_min(const Eigen::VectorXd& gaps, double beta, Eigen::VectorXd* weights) {
  const Eigen::Index N = gaps.size() - 1;
  if (N < 2) throw std::invalid_argument("soft_min: need interior points");
  const Eigen::VectorXd interior = gaps.segment(1, N - 1);
  const double m = interior.minCoeff();
  const Eigen::VectorXd e = (-beta * (interior.array() - m)).exp();
  const double z = e.sum();
  if (weights != nullptr) {
    weights->setZero(gaps.size());
    weights->segment(1, N - 1) = e / z;
  }
  return m - std::log(z) / beta;
}

namespace {

struct Point {
  Eigen::MatrixXd values;
  SpectrumProfile profile;
  MinGap interior;
};

Point evaluate(const HamiltonianFamily& family, const Schedule& like, Eigen::MatrixXd values) {
  Point p;
  const Schedule s = like.with_values(values);
  p.values = std::move(values);
  p.profile = gap_profile(family, s, {std::min<int>(3, static_cast<int>(family.dimension())), VectorMode::All});
  p.interior = min_gap(p.profile, GapRange::Interior);
  return p;
}

}  // namespace

DirectResult optimize_direct(const QuboInstance& inst, const Schedule& init, const DirectConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (!validate(init).empty()) throw std::invalid_argument("optimize_direct: initial schedule is not admissible");
  if (init.n_qubits() != inst.n_qubits()) throw std::invalid_argument("optimize_direct: qubit count mismatch");
  for (std::size_t r = 1; r < config.betas.size(); ++r) {
    if (config.betas[r] < config.betas[r - 1]) throw std::invalid_argument("optimize_direct: betas must be nondecreasing");
  }
  const HamiltonianFamily family(inst);
  const int N = init.intervals();
  const int n = inst.n_qubits();

  Point current = evaluate(family, init, init.values());
  const double target = endpoint_gap(current.profile);
  DirectResult result{init, {current.interior.gap}, current.interior.gap, current.interior.index, 0.0, false, false, 0};
  result.best_case = current.interior.gap >= target;

  const double max_step = config.initial_step > 0.0 ? config.initial_step : init.f_bound() / 4.0;
  double step = max_step;
  bool done = result.best_case || init.f_bound() == 0.0;
  for (std::size_t round = 0; round < config.betas.size() && !done; ++round) {
    const double beta = config.betas[round];
    result.stall = false;
    for (int it = 0; it < config.max_iters; ++it) {
      Eigen::VectorXd w;
      const double objective = soft_min(current.profile.gaps, beta, &w);
      Eigen::MatrixXd direction = gap_gradients(current.profile, n);
      for (int i = 0; i <= N; ++i) direction.col(i) *= w(i);
      // Components pushing against an active bound cannot move.
      const Eigen::MatrixXd probe = clip_to_admissible(current.values + 1e-6 * init.f_bound() * direction /
                                                           std::max(direction.cwiseAbs().maxCoeff(), 1e-300),
                                                       N, init.f_bound(), init.slew());
      if ((probe - current.values).cwiseAbs().maxCoeff() == 0.0 || direction.cwiseAbs().maxCoeff() < config.grad_tol) {
        break;
      }
      direction /= direction.cwiseAbs().maxCoeff();
      bool accepted = false;
      for (int bt = 0; bt < config.max_backtracks && step > 1e-14; ++bt) {
        Eigen::MatrixXd trial = clip_to_admissible(current.values + step * direction, N, init.f_bound(), init.slew());
        if ((trial - current.values).cwiseAbs().maxCoeff() == 0.0) {
          step *= config.shrink;
          continue;
        }
        Point candidate = evaluate(family, init, std::move(trial));
        if (soft_min(candidate.profile.gaps, beta) > objective && candidate.interior.gap >= current.interior.gap) {
          current = std::move(candidate);
          accepted = true;
          step = std::min(step * config.grow, max_step);
          break;
        }
        step *= config.shrink;
      }
      if (!accepted) {
        result.stall = true;
        step = max_step;
        break;
      }
      ++result.iterations;
      result.objective_history.push_back(current.interior.gap);
      if (current.interior.gap >= target) {
        done = true;
        break;
      }
    }
  }
  result.schedule = init.with_values(current.values);
  result.final_min_gap = current.interior.gap;
  result.i_min = current.interior.index;
  if (done) result.stall = false;
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string to_json(const DirectResult& result) {
  nlohmann::json j;
  j["objective_history"] = result.objective_history;
  j["final_min_gap"] = result.final_min_gap;
  j["i_min"] = result.i_min;
  j["wall_time_s"] = result.wall_time_s;
  j["stall_flag"] = result.stall;
  j["best_case"] = result.best_case;
  j["iterations"] = result.iterations;
  return j.dump(2);
}

}  // namespace aqo
