#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "aqo/direct.hpp"
#include "aqo/hamiltonian.hpp"
#include "aqo/qubo.hpp"
#include "aqo/rng.hpp"
#include "aqo/spectrum.hpp"
#include "oracles.hpp"

using namespace aqo;

namespace {

Schedule random_admissible(int n, int N, double fb, double slew, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd raw(2 * n, N + 1);
  for (Eigen::Index k = 0; k < raw.size(); ++k) raw(k) = fb * rng.uniform(-1, 1);
  return Schedule(n, N, fb, slew, clip_to_admissible(raw, N, fb, slew));
}

// Gap of H(i) from a dense Kronecker-product matrix.
double oracle_gap(const QuboInstance& inst, const Schedule& s, int i) {
  const int n = inst.n_qubits();
  Eigen::MatrixXcd h = (1 - s.s(i)) * oracle::driver(n) + s.s(i) * oracle::problem(n, inst.h(), inst.J());
  for (int r = 0; r < 2 * n; ++r) h += s.value(r, i) * oracle::string_matrix(oracle::single(n, r / 2, r % 2 ? 'Z' : 'X'));
  const auto ev = oracle::hermitian_eigenvalues(h);
  return ev[1] - ev[0];
}

double interior_min(const QuboInstance& inst, const Schedule& s) {
  return min_gap(gap_profile(inst, s, {2, VectorMode::None}), GapRange::Interior).gap;
}

// First seeds at size n whose linear interior minimum lies below the endpoints.
std::vector<QuboInstance> hard_instances(int n, int count, int N) {
  std::vector<QuboInstance> out;
  for (std::uint64_t seed = 1; static_cast<int>(out.size()) < count; ++seed) {
    QuboInstance inst = random_qubo(n, seed);
    const auto prof = gap_profile(inst, linear_schedule(n, N, inst.max_coefficient(), 2.5), {2, VectorMode::None});
    if (min_gap(prof, GapRange::Interior).gap < endpoint_gap(prof) - 1e-6) out.push_back(inst);
  }
  return out;
}

}  // namespace

TEST(GapGradient, SingleQubitClosedForm) {
  // H = a X + b Z with a = 1 - s + fX, b = s h + fZ; gap 2 sqrt(a^2 + b^2).
  const QuboInstance inst(1, {0.7}, Eigen::MatrixXd::Zero(1, 1));
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 11);
  v(0, 4) = 0.2;
  v(1, 4) = -0.3;
  const Schedule s(1, 10, 1.0, 2.5, v);
  const double a = 1 - 0.4 + 0.2;
  const double b = 0.4 * 0.7 - 0.3;
  const double r = std::hypot(a, b);
  EXPECT_NEAR(gap_gradient(inst, s, 4, 0).value, 2 * a / r, 1e-10);
  EXPECT_NEAR(gap_gradient(inst, s, 4, 1).value, 2 * b / r, 1e-10);
  EXPECT_FALSE(gap_gradient(inst, s, 4, 0).degenerate);
}

TEST(GapGradient, ZTermsVanishOnDriverEigenstates) {
  // Driver only (s = 0, h = J = 0): Z terms shift no gap to first order.
  const QuboInstance inst(2, {0.0, 0.0}, Eigen::MatrixXd::Zero(2, 2));
  const Schedule s = linear_schedule(2, 10, 1.0, 2.5);
  // At s = 0.3 H = 0.7 (X0 + X1): u0 = |-->, u1 in span{|-+>, |+->}.
  EXPECT_NEAR(gap_gradient(inst, s, 3, 1).value, 0.0, 1e-10);
}

TEST(GapGradient, MatchesCentralDifferenceAtSixQubits) {
  const QuboInstance inst = random_qubo(6, 41);
  const double fb = inst.max_coefficient();
  const Schedule base = random_admissible(6, 20, 0.5 * fb, 2.5, 9);
  const auto prof = gap_profile(inst, base, {3, VectorMode::All});
  const Eigen::MatrixXd grad = gap_gradients(prof, 6);
  const double step = 1e-5;
  for (int i : {3, 10, 17}) {
    for (int j = 0; j < 12; ++j) {
      Eigen::MatrixXd plus = base.values(), minus = base.values();
      plus(j, i) += step;
      minus(j, i) -= step;
      const double fd =
          (oracle_gap(inst, base.with_values(plus), i) - oracle_gap(inst, base.with_values(minus), i)) / (2 * step);
      EXPECT_NEAR(grad(j, i), fd, 1e-5 * std::max(1.0, std::abs(fd))) << "i=" << i << " j=" << j;
      EXPECT_NEAR(gap_gradient(inst, base, i, j).value, grad(j, i), 1e-8);
    }
  }
  EXPECT_EQ(grad.col(0).norm(), 0.0);
  EXPECT_EQ(grad.col(20).norm(), 0.0);
}

TEST(GapGradient, DegenerateLevelUsesMinimumNormCombination) {
  // Decoupled identical qubits: lambda_1 = lambda_2 by symmetry.
  const QuboInstance inst(2, {0.5, 0.5}, Eigen::MatrixXd::Zero(2, 2));
  const Schedule s = linear_schedule(2, 10, 0.5, 2.5);
  const auto prof = gap_profile(inst, s, {3, VectorMode::All});
  ASSERT_LT(prof.eigenvalues(5, 2) - prof.eigenvalues(5, 1), kDegeneracyThreshold);
  EXPECT_TRUE(gap_gradient(inst, s, 5, 0).degenerate);
  const Eigen::MatrixXd g = gap_gradients(prof, 2);
  // The two candidates are the per-qubit gradients; their min-norm
  // combination is the symmetric average.
  EXPECT_NEAR(g(0, 5), g(2, 5), 1e-8);
  EXPECT_NEAR(g(1, 5), g(3, 5), 1e-8);
  const double a = 0.5, b = 0.25;
  EXPECT_NEAR(g(0, 5), a / std::hypot(a, b), 1e-8);
}

TEST(GapGradient, RejectsBadIndices) {
  const QuboInstance inst = random_qubo(2, 1);
  const Schedule s = linear_schedule(2, 10, 1.0, 2.5);
  EXPECT_THROW(gap_gradient(inst, s, 11, 0), std::out_of_range);
  EXPECT_THROW(gap_gradient(inst, s, 1, 4), std::out_of_range);
  EXPECT_THROW(gap_gradients(gap_profile(inst, s), 2), std::invalid_argument);
}

TEST(SoftMin, BoundsAndWeights) {
  Eigen::VectorXd gaps(7);
  gaps << 0.01, 0.5, 0.3, 0.9, 0.3, 0.7, 0.02;
  for (double beta : {1.0, 10.0, 250.0, 1e6}) {
    Eigen::VectorXd w;
    const double sm = soft_min(gaps, beta, &w);
    EXPECT_LE(sm, 0.3 + 1e-15);
    EXPECT_GE(sm, 0.3 - std::log(5.0) / beta - 1e-12);
    EXPECT_NEAR(w.sum(), 1.0, 1e-12);
    EXPECT_EQ(w(0), 0.0);
    EXPECT_EQ(w(6), 0.0);
    EXPECT_TRUE((w.array() >= 0).all());
  }
  // Weight vector is the gradient of the soft-min.
  Eigen::VectorXd w;
  soft_min(gaps, 10.0, &w);
  for (int i = 1; i < 6; ++i) {
    Eigen::VectorXd p = gaps, m = gaps;
    p(i) += 1e-6;
    m(i) -= 1e-6;
    EXPECT_NEAR((soft_min(p, 10.0) - soft_min(m, 10.0)) / 2e-6, w(i), 1e-7);
  }
}

TEST(OptimizeDirect, ImprovesHardInstancesMonotonically) {
  for (const QuboInstance& inst : hard_instances(4, 3, 50)) {
    const Schedule init = linear_schedule(4, 50, inst.max_coefficient(), 2.5);
    const DirectResult r = optimize_direct(inst, init);
    ASSERT_FALSE(r.objective_history.empty());
    for (std::size_t k = 1; k < r.objective_history.size(); ++k) {
      EXPECT_GE(r.objective_history[k], r.objective_history[k - 1]);
    }
    EXPECT_TRUE(validate(r.schedule).empty());
    EXPECT_NEAR(r.final_min_gap, interior_min(inst, r.schedule), 1e-12);
    EXPECT_GT(r.final_min_gap, r.objective_history.front());
    EXPECT_FALSE(r.best_case);
  }
}

TEST(OptimizeDirect, BestCaseStartIsReturnedUnchanged) {
  for (std::uint64_t seed = 1;; ++seed) {
    const QuboInstance inst = random_qubo(3, seed);
    const Schedule init = linear_schedule(3, 50, inst.max_coefficient(), 2.5);
    const auto prof = gap_profile(inst, init, {2, VectorMode::None});
    if (min_gap(prof, GapRange::Interior).gap < endpoint_gap(prof)) continue;
    const DirectResult r = optimize_direct(inst, init);
    EXPECT_TRUE(r.best_case);
    EXPECT_EQ(r.schedule.values(), init.values());
    EXPECT_EQ(r.iterations, 0);
    break;
  }
}

TEST(OptimizeDirect, ZeroBoundReturnsInput) {
  const QuboInstance inst = hard_instances(3, 1, 50).front();
  const Schedule init = linear_schedule(3, 50, 0.0, 2.5);
  const DirectResult r = optimize_direct(inst, init);
  EXPECT_EQ(r.schedule.values(), init.values());
  EXPECT_NEAR(r.final_min_gap, interior_min(inst, init), 1e-12);
}

TEST(OptimizeDirect, RejectsInvalidInputs) {
  const QuboInstance inst = random_qubo(2, 3);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 11);
  v(0, 5) = 5.0;
  EXPECT_THROW(optimize_direct(inst, Schedule(2, 10, 1.0, 2.5, v)), std::invalid_argument);
  DirectConfig bad;
  bad.betas = {50.0, 10.0};
  EXPECT_THROW(optimize_direct(inst, linear_schedule(2, 10, 1.0, 2.5), bad), std::invalid_argument);
}

TEST(OptimizeDirect, JsonReport) {
  const QuboInstance inst = hard_instances(3, 1, 50).front();
  const DirectResult r = optimize_direct(inst, linear_schedule(3, 50, inst.max_coefficient(), 2.5));
  const auto j = nlohmann::json::parse(to_json(r));
  for (const char* key : {"objective_history", "final_min_gap", "i_min", "wall_time_s", "stall_flag"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["objective_history"].size(), r.objective_history.size());
  EXPECT_DOUBLE_EQ(j["final_min_gap"].get<double>(), r.final_min_gap);
}
