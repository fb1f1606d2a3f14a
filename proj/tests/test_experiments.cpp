#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "aqo/dynamics.hpp"
#include "aqo/errors.hpp"
#include "aqo/experiments.hpp"
#include "aqo/parallel.hpp"
#include "aqo/rng.hpp"
#include "aqo/spectrum.hpp"

using namespace aqo;

namespace {

// Smallest sample value x with at least pct% of the sample <= x.
double percentile_by_definition(const std::vector<double>& v, double pct) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted) {
    const auto below = std::count_if(v.begin(), v.end(), [&](double y) { return y <= x; });
    if (100.0 * below >= pct * v.size()) return x;
  }
  return sorted.back();
}

StudyConfig small_study() {
  StudyConfig c;
  c.n_qubits = 3;
  c.instances = 4;
  c.perturbations = 5;
  c.T = 5.0;
  c.intervals = 20;
  c.seed = 11;
  return c;
}

}  // namespace

TEST(Percentile, MatchesDefinitionOnSmallArrays) {
  Rng rng(5);
  for (int len = 1; len <= 10; ++len) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v(len);
      // Few distinct values so ties are exercised.
      for (double& x : v) x = std::floor(rng.uniform(0, 4));
      for (double pct : {0.0, 1.0, 35.0, 50.0, 65.0, 99.0, 100.0}) {
        EXPECT_EQ(nearest_rank_percentile(v, pct), percentile_by_definition(v, pct)) << len << " " << pct;
      }
    }
  }
  EXPECT_THROW(nearest_rank_percentile({}, 50), std::invalid_argument);
  EXPECT_THROW(nearest_rank_percentile({1.0}, 101), std::invalid_argument);
}

TEST(Histogram, CountsAndEdges) {
  const std::vector<double> v{0.0, 0.1, 0.5, 0.99, 1.0, 2.0};
  const std::vector<int> c = histogram(v, {0.0, 0.5, 1.0});
  EXPECT_EQ(c, (std::vector<int>{2, 3}));
  const auto edges = uniform_edges(v, 4);
  ASSERT_EQ(edges.size(), 5u);
  EXPECT_EQ(edges.front(), 0.0);
  EXPECT_EQ(edges.back(), 2.0);
  const auto all = histogram(v, edges);
  EXPECT_EQ(std::accumulate(all.begin(), all.end(), 0), 6);
  EXPECT_EQ(uniform_edges({3.0, 3.0}, 2).front(), 2.5);
  const std::string csv = histogram_csv(v, {0.0, 0.5, 1.0});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bin,lo,hi,count");
  EXPECT_THROW(histogram(v, {1.0, 1.0}), std::invalid_argument);
}

TEST(PerturbationStudy, ZeroPerturbationChangesNothing) {
  StudyConfig c = small_study();
  c.perturbations = 1;
  c.force_zero = true;
  const PerturbationStudy s = run_perturbation_study(c);
  ASSERT_EQ(s.records.size(), 4u);
  for (const auto& r : s.records) {
    EXPECT_EQ(r.omega, 0.0);
    EXPECT_EQ(r.delta_p, 0.0);
  }
  EXPECT_EQ(s.summary.n_gap_increase + s.summary.n_gap_decrease, 0);
}

TEST(PerturbationStudy, RecordsAreConsistentWithRecomputation) {
  const StudyConfig c = small_study();
  const PerturbationStudy s = run_perturbation_study(c);
  ASSERT_EQ(s.records.size(), 20u);
  for (const auto& b : s.baselines) {
    // Baseline caching: a fresh evaluation gives the same numbers.
    const QuboInstance inst = random_qubo(3, b.seed);
    const Schedule lin = linear_schedule(3, 20, inst.max_coefficient(), 2.5);
    EXPECT_EQ(min_gap(gap_profile(inst, lin, {2, VectorMode::None}), GapRange::Full).gap, b.gap_min);
    EXPECT_EQ(evolve(inst, lin, 5.0).p_succ, b.p_succ);
  }
  for (const auto& r : s.records) {
    EXPECT_TRUE(std::isfinite(r.omega));
    EXPECT_TRUE(std::isfinite(r.delta_p));
    EXPECT_EQ(r.omega, r.gap_min - s.baselines[r.instance].gap_min);
    EXPECT_EQ(r.delta_p, r.p_succ - s.baselines[r.instance].p_succ);
    // The accepted sample regenerates the evaluated schedule.
    const QuboInstance inst = random_qubo(3, r.instance_seed);
    const Schedule sched = quadratic_random_schedule(sample_coefficients(3, c.restriction, r.perturbation_seed), 20,
                                                     inst.max_coefficient(), 2.5);
    EXPECT_EQ(min_gap(gap_profile(inst, sched, {2, VectorMode::None}), GapRange::Full).gap, r.gap_min);
  }
  const StudySummary& sum = s.summary;
  EXPECT_LE(sum.pct35_omega, sum.pct65_omega);
  EXPECT_LE(sum.pct35_dp, sum.pct65_dp);
  EXPECT_LE(sum.n_gap_increase + sum.n_gap_decrease, 4);
  EXPECT_LE(sum.n_succ_increase + sum.n_succ_decrease, 4);
}

TEST(PerturbationStudy, SummaryByHand) {
  std::vector<PerturbationStudyRecord> recs(4);
  const double om[] = {1.0, -3.0, 2.0, 4.0};
  const double dp[] = {0.1, 0.2, -0.5, -0.1};
  for (int k = 0; k < 4; ++k) {
    recs[k].instance = k / 2;
    recs[k].omega = om[k];
    recs[k].delta_p = dp[k];
  }
  const StudySummary s = summarize(recs, 2, 2);
  EXPECT_DOUBLE_EQ(s.mean_omega, 1.0);
  EXPECT_DOUBLE_EQ(s.mean_delta_p, -0.075);
  // Per instance, 35th = lower value (rank 1 of 2), 65th = upper (rank 2).
  EXPECT_DOUBLE_EQ(s.pct35_omega, (-3.0 + 2.0) / 2);
  EXPECT_DOUBLE_EQ(s.pct65_omega, (1.0 + 4.0) / 2);
  EXPECT_EQ(s.n_gap_increase, 1);  // means -1 and 3
  EXPECT_EQ(s.n_gap_decrease, 1);
  EXPECT_EQ(s.n_succ_increase, 1);  // means 0.15 and -0.3
  EXPECT_EQ(s.n_succ_decrease, 1);
  EXPECT_THROW(summarize(recs, 3, 2), std::invalid_argument);
}

TEST(PerturbationStudy, DeterministicAcrossThreadCounts) {
  StudyConfig c = small_study();
  c.restriction = SignRestriction::AllPositive;
  set_thread_count(1);
  const PerturbationStudy a = run_perturbation_study(c);
  set_thread_count(3);
  const PerturbationStudy b = run_perturbation_study(c);
  set_thread_count(0);
  EXPECT_EQ(records_csv(a), records_csv(b));
  EXPECT_EQ(baselines_csv(a), baselines_csv(b));
  EXPECT_EQ(to_json(a.summary).dump(), to_json(b.summary).dump());
  for (const auto& r : a.records) EXPECT_EQ(r.restriction, SignRestriction::AllPositive);
}

TEST(PerturbationStudy, TightBoundForcesResampling) {
  StudyConfig c = small_study();
  c.f_bound = 0.06;  // envelope peak is |c_r| / (4 ||c||^2)
  const PerturbationStudy s = run_perturbation_study(c);
  EXPECT_GT(s.summary.rejected_samples, 0);
  c.max_resamples = 0;
  c.f_bound = 1e-6;
  EXPECT_THROW(run_perturbation_study(c), NumericalError);
}

TEST(Mining, PoolOfOneAndRanking) {
  MiningConfig c;
  c.n_qubits = 3;
  c.pool_size = 1;
  c.keep = 1;
  c.T = 5.0;
  const MiningResult one = mine_hard_instances(c);
  ASSERT_EQ(one.kept.size(), 1u);
  EXPECT_EQ(one.kept[0].seed, one.pool[0].seed);

  c.pool_size = 12;
  c.keep = 4;
  const MiningResult r = mine_hard_instances(c);
  ASSERT_EQ(r.kept.size(), 4u);
  for (std::size_t k = 1; k < r.kept.size(); ++k) EXPECT_LE(r.kept[k - 1].p_succ, r.kept[k].p_succ);
  for (const auto& m : r.pool) {
    const bool kept = std::any_of(r.kept.begin(), r.kept.end(),
                                  [&](const MinedInstance& k) { return k.pool_index == m.pool_index; });
    if (!kept) EXPECT_GE(m.p_succ, r.kept.back().p_succ);
  }
  EXPECT_EQ(mined_csv(r.kept), mined_csv(mine_hard_instances(c).kept));
  c.keep = 13;
  EXPECT_THROW(mine_hard_instances(c), std::invalid_argument);
}

TEST(Compare, SlowEvolutionLeavesNoAdvantage) {
  // Fine grid and long T: both schedules are adiabatic.
  QuboInstance inst;
  for (std::uint64_t seed = 1;; ++seed) {
    inst = random_qubo(2, seed);
    const auto p = gap_profile(inst, linear_schedule(2, 200, inst.max_coefficient(), 2.5), {2, VectorMode::None});
    if (min_gap(p, GapRange::Interior).gap < endpoint_gap(p) && min_gap(p, GapRange::Full).gap > 0.5) break;
  }
  CompareConfig c;
  c.intervals = 200;
  c.Ts = {400.0};
  const Comparison cmp = compare_spo(inst, c);
  ASSERT_EQ(cmp.rows.size(), 1u);
  EXPECT_GT(cmp.rows[0].p_linear, 0.99);
  EXPECT_GT(cmp.rows[0].p_spo, 0.99);
  EXPECT_LT(std::abs(cmp.rows[0].p_linear - cmp.rows[0].p_spo), 0.01);
  EXPECT_GE(cmp.gap_spo, cmp.gap_linear);
  EXPECT_TRUE(validate(cmp.spo_schedule).empty());
  EXPECT_EQ(comparison_csv(cmp).substr(0, 16), "T,p_linear,p_spo");
}

TEST(EpsilonSweep, MonotoneAndPinnedAtTinyEps) {
  QuboInstance inst;
  for (std::uint64_t seed = 1;; ++seed) {
    inst = random_qubo(4, seed);
    const auto p = gap_profile(inst, linear_schedule(4, 50, inst.max_coefficient(), 2.5), {2, VectorMode::None});
    if (min_gap(p, GapRange::Interior).gap < endpoint_gap(p) - 1e-3) break;
  }
  const EpsilonSweep sw = epsilon_sweep(inst, {1e-7, 0.25, 1.0, 5.0});
  ASSERT_EQ(sw.points.size(), 4u);
  EXPECT_NEAR(sw.points[0].min_gap, sw.linear_min_gap, 1e-6);
  for (std::size_t k = 1; k < sw.points.size(); ++k) EXPECT_GE(sw.points[k].min_gap, sw.points[k - 1].min_gap);
  EXPECT_LE(sw.saturation, sw.endpoint_gap + 1e-12);
  EXPECT_EQ(sw.last_schedule.slew(), 5.0);
  EXPECT_THROW(epsilon_sweep(inst, {1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(epsilon_sweep(inst, {0.0}), std::invalid_argument);
}

TEST(StudyConfigJson, RoundTripAndKeyDiagnostics) {
  StudyConfig c;
  c.restriction = SignRestriction::XNegativeZPositive;
  c.seed = 99;
  c.T = 7.5;
  const StudyConfig back = study_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));

  auto message = [](const nlohmann::json& j) {
    try {
      study_config_from_json(j);
    } catch (const IoError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message({{"instnces", 3}}).find("'instnces'"), std::string::npos);
  EXPECT_NE(message({{"T", "ten"}}).find("'T'"), std::string::npos);
  EXPECT_NE(message({{"restriction", "sideways"}}).find("'restriction'"), std::string::npos);
  EXPECT_NE(message({{"seed", -1}}).find("'seed'"), std::string::npos);

  MiningConfig m;
  m.pool_size = 77;
  EXPECT_EQ(to_json(mining_config_from_json(to_json(m))), to_json(m));
  EXPECT_THROW(mining_config_from_json({{"pool", 3}}), IoError);
}

TEST(StudyConfigJson, SweepAndCompareRoundTrip) {
  EpsSweepStudyConfig e;
  e.eps_list = {0.1, 0.3};
  e.convex.p = 3;
  e.ensemble.seed = 8;
  EXPECT_EQ(to_json(eps_sweep_config_from_json(to_json(e))), to_json(e));
  EXPECT_THROW(eps_sweep_config_from_json({{"eps_list", {1.0, "x"}}}), IoError);
  EXPECT_THROW(eps_sweep_config_from_json({{"Ts", {1.0}}}), IoError);

  CompareStudyConfig c;
  c.compare.method = SpoMethod::Direct;
  c.compare.Ts = {3.0};
  c.compare.intervals = 30;
  EXPECT_EQ(to_json(compare_config_from_json(to_json(c))), to_json(c));
  EXPECT_THROW(compare_config_from_json({{"method", "newton"}}), IoError);
}

TEST(Ensemble, FirstCandidatesPassingTheFilter) {
  EnsembleConfig c;
  c.n_qubits = 3;
  c.count = 4;
  c.intervals = 20;
  c.seed = 6;
  const auto members = select_ensemble(c);
  ASSERT_EQ(members.size(), 4u);
  int next = 0;
  for (const auto& m : members) {
    // Every skipped candidate fails the filter and every member passes it.
    for (int k = next; k <= m.candidate; ++k) {
      const QuboInstance inst = random_qubo(3, ensemble_instance_seed(c.seed, k));
      const auto prof = gap_profile(inst, linear_schedule(3, 20, inst.max_coefficient(), 2.5), {2, VectorMode::None});
      const bool interior = min_gap(prof, GapRange::Interior).gap < endpoint_gap(prof) - 1e-6;
      EXPECT_EQ(interior, k == m.candidate) << "candidate " << k;
    }
    EXPECT_EQ(m.instance.seed(), m.seed);
    next = m.candidate + 1;
  }
  c.interior_only = false;
  const auto all = select_ensemble(c);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(all[k].candidate, k);
  c.interior_only = true;
  c.max_candidates = 1;
  c.count = 5;
  EXPECT_THROW(select_ensemble(c), NumericalError);
}
