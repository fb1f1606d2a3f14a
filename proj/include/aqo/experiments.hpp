#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "aqo/convex.hpp"
#include "aqo/direct.hpp"
#include "aqo/qubo.hpp"
#include "aqo/schedule.hpp"

namespace aqo {

/// Nearest-rank percentile: the ceil(pct/100 * n)-th smallest value (rank
/// clamped to [1, n]). `pct` in [0, 100]; throws on an empty sample.
double nearest_rank_percentile(std::vector<double> values, double pct);

/// Counts per bin for edges e_0 < ... < e_B; bin b is [e_b, e_{b+1}), the
/// last bin also takes e_B. Values outside the edges are dropped.
std::vector<int> histogram(const std::vector<double>& values, const std::vector<double>& edges);

/// `bins` equal-width edges spanning [min, max] of the data (a unit-width
/// range centred on the value if all values coincide).
std::vector<double> uniform_edges(const std::vector<double>& values, int bins);

/// "bin,lo,hi,count".
std::string histogram_csv(const std::vector<double>& values, const std::vector<double>& edges);

// ---------------------------------------------------------------------------
// Random-perturbation statistics

struct StudyConfig {
  int n_qubits = 6;
  int instances = 50;       // N_s
  int perturbations = 200;  // N_r
  SignRestriction restriction = SignRestriction::Unrestricted;
  double T = 10.0;
  int intervals = 50;
  double slew = 2.5;
  /// <= 0 selects max(|h|, |J|) per instance.
  double f_bound = 0.0;
  Normalization normalization = Normalization::SquaredNorm;
  std::uint64_t seed = 1;
  /// Replace every perturbation by the zero operator.
  bool force_zero = false;
  /// Rejected samples allowed per perturbation before giving up.
  int max_resamples = 1000;
};

struct InstanceBaseline {
  int instance = 0;
  std::uint64_t seed = 0;
  double gap_min = 0.0;
  int i_min = 0;
  double p_succ = 0.0;
};

struct PerturbationStudyRecord {
  int instance = 0;
  std::uint64_t instance_seed = 0;
  int perturbation = 0;
  /// Seed of the accepted sample.
  std::uint64_t perturbation_seed = 0;
  SignRestriction restriction = SignRestriction::Unrestricted;
  /// Delta^p_min - Delta^0_min over the full grid.
  double omega = 0.0;
  /// p^p_succ - p^0_succ at T.
  double delta_p = 0.0;
  double T = 0.0;
  double gap_min = 0.0;
  double p_succ = 0.0;
  int rejected = 0;
};

struct StudySummary {
  double mean_omega = 0.0;
  double mean_delta_p = 0.0;
  /// Per-instance nearest-rank percentiles over the perturbations, averaged over instances.
  double pct35_omega = 0.0;
  double pct65_omega = 0.0;
  double pct35_dp = 0.0;
  double pct65_dp = 0.0;
  /// Instances whose mean Omega (mean Delta p) is > 0, respectively < 0.
  int n_gap_increase = 0;
  int n_gap_decrease = 0;
  int n_succ_increase = 0;
  int n_succ_decrease = 0;
  int instances = 0;
  int perturbations = 0;
  long long rejected_samples = 0;
};

struct PerturbationStudy {
  StudyConfig config;
  std::vector<InstanceBaseline> baselines;
  /// Instance-major, perturbation-minor.
  std::vector<PerturbationStudyRecord> records;
  StudySummary summary;
};

std::uint64_t study_instance_seed(std::uint64_t base, int instance);

/// For each of N_s seeded instances: the linear baseline once, then N_r
/// random quadratic perturbations s(1-s) c / ||c||^2 (rejection-sampled
/// against f_bound and slew), each scored by Omega and Delta p.
PerturbationStudy run_perturbation_study(const StudyConfig& config);

StudySummary summarize(const std::vector<PerturbationStudyRecord>& records, int instances, int perturbations);

std::string records_csv(const PerturbationStudy& study);
std::string baselines_csv(const PerturbationStudy& study);
nlohmann::json to_json(const StudySummary& summary);

// ---------------------------------------------------------------------------
// Hard-instance mining

struct MiningConfig {
  int n_qubits = 8;
  int pool_size = 2000;
  double T = 10.0;
  int keep = 30;
  int intervals = 50;
  std::uint64_t seed = 1;
};

struct MinedInstance {
  int pool_index = 0;
  std::uint64_t seed = 0;
  double p_succ = 0.0;
  double gap_min = 0.0;
  int i_min = 0;
  double s_min = 0.0;
};

struct MiningResult {
  MiningConfig config;
  /// In pool order.
  std::vector<MinedInstance> pool;
  /// The `keep` lowest p_succ, ascending (ties by pool index).
  std::vector<MinedInstance> kept;
  double pool_median_s_min = 0.0;
  double kept_median_s_min = 0.0;
  double pool_p_succ_pct1 = 0.0;
};

std::uint64_t mining_instance_seed(std::uint64_t base, int index);

MiningResult mine_hard_instances(const MiningConfig& config);

/// "rank,pool_index,seed,p_succ,gap_min,i_min,s_min".
std::string mined_csv(const std::vector<MinedInstance>& rows);

// ---------------------------------------------------------------------------
// SPO vs linear

enum class SpoMethod { Direct, Convex };

std::string to_string(SpoMethod m);
SpoMethod spo_method_from_string(const std::string& name);

struct CompareConfig {
  SpoMethod method = SpoMethod::Convex;
  std::vector<double> Ts{5.0, 10.0, 20.0, 40.0};
  int intervals = 50;
  double slew = 2.5;
  /// <= 0 selects max(|h|, |J|).
  double f_bound = 0.0;
  ConvexConfig convex;
  DirectConfig direct;
};

struct CompareRow {
  double T = 0.0;
  double p_linear = 0.0;
  double p_spo = 0.0;
};

struct Comparison {
  Comparison(Schedule spo, std::string stop_reason) : spo_schedule(std::move(spo)), stop(std::move(stop_reason)) {}

  std::vector<CompareRow> rows;
  /// Full-grid minimum gaps and their grid indices.
  double gap_linear = 0.0;
  double gap_spo = 0.0;
  int i_min_linear = 0;
  int i_min_spo = 0;
  double endpoint_gap = 0.0;
  Schedule spo_schedule;
  std::string stop;
};

/// Optimizes once, then evolves both schedules at every T.
Comparison compare_spo(const QuboInstance& inst, const CompareConfig& config);

/// "T,p_linear,p_spo".
std::string comparison_csv(const Comparison& c);

// ---------------------------------------------------------------------------
// Slew sweep

struct EpsilonPoint {
  double eps = 0.0;
  /// Full-grid minimum gap of the optimized schedule.
  double min_gap = 0.0;
  double interior_min_gap = 0.0;
  int i_min = 0;
  std::string stop;
  int outer_iterations = 0;
};

struct EpsilonSweep {
  explicit EpsilonSweep(Schedule last) : last_schedule(std::move(last)) {}

  std::vector<EpsilonPoint> points;
  double linear_min_gap = 0.0;
  double endpoint_gap = 0.0;
  /// min_gap at the largest eps.
  double saturation = 0.0;
  /// Optimized schedule at the largest eps.
  Schedule last_schedule;
};

/// Runs optimize_convex for each eps in ascending order. Each run starts
/// from the previous optimum (admissible, since a larger eps only relaxes
/// the slew limit), so the achieved minimum gap cannot decrease.
EpsilonSweep epsilon_sweep(const QuboInstance& inst, const std::vector<double>& eps_list, int intervals = 50,
                           double f_bound = 0.0, const ConvexConfig& config = {});

/// "eps,min_gap,interior_min_gap,i_min,stop,outer_iterations".
std::string epsilon_sweep_csv(const EpsilonSweep& sweep);

// ---------------------------------------------------------------------------
// Seeded ensembles

struct EnsembleConfig {
  int n_qubits = 6;
  int count = 20;
  std::uint64_t seed = 1;
  int intervals = 50;
  /// <= 0 selects max(|h|, |J|) per instance.
  double f_bound = 0.0;
  /// Keep only instances whose linear interior minimum gap lies below the
  /// endpoint gap by more than 1e-6.
  bool interior_only = true;
  /// Candidates examined before giving up.
  int max_candidates = 100000;
};

struct EnsembleMember {
  /// Position in the candidate stream.
  int candidate = 0;
  std::uint64_t seed = 0;
  QuboInstance instance;
};

std::uint64_t ensemble_instance_seed(std::uint64_t base, int candidate);

/// The first `count` candidates (in stream order) passing the filter.
/// Throws NumericalError if max_candidates is exhausted.
std::vector<EnsembleMember> select_ensemble(const EnsembleConfig& config);

struct EpsSweepStudyConfig {
  EnsembleConfig ensemble{.count = 5};
  std::vector<double> eps_list{0.25, 0.5, 1.0, 2.5, 5.0};
  ConvexConfig convex;
};

struct EpsSweepStudy {
  EpsSweepStudyConfig config;
  std::vector<EnsembleMember> members;
  std::vector<EpsilonSweep> sweeps;
};

/// One epsilon_sweep per ensemble member.
EpsSweepStudy run_eps_sweep_study(const EpsSweepStudyConfig& config);

/// "instance,seed,eps,min_gap,interior_min_gap,i_min,stop,outer_iterations".
std::string eps_sweep_study_csv(const EpsSweepStudy& study);
/// "instance,seed,linear_min_gap,endpoint_gap,saturation".
std::string eps_sweep_summary_csv(const EpsSweepStudy& study);

struct CompareStudyConfig {
  EnsembleConfig ensemble;
  CompareConfig compare;
};

struct CompareStudy {
  CompareStudyConfig config;
  std::vector<EnsembleMember> members;
  std::vector<Comparison> comparisons;
};

CompareStudy run_compare_study(const CompareStudyConfig& config);

/// "instance,seed,T,p_linear,p_spo".
std::string compare_study_csv(const CompareStudy& study);
/// "instance,seed,gap_linear,gap_spo,i_min_linear,i_min_spo,endpoint_gap,stop".
std::string compare_gaps_csv(const CompareStudy& study);

// ---------------------------------------------------------------------------
// Configuration files

/// Strict readers: unknown keys and wrong types raise IoError naming the key.
StudyConfig study_config_from_json(const nlohmann::json& j);
MiningConfig mining_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StudyConfig& c);
nlohmann::json to_json(const MiningConfig& c);
EpsSweepStudyConfig eps_sweep_config_from_json(const nlohmann::json& j);
CompareStudyConfig compare_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EpsSweepStudyConfig& c);
nlohmann::json to_json(const CompareStudyConfig& c);

}  // namespace aqo
