#include "aqo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "aqo/dynamics.hpp"
#include "aqo/errors.hpp"
#include "aqo/io.hpp"
#include "aqo/parallel.hpp"
#include "aqo/rng.hpp"
#include "aqo/spectrum.hpp"

namespace aqo {

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("nearest_rank_percentile: empty sample");
  if (!(pct >= 0.0 && pct <= 100.0)) throw std::invalid_argument("nearest_rank_percentile: pct outside [0, 100]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  const auto rank = static_cast<std::size_t>(std::clamp(std::ceil(pct / 100.0 * n), 1.0, n));
  return values[rank - 1];
}

std::vector<int> histogram(const std::vector<double>& values, const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("histogram: need at least two edges");
  for (std::size_t b = 1; b < edges.size(); ++b) {
    if (!(edges[b] > edges[b - 1])) throw std::invalid_argument("histogram: edges must increase");
  }
  std::vector<int> counts(edges.size() - 1, 0);
  for (double v : values) {
    if (v < edges.front() || v > edges.back()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto bin = static_cast<std::size_t>(std::distance(edges.begin(), it)) - 1;
    counts[std::min(bin, counts.size() - 1)]++;
  }
  return counts;
}

std::vector<double> uniform_edges(const std::vector<double>& values, int bins) {
  if (values.empty() || bins < 1) throw std::invalid_argument("uniform_edges: need data and bins >= 1");
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * b / bins;
  edges.back() = hi;
  return edges;
}

std::string histogram_csv(const std::vector<double>& values, const std::vector<double>& edges) {
  const std::vector<int> counts = histogram(values, edges);
  std::ostringstream out;
  out << "bin,lo,hi,count\n";
  for (std::size_t b = 0; b < counts.size(); ++b) {
    out << b << ',' << format_number(edges[b], 17) << ',' << format_number(edges[b + 1], 17) << ',' << counts[b]
        << '\n';
  }
  return out.str();
}

namespace {

double bound_for(const QuboInstance& inst, double f_bound) { return f_bound > 0.0 ? f_bound : inst.max_coefficient(); }

struct Scored {
  double gap_min = 0.0;
  int i_min = 0;
  double p_succ = 0.0;
};

Scored score(const QuboInstance& inst, const Schedule& schedule, double T) {
  const MinGap g = min_gap(gap_profile(inst, schedule, {2, VectorMode::None}), GapRange::Full);
  return {g.gap, g.index, evolve(inst, schedule, T).p_succ};
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

std::uint64_t study_instance_seed(std::uint64_t base, int instance) {
  return derive_seed(base, {0, static_cast<std::uint64_t>(instance)});
}

PerturbationStudy run_perturbation_study(const StudyConfig& config) {
  if (config.n_qubits < 1 || config.instances < 1 || config.perturbations < 1 || config.intervals < 2) {
    throw std::invalid_argument("run_perturbation_study: sizes must be positive (N >= 2)");
  }
  if (!(config.T > 0.0) || !(config.slew > 0.0)) throw std::invalid_argument("run_perturbation_study: T and slew must be positive");
  PerturbationStudy study;
  study.config = config;
  const int Ns = config.instances;
  const int Nr = config.perturbations;
  std::vector<QuboInstance> instances;
  for (int k = 0; k < Ns; ++k) instances.push_back(random_qubo(config.n_qubits, study_instance_seed(config.seed, k)));

  study.baselines.resize(static_cast<std::size_t>(Ns));
  parallel_for(static_cast<std::size_t>(Ns), [&](std::size_t k) {
    const QuboInstance& inst = instances[k];
    const Schedule linear =
        linear_schedule(config.n_qubits, config.intervals, bound_for(inst, config.f_bound), config.slew);
    const Scored s = score(inst, linear, config.T);
    study.baselines[k] = {static_cast<int>(k), inst.seed(), s.gap_min, s.i_min, s.p_succ};
  });

  study.records.resize(static_cast<std::size_t>(Ns) * Nr);
  parallel_for(study.records.size(), [&](std::size_t job) {
    const int k = static_cast<int>(job / Nr);
    const int r = static_cast<int>(job % Nr);
    const QuboInstance& inst = instances[k];
    const double fb = bound_for(inst, config.f_bound);
    PerturbationStudyRecord rec;
    rec.instance = k;
    rec.instance_seed = inst.seed();
    rec.perturbation = r;
    rec.restriction = config.restriction;
    rec.T = config.T;
    Schedule schedule = linear_schedule(config.n_qubits, config.intervals, fb, config.slew);
    if (!config.force_zero) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > config.max_resamples) {
          throw NumericalError("run_perturbation_study: instance " + std::to_string(k) + ", perturbation " +
                                   std::to_string(r) + " rejected " + std::to_string(attempt) + " samples",
                               attempt);
        }
        const std::uint64_t pseed =
            derive_seed(config.seed, {1, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r),
                                      static_cast<std::uint64_t>(attempt)});
        try {
          schedule = quadratic_random_schedule(sample_coefficients(config.n_qubits, config.restriction, pseed),
                                               config.intervals, fb, config.slew, config.normalization);
          rec.perturbation_seed = pseed;
          rec.rejected = attempt;
          break;
        } catch (const ScheduleRejected&) {
        }
      }
    }
    const Scored s = score(inst, schedule, config.T);
    rec.gap_min = s.gap_min;
    rec.p_succ = s.p_succ;
    rec.omega = s.gap_min - study.baselines[k].gap_min;
    rec.delta_p = s.p_succ - study.baselines[k].p_succ;
    study.records[job] = rec;
  });
  study.summary = summarize(study.records, Ns, Nr);
  return study;
}

StudySummary summarize(const std::vector<PerturbationStudyRecord>& records, int instances, int perturbations) {
  if (records.size() != static_cast<std::size_t>(instances) * perturbations || records.empty()) {
    throw std::invalid_argument("summarize: record count does not match the ensemble size");
  }
  StudySummary s;
  s.instances = instances;
  s.perturbations = perturbations;
  std::vector<double> all_omega, all_dp;
  for (const auto& r : records) {
    all_omega.push_back(r.omega);
    all_dp.push_back(r.delta_p);
    s.rejected_samples += r.rejected;
  }
  s.mean_omega = mean(all_omega);
  s.mean_delta_p = mean(all_dp);
  for (int k = 0; k < instances; ++k) {
    const auto first = static_cast<std::ptrdiff_t>(k) * perturbations;
    const std::vector<double> om(all_omega.begin() + first, all_omega.begin() + first + perturbations);
    const std::vector<double> dp(all_dp.begin() + first, all_dp.begin() + first + perturbations);
    s.pct35_omega += nearest_rank_percentile(om, 35) / instances;
    s.pct65_omega += nearest_rank_percentile(om, 65) / instances;
    s.pct35_dp += nearest_rank_percentile(dp, 35) / instances;
    s.pct65_dp += nearest_rank_percentile(dp, 65) / instances;
    const double mo = mean(om);
    const double md = mean(dp);
    s.n_gap_increase += mo > 0.0;
    s.n_gap_decrease += mo < 0.0;
    s.n_succ_increase += md > 0.0;
    s.n_succ_decrease += md < 0.0;
  }
  return s;
}

std::string records_csv(const PerturbationStudy& study) {
  std::ostringstream out;
  out << "instance,instance_seed,perturbation,perturbation_seed,restriction,omega,delta_p,T,gap_min,p_succ,rejected\n";
  for (const auto& r : study.records) {
    out << r.instance << ',' << r.instance_seed << ',' << r.perturbation << ',' << r.perturbation_seed << ','
        << to_string(r.restriction) << ',' << format_number(r.omega, 17) << ',' << format_number(r.delta_p, 17) << ','
        << format_number(r.T) << ',' << format_number(r.gap_min, 17) << ',' << format_number(r.p_succ, 17) << ','
        << r.rejected << '\n';
  }
  return out.str();
}

std::string baselines_csv(const PerturbationStudy& study) {
  std::ostringstream out;
  out << "instance,seed,gap_min,i_min,s_min,p_succ\n";
  for (const auto& b : study.baselines) {
    out << b.instance << ',' << b.seed << ',' << format_number(b.gap_min, 17) << ',' << b.i_min << ','
        << format_number(static_cast<double>(b.i_min) / study.config.intervals) << ','
        << format_number(b.p_succ, 17) << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const StudySummary& s) {
  return {{"mean_omega", s.mean_omega},
          {"mean_delta_p", s.mean_delta_p},
          {"pct35_omega", s.pct35_omega},
          {"pct65_omega", s.pct65_omega},
          {"pct35_dp", s.pct35_dp},
          {"pct65_dp", s.pct65_dp},
          {"n_gap_increase", s.n_gap_increase},
          {"n_gap_decrease", s.n_gap_decrease},
          {"n_succ_increase", s.n_succ_increase},
          {"n_succ_decrease", s.n_succ_decrease},
          {"instances", s.instances},
          {"perturbations", s.perturbations},
          {"rejected_samples", s.rejected_samples}};
}

std::uint64_t mining_instance_seed(std::uint64_t base, int index) {
  return derive_seed(base, {2, static_cast<std::uint64_t>(index)});
}

MiningResult mine_hard_instances(const MiningConfig& config) {
  if (config.pool_size < 1 || config.keep < 1 || config.keep > config.pool_size) {
    throw std::invalid_argument("mine_hard_instances: need 1 <= keep <= pool_size");
  }
  if (!(config.T > 0.0) || config.n_qubits < 1 || config.intervals < 2) {
    throw std::invalid_argument("mine_hard_instances: need T > 0, n >= 1, N >= 2");
  }
  MiningResult out;
  out.config = config;
  out.pool.resize(static_cast<std::size_t>(config.pool_size));
  parallel_for(out.pool.size(), [&](std::size_t k) {
    const QuboInstance inst = random_qubo(config.n_qubits, mining_instance_seed(config.seed, static_cast<int>(k)));
    const Schedule linear = linear_schedule(config.n_qubits, config.intervals, inst.max_coefficient(), 2.5);
    const Scored s = score(inst, linear, config.T);
    out.pool[k] = {static_cast<int>(k), inst.seed(), s.p_succ, s.gap_min, s.i_min,
                   static_cast<double>(s.i_min) / config.intervals};
  });
  std::vector<MinedInstance> ranked = out.pool;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const MinedInstance& a, const MinedInstance& b) { return a.p_succ < b.p_succ; });
  out.kept.assign(ranked.begin(), ranked.begin() + config.keep);
  std::vector<double> pool_s, kept_s, pool_p;
  for (const auto& m : out.pool) {
    pool_s.push_back(m.s_min);
    pool_p.push_back(m.p_succ);
  }
  for (const auto& m : out.kept) kept_s.push_back(m.s_min);
  out.pool_median_s_min = nearest_rank_percentile(pool_s, 50);
  out.kept_median_s_min = nearest_rank_percentile(kept_s, 50);
  out.pool_p_succ_pct1 = nearest_rank_percentile(pool_p, 1);
  return out;
}

std::string mined_csv(const std::vector<MinedInstance>& rows) {
  std::ostringstream out;
  out << "rank,pool_index,seed,p_succ,gap_min,i_min,s_min\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& m = rows[k];
    out << k << ',' << m.pool_index << ',' << m.seed << ',' << format_number(m.p_succ, 17) << ','
        << format_number(m.gap_min, 17) << ',' << m.i_min << ',' << format_number(m.s_min) << '\n';
  }
  return out.str();
}

std::string to_string(SpoMethod m) { return m == SpoMethod::Direct ? "direct" : "convex"; }

SpoMethod spo_method_from_string(const std::string& name) {
  if (name == "direct") return SpoMethod::Direct;
  if (name == "convex") return SpoMethod::Convex;
  throw std::invalid_argument("unknown method '" + name + "' (expected direct or convex)");
}

Comparison compare_spo(const QuboInstance& inst, const CompareConfig& config) {
  if (config.Ts.empty()) throw std::invalid_argument("compare_spo: no running times");
  const double fb = bound_for(inst, config.f_bound);
  const Schedule linear = linear_schedule(inst.n_qubits(), config.intervals, fb, config.slew);
  auto optimized = [&]() -> Comparison {
    if (config.method == SpoMethod::Direct) {
      const DirectResult r = optimize_direct(inst, linear, config.direct);
      return Comparison(r.schedule, r.best_case ? "best_case" : (r.stall ? "stall" : "done"));
    }
    const ConvexResult r = optimize_convex(inst, linear, config.convex);
    return Comparison(r.schedule, to_string(r.stop));
  };
  Comparison out = optimized();
  const SpectrumProfile lp = gap_profile(inst, linear, {2, VectorMode::None});
  const SpectrumProfile sp = gap_profile(inst, out.spo_schedule, {2, VectorMode::None});
  const MinGap gl = min_gap(lp, GapRange::Full);
  const MinGap gs = min_gap(sp, GapRange::Full);
  out.gap_linear = gl.gap;
  out.i_min_linear = gl.index;
  out.gap_spo = gs.gap;
  out.i_min_spo = gs.index;
  out.endpoint_gap = endpoint_gap(lp);
  for (double T : config.Ts) {
    out.rows.push_back({T, evolve(inst, linear, T).p_succ, evolve(inst, out.spo_schedule, T).p_succ});
  }
  return out;
}

std::string comparison_csv(const Comparison& c) {
  std::ostringstream out;
  out << "T,p_linear,p_spo\n";
  for (const auto& r : c.rows) {
    out << format_number(r.T) << ',' << format_number(r.p_linear, 17) << ',' << format_number(r.p_spo, 17) << '\n';
  }
  return out.str();
}

EpsilonSweep epsilon_sweep(const QuboInstance& inst, const std::vector<double>& eps_list, int intervals,
                           double f_bound, const ConvexConfig& config) {
  if (eps_list.empty()) throw std::invalid_argument("epsilon_sweep: empty eps list");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw std::invalid_argument("epsilon_sweep: eps must be positive");
    if (k > 0 && !(eps_list[k] > eps_list[k - 1])) throw std::invalid_argument("epsilon_sweep: eps list must ascend");
  }
  const double fb = bound_for(inst, f_bound);
  Schedule current = linear_schedule(inst.n_qubits(), intervals, fb, eps_list.front());
  EpsilonSweep out(current);
  {
    const SpectrumProfile p = gap_profile(inst, current, {2, VectorMode::None});
    out.linear_min_gap = min_gap(p, GapRange::Full).gap;
    out.endpoint_gap = endpoint_gap(p);
  }
  for (double eps : eps_list) {
    const ConvexResult r = optimize_convex(inst, current.with_limits(fb, eps), config);
    current = r.schedule;
    const SpectrumProfile p = gap_profile(inst, current, {2, VectorMode::None});
    const MinGap full = min_gap(p, GapRange::Full);
    out.points.push_back({eps, full.gap, r.final_min_gap, full.index, to_string(r.stop),
                          static_cast<int>(r.iterations.size())});
  }
  out.saturation = out.points.back().min_gap;
  out.last_schedule = current;
  return out;
}

std::string epsilon_sweep_csv(const EpsilonSweep& sweep) {
  std::ostringstream out;
  out << "eps,min_gap,interior_min_gap,i_min,stop,outer_iterations\n";
  for (const auto& p : sweep.points) {
    out << format_number(p.eps) << ',' << format_number(p.min_gap, 17) << ',' << format_number(p.interior_min_gap, 17)
        << ',' << p.i_min << ',' << p.stop << ',' << p.outer_iterations << '\n';
  }
  return out.str();
}

std::uint64_t ensemble_instance_seed(std::uint64_t base, int candidate) {
  return derive_seed(base, {3, static_cast<std::uint64_t>(candidate)});
}

std::vector<EnsembleMember> select_ensemble(const EnsembleConfig& config) {
  if (config.n_qubits < 1 || config.count < 0 || config.intervals < 2) {
    throw std::invalid_argument("select_ensemble: need n >= 1, count >= 0 and N >= 2");
  }
  std::vector<EnsembleMember> out;
  for (int k = 0; static_cast<int>(out.size()) < config.count; ++k) {
    if (k >= config.max_candidates) {
      throw NumericalError("select_ensemble: only " + std::to_string(out.size()) + " of " +
                               std::to_string(config.count) + " instances found",
                           static_cast<double>(out.size()));
    }
    const std::uint64_t seed = ensemble_instance_seed(config.seed, k);
    QuboInstance inst = random_qubo(config.n_qubits, seed);
    if (config.interior_only) {
      const Schedule linear = linear_schedule(inst.n_qubits(), config.intervals, bound_for(inst, config.f_bound), 2.5);
      const SpectrumProfile p = gap_profile(inst, linear, {2, VectorMode::None});
      if (!(min_gap(p, GapRange::Interior).gap < endpoint_gap(p) - 1e-6)) continue;
    }
    out.push_back({k, seed, std::move(inst)});
  }
  return out;
}

EpsSweepStudy run_eps_sweep_study(const EpsSweepStudyConfig& config) {
  EpsSweepStudy study{config, select_ensemble(config.ensemble), {}};
  std::vector<std::optional<EpsilonSweep>> sweeps(study.members.size());
  parallel_for(sweeps.size(), [&](std::size_t k) {
    sweeps[k] = epsilon_sweep(study.members[k].instance, config.eps_list, config.ensemble.intervals,
                              config.ensemble.f_bound, config.convex);
  });
  for (auto& s : sweeps) study.sweeps.push_back(std::move(*s));
  return study;
}

std::string eps_sweep_study_csv(const EpsSweepStudy& study) {
  std::ostringstream out;
  out << "instance,seed,eps,min_gap,interior_min_gap,i_min,stop,outer_iterations\n";
  for (std::size_t k = 0; k < study.sweeps.size(); ++k) {
    for (const auto& p : study.sweeps[k].points) {
      out << k << ',' << study.members[k].seed << ',' << format_number(p.eps) << ',' << format_number(p.min_gap, 17)
          << ',' << format_number(p.interior_min_gap, 17) << ',' << p.i_min << ',' << p.stop << ','
          << p.outer_iterations << '\n';
    }
  }
  return out.str();
}

std::string eps_sweep_summary_csv(const EpsSweepStudy& study) {
  std::ostringstream out;
  out << "instance,seed,linear_min_gap,endpoint_gap,saturation\n";
  for (std::size_t k = 0; k < study.sweeps.size(); ++k) {
    const auto& s = study.sweeps[k];
    out << k << ',' << study.members[k].seed << ',' << format_number(s.linear_min_gap, 17) << ','
        << format_number(s.endpoint_gap, 17) << ',' << format_number(s.saturation, 17) << '\n';
  }
  return out.str();
}

CompareStudy run_compare_study(const CompareStudyConfig& config) {
  EnsembleConfig ens = config.ensemble;
  ens.intervals = config.compare.intervals;
  ens.f_bound = config.compare.f_bound;
  CompareStudy study{config, select_ensemble(ens), {}};
  std::vector<std::optional<Comparison>> rows(study.members.size());
  parallel_for(rows.size(), [&](std::size_t k) { rows[k] = compare_spo(study.members[k].instance, config.compare); });
  for (auto& r : rows) study.comparisons.push_back(std::move(*r));
  return study;
}

std::string compare_study_csv(const CompareStudy& study) {
  std::ostringstream out;
  out << "instance,seed,T,p_linear,p_spo\n";
  for (std::size_t k = 0; k < study.comparisons.size(); ++k) {
    for (const auto& r : study.comparisons[k].rows) {
      out << k << ',' << study.members[k].seed << ',' << format_number(r.T) << ',' << format_number(r.p_linear, 17)
          << ',' << format_number(r.p_spo, 17) << '\n';
    }
  }
  return out.str();
}

std::string compare_gaps_csv(const CompareStudy& study) {
  std::ostringstream out;
  out << "instance,seed,gap_linear,gap_spo,i_min_linear,i_min_spo,endpoint_gap,stop\n";
  for (std::size_t k = 0; k < study.comparisons.size(); ++k) {
    const auto& c = study.comparisons[k];
    out << k << ',' << study.members[k].seed << ',' << format_number(c.gap_linear, 17) << ','
        << format_number(c.gap_spo, 17) << ',' << c.i_min_linear << ',' << c.i_min_spo << ','
        << format_number(c.endpoint_gap, 17) << ',' << c.stop << '\n';
  }
  return out.str();
}

namespace {

// Typed access to a JSON object that rejects unknown keys.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string what, std::vector<std::string> allowed) : j_(j), what_(std::move(what)) {
    if (!j.is_object()) throw IoError(what_ + ": expected a JSON object");
    for (const auto& item : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        throw IoError(what_ + ": unknown key '" + item.key() + "'");
      }
    }
  }

  template <class T>
  void get(const char* key, T& target) const {
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    bool ok;
    if constexpr (std::is_same_v<T, bool>) {
      ok = v.is_boolean();
    } else if constexpr (std::is_integral_v<T>) {
      ok = v.is_number_integer();
      if constexpr (std::is_unsigned_v<T>) ok = ok && v.get<long long>() >= 0;
    } else if constexpr (std::is_floating_point_v<T>) {
      ok = v.is_number();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const auto& x) { return x.is_number(); });
    } else {
      ok = v.is_string();
    }
    if (!ok) throw IoError(what_ + ": key '" + std::string(key) + "' has the wrong type");
    target = v.get<T>();
  }

 private:
  const nlohmann::json& j_;
  std::string what_;
};

}  // namespace

StudyConfig study_config_from_json(const nlohmann::json& j) {
  const Reader rd(j, "perturbation study",
                  {"kind", "n", "instances", "perturbations", "restriction", "T", "N", "eps", "fbound", "normalization",
                   "seed", "force_zero", "max_resamples"});
  StudyConfig c;
  rd.get("n", c.n_qubits);
  rd.get("instances", c.instances);
  rd.get("perturbations", c.perturbations);
  std::string restriction = to_string(c.restriction);
  rd.get("restriction", restriction);
  try {
    c.restriction = sign_restriction_from_string(restriction);
  } catch (const std::exception&) {
    throw IoError("perturbation study: key 'restriction' has unknown value '" + restriction + "'");
  }
  rd.get("T", c.T);
  rd.get("N", c.intervals);
  rd.get("eps", c.slew);
  rd.get("fbound", c.f_bound);
  std::string norm = "squared";
  rd.get("normalization", norm);
  if (norm == "squared") {
    c.normalization = Normalization::SquaredNorm;
  } else if (norm == "norm") {
    c.normalization = Normalization::Norm;
  } else {
    throw IoError("perturbation study: key 'normalization' must be 'squared' or 'norm'");
  }
  rd.get("seed", c.seed);
  rd.get("force_zero", c.force_zero);
  rd.get("max_resamples", c.max_resamples);
  return c;
}

MiningConfig mining_config_from_json(const nlohmann::json& j) {
  const Reader rd(j, "mining study", {"kind", "n", "pool_size", "T", "keep", "N", "seed"});
  MiningConfig c;
  rd.get("n", c.n_qubits);
  rd.get("pool_size", c.pool_size);
  rd.get("T", c.T);
  rd.get("keep", c.keep);
  rd.get("N", c.intervals);
  rd.get("seed", c.seed);
  return c;
}

nlohmann::json to_json(const StudyConfig& c) {
  return {{"kind", "perturb"},
          {"n", c.n_qubits},
          {"instances", c.instances},
          {"perturbations", c.perturbations},
          {"restriction", to_string(c.restriction)},
          {"T", c.T},
          {"N", c.intervals},
          {"eps", c.slew},
          {"fbound", c.f_bound},
          {"normalization", c.normalization == Normalization::SquaredNorm ? "squared" : "norm"},
          {"seed", c.seed},
          {"force_zero", c.force_zero},
          {"max_resamples", c.max_resamples}};
}

nlohmann::json to_json(const MiningConfig& c) {
  return {{"kind", "mine"}, {"n", c.n_qubits}, {"pool_size", c.pool_size}, {"T", c.T},
          {"keep", c.keep}, {"N", c.intervals}, {"seed", c.seed}};
}

namespace {

const std::vector<std::string> kEnsembleKeys{"kind", "n", "count", "seed", "N", "fbound", "p", "eta", "xi", "max_outer"};

void read_ensemble(const Reader& rd, EnsembleConfig& e) {
  rd.get("n", e.n_qubits);
  rd.get("count", e.count);
  rd.get("seed", e.seed);
  rd.get("N", e.intervals);
  rd.get("fbound", e.f_bound);
}

void read_convex(const Reader& rd, ConvexConfig& c) {
  rd.get("p", c.p);
  rd.get("eta", c.eta);
  rd.get("xi", c.xi);
  rd.get("max_outer", c.max_outer);
}

nlohmann::json ensemble_json(const char* kind, const EnsembleConfig& e, const ConvexConfig& c) {
  return {{"kind", kind}, {"n", e.n_qubits}, {"count", e.count}, {"seed", e.seed}, {"N", e.intervals},
          {"fbound", e.f_bound}, {"p", c.p}, {"eta", c.eta}, {"xi", c.xi}, {"max_outer", c.max_outer}};
}

}  // namespace

EpsSweepStudyConfig eps_sweep_config_from_json(const nlohmann::json& j) {
  std::vector<std::string> keys = kEnsembleKeys;
  keys.push_back("eps_list");
  const Reader rd(j, "eps sweep study", keys);
  EpsSweepStudyConfig c;
  read_ensemble(rd, c.ensemble);
  read_convex(rd, c.convex);
  rd.get("eps_list", c.eps_list);
  return c;
}

CompareStudyConfig compare_config_from_json(const nlohmann::json& j) {
  std::vector<std::string> keys = kEnsembleKeys;
  keys.insert(keys.end(), {"eps", "method", "T"});
  const Reader rd(j, "compare study", keys);
  CompareStudyConfig c;
  read_ensemble(rd, c.ensemble);
  c.compare.intervals = c.ensemble.intervals;
  c.compare.f_bound = c.ensemble.f_bound;
  read_convex(rd, c.compare.convex);
  rd.get("eps", c.compare.slew);
  std::string method = to_string(c.compare.method);
  rd.get("method", method);
  try {
    c.compare.method = spo_method_from_string(method);
  } catch (const std::exception&) {
    throw IoError("compare study: key 'method' has unknown value '" + method + "'");
  }
  rd.get("T", c.compare.Ts);
  return c;
}

nlohmann::json to_json(const EpsSweepStudyConfig& c) {
  nlohmann::json j = ensemble_json("eps_sweep", c.ensemble, c.convex);
  j["eps_list"] = c.eps_list;
  return j;
}

nlohmann::json to_json(const CompareStudyConfig& c) {
  EnsembleConfig e = c.ensemble;
  e.intervals = c.compare.intervals;
  e.f_bound = c.compare.f_bound;
  nlohmann::json j = ensemble_json("compare", e, c.compare.convex);
  j["eps"] = c.compare.slew;
  j["method"] = to_string(c.compare.method);
  j["T"] = c.compare.Ts;
  return j;
}

}  // namespace aqo
