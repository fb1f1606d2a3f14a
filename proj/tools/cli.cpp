#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "aqo/convex.hpp"
#include "aqo/direct.hpp"
#include "aqo/dynamics.hpp"
#include "aqo/errors.hpp"
#include "aqo/experiments.hpp"
#include "aqo/io.hpp"
#include "aqo/parallel.hpp"
#include "aqo/qubo.hpp"
#include "aqo/rng.hpp"
#include "aqo/schedule.hpp"
#include "aqo/spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace aqo::cli {

json to_json(const RunManifest& m) {
  return {{"command", m.command},         {"version", m.version},           {"parameters", m.parameters},
          {"seeds", m.seeds},             {"input_paths", m.input_paths},   {"output_paths", m.output_paths},
          {"wall_time_s", m.wall_time_s}, {"extra", m.extra}};
}

RunManifest manifest_from_json(const json& j) {
  if (!j.is_object()) throw IoError("manifest: expected a JSON object");
  for (const char* key : {"command", "parameters"}) {
    if (!j.contains(key)) throw IoError(std::string("manifest: missing key '") + key + "'");
  }
  if (!j["command"].is_string()) throw IoError("manifest: key 'command' has the wrong type");
  if (!j["parameters"].is_object()) throw IoError("manifest: key 'parameters' has the wrong type");
  RunManifest m;
  m.command = j["command"].get<std::string>();
  m.parameters = j["parameters"];
  try {
    if (j.contains("version")) m.version = j["version"].get<std::string>();
    if (j.contains("seeds")) m.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("input_paths")) m.input_paths = j["input_paths"].get<std::vector<std::string>>();
    if (j.contains("output_paths")) m.output_paths = j["output_paths"].get<std::vector<std::string>>();
    if (j.contains("wall_time_s")) m.wall_time_s = j["wall_time_s"].get<double>();
    if (j.contains("extra")) m.extra = j["extra"];
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest: ") + e.what());
  }
  return m;
}

fs::path manifest_path(const fs::path& out, bool directory) {
  if (directory) return out / "manifest.json";
  fs::path p = out;
  return p.replace_extension(".manifest.json");
}

namespace {

json load_json(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": malformed JSON: " + e.what());
  }
}

template <class T>
T param(const json& p, const char* key) {
  if (!p.contains(key)) throw IoError(std::string("parameters: missing key '") + key + "'");
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    throw IoError(std::string("parameters: key '") + key + "' has the wrong type");
  }
}

std::optional<std::string> optional_path(const json& p, const char* key) {
  if (!p.contains(key) || p.at(key).is_null()) return std::nullopt;
  return param<std::string>(p, key);
}

// Output paths are recorded as given, so a replay with a new --out writes
// beside the new location.
struct Outputs {
  RunManifest& manifest;
  void text(const fs::path& path, const std::string& content) {
    write_text_file_atomic(path, content);
    manifest.output_paths.push_back(path.string());
  }
};

Schedule load_schedule(const json& p, const QuboInstance& inst, RunManifest& m) {
  const double fb = param<double>(p, "fbound");
  const double eps = param<double>(p, "eps");
  if (const auto path = optional_path(p, "schedule")) {
    m.input_paths.push_back(*path);
    Schedule s = read_schedule(*path, inst.n_qubits(), fb, eps);
    const auto v = validate(s);
    if (!v.empty()) {
      throw IoError(*path + ": schedule violates the " + to_string(v.front().constraint) + " limit at term " +
                    std::to_string(v.front().term) + ", point " + std::to_string(v.front().point) + " by " +
                    format_number(v.front().magnitude));
    }
    return s;
  }
  return linear_schedule(inst.n_qubits(), param<int>(p, "N"), fb, eps);
}

QuboInstance load_instance(const json& p, RunManifest& m) {
  const auto path = param<std::string>(p, "instance");
  m.input_paths.push_back(path);
  return read_instance(path);
}

std::string instance_file_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "instance_%04d.json", k);
  return buf;
}

void cmd_gen(const json& p, RunManifest& m) {
  const int n = param<int>(p, "n");
  const int count = param<int>(p, "count");
  const auto seed = param<std::uint64_t>(p, "seed");
  const fs::path out = param<std::string>(p, "out");
  if (count < 1) throw std::invalid_argument("gen: count must be >= 1");
  m.seeds.push_back(seed);
  Outputs o{m};
  for (int k = 0; k < count; ++k) {
    const std::uint64_t s = derive_seed(seed, {4, static_cast<std::uint64_t>(k)});
    m.seeds.push_back(s);
    o.text(out / instance_file_name(k), to_json(random_qubo(n, s)));
  }
}

void cmd_gap(const json& p, RunManifest& m) {
  const QuboInstance inst = load_instance(p, m);
  const Schedule s = load_schedule(p, inst, m);
  const SpectrumProfile prof = gap_profile(inst, s, {param<int>(p, "k"), VectorMode::None});
  Outputs{m}.text(param<std::string>(p, "out"), profile_to_csv(prof));
}

void cmd_optimize(const json& p, RunManifest& m) {
  const QuboInstance inst = load_instance(p, m);
  const Schedule init = load_schedule(p, inst, m);
  const fs::path out = param<std::string>(p, "out");
  fs::path report = out;
  report.replace_extension(".report.json");
  const SpoMethod method = spo_method_from_string(param<std::string>(p, "method"));
  Outputs o{m};
  if (method == SpoMethod::Direct) {
    const DirectResult r = optimize_direct(inst, init);
    o.text(out, schedule_to_csv(r.schedule));
    o.text(report, to_json(r));
    m.extra["final_min_gap"] = r.final_min_gap;
  } else {
    ConvexConfig c;
    c.p = param<int>(p, "p");
    c.eta = param<double>(p, "eta");
    c.xi = param<double>(p, "xi");
    const ConvexResult r = optimize_convex(inst, init, c);
    o.text(out, schedule_to_csv(r.schedule));
    o.text(report, to_json(r));
    m.extra["final_min_gap"] = r.final_min_gap;
    m.extra["stop"] = to_string(r.stop);
  }
}

int cmd_evolve(const json& p, RunManifest& m) {
  const QuboInstance inst = load_instance(p, m);
  const Schedule s = load_schedule(p, inst, m);
  const auto Ts = param<std::vector<double>>(p, "T");
  if (Ts.empty()) throw std::invalid_argument("evolve: no running times");
  const auto rows = evolve_sweep(inst, s, Ts, param<bool>(p, "double_steps"));
  Outputs{m}.text(param<std::string>(p, "out"), sweep_to_csv(rows));
  int failed = 0;
  for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
  m.extra["failed_rows"] = failed;
  return failed > 0 ? kDomainFailure : kOk;
}

// Per-instance histograms over shared edges: "instance,bin,lo,hi,count".
std::string instance_histograms(const std::vector<PerturbationStudyRecord>& records, int instances,
                                double PerturbationStudyRecord::*field, const std::vector<double>& edges) {
  std::ostringstream out;
  out << "instance,bin,lo,hi,count\n";
  for (int k = 0; k < instances; ++k) {
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.instance == k) values.push_back(r.*field);
    }
    const auto counts = histogram(values, edges);
    for (std::size_t b = 0; b < counts.size(); ++b) {
      out << k << ',' << b << ',' << format_number(edges[b], 17) << ',' << format_number(edges[b + 1], 17) << ','
          << counts[b] << '\n';
    }
  }
  return out.str();
}

void study_perturb(const json& config, int bins, const fs::path& out, RunManifest& m) {
  const StudyConfig c = study_config_from_json(config);
  m.seeds.push_back(c.seed);
  const PerturbationStudy study = run_perturbation_study(c);
  std::vector<double> omega, dp;
  for (const auto& r : study.records) {
    omega.push_back(r.omega);
    dp.push_back(r.delta_p);
  }
  const auto omega_edges = uniform_edges(omega, bins);
  const auto dp_edges = uniform_edges(dp, bins);
  Outputs o{m};
  o.text(out / "records.csv", records_csv(study));
  o.text(out / "baselines.csv", baselines_csv(study));
  o.text(out / "histogram_omega.csv",
         instance_histograms(study.records, c.instances, &PerturbationStudyRecord::omega, omega_edges));
  o.text(out / "histogram_delta_p.csv",
         instance_histograms(study.records, c.instances, &PerturbationStudyRecord::delta_p, dp_edges));
  const json summary = {{"config", to_json(c)}, {"summary", to_json(study.summary)}};
  o.text(out / "summary.json", summary.dump(2) + "\n");
  m.extra["histogram_edges"] = {{"omega", omega_edges}, {"delta_p", dp_edges}};
  m.extra["summary"] = to_json(study.summary);
}

void study_mine(const json& config, const fs::path& out, RunManifest& m) {
  const MiningConfig c = mining_config_from_json(config);
  m.seeds.push_back(c.seed);
  const MiningResult r = mine_hard_instances(c);
  Outputs o{m};
  o.text(out / "pool.csv", mined_csv(r.pool));
  o.text(out / "kept.csv", mined_csv(r.kept));
  for (std::size_t k = 0; k < r.kept.size(); ++k) {
    o.text(out / "kept" / instance_file_name(static_cast<int>(k)), to_json(random_qubo(c.n_qubits, r.kept[k].seed)));
  }
  const json summary = {{"config", to_json(c)},
                        {"pool_median_s_min", r.pool_median_s_min},
                        {"kept_median_s_min", r.kept_median_s_min},
                        {"pool_p_succ_pct1", r.pool_p_succ_pct1},
                        {"hardest_p_succ", r.kept.empty() ? json(nullptr) : json(r.kept.front().p_succ)}};
  o.text(out / "summary.json", summary.dump(2) + "\n");
}

void study_eps_sweep(const json& config, const fs::path& out, RunManifest& m) {
  const EpsSweepStudyConfig c = eps_sweep_config_from_json(config);
  m.seeds.push_back(c.ensemble.seed);
  const EpsSweepStudy study = run_eps_sweep_study(c);
  for (const auto& mem : study.members) m.seeds.push_back(mem.seed);
  Outputs o{m};
  o.text(out / "eps_sweep.csv", eps_sweep_study_csv(study));
  o.text(out / "summary.csv", eps_sweep_summary_csv(study));
}

void study_compare(const json& config, const fs::path& out, RunManifest& m) {
  const CompareStudyConfig c = compare_config_from_json(config);
  m.seeds.push_back(c.ensemble.seed);
  const CompareStudy study = run_compare_study(c);
  for (const auto& mem : study.members) m.seeds.push_back(mem.seed);
  Outputs o{m};
  o.text(out / "compare.csv", compare_study_csv(study));
  o.text(out / "gaps.csv", compare_gaps_csv(study));
}

void cmd_study(const json& p, RunManifest& m) {
  const auto kind = param<std::string>(p, "kind");
  if (!p.contains("config") || !p["config"].is_object()) throw IoError("parameters: key 'config' must be an object");
  const json& config = p["config"];
  if (config.contains("kind") && config["kind"] != kind) {
    throw IoError("study config: key 'kind' is '" + config["kind"].dump() + "' but the command asked for '" + kind +
                  "'");
  }
  const fs::path out = param<std::string>(p, "out");
  if (kind == "perturb") {
    study_perturb(config, param<int>(p, "bins"), out, m);
  } else if (kind == "mine") {
    study_mine(config, out, m);
  } else if (kind == "eps_sweep") {
    study_eps_sweep(config, out, m);
  } else if (kind == "compare") {
    study_compare(config, out, m);
  } else {
    throw IoError("study: unknown kind '" + kind + "'");
  }
}

bool is_directory_command(const std::string& command) { return command == "gen" || command == "study"; }

// Resolves defaults that depend on the instance, so the manifest records
// the values actually used.
void resolve_bound(json& p) {
  if (param<double>(p, "fbound") > 0.0) return;
  p["fbound"] = read_instance(param<std::string>(p, "instance")).max_coefficient();
}

}  // namespace

RunManifest execute(const std::string& command, const json& parameters) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.command = command;
  m.parameters = parameters;
  if (parameters.contains("threads")) set_thread_count(param<unsigned>(parameters, "threads"));
  int status = kOk;
  if (command == "gen") {
    cmd_gen(m.parameters, m);
  } else if (command == "gap") {
    resolve_bound(m.parameters);
    cmd_gap(m.parameters, m);
  } else if (command == "optimize") {
    resolve_bound(m.parameters);
    cmd_optimize(m.parameters, m);
  } else if (command == "evolve") {
    resolve_bound(m.parameters);
    status = cmd_evolve(m.parameters, m);
  } else if (command == "study") {
    cmd_study(m.parameters, m);
  } else {
    throw IoError("unknown command '" + command + "'");
  }
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.extra["status"] = status;
  const fs::path out = param<std::string>(m.parameters, "out");
  write_text_file_atomic(manifest_path(out, is_directory_command(command)), to_json(m).dump(2) + "\n");
  return m;
}

namespace {

struct Flags {
  std::string instance;
  std::string schedule;
  std::string method = "convex";
  double eps = 2.5;
  double fbound = 0.0;
  int N = 50;
  int k = 6;
  int p = 5;
  double eta = 0.0;
  double xi = 1e-4;
  std::vector<double> T;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  int n = 0;
  int count = 1;
  bool double_steps = false;
  std::string kind;
  std::string config;
  int bins = 20;
  std::string manifest;
};

json schedule_params(const Flags& f) {
  return {{"instance", f.instance},
          {"schedule", f.schedule.empty() ? json(nullptr) : json(f.schedule)},
          {"eps", f.eps},
          {"fbound", f.fbound},
          {"N", f.N},
          {"threads", f.threads},
          {"out", f.out}};
}

json study_config(Flags& f, const CLI::App& sub) {
  json j = load_json(f.config);
  if (j.is_object() && j.contains("command")) {
    const RunManifest m = manifest_from_json(j);
    if (m.command != "study") throw IoError(f.config + ": manifest is for command '" + m.command + "', not study");
    if (!m.parameters.contains("config")) throw IoError(f.config + ": manifest parameters lack key 'config'");
    j = m.parameters["config"];
    if (sub.count("--bins") == 0 && m.parameters.contains("bins")) f.bins = param<int>(m.parameters, "bins");
  }
  if (!j.is_object()) throw IoError(f.config + ": expected a JSON object");
  if (sub.count("--seed") > 0) j["seed"] = f.seed;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Schedule path optimization for adiabatic quantum optimization", "aqo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Flags f;

  auto add_schedule_flags = [&f](CLI::App* sub) {
    sub->add_option("--instance", f.instance, "Instance JSON")->required();
    sub->add_option("--schedule", f.schedule, "Schedule CSV (default: linear interpolation)");
    sub->add_option("--eps", f.eps, "Slew limit")->capture_default_str();
    sub->add_option("--fbound", f.fbound, "Amplitude limit (default: max |h|, |J|)");
    sub->add_option("--N", f.N, "Grid intervals of the linear schedule")->capture_default_str();
    sub->add_option("--threads", f.threads, "Worker threads (0: all cores)");
    sub->add_option("--out", f.out, "Output file")->required();
  };

  auto* gen = app.add_subcommand("gen", "Generate random instances");
  gen->add_option("--n", f.n, "Qubits")->required()->check(CLI::PositiveNumber);
  gen->add_option("--count", f.count, "Instances")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--seed", f.seed, "Base seed")->required();
  gen->add_option("--out", f.out, "Output directory")->required();

  auto* gap = app.add_subcommand("gap", "Gap profile along a schedule");
  add_schedule_flags(gap);
  gap->add_option("--k", f.k, "Retained levels")->capture_default_str()->check(CLI::Range(2, 1 << 20));

  auto* opt = app.add_subcommand("optimize", "Optimize the schedule path");
  add_schedule_flags(opt);
  opt->add_option("--method", f.method, "direct or convex")
      ->capture_default_str()
      ->check(CLI::IsMember({"direct", "convex"}));
  opt->add_option("--p", f.p, "Excited levels in the projected constraint")->capture_default_str();
  opt->add_option("--eta", f.eta, "Initial trust region (default: 0.1 fbound)");
  opt->add_option("--xi", f.xi, "Stopping tolerance")->capture_default_str();

  auto* evo = app.add_subcommand("evolve", "Success probability at running times T");
  add_schedule_flags(evo);
  evo->add_option("--T", f.T, "Running times, comma separated")->required()->delimiter(',');
  evo->add_flag("--double-steps", f.double_steps, "Rerun with twice the substeps and report the change");

  auto* study = app.add_subcommand("study", "Run a study from a JSON config or manifest");
  study->add_option("kind", f.kind, "perturb, mine, eps_sweep or compare")
      ->required()
      ->check(CLI::IsMember({"perturb", "mine", "eps_sweep", "compare"}));
  study->add_option("--config", f.config, "Study config or run manifest")->required();
  study->add_option("--seed", f.seed, "Override the config seed");
  study->add_option("--bins", f.bins, "Histogram bins (perturb)")->capture_default_str()->check(CLI::PositiveNumber);
  study->add_option("--threads", f.threads, "Worker threads (0: all cores)");
  study->add_option("--out", f.out, "Output directory")->required();

  auto* rep = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  rep->add_option("manifest", f.manifest, "Run manifest")->required();
  rep->add_option("--out", f.out, "Replace the recorded output location");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoFailure;
  }

  try {
    std::string command;
    json params;
    if (*gen) {
      command = "gen";
      params = {{"n", f.n}, {"count", f.count}, {"seed", f.seed}, {"out", f.out}};
    } else if (*gap) {
      command = "gap";
      params = schedule_params(f);
      params["k"] = f.k;
    } else if (*opt) {
      command = "optimize";
      params = schedule_params(f);
      params.update({{"method", f.method}, {"p", f.p}, {"eta", f.eta}, {"xi", f.xi}});
    } else if (*evo) {
      command = "evolve";
      params = schedule_params(f);
      params.update({{"T", f.T}, {"double_steps", f.double_steps}});
    } else if (*study) {
      command = "study";
      json config = study_config(f, *study);
      params = {{"kind", f.kind}, {"config", std::move(config)}, {"bins", f.bins}, {"threads", f.threads},
                {"out", f.out}};
    } else {
      const RunManifest m = manifest_from_json(load_json(f.manifest));
      command = m.command;
      params = m.parameters;
      if (!f.out.empty()) params["out"] = f.out;
    }
    const RunManifest m = execute(command, params);
    return m.extra.value("status", kOk);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
}

}  // namespace aqo::cli
