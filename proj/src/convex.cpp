#include "aqo/convex.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "aqo/errors.hpp"
#include "aqo/hamiltonian.hpp"
#include "aqo/parallel.hpp"

namespace aqo {

Projectors build_projectors(const QuboInstance& inst, const Schedule& incumbent, int p) {
  if (p < 1) throw std::invalid_argument("build_projectors: p must be >= 1");
  if (static_cast<std::size_t>(p + 1) > (std::size_t{1} << inst.n_qubits())) {
    throw std::invalid_argument("build_projectors: p + 1 exceeds the Hilbert space dimension");
  }
  const SpectrumProfile profile = gap_profile(inst, incumbent, {p + 1, VectorMode::All});
  Projectors out;
  out.intervals = profile.intervals;
  out.p = p;
  out.lambda = profile.eigenvalues;
  for (const auto& v : profile.eigenvectors) {
    out.phi0.push_back(v.col(0));
    out.phi1.push_back(v.rightCols(p));
  }
  return out;
}

namespace {

// Everything the subproblem needs at one interior grid point, with H(i)
// written as B + sum_r A_r H_r.
struct Reduced {
  double c0 = 0.0;              // u0' B u0
  Eigen::VectorXd a0;           // u0' H_r u0
  Eigen::MatrixXcd PB;          // Phi1' B Phi1
  std::vector<Eigen::MatrixXcd> Pr;  // Phi1' H_r Phi1
};

Reduced reduce(const HamiltonianFamily& family, const Projectors& proj, int i) {
  const int n = family.n_qubits();
  const int M = 2 * n;
  const FieldHamiltonian base = family.at(static_cast<double>(i) / proj.intervals, Eigen::VectorXd::Zero(M));
  const Eigen::VectorXcd& u0 = proj.phi0[static_cast<std::size_t>(i)];
  const Eigen::MatrixXcd& phi = proj.phi1[static_cast<std::size_t>(i)];
  Reduced r;
  Eigen::VectorXcd tmp;
  base.apply(u0, tmp);
  r.c0 = u0.dot(tmp).real();
  Eigen::MatrixXcd bphi(phi.rows(), phi.cols());
  for (Eigen::Index c = 0; c < phi.cols(); ++c) {
    base.apply(Eigen::VectorXcd(phi.col(c)), tmp);
    bphi.col(c) = tmp;
  }
  r.PB = phi.adjoint() * bphi;
  r.PB = 0.5 * (r.PB + r.PB.adjoint()).eval();
  r.a0.resize(M);
  for (int t = 0; t < M; ++t) {
    apply_local_term(n, t, u0, tmp);
    r.a0(t) = u0.dot(tmp).real();
    Eigen::MatrixXcd hphi(phi.rows(), phi.cols());
    for (Eigen::Index c = 0; c < phi.cols(); ++c) {
      apply_local_term(n, t, Eigen::VectorXcd(phi.col(c)), tmp);
      hphi.col(c) = tmp;
    }
    Eigen::MatrixXcd p = phi.adjoint() * hphi;
    r.Pr.push_back(0.5 * (p + p.adjoint()));
  }
  return r;
}

Eigen::MatrixXcd block(const Reduced& r, const Eigen::MatrixXd& A, int i) {
  Eigen::MatrixXcd m = r.PB;
  for (std::size_t t = 0; t < r.Pr.size(); ++t) m += A(static_cast<Eigen::Index>(t), i) * r.Pr[t];
  return m;
}

struct MinEig {
  double value;
  Eigen::VectorXcd vector;
};

MinEig min_eig(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("solve_subproblem: block eigensolver failed", NAN);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

struct Bounds {
  double e0;
  double e1;
};

Bounds exact_bounds(const Reduced& r, const Eigen::MatrixXd& A, int i) {
  return {r.c0 + r.a0.dot(A.col(i)), min_eig(block(r, A, i)).value};
}

}  // namespace

SubproblemSolution solve_subproblem(const QuboInstance& inst, const Projectors& proj, const Schedule& incumbent,
                                    double eta, const ConvexConfig& config) {
  const int N = incumbent.intervals();
  const int n = inst.n_qubits();
  const int M = 2 * n;
  if (proj.intervals != N) throw std::invalid_argument("solve_subproblem: projector grid mismatch");
  if (eta < 0.0) throw std::invalid_argument("solve_subproblem: eta must be nonnegative");
  const HamiltonianFamily family(inst);
  const Eigen::MatrixXd& hat = incumbent.values();
  const double fb = incumbent.f_bound();
  const double step = incumbent.max_step();

  std::vector<Reduced> red(static_cast<std::size_t>(N + 1));
  parallel_for(static_cast<std::size_t>(N - 1), [&](std::size_t k) {
    const int i = static_cast<int>(k) + 1;
    red[static_cast<std::size_t>(i)] = reduce(family, proj, i);
  });

  SubproblemSolution out;
  out.hat_eps0.resize(N - 1);
  out.hat_eps1.resize(N - 1);
  for (int i = 1; i < N; ++i) {
    const Bounds b = exact_bounds(red[i], hat, i);
    out.hat_eps0(i - 1) = b.e0;
    out.hat_eps1(i - 1) = b.e1;
  }
  out.hat_objective = (out.hat_eps1 - out.hat_eps0).minCoeff();

  // Variable layout: per interior point the free A entries then eps1(i); t last.
  Eigen::MatrixXd lo(M, N + 1), hi(M, N + 1);
  Eigen::MatrixXi index = Eigen::MatrixXi::Constant(M, N + 1, -1);
  std::vector<int> e1_index(static_cast<std::size_t>(N + 1), -1);
  Eigen::MatrixXd fixed = Eigen::MatrixXd::Zero(M, N + 1);
  int nv = 0;
  for (int i = 1; i < N; ++i) {
    for (int r = 0; r < M; ++r) {
      double l = std::max(-fb, hat(r, i) - eta);
      double u = std::min(fb, hat(r, i) + eta);
      if (i == 1 || i == N - 1) {
        l = std::max(l, -step);
        u = std::min(u, step);
      }
      if (u < l) u = l = std::clamp(hat(r, i), -fb, fb);
      lo(r, i) = l;
      hi(r, i) = u;
      if (u - l <= 1e-14 * std::max(1.0, fb)) {
        fixed(r, i) = 0.5 * (l + u);
      } else {
        index(r, i) = nv++;
      }
    }
    e1_index[static_cast<std::size_t>(i)] = nv++;
  }
  const int t_index = nv++;

  std::vector<std::vector<Eigen::VectorXcd>> cuts(static_cast<std::size_t>(N + 1));
  for (int i = 1; i < N; ++i) {
    for (int c = 0; c < proj.p; ++c) cuts[i].push_back(Eigen::VectorXcd::Unit(proj.p, c));
  }

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nv);
  for (int i = 1; i < N; ++i) {
    for (int r = 0; r < M; ++r) {
      if (index(r, i) >= 0) x0(index(r, i)) = std::clamp(hat(r, i), lo(r, i), hi(r, i));
    }
    x0(e1_index[i]) = out.hat_eps1(i - 1);
  }
  x0(t_index) = out.hat_objective;

  Eigen::MatrixXd A_lp = hat;
  Eigen::VectorXd e1_lp(N + 1);
  for (int round = 0; round < config.max_cut_rounds; ++round) {
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> rhs;
    int row = 0;
    auto add_A = [&](int r, int i, double coef, double& constant) {
      if (index(r, i) >= 0) {
        trip.emplace_back(row, index(r, i), coef);
      } else {
        constant += coef * fixed(r, i);
      }
    };
    for (int i = 1; i < N; ++i) {
      // t - eps1 + c0 + a0.A <= 0
      double constant = red[i].c0;
      trip.emplace_back(row, t_index, 1.0);
      trip.emplace_back(row, e1_index[i], -1.0);
      for (int r = 0; r < M; ++r) add_A(r, i, red[i].a0(r), constant);
      rhs.push_back(-constant);
      ++row;
      // eps1 <= v' (PB + sum A_r Pr) v
      for (const auto& v : cuts[i]) {
        double constant_cut = 0.0;
        trip.emplace_back(row, e1_index[i], 1.0);
        for (int r = 0; r < M; ++r) add_A(r, i, -v.dot(red[i].Pr[r] * v).real(), constant_cut);
        rhs.push_back(v.dot(red[i].PB * v).real() - constant_cut);
        ++row;
      }
      for (int r = 0; r < M; ++r) {
        if (index(r, i) < 0) continue;
        trip.emplace_back(row, index(r, i), 1.0);
        rhs.push_back(hi(r, i));
        ++row;
        trip.emplace_back(row, index(r, i), -1.0);
        rhs.push_back(-lo(r, i));
        ++row;
      }
    }
    for (int i = 1; i + 1 < N; ++i) {
      for (int r = 0; r < M; ++r) {
        if (index(r, i) < 0 && index(r, i + 1) < 0) continue;
        for (double sign : {1.0, -1.0}) {
          double constant = 0.0;
          add_A(r, i + 1, sign, constant);
          add_A(r, i, -sign, constant);
          rhs.push_back(step - constant);
          ++row;
        }
      }
    }
    LinearProgram lp;
    lp.G.resize(row, nv);
    lp.G.setFromTriplets(trip.begin(), trip.end());
    lp.h = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    lp.c = Eigen::VectorXd::Zero(nv);
    lp.c(t_index) = -1.0;
    const LpSolution sol = solve_lp(lp, config.lp, &x0);
    out.lp_objective = sol.x(t_index);
    out.cut_rounds = round + 1;
    x0 = sol.x;

    A_lp = fixed;
    for (int i = 1; i < N; ++i) {
      for (int r = 0; r < M; ++r) {
        if (index(r, i) >= 0) A_lp(r, i) = sol.x(index(r, i));
      }
      e1_lp(i) = sol.x(e1_index[i]);
    }
    A_lp.col(0).setZero();
    A_lp.col(N).setZero();

    int added = 0;
    double worst = INFINITY;
    for (int i = 1; i < N; ++i) {
      const MinEig me = min_eig(block(red[i], A_lp, i));
      const double violation = me.value - e1_lp(i);
      worst = std::min(worst, violation);
      if (violation < -config.lmi_tol) {
        cuts[i].push_back(me.vector);
        ++added;
      }
    }
    out.lp_lmi_min_eigenvalue = worst;
    out.cut_count += added;
    if (added == 0) break;
    if (round + 1 == config.max_cut_rounds) out.cuts_converged = false;
  }

  // Exact re-evaluation at an admissible version of the LP point.
  Eigen::MatrixXd lower = hat.array() - eta;
  Eigen::MatrixXd upper = hat.array() + eta;
  Eigen::MatrixXd A = clip_to_admissible(A_lp, N, fb, incumbent.slew(), &lower, &upper);
  out.eps0.resize(N - 1);
  out.eps1.resize(N - 1);
  for (int i = 1; i < N; ++i) {
    const Bounds b = exact_bounds(red[i], A, i);
    out.eps0(i - 1) = b.e0;
    out.eps1(i - 1) = b.e1;
  }
  out.objective = (out.eps1 - out.eps0).minCoeff();
  if (out.objective < out.hat_objective) {
    A = hat;
    out.eps0 = out.hat_eps0;
    out.eps1 = out.hat_eps1;
    out.objective = out.hat_objective;
    out.kept_incumbent = true;
  }
  out.A_star = A;
  double lmi = INFINITY;
  for (int i = 1; i < N; ++i) {
    lmi = std::min(lmi, min_eig(block(red[i], A, i) - out.eps1(i - 1) * Eigen::MatrixXcd::Identity(proj.p, proj.p)).value);
  }
  out.lmi_min_eigenvalue = lmi;
  return out;
}

std::string to_string(ConvexStop stop) {
  switch (stop) {
    case ConvexStop::BestCase: return "best_case";
    case ConvexStop::ReachedEndpoint: return "reached_endpoint";
    case ConvexStop::Stalled: return "stalled";
    case ConvexStop::TrustRegionCollapsed: return "trust_region_collapsed";
    case ConvexStop::MaxOuter: return "max_outer";
  }
  return "unknown";
}

ConvexResult optimize_convex(const QuboInstance& inst, const Schedule& init, const ConvexConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  if (config.p < 1 || config.xi <= 0.0) throw std::invalid_argument("optimize_convex: need p >= 1 and xi > 0");
  if (init.n_qubits() != inst.n_qubits()) throw std::invalid_argument("optimize_convex: qubit count mismatch");
  if (!validate(init).empty()) throw std::invalid_argument("optimize_convex: initial schedule is not admissible");
  const HamiltonianFamily family(inst);
  // Small systems have fewer than p excited levels.
  const int p = std::min(config.p, static_cast<int>(family.dimension()) - 1);
  const double fb = init.f_bound();
  double eta = config.eta > 0.0 ? config.eta : 0.1 * fb;
  const double eta_floor = 1e-4 * fb;

  Schedule incumbent = init;
  SpectrumProfile profile = gap_profile(family, incumbent, {2, VectorMode::None});
  MinGap current = min_gap(profile, GapRange::Interior);

  ConvexResult result{init, {}, current.gap, current.gap, current.index, endpoint_gap(profile), ConvexStop::MaxOuter, 0.0};
  if (current.gap >= result.endpoint_gap) {
    result.stop = ConvexStop::BestCase;
    result.wall_time_s = elapsed();
    return result;
  }
  for (int iter = 1; iter <= config.max_outer; ++iter) {
    if (fb == 0.0) {
      result.stop = ConvexStop::TrustRegionCollapsed;
      break;
    }
    const Projectors proj = build_projectors(inst, incumbent, p);
    const SubproblemSolution sub = solve_subproblem(inst, proj, incumbent, eta, config);
    const Schedule candidate = incumbent.with_values(sub.A_star);
    const SpectrumProfile cand_profile = gap_profile(family, candidate, {2, VectorMode::None});
    const MinGap cand = min_gap(cand_profile, GapRange::Interior);

    ConvexIteration rec;
    rec.iter = iter;
    rec.surrogate_objective = sub.objective;
    rec.cuts_added = sub.cut_count;
    rec.eta = eta;
    rec.lmi_min_eigenvalue = sub.lmi_min_eigenvalue;
    double v0 = -INFINITY, v1 = -INFINITY;
    for (int i = 1; i < init.intervals(); ++i) {
      v0 = std::max(v0, proj.lambda(i, 0) - sub.hat_eps0(i - 1));
      v1 = std::max(v1, sub.hat_eps1(i - 1) - proj.lambda(i, 1));
    }
    rec.eps0_violation = v0;
    rec.eps1_violation = v1;
    rec.accepted = cand.gap > current.gap;
    const double improvement = cand.gap - current.gap;
    if (rec.accepted) {
      incumbent = candidate;
      current = cand;
    }
    rec.true_min_gap = current.gap;
    rec.i_min = current.index;
    rec.wall_time_s = elapsed();
    result.iterations.push_back(rec);

    if (rec.accepted) {
      if (current.gap >= result.endpoint_gap - config.xi) {
        result.stop = ConvexStop::ReachedEndpoint;
        break;
      }
      if (improvement < config.xi) {
        result.stop = ConvexStop::Stalled;
        break;
      }
    } else {
      eta *= 0.5;
      if (eta < eta_floor) {
        result.stop = ConvexStop::TrustRegionCollapsed;
        break;
      }
    }
  }
  result.schedule = incumbent;
  result.final_min_gap = current.gap;
  result.i_min = current.index;
  result.wall_time_s = elapsed();
  return result;
}

std::string to_json(const ConvexResult& result) {
  nlohmann::json j;
  j["initial_min_gap"] = result.initial_min_gap;
  j["final_min_gap"] = result.final_min_gap;
  j["i_min"] = result.i_min;
  j["endpoint_gap"] = result.endpoint_gap;
  j["stop"] = to_string(result.stop);
  j["wall_time_s"] = result.wall_time_s;
  nlohmann::json its = nlohmann::json::array();
  for (const auto& it : result.iterations) {
    its.push_back({{"iter", it.iter},
                   {"surrogate_objective", it.surrogate_objective},
                   {"true_min_gap", it.true_min_gap},
                   {"i_min", it.i_min},
                   {"cuts_added", it.cuts_added},
                   {"eta", it.eta},
                   {"wall_time_s", it.wall_time_s},
                   {"accepted", it.accepted},
                   {"eps0_violation", it.eps0_violation},
                   {"eps1_violation", it.eps1_violation},
                   {"lmi_min_eigenvalue", it.lmi_min_eigenvalue}});
  }
  j["iterations"] = its;
  return j.dump(2);
}

}  // namespace aqo
