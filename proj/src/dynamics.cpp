#include "aqo/dynamics.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aqo/errors.hpp"
#include "aqo/io.hpp"
#include "aqo/rng.hpp"

namespace aqo {

Eigen::VectorXcd driver_ground_state(int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) psi(static_cast<Eigen::Index>(b)) = (std::popcount(b) % 2 ? -amp : amp);
  return psi;
}

double estimate_norm(const FieldHamiltonian& h) {
  Rng rng(0x6e6f726d);
  Eigen::VectorXd v(static_cast<Eigen::Index>(h.dimension()));
  for (Eigen::Index b = 0; b < v.size(); ++b) v(b) = rng.uniform(-1.0, 1.0);
  v.normalize();
  Eigen::VectorXd w;
  double estimate = 0.0;
  for (int it = 0; it < 20; ++it) {
    h.apply(v, w);
    estimate = w.norm();
    if (estimate == 0.0) return 0.0;
    v = w / estimate;
  }
  return estimate;
}

void taylor_propagate(const FieldHamiltonian& h, double tau, Eigen::VectorXcd& psi) {
  Eigen::VectorXcd term = psi;
  Eigen::VectorXcd next;
  const Complex factor(0.0, -tau);
  for (int k = 1; k <= 80; ++k) {
    h.apply(term, next);
    term = next * (factor / static_cast<double>(k));
    psi += term;
    if (term.norm() < 1e-16) return;
  }
  throw NumericalError("taylor_propagate: series did not converge; reduce the step", term.norm());
}

EvolutionResult evolve(const QuboInstance& inst, const Schedule& schedule, double T, const EvolveOptions& options) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("evolve: T must be positive and finite");
  if (schedule.n_qubits() != inst.n_qubits()) throw std::invalid_argument("evolve: qubit count mismatch");
  const HamiltonianFamily family(inst);
  const int N = schedule.intervals();
  const double dt = T / N;
  EvolutionResult out;
  out.T = T;
  out.final_state = driver_ground_state(inst.n_qubits());
  for (int i = 0; i < N; ++i) {
    const FieldHamiltonian h = family.at(schedule, i);
    const int needed = std::max(1, static_cast<int>(std::ceil(estimate_norm(h) * dt / 0.5)));
    const int substeps = std::max(needed, options.substeps_per_interval);
    const double tau = dt / substeps;
    for (int k = 0; k < substeps; ++k) taylor_propagate(h, tau, out.final_state);
    out.steps += substeps;
  }
  out.norm_drift = std::abs(out.final_state.norm() - 1.0);
  if (out.norm_drift > options.drift_tolerance) {
    throw NumericalError("evolve: norm drift " + format_number(out.norm_drift) + " above tolerance at T = " +
                             format_number(T),
                         out.norm_drift);
  }
  out.p_succ = success_probability(out.final_state, inst);
  return out;
}

double success_probability(const Eigen::VectorXcd& state, const QuboInstance& inst) {
  const Eigen::VectorXd e = inst.energies();
  if (state.size() != e.size()) throw std::invalid_argument("success_probability: dimension mismatch");
  const double emin = e.minCoeff();
  double p = 0.0;
  for (Eigen::Index b = 0; b < e.size(); ++b) {
    if (e(b) <= emin + 1e-10) p += std::norm(state(b));
  }
  return std::min(1.0, p);
}

double success_probability(const EvolutionResult& result, const QuboInstance& inst) {
  return success_probability(result.final_state, inst);
}

std::vector<SweepRow> evolve_sweep(const QuboInstance& inst, const Schedule& schedule, const std::vector<double>& Ts,
                                   bool step_doubling) {
  std::vector<SweepRow> rows;
  for (double T : Ts) {
    SweepRow row;
    row.T = T;
    try {
      const EvolutionResult r = evolve(inst, schedule, T);
      row.p_succ = r.p_succ;
      row.norm_drift = r.norm_drift;
      row.steps = r.steps;
      if (step_doubling) {
        // Every interval uses at least twice its automatic substep count.
        EvolveOptions twice;
        const HamiltonianFamily family(inst);
        int most = 1;
        for (int i = 0; i < schedule.intervals(); ++i) {
          most = std::max(most, static_cast<int>(std::ceil(estimate_norm(family.at(schedule, i)) * T /
                                                           schedule.intervals() / 0.5)));
        }
        twice.substeps_per_interval = 2 * most;
        const EvolutionResult fine = evolve(inst, schedule, T, twice);
        row.doubling_delta = std::abs(fine.p_succ - r.p_succ);
      }
    } catch (const NumericalError& e) {
      row.error = e.what();
      row.norm_drift = e.achieved();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  bool doubling = false;
  bool errors = false;
  for (const auto& r : rows) {
    doubling = doubling || r.doubling_delta >= 0.0;
    errors = errors || !r.error.empty();
  }
  std::ostringstream out;
  out << "T,p_succ,norm_drift,steps";
  if (doubling) out << ",doubling_delta";
  if (errors) out << ",error";
  out << '\n';
  for (const auto& r : rows) {
    out << format_number(r.T) << ',' << format_number(r.p_succ, 12) << ',' << format_number(r.norm_drift, 3) << ','
        << r.steps;
    if (doubling) out << ',' << format_number(r.doubling_delta, 3);
    if (errors) out << ",\"" << r.error << '"';
    out << '\n';
  }
  return out.str();
}

}  // namespace aqo
