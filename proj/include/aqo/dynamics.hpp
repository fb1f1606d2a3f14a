#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "aqo/hamiltonian.hpp"
#include "aqo/qubo.hpp"
#include "aqo/schedule.hpp"

namespace aqo {

struct EvolveOptions {
  /// Substeps per schedule interval; 0 picks the smallest count with
  /// ||H|| tau <= 0.5. A smaller explicit value is raised to that minimum.
  int substeps_per_interval = 0;
  /// Largest accepted | ||psi(T)|| - 1 |.
  double drift_tolerance = 1e-8;
};

struct EvolutionResult {
  Eigen::VectorXcd final_state;
  double p_succ = 0.0;
  double norm_drift = 0.0;
  double T = 0.0;
  /// Total number of propagator applications.
  int steps = 0;
};

/// Ground state of sum_q X_q: amplitude (-1)^popcount(b) / sqrt(2^n).
Eigen::VectorXcd driver_ground_state(int n_qubits);

/// Spectral-norm estimate from 20 power iterations (deterministic start).
double estimate_norm(const FieldHamiltonian& h);

/// exp(-i H tau) psi by a Taylor series truncated once a term drops below
/// 1e-16 (tau ||H|| should be O(1)).
void taylor_propagate(const FieldHamiltonian& h, double tau, Eigen::VectorXcd& psi);

/// Solves i d psi/dt = H(t/T) psi from the driver ground state with H held
/// at H(i) on [iT/N, (i+1)T/N). The state is never renormalized; a drift
/// above the tolerance raises NumericalError carrying the drift.
EvolutionResult evolve(const QuboInstance& inst, const Schedule& schedule, double T, const EvolveOptions& options = {});

/// Probability mass on the ground space of H1 (basis states within 1e-10
/// of the lowest classical energy).
double success_probability(const Eigen::VectorXcd& state, const QuboInstance& inst);
double success_probability(const EvolutionResult& result, const QuboInstance& inst);

struct SweepRow {
  double T = 0.0;
  double p_succ = 0.0;
  double norm_drift = 0.0;
  int steps = 0;
  /// Empty on success, otherwise the failure message.
  std::string error;
  /// |p_succ(2 m substeps) - p_succ(m)| when step doubling was requested.
  double doubling_delta = -1.0;
};

std::vector<SweepRow> evolve_sweep(const QuboInstance& inst, const Schedule& schedule, const std::vector<double>& Ts,
                                   bool step_doubling = false);

/// "T,p_succ,norm_drift,steps" (plus doubling_delta when present).
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace aqo
