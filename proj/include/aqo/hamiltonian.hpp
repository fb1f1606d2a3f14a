#pragma once

#include <Eigen/Dense>

#include <vector>

#include "aqo/pauli.hpp"
#include "aqo/qubo.hpp"
#include "aqo/schedule.hpp"

namespace aqo {

/// sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j.
PauliOperator build_final_hamiltonian(const QuboInstance& inst);

/// sum_i X_i.
PauliOperator build_driver_hamiltonian(int n_qubits);

/// [X_0, Z_0, X_1, Z_1, ...]: the 2n local intermediate terms in Schedule row order.
std::vector<PauliOperator> build_local_basis(int n_qubits);

/// (1 - s) H0 + sum_r f_r(i) H_r + s H1 at s = i/N.
PauliOperator assemble(const QuboInstance& inst, const Schedule& schedule, int i);

/// diag(d) + sum_q x_q X_q. Every interpolated Hamiltonian in this package
/// has this shape, and it admits an O(n 2^n) matrix-vector product.
struct FieldHamiltonian {
  int n_qubits = 0;
  Eigen::VectorXd diagonal;
  Eigen::VectorXd x_fields;

  std::size_t dimension() const { return static_cast<std::size_t>(diagonal.size()); }

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  Eigen::MatrixXd dense() const;
  /// Gershgorin bound: max |d_b| + sum |x_q| >= spectral norm.
  double norm_bound() const;
};

/// Applies the r-th local basis term (X or Z on qubit r/2) to a vector.
void apply_local_term(int n_qubits, int term, const Eigen::VectorXcd& in, Eigen::VectorXcd& out);

/// Caches the instance energies and per-qubit Z signs so H(i) for any
/// schedule can be built without Pauli algebra.
class HamiltonianFamily {
 public:
  explicit HamiltonianFamily(const QuboInstance& inst);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(energies_.size()); }
  const Eigen::VectorXd& energies() const { return energies_; }

  /// H(s) = (1 - s) H0 + s H1 + sum_r coeffs[r] H_r.
  FieldHamiltonian at(double s, const Eigen::VectorXd& coeffs) const;
  /// H(i) for grid point i of a schedule.
  FieldHamiltonian at(const Schedule& schedule, int i) const;

  /// +1/-1 eigenvalue of Z on `qubit` for basis state `b`.
  double z_sign(std::size_t b, int qubit) const { return z_signs_(static_cast<Eigen::Index>(b), qubit); }

 private:
  int n_qubits_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd z_signs_;
};

}  // namespace aqo
