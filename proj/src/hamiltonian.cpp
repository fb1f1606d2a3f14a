#include "aqo/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace aqo {

PauliOperator build_final_hamiltonian(const QuboInstance& inst) {
  const int n = inst.n_qubits();
  if (n < 1) throw std::invalid_argument("build_final_hamiltonian: n_qubits must be >= 1");
  std::vector<PauliTerm> terms;
  for (int i = 0; i < n; ++i) terms.emplace_back(inst.h()[i], std::vector<PauliFactor>{{i, Axis::Z}});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      terms.emplace_back(inst.J()(i, j), std::vector<PauliFactor>{{i, Axis::Z}, {j, Axis::Z}});
    }
  }
  return PauliOperator(n, std::move(terms));
}

PauliOperator build_driver_hamiltonian(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("build_driver_hamiltonian: n must be >= 1");
  std::vector<PauliTerm> terms;
  for (int q = 0; q < n_qubits; ++q) terms.emplace_back(1.0, std::vector<PauliFactor>{{q, Axis::X}});
  return PauliOperator(n_qubits, std::move(terms));
}

std::vector<PauliOperator> build_local_basis(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("build_local_basis: n must be >= 1");
  std::vector<PauliOperator> basis;
  basis.reserve(static_cast<std::size_t>(2 * n_qubits));
  for (int q = 0; q < n_qubits; ++q) {
    basis.push_back(PauliOperator::single(n_qubits, q, Axis::X));
    basis.push_back(PauliOperator::single(n_qubits, q, Axis::Z));
  }
  return basis;
}

PauliOperator assemble(const QuboInstance& inst, const Schedule& schedule, int i) {
  if (schedule.n_qubits() != inst.n_qubits()) {
    throw std::invalid_argument("assemble: schedule is for " + std::to_string(schedule.n_qubits()) +
                                " qubits, instance has " + std::to_string(inst.n_qubits()));
  }
  if (i < 0 || i > schedule.intervals()) {
    throw std::out_of_range("assemble: grid index " + std::to_string(i) + " outside 0.." +
                            std::to_string(schedule.intervals()));
  }
  const int n = inst.n_qubits();
  const PauliOperator h0 = build_driver_hamiltonian(n);
  const PauliOperator h1 = build_final_hamiltonian(inst);
  const auto basis = build_local_basis(n);
  const double s = schedule.s(i);
  std::vector<double> weights{1.0 - s, s};
  std::vector<const PauliOperator*> ops{&h0, &h1};
  for (int r = 0; r < schedule.term_count(); ++r) {
    weights.push_back(schedule.value(r, i));
    ops.push_back(&basis[r]);
  }
  return linear_combination(weights, ops);
}

void FieldHamiltonian::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  const Eigen::Index dim = diagonal.size();
  out = diagonal.cwiseProduct(in);
  for (int q = 0; q < n_qubits; ++q) {
    const double x = x_fields(q);
    if (x == 0.0) continue;
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - q);
    for (Eigen::Index b = 0; b < dim; ++b) out(b) += x * in(b ^ bit);
  }
}

void FieldHamiltonian::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  const Eigen::Index dim = diagonal.size();
  out = diagonal.cwiseProduct(in);
  for (int q = 0; q < n_qubits; ++q) {
    const double x = x_fields(q);
    if (x == 0.0) continue;
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - q);
    for (Eigen::Index b = 0; b < dim; ++b) out(b) += x * in(b ^ bit);
  }
}

Eigen::MatrixXd FieldHamiltonian::dense() const {
  const Eigen::Index dim = diagonal.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m.diagonal() = diagonal;
  for (int q = 0; q < n_qubits; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - q);
    for (Eigen::Index b = 0; b < dim; ++b) m(b ^ bit, b) += x_fields(q);
  }
  return m;
}

double FieldHamiltonian::norm_bound() const {
  return diagonal.cwiseAbs().maxCoeff() + x_fields.cwiseAbs().sum();
}

void apply_local_term(int n_qubits, int term, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const int q = term / 2;
  const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - q);
  const Eigen::Index dim = in.size();
  out.resize(dim);
  if (term % 2 == 0) {
    for (Eigen::Index b = 0; b < dim; ++b) out(b) = in(b ^ bit);
  } else {
    for (Eigen::Index b = 0; b < dim; ++b) out(b) = (b & bit) ? -in(b) : in(b);
  }
}

HamiltonianFamily::HamiltonianFamily(const QuboInstance& inst)
    : n_qubits_(inst.n_qubits()), energies_(inst.energies()) {
  const std::size_t dim = dimension();
  z_signs_.resize(static_cast<Eigen::Index>(dim), n_qubits_);
  for (std::size_t b = 0; b < dim; ++b) {
    for (int q = 0; q < n_qubits_; ++q) {
      z_signs_(static_cast<Eigen::Index>(b), q) = ((b >> (n_qubits_ - 1 - q)) & 1U) ? -1.0 : 1.0;
    }
  }
}

FieldHamiltonian HamiltonianFamily::at(double s, const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != 2 * n_qubits_) {
    throw std::invalid_argument("HamiltonianFamily::at: expected 2n intermediate coefficients");
  }
  FieldHamiltonian h;
  h.n_qubits = n_qubits_;
  h.diagonal = s * energies_;
  h.x_fields = Eigen::VectorXd::Constant(n_qubits_, 1.0 - s);
  for (int q = 0; q < n_qubits_; ++q) {
    h.x_fields(q) += coeffs(2 * q);
    const double z = coeffs(2 * q + 1);
    if (z != 0.0) h.diagonal += z * z_signs_.col(q);
  }
  return h;
}

FieldHamiltonian HamiltonianFamily::at(const Schedule& schedule, int i) const {
  if (schedule.n_qubits() != n_qubits_) {
    throw std::invalid_argument("HamiltonianFamily::at: schedule/instance qubit count mismatch");
  }
  if (i < 0 || i > schedule.intervals()) throw std::out_of_range("HamiltonianFamily::at: grid index out of range");
  return at(schedule.s(i), schedule.values().col(i));
}

}  // namespace aqo
