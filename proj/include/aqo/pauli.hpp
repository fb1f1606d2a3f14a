#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace aqo {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

enum class Axis : std::uint8_t { X, Y, Z };

char axis_symbol(Axis axis);

struct PauliFactor {
  int qubit = 0;
  Axis axis = Axis::Z;

  auto operator<=>(const PauliFactor&) const = default;
};

/// A real-weighted tensor product of single-qubit Pauli matrices.
///
/// Factors are kept sorted by qubit index; a qubit may appear at most once.
/// An empty factor list is the identity.
class PauliTerm {
 public:
  PauliTerm() = default;
  PauliTerm(double coefficient, std::vector<PauliFactor> factors);

  double coefficient() const { return coefficient_; }
  const std::vector<PauliFactor>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }

  /// Number of Y factors; the term's matrix is real iff this is even.
  int y_count() const;

  std::string label(int n_qubits) const;

 private:
  double coefficient_ = 0.0;
  std::vector<PauliFactor> factors_;
};

/// Weighted sum of n-qubit Pauli strings.
///
/// Terms with identical factor lists are merged at construction and exact
/// zeros are dropped, so the term list is canonical. The sparse matrix
/// realization (qubit 0 is the most significant bit of the basis index) is
/// built on first use and shared between copies; the object is otherwise
/// immutable and may be read from several threads.
class PauliOperator {
 public:
  explicit PauliOperator(int n_qubits, std::vector<PauliTerm> terms = {});

  static PauliOperator identity(int n_qubits, double coefficient = 1.0);
  static PauliOperator single(int n_qubits, int qubit, Axis axis, double coefficient = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// True when no term carries an odd number of Y factors.
  bool is_real() const;

  /// True when every term consists of Z factors only.
  bool is_diagonal() const;

  const SparseMatrix& matrix() const;
  Eigen::MatrixXcd dense() const;
  /// Dense real matrix; throws std::logic_error if the operator is not real.
  Eigen::MatrixXd dense_real() const;
  /// Diagonal of the realization.
  Eigen::VectorXd diagonal() const;

  /// out = M * in.
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  /// <a| M |b>.
  Complex expectation(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;

  /// Sum of absolute term coefficients; an upper bound on the spectral norm.
  double coefficient_norm() const;

  PauliOperator operator+(const PauliOperator& other) const;
  PauliOperator scaled(double factor) const;

 private:
  struct Realization;

  int n_qubits_;
  std::vector<PauliTerm> terms_;
  std::shared_ptr<Realization> cache_;
};

/// Linear combination sum_k weights[k] * ops[k] with duplicate merging.
PauliOperator linear_combination(const std::vector<double>& weights,
                                 const std::vector<const PauliOperator*>& ops);

}  // namespace aqo
