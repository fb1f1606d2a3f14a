#pragma once

#include <Eigen/Dense>

#include <functional>

#include "aqo/hamiltonian.hpp"
#include "aqo/pauli.hpp"

namespace aqo {

/// Lowest k eigenpairs, eigenvalues ascending, eigenvectors as columns.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // empty when vectors were not requested
};

/// Largest qubit count handled by the dense path.
inline constexpr int kDenseQubitLimit = 12;

EigenSystem dense_lowest(const Eigen::MatrixXd& m, int k, bool vectors);
EigenSystem dense_lowest(const Eigen::MatrixXcd& m, int k, bool vectors);

struct LanczosOptions {
  int max_krylov = 400;
  /// Convergence: residual of every wanted Ritz pair <= tolerance * norm_bound.
  double tolerance = 1e-11;
  std::uint64_t seed = 0x5eed;
};

using MatVec = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

/// Lanczos with full reorthogonalization for the k lowest eigenpairs.
/// Throws NumericalError carrying the worst residual if it does not converge
/// within max_krylov steps.
EigenSystem lanczos_lowest(const MatVec& apply, std::size_t dimension, int k, double norm_bound,
                           const LanczosOptions& options = {});

/// Lowest k eigenpairs of a Pauli operator. Dense path up to
/// kDenseQubitLimit qubits, Lanczos above. Every returned pair satisfies
/// ||H u - lambda u|| <= 1e-9 * ||H||; otherwise NumericalError.
EigenSystem lowest_eigenpairs(const PauliOperator& op, int k);

/// Same contract for the transverse-field form used along schedules.
EigenSystem lowest_eigenpairs(const FieldHamiltonian& h, int k, bool vectors = true);

}  // namespace aqo
