#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aqo/pauli.hpp"

namespace aqo {

/// QUBO problem in Ising form: sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j.
class QuboInstance {
 public:
  QuboInstance() = default;

  /// `couplings` may be given in any triangle; entry (i,j) and (j,i) are
  /// summed into the upper triangle. A nonzero diagonal is rejected.
  QuboInstance(int n_qubits, std::vector<double> fields, const Eigen::MatrixXd& couplings,
               std::uint64_t seed = 0);

  int n_qubits() const { return n_qubits_; }
  const std::vector<double>& h() const { return h_; }
  /// Strictly upper-triangular coupling matrix.
  const Eigen::MatrixXd& J() const { return J_; }
  std::uint64_t seed() const { return seed_; }

  /// max(|h_i|, |J_ij|); the default amplitude cap for intermediate terms.
  double max_coefficient() const;

  /// Classical energy of every basis state, indexed like the Pauli realization
  /// (qubit 0 is the most significant bit; bit value 0 means z = +1).
  Eigen::VectorXd energies() const;

  friend bool operator==(const QuboInstance& a, const QuboInstance& b);

 private:
  int n_qubits_ = 0;
  std::vector<double> h_;
  Eigen::MatrixXd J_;
  std::uint64_t seed_ = 0;
};

/// h_i and J_ij i.i.d. uniform on [-1, 1], drawn h first then J row-major.
QuboInstance random_qubo(int n_qubits, std::uint64_t seed);

/// {"n": int, "h": [...], "J": [[i, j, value], ...], "seed": uint}
std::string to_json(const QuboInstance& inst);
QuboInstance qubo_from_json(const std::string& text);
void write_instance(const QuboInstance& inst, const std::filesystem::path& path);
QuboInstance read_instance(const std::filesystem::path& path);

}  // namespace aqo
