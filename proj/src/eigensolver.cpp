#include "aqo/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aqo/errors.hpp"
#include "aqo/rng.hpp"

namespace aqo {

namespace {

void check_k(int k, Eigen::Index dim) {
  if (k < 1 || k > dim) {
    throw std::invalid_argument("eigensolver: requested " + std::to_string(k) + " levels of a " +
                                std::to_string(dim) + "-dimensional operator");
  }
}

template <typename Matrix>
EigenSystem dense_lowest_impl(const Matrix& m, int k, bool vectors) {
  check_k(k, m.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("dense eigensolver: QL iteration did not converge", NAN);
  }
  EigenSystem out;
  out.values = es.eigenvalues().head(k);
  if (vectors) out.vectors = es.eigenvectors().leftCols(k).template cast<Complex>();
  return out;
}

double worst_residual(const MatVec& apply, const EigenSystem& sys) {
  double worst = 0.0;
  Eigen::VectorXcd hu;
  for (Eigen::Index c = 0; c < sys.vectors.cols(); ++c) {
    apply(sys.vectors.col(c), hu);
    worst = std::max(worst, (hu - sys.values(c) * sys.vectors.col(c)).norm());
  }
  return worst;
}

void enforce_residual(const MatVec& apply, const EigenSystem& sys, double norm_bound) {
  const double res = worst_residual(apply, sys);
  if (res > 1e-9 * std::max(norm_bound, 1.0)) {
    throw NumericalError("eigensolver: residual " + std::to_string(res) + " above tolerance", res);
  }
}

}  // namespace

EigenSystem dense_lowest(const Eigen::MatrixXd& m, int k, bool vectors) { return dense_lowest_impl(m, k, vectors); }

EigenSystem dense_lowest(const Eigen::MatrixXcd& m, int k, bool vectors) { return dense_lowest_impl(m, k, vectors); }

EigenSystem lanczos_lowest(const MatVec& apply, std::size_t dimension, int k, double norm_bound,
                           const LanczosOptions& options) {
  const auto dim = static_cast<Eigen::Index>(dimension);
  check_k(k, dim);
  const Eigen::Index max_m = std::min<Eigen::Index>(dim, std::max(options.max_krylov, 2 * k + 2));
  Rng rng(options.seed);
  Eigen::VectorXcd v(dim);
  for (Eigen::Index b = 0; b < dim; ++b) v(b) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  v.normalize();

  Eigen::MatrixXcd basis(dim, max_m);
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXcd w;
  double worst = INFINITY;
  const double scale = std::max(norm_bound, 1.0);
  basis.col(0) = v;
  for (Eigen::Index j = 0; j < max_m; ++j) {
    apply(basis.col(j), w);
    const double a = basis.col(j).dot(w).real();
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd coeffs = basis.leftCols(j + 1).adjoint() * w;
      w.noalias() -= basis.leftCols(j + 1) * coeffs;
    }
    const double b = w.norm();
    const Eigen::Index m = j + 1;
    const bool invariant = b <= 1e-14 * scale;
    if (m >= k && (m % 5 == 0 || invariant || m == max_m)) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index r = 0; r < m; ++r) {
        t(r, r) = alpha[r];
        if (r + 1 < m) t(r, r + 1) = t(r + 1, r) = beta[r];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      worst = 0.0;
      for (int c = 0; c < k; ++c) worst = std::max(worst, std::abs(b * es.eigenvectors()(m - 1, c)));
      if (worst <= options.tolerance * scale || invariant || m == max_m) {
        EigenSystem out;
        out.values = es.eigenvalues().head(k);
        out.vectors = basis.leftCols(m) * es.eigenvectors().leftCols(k).cast<Complex>();
        for (Eigen::Index c = 0; c < k; ++c) out.vectors.col(c).normalize();
        if (worst > options.tolerance * scale && !invariant) {
          throw NumericalError("lanczos: no convergence after " + std::to_string(m) + " steps", worst);
        }
        return out;
      }
    }
    if (invariant) break;
    beta.push_back(b);
    if (j + 1 < max_m) basis.col(j + 1) = w / b;
  }
  throw NumericalError("lanczos: no convergence", worst);
}

EigenSystem lowest_eigenpairs(const PauliOperator& op, int k) {
  check_k(k, static_cast<Eigen::Index>(op.dimension()));
  const MatVec apply = [&op](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { op.apply(in, out); };
  const double bound = op.coefficient_norm();
  EigenSystem sys;
  if (op.n_qubits() <= kDenseQubitLimit) {
    sys = op.is_real() ? dense_lowest(op.dense_real(), k, true) : dense_lowest(op.dense(), k, true);
  } else {
    sys = lanczos_lowest(apply, op.dimension(), k, bound);
  }
  enforce_residual(apply, sys, bound);
  return sys;
}

EigenSystem lowest_eigenpairs(const FieldHamiltonian& h, int k, bool vectors) {
  check_k(k, static_cast<Eigen::Index>(h.dimension()));
  const MatVec apply = [&h](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { h.apply(in, out); };
  if (h.n_qubits <= kDenseQubitLimit) {
    EigenSystem sys = dense_lowest(h.dense(), k, vectors);
    if (vectors) enforce_residual(apply, sys, h.norm_bound());
    return sys;
  }
  EigenSystem sys = lanczos_lowest(apply, h.dimension(), k, h.norm_bound());
  enforce_residual(apply, sys, h.norm_bound());
  if (!vectors) sys.vectors.resize(0, 0);
  return sys;
}

}  // namespace aqo
