#include "aqo/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace aqo {

char axis_symbol(Axis axis) {
  switch (axis) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

PauliTerm::PauliTerm(double coefficient, std::vector<PauliFactor> factors)
    : coefficient_(coefficient), factors_(std::move(factors)) {
  std::sort(factors_.begin(), factors_.end());
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].qubit < 0) {
      throw std::invalid_argument("PauliTerm: negative qubit index");
    }
    if (k > 0 && factors_[k].qubit == factors_[k - 1].qubit) {
      throw std::invalid_argument("PauliTerm: qubit " + std::to_string(factors_[k].qubit) +
                                  " appears twice");
    }
  }
}

int PauliTerm::y_count() const {
  return static_cast<int>(std::count_if(factors_.begin(), factors_.end(),
                                        [](const PauliFactor& f) { return f.axis == Axis::Y; }));
}

std::string PauliTerm::label(int n_qubits) const {
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (const auto& f : factors_) s[static_cast<std::size_t>(f.qubit)] = axis_symbol(f.axis);
  return s;
}

struct PauliOperator::Realization {
  std::once_flag once;
  SparseMatrix matrix;
};

namespace {

struct TermMasks {
  std::uint64_t flip = 0;   // X or Y
  std::uint64_t phase = 0;  // Z or Y
  Complex factor;           // coefficient * i^{#Y}
};

TermMasks masks_for(const PauliTerm& term, int n_qubits) {
  TermMasks m;
  for (const auto& f : term.factors()) {
    const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - f.qubit);
    if (f.axis != Axis::Z) m.flip |= bit;
    if (f.axis != Axis::X) m.phase |= bit;
  }
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  m.factor = term.coefficient() * kIPow[term.y_count() % 4];
  return m;
}

double parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

}  // namespace

PauliOperator::PauliOperator(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), cache_(std::make_shared<Realization>()) {
  if (n_qubits < 1) throw std::invalid_argument("PauliOperator: n_qubits must be >= 1");
  if (n_qubits > 30) throw std::invalid_argument("PauliOperator: n_qubits too large");
  std::map<std::vector<PauliFactor>, double> merged;
  for (auto& t : terms) {
    for (const auto& f : t.factors()) {
      if (f.qubit >= n_qubits) {
        throw std::invalid_argument("PauliOperator: qubit index " + std::to_string(f.qubit) +
                                    " out of range");
      }
    }
    merged[t.factors()] += t.coefficient();
  }
  terms_.reserve(merged.size());
  for (auto& [factors, c] : merged) {
    if (c != 0.0) terms_.emplace_back(c, factors);
  }
}

PauliOperator PauliOperator::identity(int n_qubits, double coefficient) {
  return PauliOperator(n_qubits, {PauliTerm(coefficient, {})});
}

PauliOperator PauliOperator::single(int n_qubits, int qubit, Axis axis, double coefficient) {
  return PauliOperator(n_qubits, {PauliTerm(coefficient, {{qubit, axis}})});
}

bool PauliOperator::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const PauliTerm& t) { return t.y_count() % 2 == 0; });
}

bool PauliOperator::is_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const PauliTerm& t) {
    return std::all_of(t.factors().begin(), t.factors().end(),
                       [](const PauliFactor& f) { return f.axis == Axis::Z; });
  });
}

const SparseMatrix& PauliOperator::matrix() const {
  std::call_once(cache_->once, [this] {
    const std::size_t dim = dimension();
    std::vector<TermMasks> masks;
    masks.reserve(terms_.size());
    for (const auto& t : terms_) masks.push_back(masks_for(t, n_qubits_));

    // Distinct flip patterns give distinct columns in a row; terms sharing a
    // pattern are summed in canonical term order so that (r,c) and (c,r)
    // accumulate conjugate values in the same sequence.
    std::vector<std::uint64_t> patterns;
    for (const auto& m : masks) patterns.push_back(m.flip);
    std::sort(patterns.begin(), patterns.end());
    patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());

    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(dim * patterns.size());
    for (std::uint64_t row = 0; row < dim; ++row) {
      for (std::uint64_t flip : patterns) {
        const std::uint64_t col = row ^ flip;
        Complex value = 0.0;
        bool touched = false;
        for (const auto& m : masks) {
          if (m.flip != flip) continue;
          value += m.factor * parity_sign(col & m.phase);
          touched = true;
        }
        if (touched && value != Complex(0.0)) {
          triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
        }
      }
    }
    SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    cache_->matrix = std::move(m);
  });
  return cache_->matrix;
}

Eigen::MatrixXcd PauliOperator::dense() const { return Eigen::MatrixXcd(matrix()); }

Eigen::MatrixXd PauliOperator::dense_real() const {
  if (!is_real()) throw std::logic_error("PauliOperator::dense_real: operator has imaginary entries");
  const auto& m = matrix();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) out(it.row(), it.col()) = it.value().real();
  }
  return out;
}

Eigen::VectorXd PauliOperator::diagonal() const {
  const std::size_t dim = dimension();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& t : terms_) {
    const TermMasks m = masks_for(t, n_qubits_);
    if (m.flip != 0) continue;
    for (std::uint64_t b = 0; b < dim; ++b) {
      d(static_cast<Eigen::Index>(b)) += m.factor.real() * parity_sign(b & m.phase);
    }
  }
  return d;
}

void PauliOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out.noalias() = matrix() * in;
}

Complex PauliOperator::expectation(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd tmp;
  apply(b, tmp);
  return a.dot(tmp);
}

double PauliOperator::coefficient_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient());
  return s;
}

PauliOperator PauliOperator::operator+(const PauliOperator& other) const {
  if (other.n_qubits_ != n_qubits_) {
    throw std::invalid_argument("PauliOperator::operator+: qubit count mismatch");
  }
  std::vector<PauliTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return PauliOperator(n_qubits_, std::move(all));
}

PauliOperator PauliOperator::scaled(double factor) const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.emplace_back(t.coefficient() * factor, t.factors());
  return PauliOperator(n_qubits_, std::move(out));
}

PauliOperator linear_combination(const std::vector<double>& weights,
                                 const std::vector<const PauliOperator*>& ops) {
  if (weights.size() != ops.size() || ops.empty()) {
    throw std::invalid_argument("linear_combination: weights/operators size mismatch");
  }
  const int n = ops.front()->n_qubits();
  std::vector<PauliTerm> all;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k]->n_qubits() != n) throw std::invalid_argument("linear_combination: qubit count mismatch");
    for (const auto& t : ops[k]->terms()) all.emplace_back(t.coefficient() * weights[k], t.factors());
  }
  return PauliOperator(n, std::move(all));
}

}  // namespace aqo
