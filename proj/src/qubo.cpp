#include "aqo/qubo.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aqo/errors.hpp"
#include "aqo/io.hpp"
#include "aqo/rng.hpp"

namespace aqo {

using nlohmann::json;

QuboInstance::QuboInstance(int n_qubits, std::vector<double> fields,
                           const Eigen::MatrixXd& couplings, std::uint64_t seed)
    : n_qubits_(n_qubits), h_(std::move(fields)), seed_(seed) {
  if (n_qubits < 1) throw std::invalid_argument("QuboInstance: n_qubits must be >= 1");
  if (h_.size() != static_cast<std::size_t>(n_qubits)) {
    throw std::invalid_argument("QuboInstance: expected " + std::to_string(n_qubits) +
                                " fields, got " + std::to_string(h_.size()));
  }
  J_ = Eigen::MatrixXd::Zero(n_qubits, n_qubits);
  if (couplings.size() != 0) {
    if (couplings.rows() != n_qubits || couplings.cols() != n_qubits) {
      throw std::invalid_argument("QuboInstance: coupling matrix must be n x n");
    }
    for (int i = 0; i < n_qubits; ++i) {
      if (couplings(i, i) != 0.0) {
        throw std::invalid_argument("QuboInstance: diagonal coupling J(" + std::to_string(i) + "," +
                                    std::to_string(i) + ") must be zero");
      }
      for (int j = i + 1; j < n_qubits; ++j) J_(i, j) = couplings(i, j) + couplings(j, i);
    }
  }
  for (double v : h_) {
    if (!std::isfinite(v)) throw std::invalid_argument("QuboInstance: non-finite field");
  }
  if (!J_.allFinite()) throw std::invalid_argument("QuboInstance: non-finite coupling");
}

double QuboInstance::max_coefficient() const {
  double m = 0.0;
  for (double v : h_) m = std::max(m, std::abs(v));
  if (J_.size() > 0) m = std::max(m, J_.cwiseAbs().maxCoeff());
  return m;
}

Eigen::VectorXd QuboInstance::energies() const {
  const std::size_t dim = std::size_t{1} << n_qubits_;
  Eigen::VectorXd e(static_cast<Eigen::Index>(dim));
  std::vector<double> z(static_cast<std::size_t>(n_qubits_));
  for (std::size_t b = 0; b < dim; ++b) {
    for (int q = 0; q < n_qubits_; ++q) z[q] = ((b >> (n_qubits_ - 1 - q)) & 1U) ? -1.0 : 1.0;
    double v = 0.0;
    for (int i = 0; i < n_qubits_; ++i) {
      v += h_[i] * z[i];
      for (int j = i + 1; j < n_qubits_; ++j) v += J_(i, j) * z[i] * z[j];
    }
    e(static_cast<Eigen::Index>(b)) = v;
  }
  return e;
}

bool operator==(const QuboInstance& a, const QuboInstance& b) {
  return a.n_qubits_ == b.n_qubits_ && a.h_ == b.h_ && a.J_ == b.J_ && a.seed_ == b.seed_;
}

QuboInstance random_qubo(int n_qubits, std::uint64_t seed) {
  if (n_qubits < 1) throw std::invalid_argument("random_qubo: n_qubits must be >= 1");
  Rng rng(seed);
  std::vector<double> h(static_cast<std::size_t>(n_qubits));
  for (auto& v : h) v = rng.uniform(-1.0, 1.0);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_qubits, n_qubits);
  for (int i = 0; i < n_qubits; ++i) {
    for (int j = i + 1; j < n_qubits; ++j) J(i, j) = rng.uniform(-1.0, 1.0);
  }
  return QuboInstance(n_qubits, std::move(h), J, seed);
}

std::string to_json(const QuboInstance& inst) {
  json j;
  j["n"] = inst.n_qubits();
  j["h"] = inst.h();
  json couplings = json::array();
  for (int a = 0; a < inst.n_qubits(); ++a) {
    for (int b = a + 1; b < inst.n_qubits(); ++b) {
      if (inst.J()(a, b) != 0.0) couplings.push_back(json::array({a, b, inst.J()(a, b)}));
    }
  }
  j["J"] = std::move(couplings);
  j["seed"] = inst.seed();
  return j.dump(2) + "\n";
}

namespace {

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("instance: missing key '") + key + "'");
  return j.at(key);
}

}  // namespace

QuboInstance qubo_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("instance: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw IoError("instance: top level must be an object");
  const json& jn = require(j, "n");
  if (!jn.is_number_integer()) throw IoError("instance: key 'n' must be an integer");
  const int n = jn.get<int>();
  if (n < 1) throw IoError("instance: key 'n' must be >= 1");
  const json& jh = require(j, "h");
  if (!jh.is_array() || jh.size() != static_cast<std::size_t>(n)) {
    throw IoError("instance: key 'h' must be an array of n numbers");
  }
  std::vector<double> h;
  for (std::size_t k = 0; k < jh.size(); ++k) {
    if (!jh[k].is_number()) throw IoError("instance: key 'h' entry " + std::to_string(k) + " is not a number");
    h.push_back(jh[k].get<double>());
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const json& jJ = require(j, "J");
  if (!jJ.is_array()) throw IoError("instance: key 'J' must be an array of [i, j, value]");
  for (std::size_t k = 0; k < jJ.size(); ++k) {
    const json& e = jJ[k];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number()) {
      throw IoError("instance: key 'J' entry " + std::to_string(k) + " must be [i, j, value]");
    }
    const int a = e[0].get<int>();
    const int b = e[1].get<int>();
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw IoError("instance: key 'J' entry " + std::to_string(k) + " has invalid indices");
    }
    J(a, b) += e[2].get<double>();
  }
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
      throw IoError("instance: key 'seed' must be an unsigned integer");
    }
    seed = j["seed"].get<std::uint64_t>();
  }
  try {
    return QuboInstance(n, std::move(h), J, seed);
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("instance: ") + e.what());
  }
}

void write_instance(const QuboInstance& inst, const std::filesystem::path& path) {
  write_text_file_atomic(path, to_json(inst));
}

QuboInstance read_instance(const std::filesystem::path& path) {
  try {
    return qubo_from_json(read_text_file(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace aqo
