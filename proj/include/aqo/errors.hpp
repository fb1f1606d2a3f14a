#pragma once

#include <stdexcept>
#include <string>

namespace aqo {

/// Malformed or unreadable input/output (files, JSON, CSV, manifests).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to reach its contract (non-convergence,
/// norm drift, infeasibility).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  /// The residual / drift / violation actually achieved.
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace aqo
