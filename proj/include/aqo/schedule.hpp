#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aqo {

/// Discretized coefficients of the 2n local intermediate terms.
///
/// Row r holds the coefficient of local term r on the grid points
/// i = 0..N (N intervals of width 1/N). Row order is qubit-major with the
/// X term before the Z term: r = 2q is X on qubit q, r = 2q+1 is Z on q.
/// The value at point i applies on [i/N, (i+1)/N).
class Schedule {
 public:
  Schedule(int n_qubits, int intervals, double f_bound, double slew, Eigen::MatrixXd values);

  int n_qubits() const { return n_qubits_; }
  int intervals() const { return intervals_; }
  int term_count() const { return static_cast<int>(values_.rows()); }
  double f_bound() const { return f_bound_; }
  double slew() const { return slew_; }
  double ds() const { return 1.0 / intervals_; }
  /// Largest allowed change between neighbouring grid points.
  double max_step() const { return slew_ * ds(); }
  double s(int i) const { return static_cast<double>(i) / intervals_; }

  const Eigen::MatrixXd& values() const { return values_; }
  double value(int term, int i) const { return values_(term, i); }

  Schedule with_values(Eigen::MatrixXd values) const;
  Schedule with_limits(double f_bound, double slew) const;

 private:
  int n_qubits_;
  int intervals_;
  double f_bound_;
  double slew_;
  Eigen::MatrixXd values_;
};

/// Absolute tolerance on the slew constraint.
inline constexpr double kSlewTolerance = 1e-12;

enum class Constraint { Boundary, Amplitude, Slew };

std::string to_string(Constraint c);

struct Violation {
  Constraint constraint;
  int term;
  int point;
  /// Amount by which the constraint is exceeded.
  double magnitude;
};

/// All violated constraints; empty iff the schedule is admissible.
std::vector<Violation> validate(const Schedule& schedule);

/// All intermediate coefficients zero.
Schedule linear_schedule(int n_qubits, int intervals, double f_bound, double slew);

/// Clips the interior of `values` into the admissible set: zero boundary
/// columns, |f| <= min(f_bound, lower/upper limits), then a backward pass that
/// pulls each point within max_step of its right neighbour. The result is
/// admissible whenever the limits contain zero.
Eigen::MatrixXd clip_to_admissible(const Eigen::MatrixXd& values, int intervals, double f_bound,
                                   double slew, const Eigen::MatrixXd* lower = nullptr,
                                   const Eigen::MatrixXd* upper = nullptr);

enum class SignRestriction { Unrestricted, AllPositive, AllNegative, XPositiveZNegative, XNegativeZPositive };

std::string to_string(SignRestriction r);
SignRestriction sign_restriction_from_string(const std::string& name);

/// Random local coefficients c, indexed like Schedule rows (2q = X, 2q+1 = Z).
class PerturbationCoefficients {
 public:
  PerturbationCoefficients(std::vector<double> c, SignRestriction restriction);

  const std::vector<double>& c() const { return c_; }
  SignRestriction restriction() const { return restriction_; }
  int n_qubits() const { return static_cast<int>(c_.size() / 2); }
  double squared_norm() const;

 private:
  std::vector<double> c_;
  SignRestriction restriction_;
};

/// Entries i.i.d. uniform on [-1,1), (0,1] or [-1,0) as the restriction implies.
PerturbationCoefficients sample_coefficients(int n_qubits, SignRestriction restriction,
                                             std::uint64_t seed);

enum class Normalization { SquaredNorm, Norm };

/// f_r(i) = s(1-s) c_r / ||c||^2 at s = i/N (or / ||c|| with Normalization::Norm).
/// Throws ScheduleRejected when the envelope breaks f_bound or slew.
Schedule quadratic_random_schedule(const PerturbationCoefficients& coeffs, int intervals,
                                   double f_bound, double slew,
                                   Normalization normalization = Normalization::SquaredNorm);

class ScheduleRejected : public std::runtime_error {
 public:
  ScheduleRejected(const std::string& what, Violation v) : std::runtime_error(what), violation_(v) {}
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

/// "i,s,f_2,...,f_{M+1}", values written with 17 significant digits so a
/// schedule survives a write/read cycle bit for bit.
std::string schedule_to_csv(const Schedule& schedule);
/// Parses a CSV produced by schedule_to_csv; the grid must be uniform.
Schedule schedule_from_csv(const std::string& text, int n_qubits, double f_bound, double slew);
void write_schedule(const Schedule& schedule, const std::filesystem::path& path);
Schedule read_schedule(const std::filesystem::path& path, int n_qubits, double f_bound, double slew);

}  // namespace aqo
