#include "aqo/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aqo/errors.hpp"
#include "aqo/io.hpp"
#include "aqo/rng.hpp"

namespace aqo {

Schedule::Schedule(int n_qubits, int intervals, double f_bound, double slew, Eigen::MatrixXd values)
    : n_qubits_(n_qubits), intervals_(intervals), f_bound_(f_bound), slew_(slew), values_(std::move(values)) {
  if (n_qubits < 1) throw std::invalid_argument("Schedule: n_qubits must be >= 1");
  if (intervals < 2) throw std::invalid_argument("Schedule: need at least 2 intervals");
  if (!(f_bound >= 0.0) || !(slew >= 0.0) || !std::isfinite(f_bound) || !std::isfinite(slew)) {
    throw std::invalid_argument("Schedule: f_bound and slew must be finite and nonnegative");
  }
  if (values_.rows() != 2 * n_qubits || values_.cols() != intervals + 1) {
    throw std::invalid_argument("Schedule: value table must be 2n x (N+1)");
  }
}

Schedule Schedule::with_values(Eigen::MatrixXd values) const {
  return Schedule(n_qubits_, intervals_, f_bound_, slew_, std::move(values));
}

Schedule Schedule::with_limits(double f_bound, double slew) const {
  return Schedule(n_qubits_, intervals_, f_bound, slew, values_);
}

std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::Boundary: return "boundary";
    case Constraint::Amplitude: return "amplitude";
    case Constraint::Slew: return "slew";
  }
  return "unknown";
}

std::vector<Violation> validate(const Schedule& schedule) {
  std::vector<Violation> out;
  const auto& v = schedule.values();
  const int N = schedule.intervals();
  const double step = schedule.max_step();
  for (int r = 0; r < schedule.term_count(); ++r) {
    for (int i : {0, N}) {
      if (v(r, i) != 0.0) out.push_back({Constraint::Boundary, r, i, std::abs(v(r, i))});
    }
    for (int i = 0; i <= N; ++i) {
      const double a = std::abs(v(r, i));
      if (!(a <= schedule.f_bound())) out.push_back({Constraint::Amplitude, r, i, a - schedule.f_bound()});
    }
    for (int i = 0; i < N; ++i) {
      const double d = std::abs(v(r, i + 1) - v(r, i));
      if (!(d <= step + kSlewTolerance)) out.push_back({Constraint::Slew, r, i, d - step});
    }
  }
  return out;
}

Schedule linear_schedule(int n_qubits, int intervals, double f_bound, double slew) {
  if (n_qubits < 1) throw std::invalid_argument("linear_schedule: n_qubits must be >= 1");
  return Schedule(n_qubits, intervals, f_bound, slew, Eigen::MatrixXd::Zero(2 * n_qubits, intervals + 1));
}

Eigen::MatrixXd clip_to_admissible(const Eigen::MatrixXd& values, int intervals, double f_bound,
                                   double slew, const Eigen::MatrixXd* lower,
                                   const Eigen::MatrixXd* upper) {
  Eigen::MatrixXd v = values;
  const int N = intervals;
  const double step = slew / N;
  v.col(0).setZero();
  v.col(N).setZero();
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      for (int i = 1; i < N; ++i) {
        const double env = std::min({f_bound, step * i, step * (N - i)});
        double lo = -env;
        double hi = env;
        if (lower) lo = std::max(lo, (*lower)(r, i));
        if (upper) hi = std::min(hi, (*upper)(r, i));
        if (lo > hi) lo = hi = std::clamp(0.0, -env, env);
        const double c = std::clamp(v(r, i), lo, hi);
        if (c != v(r, i)) {
          v(r, i) = c;
          changed = true;
        }
      }
      for (int i = N - 1; i >= 1; --i) {
        const double c = std::clamp(v(r, i), v(r, i + 1) - step, v(r, i + 1) + step);
        if (c != v(r, i)) {
          v(r, i) = c;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return v;
}

std::string to_string(SignRestriction r) {
  switch (r) {
    case SignRestriction::Unrestricted: return "unrestricted";
    case SignRestriction::AllPositive: return "all_positive";
    case SignRestriction::AllNegative: return "all_negative";
    case SignRestriction::XPositiveZNegative: return "x_pos_z_neg";
    case SignRestriction::XNegativeZPositive: return "x_neg_z_pos";
  }
  return "unknown";
}

SignRestriction sign_restriction_from_string(const std::string& name) {
  for (auto r : {SignRestriction::Unrestricted, SignRestriction::AllPositive, SignRestriction::AllNegative,
                 SignRestriction::XPositiveZNegative, SignRestriction::XNegativeZPositive}) {
    if (to_string(r) == name) return r;
  }
  throw std::invalid_argument("unknown sign restriction '" + name + "'");
}

namespace {

// Sign demanded of entry r (0 = any).
int required_sign(SignRestriction restriction, int r) {
  const bool is_x = (r % 2) == 0;
  switch (restriction) {
    case SignRestriction::Unrestricted: return 0;
    case SignRestriction::AllPositive: return 1;
    case SignRestriction::AllNegative: return -1;
    case SignRestriction::XPositiveZNegative: return is_x ? 1 : -1;
    case SignRestriction::XNegativeZPositive: return is_x ? -1 : 1;
  }
  return 0;
}

}  // namespace

PerturbationCoefficients::PerturbationCoefficients(std::vector<double> c, SignRestriction restriction)
    : c_(std::move(c)), restriction_(restriction) {
  if (c_.empty() || c_.size() % 2 != 0) {
    throw std::invalid_argument("PerturbationCoefficients: need 2n entries");
  }
  bool any_nonzero = false;
  for (std::size_t r = 0; r < c_.size(); ++r) {
    const int sign = required_sign(restriction_, static_cast<int>(r));
    if ((sign > 0 && !(c_[r] > 0.0)) || (sign < 0 && !(c_[r] < 0.0))) {
      throw std::invalid_argument("PerturbationCoefficients: entry " + std::to_string(r) +
                                  " violates restriction " + to_string(restriction_));
    }
    any_nonzero = any_nonzero || c_[r] != 0.0;
  }
  if (!any_nonzero) throw std::invalid_argument("PerturbationCoefficients: all entries are zero");
}

double PerturbationCoefficients::squared_norm() const {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return s;
}

PerturbationCoefficients sample_coefficients(int n_qubits, SignRestriction restriction, std::uint64_t seed) {
  if (n_qubits < 1) throw std::invalid_argument("sample_coefficients: n_qubits must be >= 1");
  Rng rng(seed);
  std::vector<double> c(static_cast<std::size_t>(2 * n_qubits));
  for (int r = 0; r < 2 * n_qubits; ++r) {
    switch (required_sign(restriction, r)) {
      case 1: c[r] = rng.uniform_open_closed(); break;
      case -1: c[r] = rng.uniform01() - 1.0; break;
      default: c[r] = rng.uniform(-1.0, 1.0); break;
    }
  }
  return PerturbationCoefficients(std::move(c), restriction);
}

Schedule quadratic_random_schedule(const PerturbationCoefficients& coeffs, int intervals, double f_bound,
                                   double slew, Normalization normalization) {
  const int n = coeffs.n_qubits();
  const double norm2 = coeffs.squared_norm();
  const double divisor = normalization == Normalization::SquaredNorm ? norm2 : std::sqrt(norm2);
  Eigen::MatrixXd v(2 * n, intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double s = static_cast<double>(i) / intervals;
    const double envelope = s * (1.0 - s);
    for (int r = 0; r < 2 * n; ++r) v(r, i) = envelope * (coeffs.c()[r] / divisor);
  }
  Schedule out(n, intervals, f_bound, slew, std::move(v));
  const auto violations = validate(out);
  if (!violations.empty()) {
    const auto& first = violations.front();
    throw ScheduleRejected("quadratic_random_schedule: " + to_string(first.constraint) +
                               " violated at term " + std::to_string(first.term) + ", point " +
                               std::to_string(first.point) + " by " + format_number(first.magnitude),
                           first);
  }
  return out;
}

std::string schedule_to_csv(const Schedule& schedule) {
  std::ostringstream out;
  out << "i,s";
  for (int r = 0; r < schedule.term_count(); ++r) out << ",f_" << (r + 2);
  out << '\n';
  for (int i = 0; i <= schedule.intervals(); ++i) {
    out << i << ',' << format_number(schedule.s(i), 17);
    for (int r = 0; r < schedule.term_count(); ++r) out << ',' << format_number(schedule.value(r, i), 17);
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& field, int line_no, int column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw IoError("schedule CSV line " + std::to_string(line_no) + ", field " + std::to_string(column + 1) +
                  ": cannot parse '" + field + "' as a number");
  }
}

}  // namespace

Schedule schedule_from_csv(const std::string& text, int n_qubits, double f_bound, double slew) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw IoError("schedule CSV: empty input");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  const int M = 2 * n_qubits;
  if (header.size() != static_cast<std::size_t>(M + 2) || header[0] != "i" || header[1] != "s") {
    throw IoError("schedule CSV line 1: expected header i,s,f_2..f_" + std::to_string(M + 1) + " for " +
                  std::to_string(n_qubits) + " qubits");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw IoError("schedule CSV line " + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    const double idx = parse_double(fields[0], line_no, 0);
    if (idx != static_cast<double>(rows.size())) {
      throw IoError("schedule CSV line " + std::to_string(line_no) + ": grid index out of sequence");
    }
    std::vector<double> row;
    for (std::size_t k = 2; k < fields.size(); ++k) row.push_back(parse_double(fields[k], line_no, static_cast<int>(k)));
    rows.push_back(std::move(row));
  }
  if (rows.size() < 3) throw IoError("schedule CSV: need at least 3 grid points");
  const int N = static_cast<int>(rows.size()) - 1;
  Eigen::MatrixXd v(M, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int r = 0; r < M; ++r) v(r, i) = rows[i][r];
  }
  return Schedule(n_qubits, N, f_bound, slew, std::move(v));
}

void write_schedule(const Schedule& schedule, const std::filesystem::path& path) {
  write_text_file_atomic(path, schedule_to_csv(schedule));
}

Schedule read_schedule(const std::filesystem::path& path, int n_qubits, double f_bound, double slew) {
  try {
    return schedule_from_csv(read_text_file(path), n_qubits, f_bound, slew);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace aqo
