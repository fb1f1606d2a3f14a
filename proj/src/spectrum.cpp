#include "aqo/spectrum.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "aqo/errors.hpp"
#include "aqo/io.hpp"
#include "aqo/parallel.hpp"

namespace aqo {

namespace {

void align_phase(const Eigen::VectorXcd& previous, Eigen::Ref<Eigen::VectorXcd> current) {
  const Complex overlap = previous.dot(current);
  const double mag = std::abs(overlap);
  if (mag > 0.0) current *= std::conj(overlap) / mag;
}

}  // namespace

SpectrumProfile gap_profile(const QuboInstance& inst, const Schedule& schedule, const ProfileOptions& options) {
  return gap_profile(HamiltonianFamily(inst), schedule, options);
}

SpectrumProfile gap_profile(const HamiltonianFamily& family, const Schedule& schedule, const ProfileOptions& options) {
  if (schedule.n_qubits() != family.n_qubits()) {
    throw std::invalid_argument("gap_profile: schedule/instance qubit count mismatch");
  }
  const int k = options.levels;
  if (k < 2 || static_cast<std::size_t>(k) > family.dimension()) {
    throw std::invalid_argument("gap_profile: levels must be in [2, 2^n]");
  }
  const int N = schedule.intervals();
  SpectrumProfile p;
  p.intervals = N;
  p.levels = k;
  p.eigenvalues.resize(N + 1, k);
  p.gaps.resize(N + 1);
  std::vector<EigenSystem> systems(static_cast<std::size_t>(N + 1));
  const bool want_vectors = options.vectors != VectorMode::None;
  parallel_for(static_cast<std::size_t>(N + 1), [&](std::size_t idx) {
    const int i = static_cast<int>(idx);
    try {
      systems[idx] = lowest_eigenpairs(family.at(schedule, i), k, want_vectors);
    } catch (const NumericalError& e) {
      throw NumericalError("gap_profile: grid point " + std::to_string(i) + ": " + e.what(), e.achieved());
    }
  });
  for (int i = 0; i <= N; ++i) {
    const auto& sys = systems[static_cast<std::size_t>(i)];
    p.eigenvalues.row(i) = sys.values.transpose();
    p.gaps(i) = std::max(0.0, sys.values(1) - sys.values(0));
  }
  if (options.vectors == VectorMode::Ground) {
    p.ground_states.reserve(systems.size());
    for (int i = 0; i <= N; ++i) {
      Eigen::VectorXcd u = systems[static_cast<std::size_t>(i)].vectors.col(0);
      if (i > 0) align_phase(p.ground_states.back(), u);
      p.ground_states.push_back(std::move(u));
    }
  } else if (options.vectors == VectorMode::All) {
    p.eigenvectors.reserve(systems.size());
    for (int i = 0; i <= N; ++i) {
      Eigen::MatrixXcd v = std::move(systems[static_cast<std::size_t>(i)].vectors);
      if (i > 0) {
        for (int c = 0; c < k; ++c) align_phase(p.eigenvectors.back().col(c), v.col(c));
      }
      p.ground_states.push_back(v.col(0));
      p.eigenvectors.push_back(std::move(v));
    }
  }
  return p;
}

MinGap min_gap(const SpectrumProfile& profile, GapRange range) {
  const int N = profile.intervals;
  const int lo = range == GapRange::Interior ? 1 : 0;
  const int hi = range == GapRange::Interior ? N - 1 : N;
  MinGap best{profile.gaps(lo), lo};
  for (int i = lo + 1; i <= hi; ++i) {
    if (profile.gaps(i) < best.gap) best = {profile.gaps(i), i};
  }
  return best;
}

double endpoint_gap(const SpectrumProfile& profile) {
  return std::min(profile.gaps(0), profile.gaps(profile.intervals));
}

std::vector<double> ground_fidelity_profile(const SpectrumProfile& profile) {
  if (profile.ground_states.size() != static_cast<std::size_t>(profile.intervals + 1)) {
    throw std::invalid_argument("ground_fidelity_profile: profile has no ground states");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(profile.intervals));
  for (int i = 0; i < profile.intervals; ++i) {
    const double f = std::abs(profile.ground_states[i].dot(profile.ground_states[i + 1]));
    out.push_back(std::min(1.0, f));
  }
  return out;
}

namespace {

// |<phi_m| dH/ds |phi_0>| for m = 1..k-1 at every grid point.
Eigen::MatrixXd derivative_elements(const SpectrumProfile& profile, const QuboInstance& inst,
                                    const Schedule& schedule) {
  if (profile.levels < 2) throw std::invalid_argument("adiabatic_condition: need at least 2 levels");
  if (profile.eigenvectors.size() != static_cast<std::size_t>(profile.intervals + 1)) {
    throw std::invalid_argument("adiabatic_condition: profile must retain all eigenvectors");
  }
  if (schedule.intervals() != profile.intervals) {
    throw std::invalid_argument("adiabatic_condition: profile/schedule grid mismatch");
  }
  const HamiltonianFamily family(inst);
  const int N = profile.intervals;
  const int k = profile.levels;
  Eigen::MatrixXd out(N + 1, k - 1);
  for (int i = 0; i <= N; ++i) {
    const int a = i < N ? i : N - 1;
    const FieldHamiltonian h0 = family.at(schedule, a);
    const FieldHamiltonian h1 = family.at(schedule, a + 1);
    FieldHamiltonian dh;
    dh.n_qubits = h0.n_qubits;
    dh.diagonal = (h1.diagonal - h0.diagonal) * N;
    dh.x_fields = (h1.x_fields - h0.x_fields) * N;
    const Eigen::MatrixXcd& v = profile.eigenvectors[static_cast<std::size_t>(i)];
    Eigen::VectorXcd dphi0;
    dh.apply(Eigen::VectorXcd(v.col(0)), dphi0);
    for (int m = 1; m < k; ++m) out(i, m - 1) = std::abs(v.col(m).dot(dphi0));
  }
  return out;
}

}  // namespace

double adiabatic_condition_worst(const SpectrumProfile& profile, const QuboInstance& inst, const Schedule& schedule) {
  const Eigen::MatrixXd el = derivative_elements(profile, inst, schedule);
  const double numerator = el.col(0).maxCoeff();
  const double min_gap_value = profile.gaps.minCoeff();
  if (numerator == 0.0) return 0.0;
  if (min_gap_value == 0.0) return std::numeric_limits<double>::infinity();
  return numerator / (min_gap_value * min_gap_value);
}

std::vector<double> adiabatic_condition_local(const SpectrumProfile& profile, const QuboInstance& inst,
                                              const Schedule& schedule) {
  const Eigen::MatrixXd el = derivative_elements(profile, inst, schedule);
  std::vector<double> out(static_cast<std::size_t>(profile.intervals + 1), 0.0);
  for (int i = 0; i <= profile.intervals; ++i) {
    double sum = 0.0;
    for (int m = 1; m < profile.levels; ++m) {
      const double num = el(i, m - 1);
      if (num == 0.0) continue;
      const double d = profile.eigenvalues(i, m) - profile.eigenvalues(i, 0);
      sum += d > 0.0 ? num / (d * d) : std::numeric_limits<double>::infinity();
    }
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

std::string profile_to_csv(const SpectrumProfile& profile) {
  std::ostringstream out;
  out << "i,s";
  for (int c = 0; c < profile.levels; ++c) out << ",lambda" << c;
  out << ",gap\n";
  for (int i = 0; i <= profile.intervals; ++i) {
    out << i << ',' << format_number(profile.s(i));
    for (int c = 0; c < profile.levels; ++c) out << ',' << format_number(profile.eigenvalues(i, c));
    out << ',' << format_number(profile.gaps(i)) << '\n';
  }
  return out.str();
}

}  // namespace aqo
