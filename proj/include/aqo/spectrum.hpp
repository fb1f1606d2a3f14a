#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "aqo/eigensolver.hpp"
#include "aqo/hamiltonian.hpp"
#include "aqo/qubo.hpp"
#include "aqo/schedule.hpp"

namespace aqo {

enum class VectorMode {
  None,    // eigenvalues only
  Ground,  // ground states
  All,     // all retained eigenvectors
};

struct ProfileOptions {
  /// Retained levels (ground + 5 excited by default).
  int levels = 6;
  VectorMode vectors = VectorMode::Ground;
};

/// Low-lying spectrum of H(i) at every grid point i = 0..N.
struct SpectrumProfile {
  int intervals = 0;
  int levels = 0;
  /// (N+1) x levels, rows ascending.
  Eigen::MatrixXd eigenvalues;
  /// lambda_1 - lambda_0 per grid point.
  Eigen::VectorXd gaps;
  /// Unit ground states, phase-aligned so <u0(i)|u0(i+1)> is real and >= 0.
  std::vector<Eigen::VectorXcd> ground_states;
  /// dim x levels per grid point (VectorMode::All only); column c is aligned
  /// against column c of the previous point in the same way.
  std::vector<Eigen::MatrixXcd> eigenvectors;

  double s(int i) const { return static_cast<double>(i) / intervals; }
};

/// Eigen-decomposes H(i) along the schedule. Grid points are independent
/// and may be processed in parallel; phase alignment is a serial post-pass.
/// Eigensolver failures are rethrown with the grid index in the message.
SpectrumProfile gap_profile(const QuboInstance& inst, const Schedule& schedule, const ProfileOptions& options = {});
SpectrumProfile gap_profile(const HamiltonianFamily& family, const Schedule& schedule,
                            const ProfileOptions& options = {});

enum class GapRange { Interior, Full };

struct MinGap {
  double gap = 0.0;
  int index = 0;
};

/// Minimum over 1..N-1 (Interior) or 0..N (Full); ties go to the smallest index.
MinGap min_gap(const SpectrumProfile& profile, GapRange range);

/// min(Delta(0), Delta(N)).
double endpoint_gap(const SpectrumProfile& profile);

/// |<u0(i)|u0(i+1)>| for i = 0..N-1.
std::vector<double> ground_fidelity_profile(const SpectrumProfile& profile);

/// max_i |<phi_1|dH/ds|phi_0>| / min_i Delta(i)^2, with dH/ds taken as the
/// forward difference (H(i+1) - H(i)) N (backward at i = N).
/// Needs a profile with VectorMode::All and at least 2 levels.
double adiabatic_condition_worst(const SpectrumProfile& profile, const QuboInstance& inst,
                                 const Schedule& schedule);

/// Per grid point: sum_{m=1}^{k-1} |<phi_m|dH/ds|phi_0>| / (lambda_m - lambda_0)^2
/// over the retained levels (s-derivative; divide by T for the t-derivative).
std::vector<double> adiabatic_condition_local(const SpectrumProfile& profile, const QuboInstance& inst,
                                              const Schedule& schedule);

/// "i,s,lambda0,...,lambda{k-1},gap" with 9 significant digits.
std::string profile_to_csv(const SpectrumProfile& profile);

}  // namespace aqo
