#include <gtest/gtest.h>

#include <cmath>

#include "aqo/errors.hpp"
#include "aqo/hamiltonian.hpp"
#include "aqo/qubo.hpp"
#include "aqo/rng.hpp"
#include "aqo/schedule.hpp"

using namespace aqo;

TEST(LinearSchedule, ZeroTableAndValid) {
  const Schedule s = linear_schedule(2, 50, 1.0, 2.5);
  EXPECT_EQ(s.values().rows(), 4);
  EXPECT_EQ(s.values().cols(), 51);
  EXPECT_EQ(s.values().cwiseAbs().maxCoeff(), 0.0);
  for (int n = 1; n <= 8; ++n)
    for (int N : {2, 7, 50}) EXPECT_TRUE(validate(linear_schedule(n, N, 0.5, 1.0)).empty());
  // f_bound = 0 is the default bound of an instance with h = J = 0.
  EXPECT_TRUE(validate(linear_schedule(2, 50, 0.0, 2.5)).empty());
  EXPECT_THROW(linear_schedule(2, 50, -1.0, 2.5), std::invalid_argument);
  EXPECT_THROW(linear_schedule(2, 50, 1.0, -1.0), std::invalid_argument);
  EXPECT_THROW(linear_schedule(2, 1, 1.0, 1.0), std::invalid_argument);
}

TEST(Validate, AmplitudeViolation) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 11);
  v(0, 1) = 1.1;
  const auto bad = validate(Schedule(1, 10, 1.0, 100.0, v));
  ASSERT_EQ(bad.size(), 1U);
  EXPECT_EQ(bad[0].constraint, Constraint::Amplitude);
  EXPECT_EQ(bad[0].term, 0);
  EXPECT_EQ(bad[0].point, 1);
  EXPECT_NEAR(bad[0].magnitude, 0.1, 1e-12);
}

TEST(Validate, SpikeIsTwoSlewViolations) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 11);
  v(1, 5) = 1.0;
  const auto bad = validate(Schedule(1, 10, 1.0, 2.5, v));
  ASSERT_EQ(bad.size(), 2U);
  for (const auto& b : bad) {
    EXPECT_EQ(b.constraint, Constraint::Slew);
    EXPECT_EQ(b.term, 1);
    EXPECT_NEAR(b.magnitude, 1.0 - 0.25, 1e-12);
  }
}

TEST(Validate, SingleJumpIsOneSlewViolation) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 21);
  for (int i = 10; i <= 18; ++i) v(0, i) = 1.0;
  v(0, 19) = 0.5;
  // slew * ds = 0.9: only the jump 9 -> 10 exceeds it.
  const auto bad = validate(Schedule(1, 20, 1.0, 18.0, v));
  ASSERT_EQ(bad.size(), 1U);
  EXPECT_EQ(bad[0].constraint, Constraint::Slew);
  EXPECT_EQ(bad[0].point, 9);
}

TEST(Validate, BoundaryViolation) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 5);
  v(0, 0) = 1e-3;
  const auto bad = validate(Schedule(1, 4, 1.0, 2.5, v));
  ASSERT_FALSE(bad.empty());
  EXPECT_EQ(bad[0].constraint, Constraint::Boundary);
}

TEST(Validate, SlewToleranceIsAbsolute) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 5);
  const double step = 0.5 / 4;
  v(0, 1) = step + 0.5e-12;
  v(0, 2) = step + 0.5e-12;
  v(0, 3) = step;
  EXPECT_TRUE(validate(Schedule(1, 4, 1.0, 0.5, v)).empty());
  v(0, 1) = step + 5e-12;
  EXPECT_FALSE(validate(Schedule(1, 4, 1.0, 0.5, v)).empty());
}

TEST(ClipToAdmissible, ProducesValidSchedules) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd v(4, 31);
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = 3.0 * rng.uniform(-1, 1);
    const double fb = 0.2 + rng.uniform01();
    const double slew = 0.5 + 3 * rng.uniform01();
    const Eigen::MatrixXd c = clip_to_admissible(v, 30, fb, slew);
    EXPECT_TRUE(validate(Schedule(2, 30, fb, slew, c)).empty());
  }
}

TEST(ClipToAdmissible, RespectsTrustBounds) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Constant(2, 11, 0.5);
  Eigen::MatrixXd lo = Eigen::MatrixXd::Constant(2, 11, -0.1);
  Eigen::MatrixXd hi = Eigen::MatrixXd::Constant(2, 11, 0.1);
  const Eigen::MatrixXd c = clip_to_admissible(v, 10, 1.0, 5.0, &lo, &hi);
  EXPECT_LE(c.maxCoeff(), 0.1 + 1e-15);
  EXPECT_GE(c.minCoeff(), -0.1 - 1e-15);
  EXPECT_TRUE(validate(Schedule(1, 10, 1.0, 5.0, c)).empty());
}

TEST(ClipToAdmissible, LeavesAdmissibleInputUntouched) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 11);
  for (int i = 1; i < 10; ++i) v(0, i) = 0.04 * std::min(i, 10 - i);
  EXPECT_EQ(clip_to_admissible(v, 10, 1.0, 0.5), v);
}

TEST(SampleCoefficients, SignRestrictions) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto pos = sample_coefficients(5, SignRestriction::AllPositive, seed);
    for (double c : pos.c()) EXPECT_GT(c, 0.0);
    const auto neg = sample_coefficients(5, SignRestriction::AllNegative, seed);
    for (double c : neg.c()) EXPECT_LT(c, 0.0);
    const auto xpzn = sample_coefficients(5, SignRestriction::XPositiveZNegative, seed);
    const auto xnzp = sample_coefficients(5, SignRestriction::XNegativeZPositive, seed);
    for (int r = 0; r < 10; ++r) {
      if (r % 2 == 0) {
        EXPECT_GT(xpzn.c()[r], 0.0);
        EXPECT_LT(xnzp.c()[r], 0.0);
      } else {
        EXPECT_LT(xpzn.c()[r], 0.0);
        EXPECT_GT(xnzp.c()[r], 0.0);
      }
    }
    const auto any = sample_coefficients(5, SignRestriction::Unrestricted, seed);
    for (double c : any.c()) {
      EXPECT_GE(c, -1.0);
      EXPECT_LT(c, 1.0);
    }
    EXPECT_EQ(any.c(), sample_coefficients(5, SignRestriction::Unrestricted, seed).c());
  }
}

TEST(SampleCoefficients, RestrictionNamesRoundTrip) {
  for (auto r : {SignRestriction::Unrestricted, SignRestriction::AllPositive, SignRestriction::AllNegative,
                 SignRestriction::XPositiveZNegative, SignRestriction::XNegativeZPositive}) {
    EXPECT_EQ(sign_restriction_from_string(to_string(r)), r);
  }
  EXPECT_THROW(sign_restriction_from_string("sideways"), std::invalid_argument);
}

TEST(PerturbationCoefficients, Invariants) {
  EXPECT_THROW(PerturbationCoefficients({0.0, 0.0}, SignRestriction::Unrestricted), std::invalid_argument);
  EXPECT_THROW(PerturbationCoefficients({-0.5, 0.2}, SignRestriction::AllPositive), std::invalid_argument);
  EXPECT_THROW(PerturbationCoefficients({0.5}, SignRestriction::Unrestricted), std::invalid_argument);
}

TEST(QuadraticSchedule, SingleXTermParabola) {
  const PerturbationCoefficients c({1.0, 0.0}, SignRestriction::Unrestricted);
  const Schedule s = quadratic_random_schedule(c, 50, 1.0, 2.5);
  for (int i = 0; i <= 50; ++i) {
    const double x = i / 50.0;
    EXPECT_DOUBLE_EQ(s.value(0, i), x * (1 - x));
    EXPECT_EQ(s.value(1, i), 0.0);
  }
  EXPECT_DOUBLE_EQ(s.value(0, 25), 0.25);
  EXPECT_EQ(s.value(0, 0), 0.0);
  EXPECT_EQ(s.value(0, 50), 0.0);
}

TEST(QuadraticSchedule, EnvelopeMatchesFormulaAndSlewBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = sample_coefficients(3, SignRestriction::Unrestricted, seed);
    const double norm2 = c.squared_norm();
    double cmax = 0.0;
    for (double v : c.c()) cmax = std::max(cmax, std::abs(v));
    const double rate_bound = cmax / norm2;
    try {
      const Schedule s = quadratic_random_schedule(c, 50, 10.0, 2.5);
      EXPECT_TRUE(validate(s).empty());
      double worst_rate = 0.0;
      for (int r = 0; r < 6; ++r) {
        EXPECT_EQ(s.value(r, 0), 0.0);
        EXPECT_EQ(s.value(r, 50), 0.0);
        for (int i = 0; i <= 50; ++i) EXPECT_NEAR(s.value(r, i), (i / 50.0) * (1 - i / 50.0) * c.c()[r] / norm2, 1e-15);
        for (int i = 0; i < 50; ++i) worst_rate = std::max(worst_rate, std::abs(s.value(r, i + 1) - s.value(r, i)) * 50);
      }
      EXPECT_LE(worst_rate, rate_bound + 1e-12);
    } catch (const ScheduleRejected& e) {
      EXPECT_GT(rate_bound, 2.5 * 0.9);
    }
  }
}

TEST(QuadraticSchedule, RejectsEnvelopeBeyondBounds) {
  const PerturbationCoefficients tiny({0.01, 0.0}, SignRestriction::Unrestricted);
  // 1/||c||^2 = 1e4: far beyond both bounds.
  try {
    quadratic_random_schedule(tiny, 50, 1.0, 2.5);
    FAIL();
  } catch (const ScheduleRejected& e) {
    EXPECT_GT(e.violation().magnitude, 0.0);
  }
  const PerturbationCoefficients unit({1.0, 0.0}, SignRestriction::Unrestricted);
  EXPECT_THROW(quadratic_random_schedule(unit, 50, 0.2, 2.5), ScheduleRejected);
  EXPECT_THROW(quadratic_random_schedule(unit, 50, 1.0, 0.5), ScheduleRejected);
}

TEST(QuadraticSchedule, NormNormalizationSwitch) {
  const PerturbationCoefficients c({0.6, 0.8}, SignRestriction::Unrestricted);
  const Schedule a = quadratic_random_schedule(c, 10, 1.0, 2.5, Normalization::SquaredNorm);
  const Schedule b = quadratic_random_schedule(c, 10, 1.0, 2.5, Normalization::Norm);
  EXPECT_NEAR(a.value(0, 5), 0.25 * 0.6, 1e-15);
  EXPECT_NEAR(b.value(0, 5), 0.25 * 0.6, 1e-15);
  const PerturbationCoefficients d({2.0, 0.0}, SignRestriction::Unrestricted);
  EXPECT_NEAR(quadratic_random_schedule(d, 10, 1.0, 2.5).value(0, 5), 0.125, 1e-15);
  EXPECT_NEAR(quadratic_random_schedule(d, 10, 1.0, 2.5, Normalization::Norm).value(0, 5), 0.25, 1e-15);
}

TEST(ScheduleCsv, RoundTripIsExact) {
  Rng rng(5);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 21);
  for (int r = 0; r < 4; ++r)
    for (int i = 1; i < 20; ++i) v(r, i) = rng.uniform(-0.05, 0.05);
  const Schedule s(2, 20, 1.0, 2.5, v);
  const std::string csv = schedule_to_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,s,f_2,f_3,f_4,f_5");
  const Schedule back = schedule_from_csv(csv, 2, 1.0, 2.5);
  EXPECT_EQ(back.values(), s.values());
  EXPECT_EQ(back.intervals(), 20);
}

TEST(ScheduleCsv, DiagnosticsNameLineAndField) {
  const std::string good = schedule_to_csv(linear_schedule(1, 4, 1.0, 1.0));
  std::string bad = good;
  const auto pos = bad.find("\n2,0.5,");
  bad.replace(pos + 7, 1, "x");
  try {
    schedule_from_csv(bad, 1, 1.0, 1.0);
    FAIL();
  } catch (const IoError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("field 3"), std::string::npos) << msg;
  }
  EXPECT_THROW(schedule_from_csv("i,s,f_2\n", 1, 1.0, 1.0), IoError);
  EXPECT_THROW(schedule_from_csv("", 1, 1.0, 1.0), IoError);
}

TEST(ScheduleProperty, BoundedVariationOfAssembledOperators) {
  const QuboInstance inst = random_qubo(3, 8);
  const int N = 20;
  Rng rng(9);
  Eigen::MatrixXd raw(6, N + 1);
  for (Eigen::Index k = 0; k < raw.size(); ++k) raw(k) = rng.uniform(-1, 1);
  const double fb = inst.max_coefficient();
  const Schedule s(3, N, fb, 2.5, clip_to_admissible(raw, N, fb, 2.5));
  ASSERT_TRUE(validate(s).empty());
  const Eigen::MatrixXcd h0 = build_driver_hamiltonian(3).dense();
  const Eigen::MatrixXcd h1 = build_final_hamiltonian(inst).dense();
  const double bound = (h1 - h0).cwiseAbs().maxCoeff() / N + 6 * s.max_step();
  for (int i = 0; i < N; ++i) {
    const double diff = (assemble(inst, s, i + 1).dense() - assemble(inst, s, i).dense()).cwiseAbs().maxCoeff();
    EXPECT_LE(diff, bound + 1e-12);
  }
}
