#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "aqo/errors.hpp"
#include "aqo/lp.hpp"
#include "aqo/rng.hpp"

using namespace aqo;

namespace {

LinearProgram dense_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  LinearProgram lp;
  lp.c = c;
  lp.G = G.sparseView();
  lp.h = h;
  return lp;
}

// Optimum of a bounded 3-variable LP by enumerating every vertex.
double vertex_enumeration(const Eigen::VectorXd& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  const int m = static_cast<int>(G.rows());
  double best = INFINITY;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      for (int d = b + 1; d < m; ++d) {
        Eigen::Matrix3d A;
        A << G.row(a), G.row(b), G.row(d);
        if (std::abs(A.determinant()) < 1e-12) continue;
        const Eigen::Vector3d x = A.partialPivLu().solve(Eigen::Vector3d(h(a), h(b), h(d)));
        if (((G * x - h).array() <= 1e-9).all()) best = std::min(best, c.dot(x));
      }
    }
  }
  return best;
}

}  // namespace

TEST(Lp, TwoVariableTextbook) {
  // max x + y s.t. x <= 1, y <= 2, x + y <= 2.5, x, y >= 0.
  Eigen::MatrixXd G(5, 2);
  G << 1, 0, 0, 1, 1, 1, -1, 0, 0, -1;
  Eigen::VectorXd h(5);
  h << 1, 2, 2.5, 0, 0;
  const LpSolution s = solve_lp(dense_lp(Eigen::Vector2d(-1, -1), G, h));
  EXPECT_NEAR(s.objective, -2.5, 1e-8);
  EXPECT_NEAR(s.x.sum(), 2.5, 1e-8);
}

TEST(Lp, RandomBoundedProgramsMatchVertexEnumeration) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int extra = 6;
    Eigen::MatrixXd G(6 + extra, 3);
    Eigen::VectorXd h(6 + extra);
    G.topRows(3) = Eigen::Matrix3d::Identity();
    G.middleRows(3, 3) = -Eigen::Matrix3d::Identity();
    h.head(6).setConstant(2.0);
    for (int k = 0; k < extra; ++k) {
      for (int j = 0; j < 3; ++j) G(6 + k, j) = rng.uniform(-1, 1);
      h(6 + k) = rng.uniform(0.1, 1.5);  // keeps the origin strictly feasible
    }
    Eigen::VectorXd c(3);
    for (int j = 0; j < 3; ++j) c(j) = rng.uniform(-1, 1);
    const LpSolution s = solve_lp(dense_lp(c, G, h));
    EXPECT_NEAR(s.objective, vertex_enumeration(c, G, h), 1e-7) << "trial " << trial;
    // KKT: primal feasibility, dual feasibility, stationarity.
    EXPECT_TRUE(((G * s.x - h).array() <= 1e-7).all());
    EXPECT_TRUE((s.z.array() >= 0).all());
    EXPECT_LT((c + G.transpose() * s.z).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT(s.s.dot(s.z), 1e-6);
  }
}

TEST(Lp, InfeasibleStartPointIsAccepted) {
  Eigen::MatrixXd G(4, 2);
  G << 1, 0, -1, 0, 0, 1, 0, -1;
  Eigen::VectorXd h(4);
  h << 1, 1, 1, 1;
  const Eigen::VectorXd x0 = Eigen::Vector2d(50, -30);
  const LpSolution s = solve_lp(dense_lp(Eigen::Vector2d(1, -2), G, h), {}, &x0);
  EXPECT_NEAR(s.objective, -3.0, 1e-8);
}

TEST(Lp, InfeasibleAndUnboundedProgramsThrow) {
  Eigen::MatrixXd G(2, 1);
  G << 1, -1;
  EXPECT_THROW(solve_lp(dense_lp(Eigen::VectorXd::Ones(1), G, Eigen::Vector2d(-1, -1))), NumericalError);
  Eigen::MatrixXd G2(1, 1);
  G2 << -1;
  EXPECT_THROW(solve_lp(dense_lp(-Eigen::VectorXd::Ones(1), G2, Eigen::VectorXd::Zero(1))), NumericalError);
}

TEST(Lp, DimensionMismatchIsRejected) {
  Eigen::MatrixXd G(2, 2);
  G.setIdentity();
  EXPECT_THROW(solve_lp(dense_lp(Eigen::VectorXd::Ones(3), G, Eigen::Vector2d(1, 1))), std::invalid_argument);
}
