#include "symsel/bfgs.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace symsel;

TEST(Bfgs, Rosenbrock) {
    Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    const auto r = minimize_bfgs(f, Eigen::Vector2d(-1.2, 1.0));
    EXPECT_TRUE(r.converged) << r.message;
    EXPECT_NEAR(r.x[0], 1.0, 1e-5);
    EXPECT_NEAR(r.x[1], 1.0, 1e-5);
}

TEST(Bfgs, IllConditionedQuadratic) {
    const Eigen::Vector3d d(1.0, 100.0, 1e4);
    Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g = d.cwiseProduct(x - Eigen::Vector3d::Ones());
        return 0.5 * (x - Eigen::Vector3d::Ones()).dot(g);
    };
    const auto r = minimize_bfgs(f, Eigen::Vector3d::Zero());
    EXPECT_TRUE(r.converged);
    EXPECT_LT((r.x - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Bfgs, InfeasibleRegionIsAvoided) {
    // log barrier at x <= 0; minimum at x = 1
    Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g.resize(1);
        if (x[0] <= 0.0) return std::numeric_limits<double>::infinity();
        g[0] = 1.0 - 1.0 / x[0];
        return x[0] - std::log(x[0]);
    };
    const auto r = minimize_bfgs(f, Eigen::VectorXd::Constant(1, 20.0));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 1.0, 1e-6);
}

TEST(Bfgs, IterationCapReported) {
    Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    BfgsOptions o;
    o.max_iterations = 2;
    const auto r = minimize_bfgs(f, Eigen::Vector2d(-1.2, 1.0), o);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 2);
}
