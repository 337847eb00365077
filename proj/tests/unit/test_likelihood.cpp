#include "symsel/error.hpp"
#include "symsel/likelihood.hpp"
#include "symsel/special.hpp"

#include "helpers.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace symsel;
using symsel::testing::scenario_data;
using symsel::testing::scenario_theta;

namespace {

// Bivariate t with correlation rho, integrated directly over the selection region.
double t_selected_oracle(double y, const RowPredictors& p, double nu) {
    const double c2 = 1.0 - p.rho * p.rho;
    const double r = (y - p.mu1) / p.sigma;
    auto joint = [&](double u) {
        const double v = u - p.mu2;
        const double q = (r * r - 2.0 * p.rho * r * v + v * v) / c2;
        return std::pow(1.0 + q / nu, -0.5 * (nu + 2.0)) / (2.0 * kPi * std::sqrt(c2));
    };
    boost::math::quadrature::gauss_kronrod<double, 31> gk;
    return std::log(gk.integrate(joint, 0.0, INFINITY, 15, 1e-13) / p.sigma);
}

double normal_selected_oracle(double y, const RowPredictors& p) {
    boost::math::normal_distribution<double> n;
    const double r = (y - p.mu1) / p.sigma;
    const double z = (p.mu2 + p.rho * r) / std::sqrt(1.0 - p.rho * p.rho);
    return std::log(boost::math::pdf(n, r) / p.sigma * boost::math::cdf(n, z));
}

double cond_mass(const RowPredictors& p, const DensityGenerator& g) {
    boost::math::quadrature::gauss_kronrod<double, 31> gk;
    return gk.integrate([&](double y) { return cond_density(y, p, g); }, -INFINITY, INFINITY, 15, 1e-12);
}

}  // namespace

TEST(Likelihood, ObservationDensityMatchesOracles) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 10; ++k) {
        const RowPredictors p{u(rng), u(rng), std::exp(0.5 * u(rng)), 0.6 * u(rng)};
        const double y = p.mu1 + 2.0 * u(rng);
        EXPECT_NEAR(obs_logdensity(y, 1, p, DensityGenerator::gaussian()), normal_selected_oracle(y, p), 1e-12);
        EXPECT_NEAR(obs_logdensity(y, 1, p, DensityGenerator::student_t(4.0)), t_selected_oracle(y, p, 4.0), 1e-10);
        EXPECT_NEAR(obs_logdensity(y, 0, p, DensityGenerator::gaussian()), std::log(normal_cdf(-p.mu2)), 1e-13);
        EXPECT_NEAR(obs_logdensity(y, 0, p, DensityGenerator::student_t(4.0)), std::log(t_cdf(-p.mu2, 4.0)), 1e-13);
    }
}

TEST(Likelihood, ConditionalDensityIntegratesToOne) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& g : {DensityGenerator::gaussian(), DensityGenerator::student_t(3.0)}) {
        for (int k = 0; k < 5; ++k) {
            const RowPredictors p{2.0 * u(rng), 1.5 * u(rng), std::exp(0.4 * u(rng)), 0.9 * u(rng)};
            EXPECT_NEAR(cond_mass(p, g), 1.0, 1e-8) << g.label();
        }
    }
}

TEST(Likelihood, GenericGeneratorReproducesStudentT) {
    const auto data = scenario_data(1, 60, 5);
    const double nu = 4.0;
    auto theta = scenario_theta(1);
    const auto generic = DensityGenerator::generic([nu](double s) { return std::pow(1.0 + s / nu, -0.5 * (nu + 2.0)); },
                                                   0.5 * (nu + 2.0));
    EXPECT_NEAR(loglik(ModelSpec::generic(generic), theta, data), loglik(ModelSpec::student_t_fixed(nu), theta, data),
                1e-6);
}

TEST(Likelihood, GaussianIsLargeNuLimit) {
    const auto data = scenario_data(1, 200, 17, Family::Normal);
    const auto theta = scenario_theta(1);
    EXPECT_NEAR(loglik(ModelSpec::student_t_fixed(1e6), theta, data), loglik(ModelSpec::normal(), theta, data), 1e-3);
}

class ScoreCheck : public ::testing::TestWithParam<int> {};

TEST_P(ScoreCheck, AnalyticMatchesCentralDifferences) {
    const auto data = scenario_data(1, 200, 100 + static_cast<std::uint64_t>(GetParam()));
    std::mt19937_64 rng(GetParam());
    std::normal_distribution<double> jitter(0.0, 0.25);
    for (const auto& spec : {ModelSpec::normal(), ModelSpec::student_t(), ModelSpec::student_t_fixed(6.0)}) {
        ParamVector theta = scenario_theta(1, spec.estimates_nu() ? std::optional<double>(5.0) : std::nullopt);
        Vector flat = theta.flatten();
        for (Eigen::Index j = 0; j < flat.size(); ++j) flat[j] += jitter(rng);
        theta = ParamVector::unflatten(theta.layout(), flat);

        const Vector analytic = score(spec, theta, data);
        // independent central differences of loglik
        for (Eigen::Index j = 0; j < flat.size(); ++j) {
            const double h = 1e-6 * std::max(1.0, std::fabs(flat[j]));
            Vector up = flat, dn = flat;
            up[j] += h;
            dn[j] -= h;
            const double fd = (loglik(spec, ParamVector::unflatten(theta.layout(), up), data) -
                               loglik(spec, ParamVector::unflatten(theta.layout(), dn), data)) /
                              (2 * h);
            EXPECT_LT(std::fabs(analytic[j] - fd) / std::max(1.0, std::fabs(fd)), 1e-5)
                << spec.label() << " coordinate " << j;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Points, ScoreCheck, ::testing::Range(0, 4));

TEST(Likelihood, LoglikAndScoreAgreeWithParts) {
    const auto data = scenario_data(2, 150, 9);
    const auto spec = ModelSpec::student_t();
    const auto theta = scenario_theta(2, 4.0);
    const auto ls = loglik_and_score(spec, theta, data);
    EXPECT_NEAR(ls.value, loglik(spec, theta, data), 1e-10);
    EXPECT_LT((ls.gradient - numerical_score(spec, theta, data)).cwiseAbs().maxCoeff(), 1e-4);
    const Vector c = loglik_contributions(spec, theta, data);
    EXPECT_NEAR(c.sum(), ls.value, 1e-9);
}

TEST(Likelihood, PairwiseSum) {
    std::vector<double> v(1001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.1 * static_cast<double>(i);
    EXPECT_NEAR(pairwise_sum(v.data(), v.size()), 0.1 * 1000.0 * 1001.0 / 2.0, 1e-9);
    EXPECT_EQ(pairwise_sum(v.data(), 0), 0.0);
}

TEST(Likelihood, NonFiniteContributionNamesRow) {
    auto data = scenario_data(1, 50, 2);
    ParamVector theta = scenario_theta(1);
    theta.lambda[0] = 800.0;  // sigma overflows
    try {
        loglik(ModelSpec::normal(), theta, data);
        FAIL() << "expected a NonFiniteError";
    } catch (const NonFiniteError& e) {
        EXPECT_LT(e.row(), data.size());
    } catch (const DomainError&) {
        SUCCEED();
    }
}
