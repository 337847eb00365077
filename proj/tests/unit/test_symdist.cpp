#include "symsel/error.hpp"
#include "symsel/special.hpp"
#include "symsel/symdist.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace symsel;

namespace {

// Generic copies of the built-in generators, evaluated only through quadrature.
DensityGenerator generic_gaussian() {
    return DensityGenerator::generic([](double u) { return std::exp(-0.5 * u); }, INFINITY, {}, "gaussian-generic");
}

DensityGenerator generic_t(double nu) {
    return DensityGenerator::generic([nu](double u) { return std::pow(1.0 + u / nu, -0.5 * (nu + 2.0)); },
                                     0.5 * (nu + 2.0), {}, "t-generic");
}

}  // namespace

TEST(Symdist, MarginalsMatchReference) {
    boost::math::normal_distribution<double> n;
    boost::math::students_t_distribution<double> t4(4.0);
    const auto g = DensityGenerator::gaussian();
    const auto t = DensityGenerator::student_t(4.0);
    for (double z : {-5.0, -1.0, 0.0, 0.4, 3.0}) {
        EXPECT_NEAR(marginal_z_pdf(z, g), boost::math::pdf(n, z), 1e-15);
        EXPECT_NEAR(marginal_z_pdf(z, t), boost::math::pdf(t4, z), 1e-14);
        EXPECT_NEAR(marginal_z_cdf(z, t), boost::math::cdf(t4, z), 1e-13);
        EXPECT_NEAR(quadrature_path::marginal_z_pdf(z, generic_t(4.0)), boost::math::pdf(t4, z), 1e-9);
    }
}

TEST(Symdist, ClosedFormGMatchesQuadrature) {
    for (const auto& [closed, generic] :
         {std::pair{DensityGenerator::gaussian(), generic_gaussian()},
          std::pair{DensityGenerator::student_t(3.0), generic_t(3.0)},
          std::pair{DensityGenerator::student_t(12.0), generic_t(12.0)}}) {
        for (double r : {-2.5, 0.0, 1.3}) {
            for (double x : {-6.0, -1.0, 0.0, 0.7, 4.0}) {
                EXPECT_NEAR(G_function(x, r, closed), G_function(x, r, generic), 1e-9) << closed.label();
                EXPECT_NEAR(quadrature_path::G_function(x, r, closed), G_function(x, r, closed), 1e-9);
            }
        }
    }
}

TEST(Symdist, HIsMarginalCdfForEllipticalLaws) {
    // rho Z1 + sqrt(1 - rho^2) Z2 has the same law as Z1
    for (const auto& g : {DensityGenerator::gaussian(), DensityGenerator::student_t(4.0)}) {
        for (double rho : {-0.8, 0.0, 0.45}) {
            for (double x : {-3.0, -0.5, 0.0, 2.0}) {
                EXPECT_NEAR(H_function(x, rho, g), marginal_z_cdf(x, g), 1e-14);
                EXPECT_NEAR(quadrature_path::H_function(x, rho, g), marginal_z_cdf(x, g), 1e-8) << g.label();
            }
        }
    }
    EXPECT_NEAR(H_function(0.0, 0.3, generic_t(5.0)), 0.5, 1e-9);
}

TEST(Symdist, ConditionalDensityIsDerivativeOfG) {
    const auto t = DensityGenerator::student_t(4.0);
    for (double r : {-1.0, 0.5}) {
        for (double x : {-2.0, 0.3, 1.7}) {
            const double h = 1e-5;
            const double fd = (G_function(x + h, r, t) - G_function(x - h, r, t)) / (2 * h);
            EXPECT_NEAR(conditional_z2_pdf(x, r, t), fd, 1e-8);
        }
    }
}

TEST(Symdist, SelectionPdfIntegratesToOne) {
    const auto g = generic_t(4.0);
    boost::math::quadrature::gauss_kronrod<double, 21> gk;
    const double total = gk.integrate([&](double u) { return quadrature_path::selection_pdf(u, 0.6, g); },
                                      -INFINITY, INFINITY, 10, 1e-10);
    EXPECT_NEAR(total, 1.0, 1e-7);
}

TEST(Symdist, LogFormsStayFiniteInTails) {
    const auto t = DensityGenerator::student_t(4.0);
    EXPECT_TRUE(std::isfinite(log_G_function(-1e8, 0.5, t)));
    EXPECT_TRUE(std::isfinite(log_G_function(-60.0, 0.0, DensityGenerator::gaussian())));
    EXPECT_TRUE(std::isfinite(log_H_function(-80.0, 0.2, DensityGenerator::gaussian())));
    EXPECT_NEAR(log_H_function(3.0, 0.2, t), std::log(H_function(3.0, 0.2, t)), 1e-14);
}

TEST(Symdist, RejectsInvalidCorrelation) {
    EXPECT_THROW(H_function(0.0, 1.0, DensityGenerator::gaussian()), DomainError);
    EXPECT_THROW(quadrature_path::H_function(0.0, -1.0, generic_gaussian()), DomainError);
}
