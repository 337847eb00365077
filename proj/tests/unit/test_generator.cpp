#include "symsel/error.hpp"
#include "symsel/generator.hpp"
#include "symsel/special.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace symsel;

TEST(Generator, ClosedFormNormalizers) {
    EXPECT_NEAR(DensityGenerator::gaussian().normalizer(), 2.0 * kPi, 1e-14);
    // nu pi Gamma(nu/2) / Gamma(nu/2 + 1) collapses to 2 pi for every nu
    for (double nu : {0.7, 1.0, 4.0, 30.0}) EXPECT_NEAR(DensityGenerator::student_t(nu).normalizer(), 2.0 * kPi, 1e-12);
}

TEST(Generator, QuadratureNormalizerAgrees) {
    EXPECT_NEAR(generator_normalizer_quadrature([](double u) { return std::exp(-0.5 * u); }, INFINITY), 2.0 * kPi, 1e-9);
    for (double nu : {1.5, 4.0, 12.0}) {
        const auto t = DensityGenerator::student_t(nu);
        EXPECT_NEAR(generator_normalizer_quadrature([&](double u) { return t(u); }, t.tail_exponent()), t.normalizer(),
                    1e-8);
    }
}

TEST(Generator, NonNormalizableRejected) {
    // g(u) = (1 + u)^-1 has pi * int = inf
    EXPECT_THROW(DensityGenerator::generic([](double u) { return 1.0 / (1.0 + u); }, 1.0), NonNormalizableError);
    EXPECT_THROW(DensityGenerator::generic([](double u) { return 1.0 / (1.0 + u); }, 2.0), NonNormalizableError);
}

TEST(Generator, GenericCarriesLabelAndSampler) {
    const auto g = DensityGenerator::generic([](double u) { return std::exp(-u); }, INFINITY,
                                             [](Rng&) { return 1.0; }, "exp");
    EXPECT_EQ(g.kind(), GeneratorKind::Generic);
    EXPECT_FALSE(g.has_closed_form());
    EXPECT_EQ(g.label(), "exp");
    EXPECT_NEAR(g.normalizer(), kPi, 1e-9);
    EXPECT_TRUE(static_cast<bool>(g.radial_sampler()));
    EXPECT_THROW(g.nu(), SpecError);
}

TEST(Generator, StudentTDomain) {
    EXPECT_THROW(DensityGenerator::student_t(0.0), DomainError);
    EXPECT_THROW(DensityGenerator::student_t(-2.0), DomainError);
    EXPECT_DOUBLE_EQ(DensityGenerator::student_t(5.0).tail_exponent(), 3.5);
}
