#include "symsel/generator.hpp"

#include "symsel/error.hpp"
#include "symsel/quadrature.hpp"
#include "symsel/special.hpp"

#include <cmath>

namespace symsel {

DensityGenerator DensityGenerator::gaussian() {
    DensityGenerator g;
    g.kind_ = GeneratorKind::Gaussian;
    g.normalizer_ = 2.0 * kPi;
    g.label_ = "normal";
    return g;
}

DensityGenerator DensityGenerator::student_t(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("Student-t generator needs nu > 0");
    DensityGenerator g;
    g.kind_ = GeneratorKind::StudentT;
    g.nu_ = nu;
    g.t_nu_.emplace(nu);
    g.t_nu1_.emplace(nu + 1.0);
    // nu * pi * Gamma(nu/2) / Gamma((nu+2)/2), which is exactly 2 pi
    g.normalizer_ = 2.0 * kPi;
    g.tail_exponent_ = 0.5 * (nu + 2.0);
    g.label_ = "t";
    return g;
}

DensityGenerator DensityGenerator::generic(std::function<double(double)> fn, double tail_exponent,
                                           RadialSampler radial, std::string label) {
    if (!fn) throw SpecError("generic density generator needs a callable");
    DensityGenerator g;
    g.kind_ = GeneratorKind::Generic;
    g.tail_exponent_ = tail_exponent;
    g.normalizer_ = generator_normalizer_quadrature(fn, tail_exponent);
    g.g_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
    g.radial_ = std::move(radial);
    g.label_ = std::move(label);
    return g;
}

double DensityGenerator::nu() const {
    if (kind_ != GeneratorKind::StudentT) throw SpecError("degrees of freedom requested from a non-t generator");
    return nu_;
}

const StudentT& DensityGenerator::t_nu() const {
    if (kind_ != GeneratorKind::StudentT) throw SpecError("t distribution requested from a non-t generator");
    return *t_nu_;
}

const StudentT& DensityGenerator::t_nu_plus_one() const {
    if (kind_ != GeneratorKind::StudentT) throw SpecError("t distribution requested from a non-t generator");
    return *t_nu1_;
}

double DensityGenerator::operator()(double u) const {
    switch (kind_) {
        case GeneratorKind::Gaussian:
            return std::exp(-0.5 * u);
        case GeneratorKind::StudentT:
            return std::pow(1.0 + u / nu_, -0.5 * (nu_ + 2.0));
        case GeneratorKind::Generic:
            return (*g_)(u);
    }
    return 0.0;
}

double generator_normalizer(const DensityGenerator& g) { return g.normalizer(); }

double generator_normalizer_quadrature(const std::function<double(double)>& g, double tail_exponent) {
    if (!(tail_exponent > 1.0)) {
        throw NonNormalizableError("density generator tail decays like u^-" + std::to_string(tail_exponent) +
                                   "; need an exponent above 1");
    }
    double value = 0.0;
    try {
        value = integrate(g, 0.0, std::numeric_limits<double>::infinity(), {1e-12, 1e-10, 20}).value;
    } catch (const NumericError& e) {
        throw NonNormalizableError(std::string("density generator integral did not converge: ") + e.what());
    }
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw NonNormalizableError("density generator integral is not a positive finite number");
    }
    return kPi * value;
}

}  // namespace symsel
