#pragma once

#include "symsel/random.hpp"
#include "symsel/special.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace symsel {

enum class GeneratorKind { Gaussian, StudentT, Generic };

/// Draws the radius R of the stochastic representation Z = R * (D V1, sqrt(1 - D^2) V2).
using RadialSampler = std::function<double(Rng&)>;

/// Density generator g_c of a bivariate symmetric law together with its
/// normalizer Z = pi * int_0^inf g_c(u) du.
///
/// Gaussian and Student-t carry closed forms for everything downstream.
/// Generic generators are evaluated by quadrature and must declare a tail
/// decay exponent p with g_c(u) = O(u^-p) as u -> inf; p = +inf means faster
/// than any power. The generator is normalizable only when p > 1.
class DensityGenerator {
public:
    static DensityGenerator gaussian();
    static DensityGenerator student_t(double nu);
    static DensityGenerator generic(std::function<double(double)> g, double tail_exponent,
                                    RadialSampler radial = {}, std::string label = "generic");

    GeneratorKind kind() const noexcept { return kind_; }
    bool has_closed_form() const noexcept { return kind_ != GeneratorKind::Generic; }

    /// Degrees of freedom; throws unless kind() == StudentT.
    double nu() const;
    /// t(nu) and t(nu + 1), built once; throw unless kind() == StudentT.
    const StudentT& t_nu() const;
    const StudentT& t_nu_plus_one() const;

    /// g_c(u) for u >= 0.
    double operator()(double u) const;

    double normalizer() const noexcept { return normalizer_; }
    double tail_exponent() const noexcept { return tail_exponent_; }
    const RadialSampler& radial_sampler() const noexcept { return radial_; }
    const std::string& label() const noexcept { return label_; }

private:
    DensityGenerator() = default;

    GeneratorKind kind_ = GeneratorKind::Gaussian;
    double nu_ = 0.0;
    std::optional<StudentT> t_nu_, t_nu1_;
    double normalizer_ = 0.0;
    double tail_exponent_ = std::numeric_limits<double>::infinity();
    std::shared_ptr<const std::function<double(double)>> g_;
    RadialSampler radial_;
    std::string label_;
};

/// pi * int_0^inf g_c(u) du; closed form for the built-in kinds.
double generator_normalizer(const DensityGenerator& g);

/// Same integral, always by quadrature. Throws NonNormalizableError when the
/// declared tail is not integrable or the integral diverges numerically.
double generator_normalizer_quadrature(const std::function<double(double)>& g, double tail_exponent);

}  // namespace symsel
