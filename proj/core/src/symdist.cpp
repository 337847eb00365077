#include "symsel/symdist.hpp"

#include "symsel/error.hpp"
#include "symsel/special.hpp"

#include <cmath>
#include <limits>

namespace symsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr QuadratureTolerance kInnerTolerance{1e-14, 1e-11, 20};

void check_rho(double rho) {
    if (!(std::fabs(rho) < 1.0)) throw DomainError("correlation must lie in (-1, 1)");
}

double t_scale(double nu, double r) { return std::sqrt((nu + 1.0) / (nu + r * r)); }

}  // namespace

// ---------------------------------------------------------------------------
// quadrature path

namespace quadrature_path {

double marginal_kernel(double z, const DensityGenerator& g) {
    const double z2 = z * z;
    return 2.0 * integrate([&](double y) { return g(z2 + y * y); }, 0.0, kInf, kInnerTolerance).value;
}

double upper_kernel(double x, double r, const DensityGenerator& g) {
    const double r2 = r * r;
    auto f = [&](double w) { return g(r2 + w * w); };
    if (x >= 0.0) return integrate(f, x, kInf, kInnerTolerance).value;
    return integrate(f, 0.0, kInf, kInnerTolerance).value + integrate(f, x, 0.0, kInnerTolerance).value;
}

double lower_kernel(double x, double r, const DensityGenerator& g) { return upper_kernel(-x, r, g); }

double marginal_z_pdf(double z, const DensityGenerator& g) { return marginal_kernel(z, g) / g.normalizer(); }

double G_function(double x, double r, const DensityGenerator& g) {
    const double total = marginal_kernel(r, g);
    if (x <= 0.0) return upper_kernel(-x, r, g) / total;
    return 1.0 - upper_kernel(x, r, g) / total;
}

double log_G_function(double x, double r, const DensityGenerator& g) {
    const double total = marginal_kernel(r, g);
    if (x <= 0.0) return std::log(upper_kernel(-x, r, g)) - std::log(total);
    return std::log1p(-upper_kernel(x, r, g) / total);
}

double selection_pdf(double u, double rho, const DensityGenerator& g) {
    check_rho(rho);
    const double c = std::sqrt(1.0 - rho * rho);
    auto inner = [&](double s) {
        const double v = (u - rho * s) / c;
        return g(s * s + v * v);
    };
    // the quadratic form is minimized at s = rho * u; split there
    const double s0 = rho * u;
    const double mass = integrate(inner, -kInf, s0, kInnerTolerance).value +
                        integrate(inner, s0, kInf, kInnerTolerance).value;
    return mass / (c * g.normalizer());
}

namespace {

// P(rho Z1 + c Z2 > t) for t >= 0.
double selection_upper_tail(double t, double rho, const DensityGenerator& g) {
    return integrate([&](double u) { return quadrature_path::selection_pdf(u, rho, g); }, t, kInf, {1e-13, 1e-9, 20}).value;
}

}  // namespace

double H_function(double x, double rho, const DensityGenerator& g) {
    check_rho(rho);
    if (x <= 0.0) return selection_upper_tail(-x, rho, g);
    return 1.0 - selection_upper_tail(x, rho, g);
}

double log_H_function(double x, double rho, const DensityGenerator& g) {
    check_rho(rho);
    if (x <= 0.0) return std::log(selection_upper_tail(-x, rho, g));
    return std::log1p(-selection_upper_tail(x, rho, g));
}

}  // namespace quadrature_path

// ---------------------------------------------------------------------------
// dispatching API

double marginal_z_log_pdf(double z, const DensityGenerator& g) {
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_log_pdf(z);
        case GeneratorKind::StudentT:
            return g.t_nu().log_pdf(z);
        case GeneratorKind::Generic:
            return std::log(quadrature_path::marginal_z_pdf(z, g));
    }
    return 0.0;
}

double marginal_z_pdf(double z, const DensityGenerator& g) {
    if (g.kind() == GeneratorKind::Generic) return quadrature_path::marginal_z_pdf(z, g);
    return std::exp(marginal_z_log_pdf(z, g));
}

double marginal_z_cdf(double z, const DensityGenerator& g) {
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_cdf(z);
        case GeneratorKind::StudentT:
            return g.t_nu().cdf(z);
        case GeneratorKind::Generic:
            // Z1 and rho Z1 + c Z2 share one law, so rho = 0 is the marginal
            return quadrature_path::H_function(z, 0.0, g);
    }
    return 0.0;
}

double conditional_z2_pdf(double w, double r, const DensityGenerator& g) {
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_pdf(w);
        case GeneratorKind::StudentT: {
            const double s = t_scale(g.nu(), r);
            return s * g.t_nu_plus_one().pdf(s * w);
        }
        case GeneratorKind::Generic:
            return g(r * r + w * w) / quadrature_path::marginal_kernel(r, g);
    }
    return 0.0;
}

double G_function(double x, double r, const DensityGenerator& g) {
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_cdf(x);
        case GeneratorKind::StudentT:
            return g.t_nu_plus_one().cdf(t_scale(g.nu(), r) * x);
        case GeneratorKind::Generic:
            return quadrature_path::G_function(x, r, g);
    }
    return 0.0;
}

double log_G_function(double x, double r, const DensityGenerator& g) {
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_log_cdf(x);
        case GeneratorKind::StudentT:
            return g.t_nu_plus_one().log_cdf(t_scale(g.nu(), r) * x);
        case GeneratorKind::Generic:
            return quadrature_path::log_G_function(x, r, g);
    }
    return 0.0;
}

double H_function(double x, double rho, const DensityGenerator& g) {
    check_rho(rho);
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_cdf(x);
        case GeneratorKind::StudentT:
            return g.t_nu().cdf(x);
        case GeneratorKind::Generic:
            return quadrature_path::H_function(x, rho, g);
    }
    return 0.0;
}

double log_H_function(double x, double rho, const DensityGenerator& g) {
    check_rho(rho);
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_log_cdf(x);
        case GeneratorKind::StudentT:
            return g.t_nu().log_cdf(x);
        case GeneratorKind::Generic:
            return quadrature_path::log_H_function(x, rho, g);
    }
    return 0.0;
}

double selection_pdf(double x, double rho, const DensityGenerator& g) {
    check_rho(rho);
    switch (g.kind()) {
        case GeneratorKind::Gaussian:
            return normal_pdf(x);
        case GeneratorKind::StudentT:
            return g.t_nu().pdf(x);
        case GeneratorKind::Generic:
            return quadrature_path::selection_pdf(x, rho, g);
    }
    return 0.0;
}

}  // namespace symsel
