#pragma once

// Distribution functions of the standardized pair (Z1, Z2) underlying a
// bivariate symmetric law with generator g_c:
//
//   joint density   g_c(x^2 + y^2) / Z
//   G(x; r)         conditional CDF of Z2 given Z1 = r
//   H(x; rho)       P(rho Z1 + sqrt(1 - rho^2) Z2 > -x)
//
// Gaussian and Student-t generators dispatch to closed forms. Generic
// generators go through the quadrature routines in namespace `quadrature_path`,
// which also accept the built-in kinds so the two routes can be compared.

#include "symsel/generator.hpp"
#include "symsel/quadrature.hpp"

namespace symsel {

double marginal_z_pdf(double z, const DensityGenerator& g);
double marginal_z_log_pdf(double z, const DensityGenerator& g);
double marginal_z_cdf(double z, const DensityGenerator& g);

/// Density of Z2 at w given Z1 = r (the x-derivative of G).
double conditional_z2_pdf(double w, double r, const DensityGenerator& g);

double G_function(double x, double r, const DensityGenerator& g);
double log_G_function(double x, double r, const DensityGenerator& g);

double H_function(double x, double rho, const DensityGenerator& g);
double log_H_function(double x, double rho, const DensityGenerator& g);

/// Density of rho Z1 + sqrt(1 - rho^2) Z2 at x (the x-derivative of H).
double selection_pdf(double x, double rho, const DensityGenerator& g);

namespace quadrature_path {

/// Tolerance used for the outer integrals; nested inner integrals run tighter.
inline constexpr QuadratureTolerance kTolerance{1e-10, 1e-8, 20};

/// int_{-inf}^{inf} g_c(z^2 + y^2) dy
double marginal_kernel(double z, const DensityGenerator& g);

/// int_{x}^{inf} g_c(r^2 + w^2) dw
double upper_kernel(double x, double r, const DensityGenerator& g);

/// int_{-inf}^{x} g_c(r^2 + w^2) dw
double lower_kernel(double x, double r, const DensityGenerator& g);

double marginal_z_pdf(double z, const DensityGenerator& g);
double G_function(double x, double r, const DensityGenerator& g);
double log_G_function(double x, double r, const DensityGenerator& g);

/// Density of rho Z1 + sqrt(1 - rho^2) Z2 at u from the convolution integral.
double selection_pdf(double u, double rho, const DensityGenerator& g);

/// H from the double integral
///   1/(c Z) int_{-x}^{inf} int_R g_c(s^2 + ((u - rho s)/c)^2) ds du,  c = sqrt(1 - rho^2),
/// i.e. the convolution form with zeta = rho s, which stays regular at rho = 0.
double H_function(double x, double rho, const DensityGenerator& g);
double log_H_function(double x, double rho, const DensityGenerator& g);

}  // namespace quadrature_path

}  // namespace symsel
