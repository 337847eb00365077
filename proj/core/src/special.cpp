#include "symsel/special.hpp"

#include "symsel/error.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace symsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt1_2 = 0.707106781186547524400844362105;

// Below this point Phi(x) < 1e-280 and the asymptotic series is used.
constexpr double kNormalTailCut = -36.0;

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2); the caller swaps arguments otherwise.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 200000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                           ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")",
                       h, 0.0);
}

// log Gamma(a + d) - log Gamma(a) without the cancellation of two lgammas
double log_gamma_ratio(double a, double d) { return -std::log(boost::math::tgamma_delta_ratio(a, d)); }

double log_beta_fn(double a, double b) {
    if (a < b) std::swap(a, b);
    return std::lgamma(b) - log_gamma_ratio(a, b);
}

// log_x and log_y are passed in so callers can form them without rounding x
// first; with large a that rounding is amplified a-fold.
double log_ibeta_impl(double a, double b, double x, double y, double log_beta, double log_x, double log_y) {
    if (x <= 0.0) return -kInf;
    if (y <= 0.0) return 0.0;
    const double log_front = a * log_x + b * log_y - log_beta;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return log_front + std::log(beta_continued_fraction(a, b, x)) - std::log(a);
    }
    const double upper = std::exp(log_front + std::log(beta_continued_fraction(b, a, y)) - std::log(b));
    return std::log1p(-upper);
}

}  // namespace

double normal_pdf(double x) { return std::exp(normal_log_pdf(x)); }

double normal_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double normal_log_cdf(double x) {
    if (x > 5.0) return std::log1p(-0.5 * std::erfc(x * kSqrt1_2));
    if (x > kNormalTailCut) return std::log(0.5 * std::erfc(-x * kSqrt1_2));
    // Mills-ratio expansion: Phi(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - ...)
    const double inv2 = 1.0 / (x * x);
    double term = 1.0;
    double series = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) * inv2;
        series += term;
    }
    return normal_log_pdf(x) - std::log(-x) + std::log(series);
}

double normal_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) throw DomainError("normal_quantile: p must lie in [0, 1]");
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;

    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int it = 0; it < 2; ++it) {
        // work on the smaller tail to keep the residual accurate
        const double e = (x < 0.0) ? normal_cdf(x) - p : (1.0 - p) - normal_cdf(-x);
        const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
        x = x - u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double log_ibeta(double a, double b, double x, double y) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_ibeta: a and b must be positive");
    if (x < 0.0 || y < 0.0 || std::fabs(x + y - 1.0) > 1e-12) {
        throw DomainError("log_ibeta: need 0 <= x <= 1 and y = 1 - x");
    }
    return log_ibeta_impl(a, b, x, y, log_beta_fn(a, b), std::log(x), std::log(y));
}

double ibeta(double a, double b, double x, double y) { return std::exp(log_ibeta(a, b, x, y)); }

StudentT::StudentT(double nu) : nu_(nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("Student-t degrees of freedom must be positive and finite");
    log_norm_ = log_gamma_ratio(0.5 * nu, 0.5) - 0.5 * std::log(nu * kPi);
    log_beta_ = log_beta_fn(0.5 * nu, 0.5);
}

double StudentT::log_pdf(double x) const {
    return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_);
}

double StudentT::pdf(double x) const { return std::exp(log_pdf(x)); }

double StudentT::log_lower_tail(double x) const {
    const double x2 = x * x;
    const double w = nu_ / (nu_ + x2);
    const double wc = x2 / (nu_ + x2);
    // Boost is accurate wherever the tail is representable; the log-space
    // fraction below covers the underflow region
    const double direct = boost::math::ibetac(0.5, 0.5 * nu_, wc);
    if (direct > 1e-280) return std::log(0.5 * direct);
    const double log_w = -std::log1p(x2 / nu_);
    const double log_wc = 2.0 * std::log(std::fabs(x)) - std::log(nu_ + x2);
    return -kLn2 + log_ibeta_impl(0.5 * nu_, 0.5, w, wc, log_beta_, log_w, log_wc);
}

double StudentT::log_cdf(double x) const {
    if (std::isnan(x)) return x;
    if (x == -kInf) return -kInf;
    if (x == kInf) return 0.0;
    const double lt = log_lower_tail(x);
    return (x < 0.0) ? lt : std::log1p(-std::exp(lt));
}

double StudentT::cdf(double x) const {
    if (std::isnan(x)) return x;
    if (x == -kInf) return 0.0;
    if (x == kInf) return 1.0;
    const double tail = std::exp(log_lower_tail(x));
    return (x < 0.0) ? tail : 1.0 - tail;
}

double StudentT::log_pdf_slope(double x) const noexcept { return -(nu_ + 1.0) * x / (nu_ + x * x); }

double t_pdf(double x, double nu) { return StudentT(nu).pdf(x); }

double t_cdf(double x, double nu) { return StudentT(nu).cdf(x); }

}  // namespace symsel
