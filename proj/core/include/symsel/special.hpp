#pragma once

// Univariate normal and Student-t distribution functions, plus the
// regularized incomplete beta function they are built on. Every CDF has a
// log-space companion that stays finite far into the tails.

namespace symsel {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
inline constexpr double kLn2 = 0.693147180559945309417232121458;

double normal_pdf(double x);
double normal_log_pdf(double x);
double normal_cdf(double x);
double normal_log_cdf(double x);

/// Inverse of normal_cdf on (0, 1); returns -inf/+inf at 0/1.
double normal_quantile(double p);

/// log of the regularized incomplete beta I_x(a, b). The complement
/// y = 1 - x is passed separately so callers can supply it without
/// cancellation.
double log_ibeta(double a, double b, double x, double y);
double ibeta(double a, double b, double x, double y);

/// Standard Student-t with nu degrees of freedom. Normalizing constants are
/// computed once at construction.
class StudentT {
public:
    explicit StudentT(double nu);

    double nu() const noexcept { return nu_; }

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;
    double log_cdf(double x) const;

    /// d/dx log pdf(x) = -(nu + 1) x / (nu + x^2).
    double log_pdf_slope(double x) const noexcept;

private:
    /// log P(T <= -|x|).
    double log_lower_tail(double x) const;

    double nu_;
    double log_norm_;
    double log_beta_;
};

double t_pdf(double x, double nu);
double t_cdf(double x, double nu);

}  // namespace symsel
