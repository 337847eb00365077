#pragma once

#include <functional>

namespace symsel {

struct QuadratureTolerance {
    double absolute = 1e-10;
    double relative = 1e-8;
    unsigned max_depth = 20;
};

struct QuadratureResult {
    double value;
    double error;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod (21-point) integration of f over [a, b]. Either
/// limit may be infinite; infinite ranges are mapped onto a finite interval
/// by a rational substitution. Throws NumericError when the error estimate
/// exceeds max(absolute, relative * integral of |f|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureTolerance& tol = {});

}  // namespace symsel
