#include "symsel/quadrature.hpp"

#include "symsel/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace symsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxIntervals = 4000;

struct Panel {
    double a, b;
    double value, error, l1;
    unsigned depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// One 21-point Kronrod panel with the QUADPACK error scaling; Boost's raw
// |K - G| is far too pessimistic for smooth integrands.
Panel kronrod_panel(const std::function<double(double)>& f, double a, double b, unsigned depth) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    static constexpr double wg[5] = {0.29552422471475287, 0.26926671930999635, 0.21908636251598204,
                                     0.14945134915058059, 0.066671344308688138};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[21];
    fv[0] = f(c);
    for (std::size_t i = 1; i < 11; ++i) {
        fv[2 * i - 1] = f(c - h * x[i]);
        fv[2 * i] = f(c + h * x[i]);
    }
    for (double v : fv) {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "integrand is not finite on [" << a << ", " << b << "]";
            throw NumericError(msg.str());
        }
    }
    double k = wk[0] * fv[0], g = 0.0, abs = wk[0] * std::fabs(fv[0]);
    for (std::size_t i = 1; i < 11; ++i) {
        const double s = fv[2 * i - 1] + fv[2 * i];
        k += wk[i] * s;
        abs += wk[i] * (std::fabs(fv[2 * i - 1]) + std::fabs(fv[2 * i]));
        if (i % 2 == 1) g += wg[i / 2] * s;
    }
    const double mean = 0.5 * k;
    double asc = wk[0] * std::fabs(fv[0] - mean);
    for (std::size_t i = 1; i < 11; ++i) asc += wk[i] * (std::fabs(fv[2 * i - 1] - mean) + std::fabs(fv[2 * i] - mean));
    const double ah = std::fabs(h);
    double err = std::fabs((k - g) * h);
    asc *= ah;
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    err = std::max(err, 50.0 * kEps * abs * ah);
    return {a, b, k * h, err, abs * ah, depth};
}

QuadratureResult adaptive(const std::function<double(double)>& f, double a, double b, const QuadratureTolerance& tol) {
    std::priority_queue<Panel> open;
    open.push(kronrod_panel(f, a, b, 0));
    std::vector<Panel> done;
    double value = open.top().value, error = open.top().error, l1 = open.top().l1;
    std::size_t count = 1;
    while (!open.empty() && error > std::max(tol.absolute, tol.relative * l1) && count < kMaxIntervals) {
        const Panel p = open.top();
        open.pop();
        if (p.depth >= tol.max_depth) {
            done.push_back(p);
            continue;
        }
        const double m = 0.5 * (p.a + p.b);
        const Panel left = kronrod_panel(f, p.a, m, p.depth + 1);
        const Panel right = kronrod_panel(f, m, p.b, p.depth + 1);
        value += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        l1 += left.l1 + right.l1 - p.l1;
        open.push(left);
        open.push(right);
        ++count;
    }
    // re-sum to shed the drift of the running updates
    value = error = l1 = 0.0;
    for (const auto& p : done) value += p.value, error += p.error, l1 += p.l1;
    while (!open.empty()) {
        value += open.top().value, error += open.top().error, l1 += open.top().l1;
        open.pop();
    }
    if (!std::isfinite(value) || error > std::max(tol.absolute, tol.relative * l1)) {
        std::ostringstream msg;
        msg << "quadrature did not converge on [" << a << ", " << b << "]: estimate " << value << ", error " << error
            << ", |f| integral " << l1;
        throw NumericError(msg.str(), value, error);
    }
    return {value, error};
}

// [a, inf) through x = a + u^2, u = (1 - t) / t, t in (0, 1]. The square
// keeps the integrand smooth at t = 1 and turns x^-p tails into t^(2p-3).
QuadratureResult half_line(const std::function<double(double)>& f, double a, double sign,
                           const QuadratureTolerance& tol) {
    auto mapped = [&](double t) {
        const double u = (1.0 - t) / t;
        const double x = a + sign * u * u;
        if (!std::isfinite(x)) return 0.0;
        const double v = f(x);
        return v == 0.0 ? 0.0 : v * 2.0 * u / (t * t);
    };
    return adaptive(mapped, 0.0, 1.0, tol);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureTolerance& tol) {
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integration limits must not be NaN");
    if (a == b) return {0.0, 0.0};
    if (a > b) {
        const auto r = integrate(f, b, a, tol);
        return {-r.value, r.error};
    }
    if (a == -kInf && b == kInf) {
        const auto lo = half_line(f, 0.0, -1.0, tol);
        const auto hi = half_line(f, 0.0, 1.0, tol);
        return {lo.value + hi.value, lo.error + hi.error};
    }
    if (b == kInf) return half_line(f, a, 1.0, tol);
    if (a == -kInf) return half_line(f, b, -1.0, tol);
    return adaptive(f, a, b, tol);
}

}  // namespace symsel
