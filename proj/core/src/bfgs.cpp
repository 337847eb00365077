#include "symsel/bfgs.hpp"

#include "symsel/error.hpp"

#include <cmath>
#include <limits>

namespace symsel {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
    VectorXd x;
    double f = kInf;
    VectorXd g;
};

double sup_norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

BfgsResult minimize_bfgs(const Objective& objective, VectorXd x0, const BfgsOptions& opt) {
    const auto dim = x0.size();
    BfgsResult result;

    auto evaluate = [&](const VectorXd& x) {
        Point p;
        p.x = x;
        p.g.resize(dim);
        p.f = objective(x, p.g);
        ++result.evaluations;
        if (!std::isfinite(p.f) || !p.g.allFinite()) p.f = kInf;
        return p;
    };

    Point cur = evaluate(x0);
    if (!std::isfinite(cur.f)) throw NumericError("objective is not finite at the starting point");

    auto fresh_inverse_hessian = [&](const VectorXd& g) {
        return MatrixXd(MatrixXd::Identity(dim, dim) / std::max(1.0, sup_norm(g)));
    };
    MatrixXd hinv = fresh_inverse_hessian(cur.g);
    bool scaled = false;
    bool just_reset = true;

    for (int iter = 0;; ++iter) {
        result.iterations = iter;
        if (sup_norm(cur.g) < opt.gradient_tolerance) {
            result.converged = true;
            result.message = "gradient tolerance reached";
            break;
        }
        if (iter >= opt.max_iterations) {
            result.message = "iteration limit reached";
            break;
        }

        VectorXd dir = -hinv * cur.g;
        double slope = cur.g.dot(dir);
        if (!(slope < 0.0)) {
            hinv = fresh_inverse_hessian(cur.g);
            scaled = false;
            dir = -hinv * cur.g;
            slope = cur.g.dot(dir);
        }

        // bracketing line search on the step length
        double lo = 0.0;
        double hi = kInf;
        double step = 1.0;
        Point accepted;
        Point armijo_only;
        bool wolfe = false;
        for (int ls = 0; ls < opt.max_line_search; ++ls) {
            Point trial = evaluate(cur.x + step * dir);
            if (!std::isfinite(trial.f) || trial.f > cur.f + opt.armijo * step * slope) {
                hi = step;
            } else if (trial.g.dot(dir) < opt.curvature * slope) {
                lo = step;
                armijo_only = std::move(trial);
            } else {
                accepted = std::move(trial);
                wolfe = true;
                break;
            }
            step = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * step;
        }
        if (!wolfe) {
            if (std::isfinite(armijo_only.f)) {
                accepted = std::move(armijo_only);
            } else if (!just_reset) {
                hinv = fresh_inverse_hessian(cur.g);
                scaled = false;
                just_reset = true;
                continue;
            } else {
                result.message = "line search failed";
                break;
            }
        }
        just_reset = false;

        const VectorXd s = accepted.x - cur.x;
        const VectorXd y = accepted.g - cur.g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                hinv = MatrixXd::Identity(dim, dim) * (sy / y.squaredNorm());
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const VectorXd hy = hinv * y;
            const double yhy = y.dot(hy);
            hinv += (rho * rho * yhy + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
        }

        const double change = std::fabs(cur.f - accepted.f) / std::max(1.0, std::fabs(cur.f));
        cur = std::move(accepted);
        if (change < opt.relative_tolerance) {
            result.iterations = iter + 1;
            result.converged = sup_norm(cur.g) < opt.gradient_tolerance ||
                               sup_norm(cur.g) < opt.stall_gradient_scale * std::max(1.0, std::fabs(cur.f));
            result.message = result.converged ? "relative change tolerance reached"
                                              : "stalled with a non-negligible gradient";
            break;
        }
    }

    result.x = std::move(cur.x);
    result.value = cur.f;
    result.gradient = std::move(cur.g);
    return result;
}

}  // namespace symsel
