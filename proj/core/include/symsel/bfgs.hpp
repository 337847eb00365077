#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace symsel {

/// Objective for minimization: returns f(x) and writes the gradient. A
/// non-finite return marks x as infeasible; the line search backs off.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& gradient)>;

struct BfgsOptions {
    double gradient_tolerance = 1e-6;   // sup-norm of the gradient
    double relative_tolerance = 1e-10;  // relative change of f between iterations
    int max_iterations = 500;
    double armijo = 1e-4;               // sufficient decrease c1
    double curvature = 0.9;             // curvature c2
    int max_line_search = 60;
    // A stop on relative change only counts as converged when the gradient
    // sup-norm is below this multiple of max(1, |f|).
    double stall_gradient_scale = 1e-4;
};

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string message;
};

/// Quasi-Newton minimization with inverse-Hessian BFGS updates and a
/// bracketing line search enforcing the Armijo and (weak) curvature
/// conditions. Updates that would break positive definiteness are skipped.
BfgsResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0, const BfgsOptions& options = {});

}  // namespace symsel
