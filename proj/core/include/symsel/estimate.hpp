#pragma once

#include "symsel/model.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symsel {

struct FitOptions {
    double gradient_tolerance = 1e-6;
    double relative_tolerance = 1e-10;
    int max_iterations = 500;
    /// Freezes nu for a Student-t spec.
    std::optional<double> nu_fixed;
    bool compute_standard_errors = true;
    /// Starting point; initialize() is used when absent.
    std::optional<ParamVector> start;

    /// Reads the plain key/value form: gradient_tolerance, relative_tolerance,
    /// max_iterations, nu_fixed, standard_errors. Unknown keys are rejected.
    static FitOptions from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// One line of the estimates table, on the reporting scale (nu, not log nu).
struct EstimateRow {
    std::string block;  // outcome, selection, dispersion, correlation, nu
    std::string name;
    double estimate = 0.0;
    std::optional<double> std_error;
    std::optional<double> z_value;
    std::optional<double> p_value;
};

struct FitResult {
    ModelSpec spec;
    ParamVector theta;
    /// Standard errors in the flat optimization layout (log nu last); absent
    /// when the observed information is not positive definite.
    std::optional<Vector> se;
    std::vector<EstimateRow> table;
    double loglik_at_max = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n = 0;
    int dim = 0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm_at_exit = 0.0;
    std::string message;
    std::vector<std::string> warnings;
};

struct InformationCriteria {
    double aic;
    double bic;
};

InformationCriteria information_criteria(double loglik, int dim, std::size_t n);
InformationCriteria information_criteria(const FitResult& fit, std::size_t n);

/// Starting values: probit Newton fit for gamma, least squares on the
/// selected rows for beta, the residual scale for lambda, kappa = 0 and
/// nu = 8 when nu is estimated.
ParamVector initialize(const ModelSpec& spec, const SelectionDataset& data);

/// Probit maximum likelihood of u on W by Newton iterations.
Vector probit_fit(const Matrix& W, const std::vector<int>& u);

/// Maximum-likelihood fit by BFGS with the analytic score, then standard
/// errors from the inverse observed information (central differences of
/// the score, symmetrized).
FitResult fit(const ModelSpec& spec, const SelectionDataset& data, const FitOptions& options = {});

/// Two-sided normal p-value for a Wald statistic.
double wald_p_value(double z);

nlohmann::json fit_to_json(const FitResult& fit);

}  // namespace symsel
