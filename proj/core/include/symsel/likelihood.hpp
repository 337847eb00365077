#pragma once

// Log-likelihood of the symmetric generalized Heckman model and its score.
//
// For a selected row (u = 1) with r = (y - mu1) / sigma the contribution is
//     -log sigma + log f_Z1(r) + log G(tau + alpha r; r),
// where the P(U* > 0) factors of the probit part and of the conditional
// density cancel. A censored row contributes log(1 - H(mu2)) = log H(-mu2).

#include "symsel/generator.hpp"
#include "symsel/model.hpp"

#include <vector>

namespace symsel {

/// Density of Y* given U* > 0 at y. Evaluated in log space, so a vanishing
/// H(mu2) never divides by zero.
double cond_density(double y, const RowPredictors& row, const DensityGenerator& g);
double log_cond_density(double y, const RowPredictors& row, const DensityGenerator& g);

/// Log density of one observation; y is ignored when u = 0.
double obs_logdensity(double y, int u, const RowPredictors& row, const DensityGenerator& g);

/// Per-row log-likelihood terms. Throws NonFiniteError naming the first bad row.
Vector loglik_contributions(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data);

double loglik(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data);

struct LoglikAndScore {
    double value = 0.0;
    Vector gradient;  // flat layout, d/d(log nu) for the last entry when nu is free
};

/// Analytic score for the Normal and StudentT families; the log nu entry
/// (when nu is free) is a central difference of loglik. Generic families fall
/// back to central differences throughout.
LoglikAndScore loglik_and_score(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data);

Vector score(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data);

/// Central finite-difference gradient of loglik with steps
/// rel_step * max(1, |theta_j|).
Vector numerical_score(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data,
                       double rel_step = 1e-6);

/// Sum with pairwise (cascade) reduction; deterministic for a fixed input order.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace symsel
