#pragma once

// Martingale-type residuals, QQ data and model comparison.
//
//   r^M  = u + log S
//   r^MT = sign(r^M) sqrt(-2 (r^M + u log(u - r^M)))
//
// S is the fitted survival of the observation: for a selected row the
// survival of Y* given U* > 0 at y, for a censored row P(U* <= 0).

#include "symsel/estimate.hpp"
#include "symsel/model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace symsel {

struct ResidualSet {
    std::vector<double> residual;  // +-inf where flagged
    std::vector<int> u;
    std::vector<double> survival;
    std::vector<bool> flagged;  // S = 0, or S = 1 on a selected row

    std::size_t size() const noexcept { return residual.size(); }
    std::size_t finite_count() const;
};

/// r^MT from the indicator and the survival value; +-inf when degenerate.
double mt_residual(int u, double survival);

/// Survival of Y* given U* > 0 at y, by quadrature of the conditional density.
double conditional_survival(double y, const RowPredictors& row, const DensityGenerator& g);

ResidualSet mt_residuals(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data);
ResidualSet mt_residuals(const FitResult& fit, const SelectionDataset& data);

struct QQPoint {
    std::size_t row = 0;
    int u = 0;
    double residual = 0.0;
    double theoretical = 0.0;
};

/// Finite residuals in ascending order against Phi^-1((i - 0.5) / m).
/// Throws DiagnosticError with fewer than 10 finite residuals.
std::vector<QQPoint> qq_data(const ResidualSet& residuals);

struct ComparisonRow {
    std::size_t rank = 0;
    std::string label;
    double loglik = 0.0;
    int dim = 0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n = 0;
};

/// Sorted by AIC, then BIC, then input position.
std::vector<ComparisonRow> compare_models(const std::vector<FitResult>& fits, const std::vector<std::string>& labels);

/// row,u,residual,theoretical_quantile,survival,flagged; qq points in order.
void write_qq_csv(std::ostream& out, const std::vector<QQPoint>& points);
/// Same columns in row order; theoretical_quantile is empty for flagged rows.
void write_residuals_csv(std::ostream& out, const ResidualSet& residuals);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace symsel
