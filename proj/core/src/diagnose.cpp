#include "symsel/diagnose.hpp"

#include "symsel/error.hpp"
#include "symsel/io.hpp"
#include "symsel/likelihood.hpp"
#include "symsel/quadrature.hpp"
#include "symsel/special.hpp"
#include "symsel/symdist.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

namespace symsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr QuadratureTolerance kSurvivalTolerance{1e-300, 1e-8, 20};

// log of the unnormalized conditional density of the standardized outcome
double log_kernel(double t, const RowPredictors& row, const DensityGenerator& g) {
    const double z = row.tau() + row.alpha() * t;
    if (g.kind() == GeneratorKind::Generic) return std::log(quadrature_path::lower_kernel(z, t, g));
    return marginal_z_log_pdf(t, g) + log_G_function(z, t, g);
}

}  // namespace

std::size_t ResidualSet::finite_count() const {
    return static_cast<std::size_t>(
        std::count_if(residual.begin(), residual.end(), [](double r) { return std::isfinite(r); }));
}

double mt_residual(int u, double survival) {
    if (!(survival > 0.0)) return -kInf;
    if (u == 1 && !(survival < 1.0)) return kInf;
    const double rm = u + std::log(survival);
    const double inner = rm + (u ? std::log(u - rm) : 0.0);
    const double mag = std::sqrt(std::max(0.0, -2.0 * inner));
    return rm < 0.0 ? -mag : mag;
}

double conditional_survival(double y, const RowPredictors& row, const DensityGenerator& g) {
    if (!(row.sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(std::fabs(row.rho) < 1.0)) throw DomainError("rho must lie in (-1, 1)");
    const double t0 = (y - row.mu1) / row.sigma;
    const double shift = log_kernel(t0, row, g);
    auto f = [&](double t) {
        const double v = std::exp(log_kernel(t, row, g) - shift);
        return std::isfinite(v) ? v : 0.0;
    };
    // both tails are integrated so the smaller one keeps its relative accuracy
    const double upper = integrate(f, t0, kInf, kSurvivalTolerance).value;
    const double lower = integrate(f, -kInf, t0, kSurvivalTolerance).value;
    const double total = upper + lower;
    if (!(total > 0.0) || !std::isfinite(total)) throw NumericError("conditional survival integral degenerated");
    return upper / total;
}

ResidualSet mt_residuals(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    const LinearPredictors lp = predictors(spec, theta, data.designs());
    const DensityGenerator g = model_generator(spec, theta);
    ResidualSet out;
    const std::size_t n = data.size();
    out.residual.resize(n);
    out.u.resize(n);
    out.survival.resize(n);
    out.flagged.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const RowPredictors row = lp.row(static_cast<Eigen::Index>(i));
        const int u = data.u(i);
        // a censored row survives with P(U* <= 0) = 1 - H(mu2)
        const double s = u ? conditional_survival(*data.y(i), row, g) : H_function(-row.mu2, row.rho, g);
        out.u[i] = u;
        out.survival[i] = s;
        out.residual[i] = mt_residual(u, s);
        out.flagged[i] = !std::isfinite(out.residual[i]);
    }
    return out;
}

ResidualSet mt_residuals(const FitResult& fit, const SelectionDataset& data) {
    if (fit.n != data.size()) throw DiagnosticError("fit and dataset sizes differ");
    return mt_residuals(fit.spec, fit.theta, data);
}

std::vector<QQPoint> qq_data(const ResidualSet& residuals) {
    std::vector<QQPoint> pts;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (std::isfinite(residuals.residual[i])) pts.push_back({i, residuals.u[i], residuals.residual[i], 0.0});
    }
    if (pts.size() < 10) {
        throw DiagnosticError("QQ data needs at least 10 finite residuals, got " + std::to_string(pts.size()));
    }
    std::stable_sort(pts.begin(), pts.end(), [](const QQPoint& a, const QQPoint& b) { return a.residual < b.residual; });
    const double m = static_cast<double>(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i].theoretical = normal_quantile((static_cast<double>(i) + 0.5) / m);
    }
    return pts;
}

std::vector<ComparisonRow> compare_models(const std::vector<FitResult>& fits, const std::vector<std::string>& labels) {
    if (fits.size() != labels.size()) throw DiagnosticError("one label per fit is required");
    if (fits.empty()) throw DiagnosticError("no fits to compare");
    std::vector<ComparisonRow> rows;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i].n != fits[0].n) {
            throw DiagnosticError("fits were made on different sample sizes (" + std::to_string(fits[0].n) +
                                  " vs " + std::to_string(fits[i].n) + ")");
        }
        const InformationCriteria ic = information_criteria(fits[i].loglik_at_max, fits[i].dim, fits[i].n);
        rows.push_back({0, labels[i], fits[i].loglik_at_max, fits[i].dim, ic.aic, ic.bic, fits[i].n});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        if (a.aic != b.aic) return a.aic < b.aic;
        return a.bic < b.bic;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
    return rows;
}

void write_qq_csv(std::ostream& out, const std::vector<QQPoint>& points) {
    out << "row,u,residual,theoretical_quantile\n";
    for (const auto& p : points) {
        out << p.row + 1 << ',' << p.u << ',' << format_double(p.residual) << ',' << format_double(p.theoretical)
            << '\n';
    }
}

void write_residuals_csv(std::ostream& out, const ResidualSet& residuals) {
    std::vector<double> theo(residuals.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (std::isfinite(residuals.residual[i])) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return residuals.residual[a] < residuals.residual[b]; });
    const double m = static_cast<double>(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) theo[order[k]] = normal_quantile((static_cast<double>(k) + 0.5) / m);

    out << "row,u,residual,theoretical_quantile,survival,flagged\n";
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        out << i + 1 << ',' << residuals.u[i] << ',' << format_double(residuals.residual[i]) << ',';
        if (std::isfinite(theo[i])) out << format_double(theo[i]);
        out << ',' << format_double(residuals.survival[i]) << ',' << (residuals.flagged[i] ? 1 : 0) << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "rank,model,loglik,dim,aic,bic,n\n";
    for (const auto& r : rows) {
        out << r.rank << ',' << r.label << ',' << format_double(r.loglik) << ',' << r.dim << ','
            << format_double(r.aic) << ',' << format_double(r.bic) << ',' << r.n << '\n';
    }
}

void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << std::left << std::setw(6) << "rank" << std::setw(16) << "model" << std::right << std::setw(14) << "loglik"
        << std::setw(6) << "dim" << std::setw(14) << "AIC" << std::setw(14) << "BIC" << '\n';
    out << std::fixed << std::setprecision(2);
    for (const auto& r : rows) {
        out << std::left << std::setw(6) << r.rank << std::setw(16) << r.label << std::right << std::setw(14)
            << r.loglik << std::setw(6) << r.dim << std::setw(14) << r.aic << std::setw(14) << r.bic << '\n';
    }
    out << std::defaultfloat;
}

}  // namespace symsel
