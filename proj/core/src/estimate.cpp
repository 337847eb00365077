#include "symsel/estimate.hpp"

#include "symsel/bfgs.hpp"
#include "symsel/error.hpp"
#include "symsel/likelihood.hpp"
#include "symsel/special.hpp"

#include <cmath>
#include <limits>

namespace symsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Observed information by central differences of the score.
Matrix observed_information(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    const ParamLayout lay = theta.layout();
    const Vector x = theta.flatten();
    const auto dim = x.size();
    Matrix hess(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double h = 1e-4 * std::max(1.0, std::fabs(x[j]));
        Vector up = x;
        Vector dn = x;
        up[j] += h;
        dn[j] -= h;
        hess.col(j) = (score(spec, ParamVector::unflatten(lay, up), data) -
                       score(spec, ParamVector::unflatten(lay, dn), data)) /
                      (2.0 * h);
    }
    return -0.5 * (hess + hess.transpose());
}

std::vector<EstimateRow> build_table(const ParamVector& theta, const std::optional<Vector>& se,
                                     const Designs& d) {
    std::vector<EstimateRow> rows;
    const ParamLayout lay = theta.layout();
    const Vector x = theta.flatten();
    auto add = [&](const char* block, const std::vector<std::string>& names, Eigen::Index offset,
                   Eigen::Index count) {
        for (Eigen::Index j = 0; j < count; ++j) {
            EstimateRow r;
            r.block = block;
            r.name = names[static_cast<std::size_t>(j)];
            r.estimate = x[offset + j];
            if (se) {
                r.std_error = (*se)[offset + j];
                r.z_value = r.estimate / *r.std_error;
                r.p_value = wald_p_value(*r.z_value);
            }
            rows.push_back(std::move(r));
        }
    };
    add("selection", d.w_names, lay.gamma_offset(), lay.l);
    add("outcome", d.x_names, lay.beta_offset(), lay.k);
    add("dispersion", d.z_names, lay.lambda_offset(), lay.p);
    add("correlation", d.v_names, lay.kappa_offset(), lay.q);
    if (lay.has_nu) {
        EstimateRow r;
        r.block = "nu";
        r.name = "nu";
        r.estimate = theta.nu();
        if (se) {
            // delta method from the log scale
            r.std_error = r.estimate * (*se)[lay.nu_offset()];
            r.z_value = r.estimate / *r.std_error;
            r.p_value = wald_p_value(*r.z_value);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

FitOptions FitOptions::from_json(const nlohmann::json& j) {
    FitOptions o;
    if (!j.is_object()) throw SpecError("fit options must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "gradient_tolerance") {
            o.gradient_tolerance = value.get<double>();
        } else if (key == "relative_tolerance") {
            o.relative_tolerance = value.get<double>();
        } else if (key == "max_iterations" || key == "max_iter") {
            o.max_iterations = value.get<int>();
        } else if (key == "nu_fixed") {
            if (!value.is_null()) o.nu_fixed = value.get<double>();
        } else if (key == "standard_errors") {
            o.compute_standard_errors = value.get<bool>();
        } else {
            throw SpecError("unknown fit option '" + key + "'");
        }
    }
    if (!(o.gradient_tolerance > 0.0) || !(o.relative_tolerance > 0.0) || o.max_iterations < 1) {
        throw SpecError("fit tolerances must be positive and max_iterations at least 1");
    }
    return o;
}

nlohmann::json FitOptions::to_json() const {
    nlohmann::json j;
    j["gradient_tolerance"] = gradient_tolerance;
    j["relative_tolerance"] = relative_tolerance;
    j["max_iterations"] = max_iterations;
    j["nu_fixed"] = nu_fixed ? nlohmann::json(*nu_fixed) : nlohmann::json(nullptr);
    j["standard_errors"] = compute_standard_errors;
    return j;
}

InformationCriteria information_criteria(double loglik, int dim, std::size_t n) {
    return {-2.0 * loglik + 2.0 * dim, -2.0 * loglik + dim * std::log(static_cast<double>(n))};
}

InformationCriteria information_criteria(const FitResult& fit, std::size_t n) {
    return information_criteria(fit.loglik_at_max, fit.dim, n);
}

double wald_p_value(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

Vector probit_fit(const Matrix& W, const std::vector<int>& u) {
    const auto n = W.rows();
    const auto l = W.cols();
    Vector gamma = Vector::Zero(l);

    auto loglik_at = [&](const Vector& g) {
        const Vector eta = W * g;
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) ll += normal_log_cdf(u[static_cast<std::size_t>(i)] ? eta[i] : -eta[i]);
        return ll;
    };

    double ll = loglik_at(gamma);
    for (int iter = 0; iter < 100; ++iter) {
        const Vector eta = W * gamma;
        Vector grad = Vector::Zero(l);
        Matrix info = Matrix::Zero(l, l);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double q = u[static_cast<std::size_t>(i)] ? 1.0 : -1.0;
            const double t = q * eta[i];
            const double m = std::exp(normal_log_pdf(t) - normal_log_cdf(t));
            grad += q * m * W.row(i).transpose();
            info += m * (m + t) * W.row(i).transpose() * W.row(i);
        }
        Vector step = info.ldlt().solve(grad);
        if (!step.allFinite()) throw InitializationError("probit start: information matrix is singular");
        double scale = 1.0;
        double next = loglik_at(gamma + step);
        while (!(next >= ll) && scale > 1e-8) {
            scale *= 0.5;
            next = loglik_at(gamma + scale * step);
        }
        gamma += scale * step;
        const double change = std::fabs(next - ll);
        ll = next;
        if (gamma.cwiseAbs().maxCoeff() > 50.0 || ll > -1e-8) {
            throw InitializationError(
                "probit start diverged: the selection indicator is (nearly) perfectly predicted by the "
                "selection covariates; review the data for separation");
        }
        if (change < 1e-12 * std::max(1.0, std::fabs(ll))) return gamma;
    }
    throw InitializationError("probit start did not converge; review the selection covariates for separation");
}

ParamVector initialize(const ModelSpec& spec, const SelectionDataset& data) {
    if (data.n_selected() == 0 || data.n_censored() == 0) {
        throw DataError("estimation needs at least one censored and one uncensored row");
    }
    const Designs& d = data.designs();
    const auto n = static_cast<Eigen::Index>(data.size());

    std::vector<int> u(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) u[i] = data.u(i);

    ParamVector theta;
    theta.gamma = probit_fit(d.W, u);

    const auto n1 = static_cast<Eigen::Index>(data.n_selected());
    Matrix xs(n1, d.X.cols());
    Vector ys(n1);
    for (Eigen::Index i = 0, r = 0; i < n; ++i) {
        if (const auto& y = data.y(static_cast<std::size_t>(i))) {
            xs.row(r) = d.X.row(i);
            ys[r] = spec.links.mean.forward(*y);
            ++r;
        }
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(xs);
    if (qr.rank() < xs.cols()) throw InitializationError("outcome design is rank deficient on the selected rows");
    theta.beta = qr.solve(ys);
    const double rss = (ys - xs * theta.beta).squaredNorm();
    const double dof = static_cast<double>(n1 > xs.cols() ? n1 - xs.cols() : n1);
    const double sigma_hat = std::max(std::sqrt(rss / dof), 1e-8);

    // constant h1(sigma_hat) projected on Z; (h1(sigma_hat), 0, ..., 0) with an intercept column
    const Vector target = Vector::Constant(n, spec.links.dispersion.forward(sigma_hat));
    theta.lambda = d.Z.colPivHouseholderQr().solve(target);
    theta.kappa = Vector::Zero(d.V.cols());
    if (spec.estimates_nu()) theta.log_nu = std::log(8.0);
    return theta;
}

FitResult fit(const ModelSpec& spec_in, const SelectionDataset& data, const FitOptions& options) {
    ModelSpec spec = spec_in;
    if (options.nu_fixed) {
        if (spec.family != Family::StudentT) throw SpecError("nu_fixed applies to the Student-t family only");
        spec.fixed_nu = *options.nu_fixed;
    }
    if (data.n_selected() == 0 || data.n_censored() == 0) {
        throw DataError("estimation needs at least one censored and one uncensored row");
    }

    ParamVector start = options.start ? *options.start : initialize(spec, data);
    if (spec.estimates_nu() && !start.log_nu) start.log_nu = std::log(8.0);
    if (!spec.estimates_nu()) start.log_nu.reset();
    check_dimensions(spec, start, data.designs());
    const ParamLayout lay = start.layout();

    Objective objective = [&](const Vector& x, Vector& grad) {
        try {
            const LoglikAndScore ls = loglik_and_score(spec, ParamVector::unflatten(lay, x), data);
            grad = -ls.gradient;
            return -ls.value;
        } catch (const Error&) {
            grad.setZero();
            return kInf;
        }
    };

    BfgsOptions bopt;
    bopt.gradient_tolerance = options.gradient_tolerance;
    bopt.relative_tolerance = options.relative_tolerance;
    bopt.max_iterations = options.max_iterations;
    const BfgsResult opt = minimize_bfgs(objective, start.flatten(), bopt);

    FitResult out;
    out.spec = spec;
    out.theta = ParamVector::unflatten(lay, opt.x);
    out.loglik_at_max = -opt.value;
    out.n = data.size();
    out.dim = static_cast<int>(lay.size());
    out.iterations = opt.iterations;
    out.converged = opt.converged;
    out.gradient_norm_at_exit = opt.gradient.size() ? opt.gradient.cwiseAbs().maxCoeff() : 0.0;
    out.message = opt.message;
    if (!out.converged) out.warnings.push_back("optimizer did not converge: " + opt.message);

    const InformationCriteria ic = information_criteria(out.loglik_at_max, out.dim, out.n);
    out.aic = ic.aic;
    out.bic = ic.bic;

    if (options.compute_standard_errors) {
        try {
            const Matrix info = observed_information(spec, out.theta, data);
            Eigen::LLT<Matrix> llt(info);
            if (llt.info() == Eigen::Success) {
                const Matrix cov = llt.solve(Matrix::Identity(info.rows(), info.cols()));
                Vector se = cov.diagonal().cwiseSqrt();
                if (se.allFinite()) {
                    out.se = std::move(se);
                } else {
                    out.warnings.push_back("standard errors are not finite");
                }
            } else {
                out.warnings.push_back("observed information is not positive definite; standard errors omitted");
            }
        } catch (const Error& e) {
            out.warnings.push_back(std::string("standard errors unavailable: ") + e.what());
        }
    }
    out.table = build_table(out.theta, out.se, data.designs());
    return out;
}

nlohmann::json fit_to_json(const FitResult& fit) {
    using nlohmann::json;
    auto opt_num = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json rows = json::array();
    for (const auto& r : fit.table) {
        json p = nullptr;
        if (r.p_value) p = (*r.p_value < 1e-300) ? json("<1e-300") : json(*r.p_value);
        rows.push_back({{"block", r.block},
                        {"name", r.name},
                        {"estimate", r.estimate},
                        {"std_error", opt_num(r.std_error)},
                        {"z_value", opt_num(r.z_value)},
                        {"p_value", p}});
    }
    json j;
    j["model"] = fit.spec.label();
    j["estimates"] = std::move(rows);
    j["loglik"] = fit.loglik_at_max;
    j["aic"] = fit.aic;
    j["bic"] = fit.bic;
    j["n"] = fit.n;
    j["dim"] = fit.dim;
    j["convergence"] = {{"converged", fit.converged},
                        {"iterations", fit.iterations},
                        {"gradient_norm", fit.gradient_norm_at_exit},
                        {"message", fit.message}};
    j["warnings"] = fit.warnings;
    const Vector flat = fit.theta.flatten();
    j["theta"] = std::vector<double>(flat.data(), flat.data() + flat.size());
    return j;
}

}  // namespace symsel
