#include "symsel/likelihood.hpp"

#include "symsel/error.hpp"
#include "symsel/special.hpp"
#include "symsel/symdist.hpp"

#include <cmath>
#include <optional>

namespace symsel {

namespace {

// Row contribution and its partial derivatives with respect to the four
// predictors. The derivatives are exact derivatives of the contribution, so
// they already include the dependence of the Student-t conditional scale on r.
struct RowTerms {
    double value = 0.0;
    double d_mu1 = 0.0;
    double d_mu2 = 0.0;
    double d_sigma = 0.0;
    double d_rho = 0.0;
};

class NormalKernel {
public:
    double selected_value(double y, const RowPredictors& p) const {
        const double r = (y - p.mu1) / p.sigma;
        const double c = std::sqrt(1.0 - p.rho * p.rho);
        const double z = (p.mu2 + p.rho * r) / c;
        return -std::log(p.sigma) + normal_log_pdf(r) + normal_log_cdf(z);
    }

    double censored_value(const RowPredictors& p) const { return normal_log_cdf(-p.mu2); }

    RowTerms selected(double y, const RowPredictors& p) const {
        const double r = (y - p.mu1) / p.sigma;
        const double c2 = 1.0 - p.rho * p.rho;
        const double c = std::sqrt(c2);
        const double alpha = p.rho / c;
        const double z = (p.mu2 + p.rho * r) / c;
        const double log_cdf = normal_log_cdf(z);
        const double mills = std::exp(normal_log_pdf(z) - log_cdf);  // phi(z) / Phi(z)

        RowTerms t;
        t.value = -std::log(p.sigma) + normal_log_pdf(r) + log_cdf;
        const double d_r = -r + mills * alpha;  // f'/f + (G'/G) dz/dr
        t.d_mu1 = -d_r / p.sigma;
        t.d_sigma = -1.0 / p.sigma - r * d_r / p.sigma;
        t.d_mu2 = mills / c;
        t.d_rho = mills * (r + p.mu2 * p.rho) / (c2 * c);
        return t;
    }

    RowTerms censored(const RowPredictors& p) const {
        RowTerms t;
        t.value = normal_log_cdf(-p.mu2);
        t.d_mu2 = -std::exp(normal_log_pdf(p.mu2) - t.value);
        return t;
    }
};

class StudentKernel {
public:
    explicit StudentKernel(double nu) : nu_(nu), t_nu_(nu), t_nu1_(nu + 1.0) {}

    double selected_value(double y, const RowPredictors& p) const {
        const double r = (y - p.mu1) / p.sigma;
        const double c = std::sqrt(1.0 - p.rho * p.rho);
        const double z = (p.mu2 + p.rho * r) / c;
        const double s = std::sqrt((nu_ + 1.0) / (nu_ + r * r));
        return -std::log(p.sigma) + t_nu_.log_pdf(r) + t_nu1_.log_cdf(s * z);
    }

    double censored_value(const RowPredictors& p) const { return t_nu_.log_cdf(-p.mu2); }

    RowTerms selected(double y, const RowPredictors& p) const {
        const double r = (y - p.mu1) / p.sigma;
        const double c2 = 1.0 - p.rho * p.rho;
        const double c = std::sqrt(c2);
        const double alpha = p.rho / c;
        const double z = (p.mu2 + p.rho * r) / c;
        const double s = std::sqrt((nu_ + 1.0) / (nu_ + r * r));
        const double w = s * z;
        const double log_cdf = t_nu1_.log_cdf(w);
        const double ratio = std::exp(t_nu1_.log_pdf(w) - log_cdf);  // f_{nu+1}(w) / F_{nu+1}(w)

        RowTerms t;
        t.value = -std::log(p.sigma) + t_nu_.log_pdf(r) + log_cdf;
        const double ds_dr = -s * r / (nu_ + r * r);
        const double d_r = t_nu_.log_pdf_slope(r) + ratio * (s * alpha + z * ds_dr);
        t.d_mu1 = -d_r / p.sigma;
        t.d_sigma = -1.0 / p.sigma - r * d_r / p.sigma;
        t.d_mu2 = ratio * s / c;
        t.d_rho = ratio * s * (r + p.mu2 * p.rho) / (c2 * c);
        return t;
    }

    RowTerms censored(const RowPredictors& p) const {
        RowTerms t;
        t.value = t_nu_.log_cdf(-p.mu2);
        t.d_mu2 = -std::exp(t_nu_.log_pdf(p.mu2) - t.value);
        return t;
    }

private:
    double nu_;
    StudentT t_nu_;
    StudentT t_nu1_;
};

class GenericKernel {
public:
    explicit GenericKernel(DensityGenerator g) : g_(std::move(g)) {}

    double selected_value(double y, const RowPredictors& p) const { return obs_logdensity(y, 1, p, g_); }
    double censored_value(const RowPredictors& p) const { return obs_logdensity(0.0, 0, p, g_); }

private:
    DensityGenerator g_;
};

void check_finite(double v, std::size_t row) {
    if (!std::isfinite(v)) {
        throw NonFiniteError("log-likelihood term is not finite at row " + std::to_string(row), row);
    }
}

template <class Kernel>
Vector contributions_with(const Kernel& kernel, const LinearPredictors& lp, const SelectionDataset& data) {
    const std::size_t n = data.size();
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = lp.row(static_cast<Eigen::Index>(i));
        const auto& y = data.y(i);
        const double v = y ? kernel.selected_value(*y, row) : kernel.censored_value(row);
        check_finite(v, i);
        out[static_cast<Eigen::Index>(i)] = v;
    }
    return out;
}

Vector contributions(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    const LinearPredictors lp = predictors(spec, theta, data.designs());
    switch (spec.family) {
        case Family::Normal:
            return contributions_with(NormalKernel{}, lp, data);
        case Family::StudentT:
            return contributions_with(StudentKernel(spec.fixed_nu ? *spec.fixed_nu : theta.nu()), lp, data);
        case Family::Generic:
            return contributions_with(GenericKernel(model_generator(spec, theta)), lp, data);
    }
    throw SpecError("unknown family");
}

template <class Kernel>
LoglikAndScore analytic_score(const Kernel& kernel, const ModelSpec& spec, const ParamVector& theta,
                              const SelectionDataset& data) {
    const Designs& d = data.designs();
    const LinearPredictors lp = predictors(spec, theta, d);
    const auto n = static_cast<Eigen::Index>(data.size());

    Vector values(n);
    // derivative of each row term with respect to the linear predictors
    Vector e1(n), e2(n), e3(n), e4(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = lp.row(i);
        const auto& y = data.y(static_cast<std::size_t>(i));
        const RowTerms t = y ? kernel.selected(*y, row) : kernel.censored(row);
        check_finite(t.value, static_cast<std::size_t>(i));
        values[i] = t.value;
        // chain rule through d(mu)/d(eta) = 1 / g'(mu)
        e1[i] = t.d_mu1 / spec.links.mean.derivative(row.mu1);
        e2[i] = t.d_mu2 / spec.links.selection.derivative(row.mu2);
        e3[i] = t.d_sigma / spec.links.dispersion.derivative(row.sigma);
        e4[i] = t.d_rho / spec.links.correlation.derivative(row.rho);
    }

    const ParamLayout lay = theta.layout();
    LoglikAndScore out;
    out.value = pairwise_sum(values.data(), static_cast<std::size_t>(n));
    out.gradient.resize(lay.size());
    out.gradient.segment(lay.beta_offset(), lay.k) = d.X.transpose() * e1;
    out.gradient.segment(lay.gamma_offset(), lay.l) = d.W.transpose() * e2;
    out.gradient.segment(lay.lambda_offset(), lay.p) = d.Z.transpose() * e3;
    out.gradient.segment(lay.kappa_offset(), lay.q) = d.V.transpose() * e4;
    return out;
}

// d loglik / d log nu by a central difference.
double nu_derivative(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    const double h = 1e-5 * std::max(1.0, std::fabs(*theta.log_nu));
    ParamVector up = theta;
    ParamVector dn = theta;
    *up.log_nu += h;
    *dn.log_nu -= h;
    return (loglik(spec, up, data) - loglik(spec, dn, data)) / (2.0 * h);
}

}  // namespace

double pairwise_sum(const double* values, std::size_t count) {
    if (count <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += values[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

double log_cond_density(double y, const RowPredictors& row, const DensityGenerator& g) {
    if (!(row.sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(std::fabs(row.rho) < 1.0)) throw DomainError("rho must lie in (-1, 1)");
    const double r = (y - row.mu1) / row.sigma;
    const double z = row.tau() + row.alpha() * r;
    if (g.kind() == GeneratorKind::Generic) {
        // f_Z1(r) G(z; r) = int_{-inf}^{z} g_c(r^2 + w^2) dw / Z
        const double num = quadrature_path::lower_kernel(z, r, g) / g.normalizer();
        return -std::log(row.sigma) + std::log(num) - log_H_function(row.mu2, row.rho, g);
    }
    return -std::log(row.sigma) + marginal_z_log_pdf(r, g) + log_G_function(z, r, g) -
           log_H_function(row.mu2, row.rho, g);
}

double cond_density(double y, const RowPredictors& row, const DensityGenerator& g) {
    return std::exp(log_cond_density(y, row, g));
}

double obs_logdensity(double y, int u, const RowPredictors& row, const DensityGenerator& g) {
    if (!(row.sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(std::fabs(row.rho) < 1.0)) throw DomainError("rho must lie in (-1, 1)");
    if (u == 0) return log_H_function(-row.mu2, row.rho, g);
    const double r = (y - row.mu1) / row.sigma;
    const double z = row.tau() + row.alpha() * r;
    if (g.kind() == GeneratorKind::Generic) {
        return -std::log(row.sigma) + std::log(quadrature_path::lower_kernel(z, r, g) / g.normalizer());
    }
    return -std::log(row.sigma) + marginal_z_log_pdf(r, g) + log_G_function(z, r, g);
}

Vector loglik_contributions(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    return contributions(spec, theta, data);
}

double loglik(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    const Vector c = contributions(spec, theta, data);
    return pairwise_sum(c.data(), static_cast<std::size_t>(c.size()));
}

LoglikAndScore loglik_and_score(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    LoglikAndScore out;
    switch (spec.family) {
        case Family::Normal:
            out = analytic_score(NormalKernel{}, spec, theta, data);
            break;
        case Family::StudentT:
            out = analytic_score(StudentKernel(spec.fixed_nu ? *spec.fixed_nu : theta.nu()), spec, theta, data);
            if (spec.estimates_nu()) out.gradient[theta.layout().nu_offset()] = nu_derivative(spec, theta, data);
            break;
        case Family::Generic:
            out.value = loglik(spec, theta, data);
            out.gradient = numerical_score(spec, theta, data, 1e-5);
            break;
    }
    return out;
}

Vector score(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data) {
    return loglik_and_score(spec, theta, data).gradient;
}

Vector numerical_score(const ModelSpec& spec, const ParamVector& theta, const SelectionDataset& data,
                       double rel_step) {
    const ParamLayout lay = theta.layout();
    const Vector x = theta.flatten();
    Vector grad(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = rel_step * std::max(1.0, std::fabs(x[j]));
        Vector up = x;
        Vector dn = x;
        up[j] += h;
        dn[j] -= h;
        grad[j] = (loglik(spec, ParamVector::unflatten(lay, up), data) -
                   loglik(spec, ParamVector::unflatten(lay, dn), data)) /
                  (2.0 * h);
    }
    return grad;
}

}  // namespace symsel
