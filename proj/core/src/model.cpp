#include "symsel/model.hpp"

#include "symsel/error.hpp"

#include <cmath>

namespace symsel {

namespace {

void check_block(const Matrix& m, Eigen::Index n, const char* block) {
    if (m.rows() != n) {
        throw SpecError(std::string("design block ") + block + " has " + std::to_string(m.rows()) +
                        " rows, expected " + std::to_string(n));
    }
    if (m.cols() == 0) throw SpecError(std::string("design block ") + block + " has no columns");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) {
                throw DataError(std::string("non-finite covariate in block ") + block, static_cast<std::size_t>(i));
            }
        }
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    if (qr.rank() < m.cols()) {
        throw SpecError(std::string("design block ") + block + " is not of full column rank");
    }
}

void fill_names(std::vector<std::string>& names, Eigen::Index cols, const char* prefix) {
    if (names.empty()) {
        for (Eigen::Index j = 0; j < cols; ++j) names.push_back(prefix + std::to_string(j + 1));
    }
    if (static_cast<Eigen::Index>(names.size()) != cols) {
        throw SpecError(std::string("column name count does not match block ") + prefix);
    }
}

}  // namespace

SelectionDataset::SelectionDataset(std::vector<std::optional<double>> outcome, Designs designs)
    : outcome_(std::move(outcome)), designs_(std::move(designs)) {
    const auto n = static_cast<Eigen::Index>(outcome_.size());
    if (n == 0) throw DataError("empty dataset");
    check_block(designs_.X, n, "X");
    check_block(designs_.W, n, "W");
    check_block(designs_.Z, n, "Z");
    check_block(designs_.V, n, "V");
    if (designs_.total_columns() >= n) {
        throw SpecError("k + l + p + q = " + std::to_string(designs_.total_columns()) +
                        " must be smaller than n = " + std::to_string(n));
    }
    fill_names(designs_.x_names, designs_.X.cols(), "x");
    fill_names(designs_.w_names, designs_.W.cols(), "w");
    fill_names(designs_.z_names, designs_.Z.cols(), "z");
    fill_names(designs_.v_names, designs_.V.cols(), "v");
    for (std::size_t i = 0; i < outcome_.size(); ++i) {
        if (outcome_[i].has_value()) {
            if (!std::isfinite(*outcome_[i])) throw DataError("non-finite outcome", i);
            ++n_selected_;
        }
    }
}

SelectionDataset SelectionDataset::rows(const std::vector<std::size_t>& index) const {
    const auto m = static_cast<Eigen::Index>(index.size());
    Designs d;
    d.X.resize(m, designs_.X.cols());
    d.W.resize(m, designs_.W.cols());
    d.Z.resize(m, designs_.Z.cols());
    d.V.resize(m, designs_.V.cols());
    d.x_names = designs_.x_names;
    d.w_names = designs_.w_names;
    d.z_names = designs_.z_names;
    d.v_names = designs_.v_names;
    std::vector<std::optional<double>> y;
    y.reserve(index.size());
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto src = static_cast<Eigen::Index>(index[r]);
        if (index[r] >= size()) throw DataError("row index out of range", index[r]);
        d.X.row(r) = designs_.X.row(src);
        d.W.row(r) = designs_.W.row(src);
        d.Z.row(r) = designs_.Z.row(src);
        d.V.row(r) = designs_.V.row(src);
        y.push_back(outcome_[index[r]]);
    }
    return SelectionDataset(std::move(y), std::move(d));
}

ModelSpec ModelSpec::normal() {
    ModelSpec s;
    s.family = Family::Normal;
    return s;
}

ModelSpec ModelSpec::student_t() {
    ModelSpec s;
    s.family = Family::StudentT;
    return s;
}

ModelSpec ModelSpec::student_t_fixed(double nu) {
    if (!(nu > 0.0)) throw DomainError("fixed nu must be positive");
    ModelSpec s;
    s.family = Family::StudentT;
    s.fixed_nu = nu;
    return s;
}

ModelSpec ModelSpec::generic(DensityGenerator g) {
    ModelSpec s;
    s.family = Family::Generic;
    s.generic_generator = std::move(g);
    return s;
}

std::string ModelSpec::label() const {
    switch (family) {
        case Family::Normal:
            return "normal";
        case Family::StudentT:
            return fixed_nu ? "t(nu=" + std::to_string(*fixed_nu) + ")" : "t";
        case Family::Generic:
            return generic_generator ? generic_generator->label() : "generic";
    }
    return "unknown";
}

ParamLayout make_layout(const ModelSpec& spec, const Designs& designs) {
    return {designs.X.cols(), designs.W.cols(), designs.Z.cols(), designs.V.cols(), spec.estimates_nu()};
}

ParamLayout ParamVector::layout() const {
    return {beta.size(), gamma.size(), lambda.size(), kappa.size(), log_nu.has_value()};
}

Vector ParamVector::flatten() const {
    const ParamLayout lay = layout();
    Vector v(lay.size());
    v.segment(lay.beta_offset(), lay.k) = beta;
    v.segment(lay.gamma_offset(), lay.l) = gamma;
    v.segment(lay.lambda_offset(), lay.p) = lambda;
    v.segment(lay.kappa_offset(), lay.q) = kappa;
    if (log_nu) v[lay.nu_offset()] = *log_nu;
    return v;
}

ParamVector ParamVector::unflatten(const ParamLayout& lay, const Vector& flat) {
    if (flat.size() != lay.size()) {
        throw SpecError("parameter vector has " + std::to_string(flat.size()) + " entries, expected " +
                        std::to_string(lay.size()));
    }
    ParamVector t;
    t.beta = flat.segment(lay.beta_offset(), lay.k);
    t.gamma = flat.segment(lay.gamma_offset(), lay.l);
    t.lambda = flat.segment(lay.lambda_offset(), lay.p);
    t.kappa = flat.segment(lay.kappa_offset(), lay.q);
    if (lay.has_nu) t.log_nu = flat[lay.nu_offset()];
    return t;
}

double ParamVector::nu() const {
    if (!log_nu) throw SpecError("parameter vector carries no degrees of freedom");
    return std::exp(*log_nu);
}

double RowPredictors::alpha() const { return rho / std::sqrt(1.0 - rho * rho); }

double RowPredictors::tau() const { return mu2 / std::sqrt(1.0 - rho * rho); }

void check_dimensions(const ModelSpec& spec, const ParamVector& theta, const Designs& designs) {
    const ParamLayout want = make_layout(spec, designs);
    if (!(theta.layout() == want)) {
        throw SpecError("parameter dimensions (" + std::to_string(theta.beta.size()) + ", " +
                        std::to_string(theta.gamma.size()) + ", " + std::to_string(theta.lambda.size()) + ", " +
                        std::to_string(theta.kappa.size()) + (theta.log_nu ? ", nu" : "") +
                        ") do not match the model (" + std::to_string(want.k) + ", " + std::to_string(want.l) +
                        ", " + std::to_string(want.p) + ", " + std::to_string(want.q) + (want.has_nu ? ", nu" : "") +
                        ")");
    }
}

LinearPredictors predictors(const ModelSpec& spec, const ParamVector& theta, const Designs& designs) {
    check_dimensions(spec, theta, designs);
    const Vector eta1 = designs.X * theta.beta;
    const Vector eta2 = designs.W * theta.gamma;
    const Vector eta3 = designs.Z * theta.lambda;
    const Vector eta4 = designs.V * theta.kappa;
    LinearPredictors lp;
    const auto n = designs.rows();
    lp.mu1.resize(n);
    lp.mu2.resize(n);
    lp.sigma.resize(n);
    lp.rho.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        lp.mu1[i] = spec.links.mean.inverse(eta1[i]);
        lp.mu2[i] = spec.links.selection.inverse(eta2[i]);
        lp.sigma[i] = spec.links.dispersion.inverse(eta3[i]);
        lp.rho[i] = spec.links.correlation.inverse(eta4[i]);
    }
    return lp;
}

DensityGenerator model_generator(const ModelSpec& spec, const ParamVector& theta) {
    switch (spec.family) {
        case Family::Normal:
            return DensityGenerator::gaussian();
        case Family::StudentT:
            return DensityGenerator::student_t(spec.fixed_nu ? *spec.fixed_nu : theta.nu());
        case Family::Generic:
            if (!spec.generic_generator) throw SpecError("generic family without a generator");
            return *spec.generic_generator;
    }
    throw SpecError("unknown family");
}

std::vector<std::string> parameter_names(const ParamLayout& layout) {
    std::vector<std::string> names;
    auto add = [&](const char* prefix, Eigen::Index count) {
        for (Eigen::Index j = 0; j < count; ++j) names.push_back(prefix + std::to_string(j + 1));
    };
    add("beta", layout.k);
    add("gamma", layout.l);
    add("lambda", layout.p);
    add("kappa", layout.q);
    if (layout.has_nu) names.push_back("nu");
    return names;
}

}  // namespace symsel
