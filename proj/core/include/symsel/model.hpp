#pragma once

#include "symsel/generator.hpp"
#include "symsel/links.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace symsel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// The four covariate blocks: X drives the outcome mean mu1, W the
/// selection mean mu2, Z the dispersion sigma and V the correlation rho.
struct Designs {
    Matrix X;
    Matrix W;
    Matrix Z;
    Matrix V;
    std::vector<std::string> x_names;
    std::vector<std::string> w_names;
    std::vector<std::string> z_names;
    std::vector<std::string> v_names;

    Eigen::Index rows() const noexcept { return X.rows(); }
    Eigen::Index total_columns() const noexcept { return X.cols() + W.cols() + Z.cols() + V.cols(); }
};

/// Outcome, selection indicators and covariates for n units. The outcome is
/// stored only for selected rows, so u_i = 1 exactly when y_i is present.
///
/// Construction validates the designs: matching row counts, finite entries,
/// full column rank for every block, and k + l + p + q < n.
class SelectionDataset {
public:
    SelectionDataset(std::vector<std::optional<double>> outcome, Designs designs);

    std::size_t size() const noexcept { return outcome_.size(); }
    std::size_t n_selected() const noexcept { return n_selected_; }
    std::size_t n_censored() const noexcept { return size() - n_selected_; }

    int u(std::size_t i) const { return outcome_[i].has_value() ? 1 : 0; }
    const std::optional<double>& y(std::size_t i) const { return outcome_[i]; }
    const std::vector<std::optional<double>>& outcome() const noexcept { return outcome_; }
    const Designs& designs() const noexcept { return designs_; }

    /// New dataset made of the given rows, in that order. Rows may repeat.
    SelectionDataset rows(const std::vector<std::size_t>& index) const;

private:
    std::vector<std::optional<double>> outcome_;
    Designs designs_;
    std::size_t n_selected_ = 0;
};

enum class Family { Normal, StudentT, Generic };

struct Links {
    LinkFunction mean{LinkKind::Identity};
    LinkFunction selection{LinkKind::Identity};
    LinkFunction dispersion{LinkKind::Log};
    LinkFunction correlation{LinkKind::ArcTanh};
};

/// Distributional family and link choices. For StudentT, nu is estimated
/// (as log nu) unless fixed_nu is set.
struct ModelSpec {
    Family family = Family::StudentT;
    std::optional<double> fixed_nu;
    std::optional<DensityGenerator> generic_generator;
    Links links;

    static ModelSpec normal();
    static ModelSpec student_t();
    static ModelSpec student_t_fixed(double nu);
    static ModelSpec generic(DensityGenerator g);

    bool estimates_nu() const noexcept { return family == Family::StudentT && !fixed_nu.has_value(); }
    std::string label() const;
};

/// Sizes of the coefficient blocks in the flat parameter layout
/// (beta, gamma, lambda, kappa, log nu).
struct ParamLayout {
    Eigen::Index k = 0;
    Eigen::Index l = 0;
    Eigen::Index p = 0;
    Eigen::Index q = 0;
    bool has_nu = false;

    Eigen::Index size() const noexcept { return k + l + p + q + (has_nu ? 1 : 0); }
    Eigen::Index beta_offset() const noexcept { return 0; }
    Eigen::Index gamma_offset() const noexcept { return k; }
    Eigen::Index lambda_offset() const noexcept { return k + l; }
    Eigen::Index kappa_offset() const noexcept { return k + l + p; }
    Eigen::Index nu_offset() const noexcept { return k + l + p + q; }

    friend bool operator==(const ParamLayout&, const ParamLayout&) = default;
};

ParamLayout make_layout(const ModelSpec& spec, const Designs& designs);

struct ParamVector {
    Vector beta;
    Vector gamma;
    Vector lambda;
    Vector kappa;
    std::optional<double> log_nu;

    ParamLayout layout() const;
    Vector flatten() const;
    static ParamVector unflatten(const ParamLayout& layout, const Vector& flat);

    double nu() const;
};

/// Row-level predictors with the derived alpha = rho / sqrt(1 - rho^2) and
/// tau = mu2 / sqrt(1 - rho^2).
struct RowPredictors {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double sigma = 1.0;
    double rho = 0.0;

    double alpha() const;
    double tau() const;
};

struct LinearPredictors {
    Vector mu1;
    Vector mu2;
    Vector sigma;
    Vector rho;

    Eigen::Index size() const noexcept { return mu1.size(); }
    double alpha(Eigen::Index i) const { return row(i).alpha(); }
    double tau(Eigen::Index i) const { return row(i).tau(); }
    RowPredictors row(Eigen::Index i) const { return {mu1[i], mu2[i], sigma[i], rho[i]}; }
};

/// Throws SpecError unless theta matches the ModelSpec and design sizes.
void check_dimensions(const ModelSpec& spec, const ParamVector& theta, const Designs& designs);

LinearPredictors predictors(const ModelSpec& spec, const ParamVector& theta, const Designs& designs);

/// The generator implied by the ModelSpec at theta (nu read from theta when free).
DensityGenerator model_generator(const ModelSpec& spec, const ParamVector& theta);

/// Coordinate names in flat-layout order: beta_1..k, gamma_1..l, ...
std::vector<std::string> parameter_names(const ParamLayout& layout);

}  // namespace symsel
