#pragma once

// Data generation from the stochastic representation
//     Y* = sigma Z1 + mu1,   U* = rho Z1 + sqrt(1 - rho^2) Z2 + mu2,
// the three simulation scenarios, censoring calibration and the Monte Carlo
// bias/MSE harness.
//
// Every scenario uses the same regression structure
//     mu1 = b1 + b2 x1 + b3 x2
//     mu2 = g1 + g2 x1 + g3 x2 + g4 x3
//     log sigma = l1 + l2 x1
//     arctanh rho = k1 + k2 x1

#include "symsel/estimate.hpp"
#include "symsel/generator.hpp"
#include "symsel/model.hpp"
#include "symsel/random.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace symsel {

/// Law of the covariates x1, x2, x3.
enum class CovariateLaw {
    StandardNormal,   // N(0, 1)
    TruncatedNormal,  // N(0, 1) restricted to (0, 1)
    Uniform,          // U(0, 1)
};

std::string covariate_law_name(CovariateLaw law);
CovariateLaw parse_covariate_law(const std::string& name);

struct ScenarioConfig {
    int scenario = 1;  // 0 for a custom parameter set
    int variant = 0;   // second kappa choice of scenarios 2 and 3 when 1
    std::size_t n = 1000;
    /// True beta, gamma, lambda, kappa (log_nu unused; see nu).
    ParamVector theta;
    Family family = Family::StudentT;
    double nu = 4.0;
    /// Data-generating generator for Family::Generic; needs a radial sampler.
    std::optional<DensityGenerator> generic_generator;
    /// When set, fits use this nu instead of estimating it.
    bool fit_fixed_nu = false;
    CovariateLaw covariate_law = CovariateLaw::StandardNormal;
    /// Selection cutoff: u = 1{U* > threshold}.
    double threshold = 0.0;
    std::size_t nrep = 1;
    std::uint64_t seed = 1;

    static ScenarioConfig preset(int scenario, int variant = 0);

    /// The generator the data are drawn from.
    DensityGenerator generator() const;
    /// The model fitted to simulated data.
    ModelSpec fit_spec() const;
    /// Parameters identified by the fitted model: the threshold is absorbed
    /// into the selection intercept (g1 - threshold), and nu is carried when
    /// it is estimated.
    ParamVector identified_theta() const;

    /// Reads {"scenario", "variant", "n", "nrep", "seed", "nu", "generator",
    /// "covariate_law", "threshold", "theta": {"beta", "gamma", "lambda",
    /// "kappa"}}; missing keys keep the preset values.
    static ScenarioConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct BivariateDraws {
    Vector y_star;
    Vector u_star;
};

/// Draws (Y*, U*) row by row. Student-t rows share one chi-square mixing draw
/// between Z1 and Z2; generic generators use R (cos T, sin T) with R from the
/// generator's radial sampler and T uniform.
BivariateDraws sample_bivariate(const LinearPredictors& predictors, const DensityGenerator& generator, Rng& rng);

/// Covariate designs of the scenario structure for n rows.
Designs scenario_designs(const ScenarioConfig& config, std::size_t n, Rng& rng);

/// Simulated dataset; degenerate covariate draws are redrawn.
SelectionDataset generate_dataset(const ScenarioConfig& config, Rng& rng);

/// Cutoff a whose empirical censoring fraction P(U* <= a) over a pilot draw of
/// `pilot` rows equals target.
double calibrate_threshold(const ScenarioConfig& config, double target_censoring, Rng& rng,
                           std::size_t pilot = 100000);

struct MonteCarloSummary {
    std::vector<std::string> names;
    Vector true_value;
    Vector bias;
    Vector mse;
    double mean_censoring = 0.0;  // percent
    std::size_t nrep = 0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

using Fitter = std::function<FitResult(const ModelSpec&, const SelectionDataset&)>;

struct StudyOptions {
    /// Defaults to fit() with standard errors switched off.
    Fitter fitter;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Replicate r draws from Rng(derive_seed(config.seed, r)), so results do not
/// depend on scheduling. Non-converged or failed replicates are excluded and
/// counted; more than 20% failures throw StudyError. nu is summarized on its
/// natural scale.
MonteCarloSummary run_study(const ScenarioConfig& config, const StudyOptions& options = {});

/// name,true_value,bias,mse
void write_summary_csv(std::ostream& out, const MonteCarloSummary& summary);
nlohmann::json summary_metadata(const MonteCarloSummary& summary);

/// y,u followed by every distinct non-intercept covariate column.
void write_dataset_csv(std::ostream& out, const SelectionDataset& data);

}  // namespace symsel
