#include "symsel/simulate.hpp"

#include "symsel/error.hpp"
#include "symsel/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

namespace symsel {

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Vector json_vector(const nlohmann::json& j, const char* key, Eigen::Index want) {
    if (!j.is_array()) throw SpecError(std::string("theta.") + key + " must be an array");
    if (static_cast<Eigen::Index>(j.size()) != want) {
        throw SpecError(std::string("theta.") + key + " needs " + std::to_string(want) + " entries");
    }
    Vector v(want);
    for (Eigen::Index i = 0; i < want; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

std::vector<double> to_std(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double draw_covariate(CovariateLaw law, Rng& rng) {
    switch (law) {
        case CovariateLaw::StandardNormal:
            return std::normal_distribution<double>(0.0, 1.0)(rng);
        case CovariateLaw::TruncatedNormal: {
            std::normal_distribution<double> nd(0.0, 1.0);
            for (;;) {
                const double x = nd(rng);
                if (x > 0.0 && x < 1.0) return x;
            }
        }
        case CovariateLaw::Uniform:
            return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    return 0.0;
}

std::vector<std::string> with_intercept(std::initializer_list<const char*> cols) {
    std::vector<std::string> names{"intercept"};
    for (const char* c : cols) names.emplace_back(c);
    return names;
}

}  // namespace

std::string covariate_law_name(CovariateLaw law) {
    switch (law) {
        case CovariateLaw::StandardNormal:
            return "normal";
        case CovariateLaw::TruncatedNormal:
            return "truncated_normal";
        case CovariateLaw::Uniform:
            return "uniform";
    }
    return "normal";
}

CovariateLaw parse_covariate_law(const std::string& name) {
    if (name == "normal") return CovariateLaw::StandardNormal;
    if (name == "truncated_normal") return CovariateLaw::TruncatedNormal;
    if (name == "uniform") return CovariateLaw::Uniform;
    throw SpecError("unknown covariate law '" + name + "' (expected normal, truncated_normal or uniform)");
}

ScenarioConfig ScenarioConfig::preset(int scenario, int variant) {
    if (variant != 0 && variant != 1) throw SpecError("scenario variant must be 0 or 1");
    ScenarioConfig c;
    c.scenario = scenario;
    c.variant = variant;
    switch (scenario) {
        case 1:
            if (variant != 0) throw SpecError("scenario 1 has a single variant");
            c.theta.beta = vec({1.1, 0.7, 0.1});
            c.theta.gamma = vec({0.9, 0.5, 1.1, 0.6});
            c.theta.lambda = vec({-0.4, 0.7});
            c.theta.kappa = vec({0.3, 0.5});
            break;
        case 2:
            c.theta.beta = vec({1.0, 0.7, 1.1});
            c.theta.gamma = vec({0.9, 0.5, 1.1, 0.6});
            c.theta.lambda = vec({-0.2, 1.2});
            c.theta.kappa = variant == 0 ? vec({0.7, 0.3}) : vec({-0.7, 0.3});
            break;
        case 3:
            c.theta.beta = vec({1.1, 0.7, 0.1});
            c.theta.gamma = vec({0.0, 0.5, 1.1, 0.6});
            c.theta.lambda = vec({-0.4, 1.2});
            c.theta.kappa = variant == 0 ? vec({-0.3, -0.3}) : vec({-0.7, -0.7});
            break;
        default:
            throw SpecError("unknown scenario " + std::to_string(scenario) + " (expected 1, 2 or 3)");
    }
    return c;
}

DensityGenerator ScenarioConfig::generator() const {
    switch (family) {
        case Family::Normal:
            return DensityGenerator::gaussian();
        case Family::StudentT:
            return DensityGenerator::student_t(nu);
        case Family::Generic:
            if (!generic_generator) throw SpecError("generic scenario without a generator");
            return *generic_generator;
    }
    throw SpecError("unknown family");
}

ModelSpec ScenarioConfig::fit_spec() const {
    switch (family) {
        case Family::Normal:
            return ModelSpec::normal();
        case Family::StudentT:
            return fit_fixed_nu ? ModelSpec::student_t_fixed(nu) : ModelSpec::student_t();
        case Family::Generic:
            return ModelSpec::generic(generator());
    }
    throw SpecError("unknown family");
}

ParamVector ScenarioConfig::identified_theta() const {
    ParamVector t = theta;
    t.gamma[0] -= threshold;
    t.log_nu.reset();
    if (fit_spec().estimates_nu()) t.log_nu = std::log(nu);
    return t;
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecError("simulation block must be a JSON object");
    static const std::set<std::string> known{"scenario", "variant", "n", "nrep", "seed", "nu", "generator",
                                             "covariate_law", "threshold", "theta", "fit_fixed_nu"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw SpecError("unknown simulation key '" + key + "'");
    }
    const int scenario = j.value("scenario", 1);
    ScenarioConfig c = preset(scenario == 0 ? 1 : scenario, j.value("variant", 0));
    c.scenario = scenario;
    if (j.contains("n")) c.n = j["n"].get<std::size_t>();
    if (j.contains("nrep")) c.nrep = j["nrep"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("nu")) c.nu = j["nu"].get<double>();
    if (j.contains("fit_fixed_nu")) c.fit_fixed_nu = j["fit_fixed_nu"].get<bool>();
    if (j.contains("generator")) {
        const auto g = j["generator"].get<std::string>();
        if (g == "normal") {
            c.family = Family::Normal;
        } else if (g == "t") {
            c.family = Family::StudentT;
        } else {
            throw SpecError("simulation generator must be normal or t");
        }
    }
    if (j.contains("covariate_law")) c.covariate_law = parse_covariate_law(j["covariate_law"].get<std::string>());
    if (j.contains("threshold")) c.threshold = j["threshold"].get<double>();
    if (j.contains("theta")) {
        const auto& t = j["theta"];
        if (t.contains("beta")) c.theta.beta = json_vector(t["beta"], "beta", 3);
        if (t.contains("gamma")) c.theta.gamma = json_vector(t["gamma"], "gamma", 4);
        if (t.contains("lambda")) c.theta.lambda = json_vector(t["lambda"], "lambda", 2);
        if (t.contains("kappa")) c.theta.kappa = json_vector(t["kappa"], "kappa", 2);
    }
    if (c.n < 12) throw SpecError("simulation needs n >= 12");
    if (c.nrep < 1) throw SpecError("simulation needs nrep >= 1");
    if (!(c.nu > 0.0)) throw SpecError("simulation nu must be positive");
    return c;
}

nlohmann::json ScenarioConfig::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["variant"] = variant;
    j["n"] = n;
    j["nrep"] = nrep;
    j["seed"] = seed;
    j["nu"] = nu;
    j["fit_fixed_nu"] = fit_fixed_nu;
    j["generator"] = family == Family::Normal ? "normal" : family == Family::StudentT ? "t" : "generic";
    j["covariate_law"] = covariate_law_name(covariate_law);
    j["threshold"] = threshold;
    j["theta"] = {{"beta", to_std(theta.beta)},
                  {"gamma", to_std(theta.gamma)},
                  {"lambda", to_std(theta.lambda)},
                  {"kappa", to_std(theta.kappa)}};
    return j;
}

BivariateDraws sample_bivariate(const LinearPredictors& lp, const DensityGenerator& generator, Rng& rng) {
    const auto n = lp.size();
    BivariateDraws out{Vector(n), Vector(n)};
    std::normal_distribution<double> normal(0.0, 1.0);

    std::optional<std::chi_squared_distribution<double>> chi2;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    switch (generator.kind()) {
        case GeneratorKind::Gaussian:
            break;
        case GeneratorKind::StudentT:
            chi2.emplace(generator.nu());
            break;
        case GeneratorKind::Generic:
            if (!generator.radial_sampler()) {
                throw UnsupportedGeneratorError("generic generator '" + generator.label() +
                                                "' has no radial sampler; cannot simulate from it");
            }
            break;
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        double z1 = 0.0;
        double z2 = 0.0;
        if (generator.kind() == GeneratorKind::Generic) {
            const double radius = generator.radial_sampler()(rng);
            const double t = angle(rng);
            z1 = radius * std::cos(t);
            z2 = radius * std::sin(t);
        } else {
            z1 = normal(rng);
            z2 = normal(rng);
            if (chi2) {
                // one mixing draw per row keeps the pair jointly t
                const double scale = std::sqrt(generator.nu() / (*chi2)(rng));
                z1 *= scale;
                z2 *= scale;
            }
        }
        const double rho = lp.rho[i];
        out.y_star[i] = lp.sigma[i] * z1 + lp.mu1[i];
        out.u_star[i] = rho * z1 + std::sqrt(1.0 - rho * rho) * z2 + lp.mu2[i];
    }
    return out;
}

Designs scenario_designs(const ScenarioConfig& config, std::size_t n, Rng& rng) {
    const auto rows = static_cast<Eigen::Index>(n);
    Designs d;
    d.X.resize(rows, 3);
    d.W.resize(rows, 4);
    d.Z.resize(rows, 2);
    d.V.resize(rows, 2);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double x1 = draw_covariate(config.covariate_law, rng);
        const double x2 = draw_covariate(config.covariate_law, rng);
        const double x3 = draw_covariate(config.covariate_law, rng);
        d.X.row(i) << 1.0, x1, x2;
        d.W.row(i) << 1.0, x1, x2, x3;
        d.Z.row(i) << 1.0, x1;
        d.V.row(i) << 1.0, x1;
    }
    d.x_names = with_intercept({"x1", "x2"});
    d.w_names = with_intercept({"x1", "x2", "x3"});
    d.z_names = with_intercept({"x1"});
    d.v_names = with_intercept({"x1"});
    return d;
}

SelectionDataset generate_dataset(const ScenarioConfig& config, Rng& rng) {
    const ModelSpec truth = ModelSpec::normal();  // links only
    ParamVector theta = config.theta;
    theta.log_nu.reset();
    const DensityGenerator g = config.generator();

    for (int attempt = 0; attempt < 100; ++attempt) {
        Designs d = scenario_designs(config, config.n, rng);
        // degenerate covariate draws are discarded before any outcome is sampled
        bool degenerate = false;
        for (Eigen::Index j = 1; j < d.W.cols(); ++j) {
            if (d.W.col(j).maxCoeff() - d.W.col(j).minCoeff() <= 0.0) degenerate = true;
        }
        if (degenerate) continue;

        const LinearPredictors lp = predictors(truth, theta, d);
        const BivariateDraws draws = sample_bivariate(lp, g, rng);
        std::vector<std::optional<double>> y(config.n);
        for (std::size_t i = 0; i < config.n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            if (draws.u_star[r] > config.threshold) y[i] = draws.y_star[r];
        }
        try {
            return SelectionDataset(std::move(y), std::move(d));
        } catch (const SpecError&) {
            continue;
        }
    }
    throw StudyError("could not draw a non-degenerate design in 100 attempts");
}

double calibrate_threshold(const ScenarioConfig& config, double target, Rng& rng, std::size_t pilot) {
    if (!(target > 0.0 && target < 1.0)) throw DomainError("target censoring must lie in (0, 1)");
    ParamVector theta = config.theta;
    theta.log_nu.reset();
    const Designs d = scenario_designs(config, pilot, rng);
    const LinearPredictors lp = predictors(ModelSpec::normal(), theta, d);
    const BivariateDraws draws = sample_bivariate(lp, config.generator(), rng);
    std::vector<double> u(draws.u_star.data(), draws.u_star.data() + draws.u_star.size());
    std::sort(u.begin(), u.end());
    // P(U* <= a) = target at the empirical target-quantile
    const double pos = target * static_cast<double>(u.size()) - 0.5;
    const auto lo = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(u.size() - 1)));
    const std::size_t hi = std::min(lo + 1, u.size() - 1);
    const double w = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
    return (1.0 - w) * u[lo] + w * u[hi];
}

MonteCarloSummary run_study(const ScenarioConfig& config, const StudyOptions& options) {
    if (config.nrep < 1) throw StudyError("nrep must be at least 1");
    const ModelSpec spec = config.fit_spec();
    const ParamVector truth = config.identified_theta();
    const ParamLayout lay = truth.layout();

    Fitter fitter = options.fitter;
    if (!fitter) {
        fitter = [](const ModelSpec& s, const SelectionDataset& data) {
            FitOptions o;
            o.compute_standard_errors = false;
            return fit(s, data, o);
        };
    }

    auto natural = [&](const ParamVector& t) {
        Vector v = t.flatten();
        if (lay.has_nu) v[lay.nu_offset()] = std::exp(v[lay.nu_offset()]);
        return v;
    };

    struct Replicate {
        std::optional<Vector> estimate;
        double censoring = 0.0;
        std::string error;
    };
    std::vector<Replicate> reps(config.nrep);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= config.nrep) return;
            Rng rng(derive_seed(config.seed, r));
            try {
                const SelectionDataset data = generate_dataset(config, rng);
                reps[r].censoring = 100.0 * static_cast<double>(data.n_censored()) / static_cast<double>(data.size());
                const FitResult f = fitter(spec, data);
                if (f.converged && f.theta.layout() == lay) {
                    reps[r].estimate = natural(f.theta);
                } else {
                    reps[r].error = f.converged ? "layout mismatch" : f.message;
                }
            } catch (const Error& e) {
                reps[r].error = e.what();
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.nrep));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    MonteCarloSummary s;
    s.names = parameter_names(lay);
    s.true_value = natural(truth);
    s.bias = Vector::Zero(lay.size());
    s.mse = Vector::Zero(lay.size());
    s.nrep = config.nrep;
    s.seed = config.seed;
    s.n = config.n;
    for (const auto& r : reps) {
        s.mean_censoring += r.censoring;
        if (!r.estimate) {
            ++s.failures;
            continue;
        }
        ++s.successes;
        const Vector diff = *r.estimate - s.true_value;
        s.bias += diff;
        s.mse += diff.cwiseProduct(diff);
    }
    s.mean_censoring /= static_cast<double>(config.nrep);
    if (s.failures * 5 > config.nrep) {
        std::string first;
        for (const auto& r : reps) {
            if (!r.error.empty()) {
                first = r.error;
                break;
            }
        }
        throw StudyError(std::to_string(s.failures) + " of " + std::to_string(config.nrep) +
                         " replicates failed (more than 20%); first failure: " + first);
    }
    if (s.successes > 0) {
        s.bias /= static_cast<double>(s.successes);
        s.mse /= static_cast<double>(s.successes);
    }
    return s;
}

void write_summary_csv(std::ostream& out, const MonteCarloSummary& s) {
    out << "name,true_value,bias,mse\n";
    for (std::size_t j = 0; j < s.names.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        out << s.names[j] << ',' << format_double(s.true_value[i]) << ',' << format_double(s.bias[i]) << ','
            << format_double(s.mse[i]) << '\n';
    }
}

nlohmann::json summary_metadata(const MonteCarloSummary& s) {
    return {{"seed", s.seed},
            {"n", s.n},
            {"nrep", s.nrep},
            {"successes", s.successes},
            {"failures", s.failures},
            {"mean_censoring_percent", s.mean_censoring}};
}

void write_dataset_csv(std::ostream& out, const SelectionDataset& data) {
    const Designs& d = data.designs();
    struct Column {
        const Matrix* block;
        Eigen::Index index;
    };
    std::vector<std::string> names;
    std::vector<Column> cols;
    auto collect = [&](const Matrix& m, const std::vector<std::string>& block_names) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const std::string& name = block_names[static_cast<std::size_t>(j)];
            if (name == "intercept" || std::find(names.begin(), names.end(), name) != names.end()) continue;
            names.push_back(name);
            cols.push_back({&m, j});
        }
    };
    collect(d.X, d.x_names);
    collect(d.W, d.w_names);
    collect(d.Z, d.z_names);
    collect(d.V, d.v_names);

    out << "y,u";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (data.y(i)) out << format_double(*data.y(i));
        out << ',' << data.u(i);
        for (const auto& c : cols) out << ',' << format_double((*c.block)(r, c.index));
        out << '\n';
    }
}

}  // namespace symsel
