#include "cli.hpp"

#include "symsel/diagnose.hpp"
#include "symsel/error.hpp"
#include "symsel/io.hpp"
#include "symsel/version.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace symsel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- config

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw SpecError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw SpecError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get_as(const json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw SpecError(where + " has the wrong type");
    }
}

ColumnBlock parse_block(const json& j, const std::string& where) {
    ColumnBlock b;
    if (j.is_array()) {
        b.columns = get_as<std::vector<std::string>>(j, where);
        return b;
    }
    check_keys(j, {"columns", "intercept"}, where);
    if (j.contains("columns")) b.columns = get_as<std::vector<std::string>>(j["columns"], where + ".columns");
    if (j.contains("intercept")) b.intercept = get_as<bool>(j["intercept"], where + ".intercept");
    if (b.columns.empty() && !b.intercept) throw SpecError(where + " has no columns and no intercept");
    return b;
}

json block_json(const ColumnBlock& b) { return {{"columns", b.columns}, {"intercept", b.intercept}}; }

ModelColumns parse_model(const json& j) {
    check_keys(j, {"outcome", "selection", "mean", "selection_covariates", "dispersion", "correlation"}, "model");
    ModelColumns m;
    if (j.contains("outcome")) m.outcome = get_as<std::string>(j["outcome"], "model.outcome");
    if (j.contains("selection")) m.selection = get_as<std::string>(j["selection"], "model.selection");
    if (j.contains("mean")) m.mean = parse_block(j["mean"], "model.mean");
    if (j.contains("selection_covariates")) {
        m.selection_covariates = parse_block(j["selection_covariates"], "model.selection_covariates");
    }
    if (j.contains("dispersion")) m.dispersion = parse_block(j["dispersion"], "model.dispersion");
    if (j.contains("correlation")) m.correlation = parse_block(j["correlation"], "model.correlation");
    return m;
}

// simulate draws from the configured generator and fits the matching model
void resolve(RunConfig& c) {
    c.simulation.seed = c.seed;
    switch (c.generator.kind) {
        case GeneratorChoice::Kind::Normal:
            c.simulation.family = Family::Normal;
            c.simulation.fit_fixed_nu = false;
            break;
        case GeneratorChoice::Kind::T:
            c.simulation.family = Family::StudentT;
            c.simulation.fit_fixed_nu = false;
            break;
        case GeneratorChoice::Kind::TFixed:
            c.simulation.family = Family::StudentT;
            c.simulation.fit_fixed_nu = true;
            c.simulation.nu = *c.generator.nu;
            break;
    }
    if (c.compare.empty()) {
        c.compare = {GeneratorChoice{GeneratorChoice::Kind::Normal, std::nullopt},
                     GeneratorChoice{GeneratorChoice::Kind::T, std::nullopt}};
    }
}

// ---------------------------------------------------------------- csv

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& raw, const std::string& column, std::size_t row) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw DataError("non-numeric value '" + s + "' in column '" + column + "' at row " + std::to_string(row), row);
    }
    return v;
}

// ---------------------------------------------------------------- run

struct Meta {
    std::string command;
    std::uint64_t seed;
    std::string hash;

    json to_json() const {
        return {{"tool", "symsel"}, {"version", kVersion}, {"command", command}, {"seed", seed}, {"config_hash", hash}};
    }
    std::string csv_comment() const {
        return "# symsel " + std::string(kVersion) + " command=" + command + " seed=" + std::to_string(seed) +
               " config_hash=" + hash + "\n";
    }
};

class OutputLock {
public:
    explicit OutputLock(fs::path path) : path_(std::move(path)) {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ >= 0) {
            const std::string pid = std::to_string(::getpid()) + "\n";
            [[maybe_unused]] auto w = ::write(fd_, pid.data(), pid.size());
        }
    }
    ~OutputLock() {
        if (fd_ >= 0) {
            ::close(fd_);
            std::error_code ec;
            fs::remove(path_, ec);
        }
    }
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;
    bool held() const { return fd_ >= 0; }

private:
    fs::path path_;
    int fd_ = -1;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error("could not write " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool accept_convergence(bool converged, const RunConfig& c, const std::string& what, std::ostream& err) {
    if (converged) return true;
    err << "symsel: warning: " << what << " did not converge"
        << (c.allow_nonconverged ? " (allowed by --allow-nonconverged)" : "") << "\n";
    return c.allow_nonconverged;
}

SelectionDataset load_data(const RunConfig& c, std::vector<std::string>& warnings, std::ostream& err) {
    if (!c.data_path) throw SpecError("this command needs a data file (config key 'data')");
    SelectionDataset data = ingest_csv(*c.data_path, c.model, &warnings);
    for (const auto& w : warnings) err << "symsel: warning: " << w << "\n";
    return data;
}

int run_fit(const RunConfig& c, const Meta& meta, const fs::path& out, std::ostream& log, std::ostream& err) {
    std::vector<std::string> warnings;
    const SelectionDataset data = load_data(c, warnings, err);
    const FitResult f = fit(c.generator.spec(), data, c.fit);
    const bool ok = accept_convergence(f.converged, c, "fit", err);

    json report;
    report["meta"] = meta.to_json();
    report["meta"]["config"] = c.to_json();
    report["data"] = {{"n", data.size()}, {"n_selected", data.n_selected()}, {"n_censored", data.n_censored()}};
    report.update(fit_to_json(f));
    for (const auto& w : warnings) report["warnings"].push_back(w);
    write_file(out / "fit_report.json", dump(report));

    std::ostringstream csv;
    csv << meta.csv_comment();
    write_residuals_csv(csv, mt_residuals(f, data));
    write_file(out / "residuals.csv", csv.str());

    log << "fit: " << f.spec.label() << " loglik=" << format_double(f.loglik_at_max) << " aic="
        << format_double(f.aic) << " converged=" << (f.converged ? "true" : "false") << "\n";
    return ok ? kOk : kNotConverged;
}

int run_simulate(const RunConfig& c, const Meta& meta, const fs::path& out, std::ostream& log) {
    ScenarioConfig sc = c.simulation;
    if (c.target_censoring) {
        Rng pilot(derive_seed(c.seed, ~0ULL));
        sc.threshold = calibrate_threshold(sc, *c.target_censoring, pilot);
        log << "simulate: calibrated threshold " << format_double(sc.threshold) << "\n";
    }
    // dataset.csv is replicate 0 of the study
    Rng rng(derive_seed(sc.seed, 0));
    const SelectionDataset data = generate_dataset(sc, rng);
    std::ostringstream csv;
    csv << meta.csv_comment();
    write_dataset_csv(csv, data);
    write_file(out / "dataset.csv", csv.str());
    log << "simulate: dataset n=" << data.size() << " censored=" << data.n_censored() << "\n";

    if (sc.nrep > 1) {
        StudyOptions so;
        so.threads = c.threads;
        const MonteCarloSummary s = run_study(sc, so);
        std::ostringstream sum;
        sum << meta.csv_comment();
        write_summary_csv(sum, s);
        write_file(out / "mc_summary.csv", sum.str());
        json j;
        j["meta"] = meta.to_json();
        j["meta"]["config"] = c.to_json();
        j["study"] = summary_metadata(s);
        j["study"]["threshold"] = sc.threshold;
        write_file(out / "mc_summary.json", dump(j));
        log << "simulate: " << s.successes << "/" << s.nrep << " replicates, mean censoring "
            << format_double(s.mean_censoring) << "%\n";
    }
    return kOk;
}

int run_diagnose(const RunConfig& c, const Meta& meta, const fs::path& out, std::ostream& log, std::ostream& err) {
    std::vector<std::string> warnings;
    const SelectionDataset data = load_data(c, warnings, err);
    std::vector<FitResult> fits;
    std::vector<std::string> labels;
    bool ok = true;
    std::optional<std::size_t> primary;
    for (const auto& choice : c.compare) {
        fits.push_back(fit(choice.spec(), data, c.fit));
        labels.push_back(choice.label());
        ok = accept_convergence(fits.back().converged, c, "fit of " + labels.back(), err) && ok;
        if (labels.back() == c.generator.label()) primary = fits.size() - 1;
    }
    if (!primary) {
        fits.push_back(fit(c.generator.spec(), data, c.fit));
        ok = accept_convergence(fits.back().converged, c, "fit of " + c.generator.label(), err) && ok;
    }
    const FitResult& main_fit = primary ? fits[*primary] : fits.back();
    const std::vector<FitResult> compared(fits.begin(), fits.begin() + static_cast<std::ptrdiff_t>(labels.size()));
    const auto table = compare_models(compared, labels);

    std::ostringstream cmp;
    cmp << meta.csv_comment();
    write_comparison_csv(cmp, table);
    write_file(out / "comparison.csv", cmp.str());
    std::ostringstream text;
    write_comparison_text(text, table);
    write_file(out / "comparison.txt", text.str());
    log << text.str();

    std::ostringstream qq;
    qq << meta.csv_comment();
    write_qq_csv(qq, qq_data(mt_residuals(main_fit, data)));
    write_file(out / "qq.csv", qq.str());
    return ok ? kOk : kNotConverged;
}

void write_error_json(const fs::path& out, const Meta& meta, const std::string& kind, const std::string& message,
                      std::optional<std::size_t> row) {
    json j;
    j["meta"] = meta.to_json();
    j["error"] = {{"kind", kind}, {"message", message}};
    if (row) j["error"]["row"] = *row;
    std::error_code ec;
    fs::create_directories(out, ec);
    std::ofstream f(out / "error.json", std::ios::binary | std::ios::trunc);
    f << dump(j);
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::Fit:
            return "fit";
        case Command::Simulate:
            return "simulate";
        case Command::Diagnose:
            return "diagnose";
    }
    return "fit";
}

Command parse_command(const std::string& name) {
    if (name == "fit") return Command::Fit;
    if (name == "simulate") return Command::Simulate;
    if (name == "diagnose") return Command::Diagnose;
    throw SpecError("unknown command '" + name + "' (expected fit, simulate or diagnose)");
}

GeneratorChoice GeneratorChoice::parse(const json& j) {
    GeneratorChoice g;
    std::string family;
    if (j.is_string()) {
        family = j.get<std::string>();
    } else {
        check_keys(j, {"family", "nu"}, "generator");
        if (!j.contains("family")) throw SpecError("generator needs a family");
        family = get_as<std::string>(j["family"], "generator.family");
        if (j.contains("nu") && !j["nu"].is_null()) g.nu = get_as<double>(j["nu"], "generator.nu");
    }
    if (family == "normal") {
        g.kind = Kind::Normal;
        g.nu.reset();
    } else if (family == "t") {
        g.kind = g.nu ? Kind::TFixed : Kind::T;
    } else if (family == "t_fixed") {
        g.kind = Kind::TFixed;
        if (!g.nu) throw SpecError("generator t_fixed needs nu");
    } else {
        throw SpecError("unknown generator '" + family + "' (expected normal, t or t_fixed)");
    }
    if (g.nu && !(*g.nu > 0.0)) throw SpecError("generator nu must be positive");
    return g;
}

ModelSpec GeneratorChoice::spec() const {
    switch (kind) {
        case Kind::Normal:
            return ModelSpec::normal();
        case Kind::T:
            return ModelSpec::student_t();
        case Kind::TFixed:
            return ModelSpec::student_t_fixed(*nu);
    }
    return ModelSpec::student_t();
}

std::string GeneratorChoice::label() const {
    switch (kind) {
        case Kind::Normal:
            return "normal";
        case Kind::T:
            return "t";
        case Kind::TFixed:
            return "t_fixed(" + format_double(*nu) + ")";
    }
    return "t";
}

json GeneratorChoice::to_json() const {
    switch (kind) {
        case Kind::Normal:
            return {{"family", "normal"}};
        case Kind::T:
            return {{"family", "t"}};
        case Kind::TFixed:
            return {{"family", "t_fixed"}, {"nu", *nu}};
    }
    return {};
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
    check_keys(j,
               {"$schema", "command", "data", "model", "generator", "compare", "fit", "seed", "simulation",
                "output_dir", "allow_nonconverged", "threads"},
               "config");
    RunConfig c;
    if (j.contains("command")) c.command = parse_command(get_as<std::string>(j["command"], "command"));
    if (j.contains("data")) {
        fs::path p = get_as<std::string>(j["data"], "data");
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        c.data_path = p.lexically_normal().string();
    }
    if (j.contains("model")) c.model = parse_model(j["model"]);
    if (j.contains("generator")) c.generator = GeneratorChoice::parse(j["generator"]);
    if (j.contains("compare")) {
        if (!j["compare"].is_array() || j["compare"].empty()) throw SpecError("compare must be a non-empty array");
        for (const auto& g : j["compare"]) c.compare.push_back(GeneratorChoice::parse(g));
    }
    if (j.contains("fit")) c.fit = FitOptions::from_json(j["fit"]);
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
    if (j.contains("simulation")) {
        json sim = j["simulation"];
        check_keys(sim,
                   {"scenario", "variant", "n", "nrep", "nu", "covariate_law", "threshold", "theta",
                    "target_censoring"},
                   "simulation");
        if (sim.contains("target_censoring")) {
            const double t = get_as<double>(sim["target_censoring"], "simulation.target_censoring");
            if (!(t > 0.0 && t < 1.0)) throw SpecError("simulation.target_censoring must lie in (0, 1)");
            c.target_censoring = t;
            sim.erase("target_censoring");
        }
        try {
            c.simulation = ScenarioConfig::from_json(sim);
        } catch (const json::exception& e) {
            throw SpecError(std::string("simulation block: ") + e.what());
        }
    }
    if (j.contains("output_dir")) c.output_dir = get_as<std::string>(j["output_dir"], "output_dir");
    if (j.contains("allow_nonconverged")) {
        c.allow_nonconverged = get_as<bool>(j["allow_nonconverged"], "allow_nonconverged");
    }
    if (j.contains("threads")) c.threads = get_as<unsigned>(j["threads"], "threads");
    resolve(c);
    return c;
}

json RunConfig::to_json() const {
    json j;
    j["command"] = command_name(command);
    j["data"] = data_path ? json(*data_path) : json(nullptr);
    j["model"] = {{"outcome", model.outcome},
                  {"selection", model.selection},
                  {"mean", block_json(model.mean)},
                  {"selection_covariates", block_json(model.selection_covariates)},
                  {"dispersion", block_json(model.dispersion)},
                  {"correlation", block_json(model.correlation)}};
    j["generator"] = generator.to_json();
    j["compare"] = json::array();
    for (const auto& g : compare) j["compare"].push_back(g.to_json());
    j["fit"] = fit.to_json();
    j["seed"] = seed;
    j["simulation"] = simulation.to_json();
    j["simulation"].erase("seed");
    j["simulation"]["target_censoring"] = target_censoring ? json(*target_censoring) : json(nullptr);
    return j;
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return RunConfig::from_json(j, path.parent_path());
}

void apply_overrides(RunConfig& c, const Overrides& o) {
    if (o.seed) c.seed = *o.seed;
    if (o.generator) c.generator = GeneratorChoice::parse(json(*o.generator));
    if (o.nu) {
        if (!(*o.nu > 0.0)) throw SpecError("--nu must be positive");
        if (c.command == Command::Simulate) {
            c.simulation.nu = *o.nu;
        } else if (c.generator.kind != GeneratorChoice::Kind::Normal) {
            c.generator = GeneratorChoice{GeneratorChoice::Kind::TFixed, *o.nu};
        } else {
            throw SpecError("--nu needs the t generator");
        }
    }
    if (o.scenario) {
        const ScenarioConfig p = ScenarioConfig::preset(*o.scenario);
        c.simulation.scenario = p.scenario;
        c.simulation.variant = p.variant;
        c.simulation.theta = p.theta;
    }
    if (o.n) {
        if (*o.n < 12) throw SpecError("--n must be at least 12");
        c.simulation.n = *o.n;
    }
    if (o.nrep) {
        if (*o.nrep < 1) throw SpecError("--nrep must be at least 1");
        c.simulation.nrep = *o.nrep;
    }
    if (o.out) c.output_dir = *o.out;
    if (o.allow_nonconverged) c.allow_nonconverged = true;
    resolve(c);
}

SelectionDataset ingest_csv(const fs::path& path, const ModelColumns& model, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open data file " + path.string());

    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = split_csv_line(line);
            for (auto& h : header) h = trim(h);
            if (header.size() == 1 && header[0].empty()) throw DataError("empty header row in " + path.string());
            continue;
        }
        rows.push_back(split_csv_line(line));
        if (rows.back().size() != header.size()) {
            throw DataError("row " + std::to_string(rows.size()) + " has " + std::to_string(rows.back().size()) +
                                " fields, header has " + std::to_string(header.size()),
                            rows.size());
        }
    }
    if (header.empty()) throw DataError("data file " + path.string() + " is empty");
    if (rows.empty()) throw DataError("data file " + path.string() + " has a header but no rows");

    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (!index.emplace(header[k], k).second) throw DataError("duplicate column '" + header[k] + "' in header");
    }
    auto column = [&](const std::string& name) {
        const auto it = index.find(name);
        if (it == index.end()) throw DataError("column '" + name + "' not found in " + path.string());
        return it->second;
    };
    const std::size_t y_col = column(model.outcome);
    const std::size_t u_col = column(model.selection);

    const auto n = static_cast<Eigen::Index>(rows.size());
    auto build = [&](const ColumnBlock& b, Matrix& m, std::vector<std::string>& names) {
        std::vector<std::size_t> cols;
        for (const auto& name : b.columns) cols.push_back(column(name));
        const auto width = static_cast<Eigen::Index>(cols.size()) + (b.intercept ? 1 : 0);
        m.resize(n, width);
        names.clear();
        if (b.intercept) names.emplace_back("intercept");
        for (const auto& name : b.columns) names.push_back(name);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index j = 0;
            if (b.intercept) m(i, j++) = 1.0;
            for (std::size_t col : cols) {
                const auto row = static_cast<std::size_t>(i) + 1;
                const auto v = parse_number(rows[static_cast<std::size_t>(i)][col], header[col], row);
                if (!v) throw DataError("missing value in column '" + header[col] + "' at row " + std::to_string(row), row);
                m(i, j++) = *v;
            }
        }
    };
    Designs d;
    build(model.mean, d.X, d.x_names);
    build(model.selection_covariates, d.W, d.w_names);
    build(model.dispersion, d.Z, d.z_names);
    build(model.correlation, d.V, d.v_names);

    std::vector<std::optional<double>> y(rows.size());
    std::size_t ignored = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t row = i + 1;
        const auto u = parse_number(rows[i][u_col], model.selection, row);
        if (!u || (*u != 0.0 && *u != 1.0)) {
            throw DataError("selection column '" + model.selection + "' must be 0 or 1 at row " + std::to_string(row),
                            row);
        }
        const auto value = parse_number(rows[i][y_col], model.outcome, row);
        if (*u == 1.0) {
            if (!value) {
                throw DataError("outcome missing on a selected row " + std::to_string(row), row);
            }
            y[i] = *value;
        } else if (value) {
            ++ignored;
        }
    }
    if (ignored && warnings) {
        warnings->push_back(std::to_string(ignored) + " censored row(s) carry an outcome value; it was ignored");
    }
    return SelectionDataset(std::move(y), std::move(d));
}

int run(const RunConfig& c, std::ostream& log, std::ostream& err) {
    const Meta meta{command_name(c.command), c.seed, c.hash()};
    const fs::path out = c.output_dir;
    log << "config " << c.to_json().dump() << "\n";
    log << "seed " << c.seed << " config_hash " << meta.hash << "\n";

    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        err << "symsel: error [io]: cannot create output directory " << out.string() << ": " << ec.message() << "\n";
        return kFailure;
    }
    OutputLock lock(out / ".symsel.lock");
    if (!lock.held()) {
        err << "symsel: error [locked]: output directory " << out.string()
            << " is in use by another run (remove .symsel.lock if stale)\n";
        return kLocked;
    }
    std::error_code rm;
    fs::remove(out / "error.json", rm);

    try {
        switch (c.command) {
            case Command::Fit:
                return run_fit(c, meta, out, log, err);
            case Command::Simulate:
                return run_simulate(c, meta, out, log);
            case Command::Diagnose:
                return run_diagnose(c, meta, out, log, err);
        }
    } catch (const DataError& e) {
        err << "symsel: error [" << e.kind() << "]: " << e.what() << "\n";
        write_error_json(out, meta, e.kind(), e.what(), e.row());
        return kFailure;
    } catch (const NonFiniteError& e) {
        err << "symsel: error [" << e.kind() << "]: " << e.what() << "\n";
        write_error_json(out, meta, e.kind(), e.what(), e.row());
        return kFailure;
    } catch (const SpecError& e) {
        err << "symsel: error [" << e.kind() << "]: " << e.what() << "\n";
        write_error_json(out, meta, e.kind(), e.what(), std::nullopt);
        return kUsage;
    } catch (const Error& e) {
        err << "symsel: error [" << e.kind() << "]: " << e.what() << "\n";
        write_error_json(out, meta, e.kind(), e.what(), std::nullopt);
        return kFailure;
    } catch (const std::exception& e) {
        err << "symsel: error [internal]: " << e.what() << "\n";
        write_error_json(out, meta, "internal", e.what(), std::nullopt);
        return kFailure;
    }
    return kFailure;
}

}  // namespace symsel::cli
