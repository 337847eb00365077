#pragma once

#include "symsel/estimate.hpp"
#include "symsel/model.hpp"
#include "symsel/simulate.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace symsel::cli {

enum class Command { Fit, Simulate, Diagnose };

std::string command_name(Command c);
Command parse_command(const std::string& name);

struct ColumnBlock {
    std::vector<std::string> columns;
    bool intercept = true;
};

/// Column roles in the input CSV.
struct ModelColumns {
    std::string outcome = "y";
    std::string selection = "u";
    ColumnBlock mean;                  // X
    ColumnBlock selection_covariates;  // W
    ColumnBlock dispersion;            // Z
    ColumnBlock correlation;           // V
};

/// normal, t (nu estimated) or t_fixed (nu given).
struct GeneratorChoice {
    enum class Kind { Normal, T, TFixed };
    Kind kind = Kind::T;
    std::optional<double> nu;

    static GeneratorChoice parse(const nlohmann::json& j);
    ModelSpec spec() const;
    std::string label() const;
    nlohmann::json to_json() const;
};

struct RunConfig {
    Command command = Command::Fit;
    std::optional<std::string> data_path;
    ModelColumns model;
    GeneratorChoice generator;
    /// Models fitted by diagnose; defaults to normal and t.
    std::vector<GeneratorChoice> compare;
    FitOptions fit;
    std::uint64_t seed = 1;
    ScenarioConfig simulation = ScenarioConfig::preset(1);
    /// When set, simulate calibrates the selection cutoff to this censoring fraction.
    std::optional<double> target_censoring;
    std::string output_dir = "out";
    bool allow_nonconverged = false;
    unsigned threads = 0;

    /// Validates keys and types; relative data paths resolve against base_dir.
    static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    /// Resolved configuration without the output directory, so reruns into a
    /// different directory hash identically.
    nlohmann::json to_json() const;
    std::string hash() const;
};

RunConfig load_config(const std::filesystem::path& path);

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> generator;
    std::optional<double> nu;
    std::optional<int> scenario;
    std::optional<std::size_t> n;
    std::optional<std::size_t> nrep;
    std::optional<std::string> out;
    bool allow_nonconverged = false;
};

void apply_overrides(RunConfig& config, const Overrides& o);

/// Reads a comma-separated file with a header row. Lines starting with '#'
/// are skipped; an empty field is missing. Censored rows may leave the
/// outcome empty; a value there is ignored with a warning.
SelectionDataset ingest_csv(const std::filesystem::path& path, const ModelColumns& model,
                            std::vector<std::string>* warnings = nullptr);

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kNotConverged = 3,
    kLocked = 4,
};

/// Runs one command and writes its artifacts; returns the exit status.
/// Progress goes to `log`, single-line diagnostics to `err`.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace symsel::cli
