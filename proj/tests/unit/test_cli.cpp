#include "cli.hpp"

#include "symsel/error.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace symsel;
using namespace symsel::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("symsel_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ModelColumns scenario_columns() {
    ModelColumns m;
    m.mean.columns = {"x1", "x2"};
    m.selection_covariates.columns = {"x1", "x2", "x3"};
    m.dispersion.columns = {"x1"};
    m.correlation.columns = {"x1"};
    return m;
}

int run_quiet(const RunConfig& c) {
    std::ostringstream log, err;
    return run(c, log, err);
}

RunConfig simulate_config(const fs::path& out, std::size_t n, std::size_t nrep, std::uint64_t seed) {
    RunConfig c = RunConfig::from_json(nlohmann::json::object());
    c.command = Command::Simulate;
    Overrides o;
    o.scenario = 1;
    o.n = n;
    o.nrep = nrep;
    o.seed = seed;
    o.out = out.string();
    apply_overrides(c, o);
    return c;
}

RunConfig fit_config(const fs::path& data, const fs::path& out, const std::string& generator = "t") {
    nlohmann::json j = {{"data", data.string()},
                        {"model",
                         {{"outcome", "y"},
                          {"selection", "u"},
                          {"mean", {"x1", "x2"}},
                          {"selection_covariates", {"x1", "x2", "x3"}},
                          {"dispersion", {"x1"}},
                          {"correlation", {"x1"}}}},
                        {"generator", generator},
                        {"seed", 5},
                        {"output_dir", out.string()}};
    return RunConfig::from_json(j);
}

}  // namespace

TEST(Ingest, HappyPath) {
    const auto dir = scratch("ingest");
    write(dir / "d.csv", "y,u,x1,x2,x3\n1.5,1,0.1,0.2,0.3\n,0,0.4,0.5,0.6\n2.5,1,0.7,0.8,1.9\n");
    ModelColumns m;
    m.mean.columns = {"x1"};
    m.selection_covariates.intercept = false;
    m.selection_covariates.columns = {"x2"};
    m.dispersion.intercept = false;
    m.dispersion.columns = {"x3"};
    m.correlation.columns = {};
    m.correlation.intercept = true;
    // k + l + p + q = 5 > n; only the parsing is under test here
    EXPECT_THROW(ingest_csv(dir / "d.csv", m), SpecError);
    write(dir / "e.csv",
          "y,u,x1\n1.5,1,0.1\n,0,0.4\n2.5,1,0.7\n1,1,0.3\n,0,0.9\n3,1,1.1\n,0,1.2\n");
    ModelColumns k;
    k.mean.columns = {"x1"};
    k.selection_covariates.columns = {"x1"};
    const auto d = ingest_csv(dir / "e.csv", k);
    EXPECT_EQ(d.size(), 7u);
    EXPECT_EQ(d.n_selected(), 4u);
    EXPECT_FALSE(d.y(1).has_value());
    EXPECT_EQ(d.designs().x_names[0], "intercept");
}

TEST(Ingest, ThreeRowFile) {
    const auto dir = scratch("three");
    write(dir / "d.csv", "y,u\n1.5,1\n,0\n2.5,1\n");
    ModelColumns m;  // intercept-only blocks: k + l + p + q = 4 >= n = 3
    EXPECT_THROW(ingest_csv(dir / "d.csv", m), SpecError);
}

TEST(Ingest, Errors) {
    const auto dir = scratch("errors");
    ModelColumns m;
    m.mean.columns = {"x1"};
    write(dir / "nohdr.csv", "");
    EXPECT_THROW(ingest_csv(dir / "nohdr.csv", m), DataError);
    write(dir / "nocol.csv", "y,u,x2\n1,1,2\n");
    try {
        ingest_csv(dir / "nocol.csv", m);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("'x1'"), std::string::npos);
    }
    write(dir / "text.csv", "y,u,x1\n1,1,abc\n");
    EXPECT_THROW(ingest_csv(dir / "text.csv", m), DataError);
    write(dir / "miss.csv", "y,u,x1\n1,1,0.2\n2,1,\n");
    try {
        ingest_csv(dir / "miss.csv", m);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(e.row().value(), 2u);
    }
    write(dir / "badu.csv", "y,u,x1\n1,2,0.2\n");
    EXPECT_THROW(ingest_csv(dir / "badu.csv", m), DataError);
}

TEST(Ingest, OutcomeOnCensoredRowWarns) {
    const auto dir = scratch("warn");
    std::string csv = "# comment line\ny,u,x1\n";
    for (int i = 0; i < 12; ++i) csv += std::to_string(i) + "," + std::to_string(i % 2) + "," + std::to_string(i * 0.1) + "\n";
    write(dir / "d.csv", csv);
    ModelColumns m;
    m.mean.columns = {"x1"};
    std::vector<std::string> warnings;
    const auto d = ingest_csv(dir / "d.csv", m, &warnings);
    EXPECT_EQ(d.n_selected(), 6u);
    ASSERT_EQ(warnings.size(), 1u);
}

TEST(Config, ValidatingLoader) {
    EXPECT_THROW(RunConfig::from_json({{"unknown", 1}}), SpecError);
    EXPECT_THROW(RunConfig::from_json({{"seed", "abc"}}), SpecError);
    EXPECT_THROW(RunConfig::from_json({{"generator", "cauchy"}}), SpecError);
    EXPECT_THROW(RunConfig::from_json({{"generator", {{"family", "t_fixed"}}}}), SpecError);
    EXPECT_THROW(RunConfig::from_json({{"model", {{"mean", {{"cols", {"a"}}}}}}}), SpecError);
    EXPECT_THROW(RunConfig::from_json({{"simulation", {{"target_censoring", 1.5}}}}), SpecError);
    const auto c = RunConfig::from_json({{"generator", {{"family", "t"}, {"nu", 5}}}});
    EXPECT_EQ(c.generator.kind, GeneratorChoice::Kind::TFixed);
    EXPECT_EQ(c.generator.spec().fixed_nu.value(), 5.0);
}

TEST(Config, ShippedExamplesLoad) {
    for (const char* name : {"fit_scenario1.json", "simulate_scenario1.json", "diagnose_scenario1.json"}) {
        EXPECT_NO_THROW(load_config(fs::path(SYMSEL_SOURCE_DIR) / "docs" / "examples" / name)) << name;
    }
}

TEST(Config, HashIgnoresOutputDirectory) {
    auto a = RunConfig::from_json({{"seed", 3}, {"output_dir", "a"}});
    auto b = RunConfig::from_json({{"seed", 3}, {"output_dir", "b"}});
    EXPECT_EQ(a.hash(), b.hash());
    b.seed = 4;
    EXPECT_NE(a.hash(), b.hash());
}

TEST(Run, SimulateIsByteIdentical) {
    const auto dir = scratch("sim");
    ASSERT_EQ(run_quiet(simulate_config(dir / "a", 500, 1, 42)), kOk);
    ASSERT_EQ(run_quiet(simulate_config(dir / "b", 500, 1, 42)), kOk);
    EXPECT_EQ(slurp(dir / "a" / "dataset.csv"), slurp(dir / "b" / "dataset.csv"));
    EXPECT_FALSE(fs::exists(dir / "a" / "mc_summary.csv"));
    EXPECT_FALSE(fs::exists(dir / "a" / ".symsel.lock"));
    const std::string head = slurp(dir / "a" / "dataset.csv").substr(0, 64);
    EXPECT_NE(head.find("seed=42"), std::string::npos);
    EXPECT_NE(head.find("config_hash="), std::string::npos);
}

TEST(Run, SimulateStudyWritesSummary) {
    const auto dir = scratch("study");
    ASSERT_EQ(run_quiet(simulate_config(dir / "a", 300, 4, 7)), kOk);
    EXPECT_TRUE(fs::exists(dir / "a" / "mc_summary.csv"));
    const auto meta = nlohmann::json::parse(slurp(dir / "a" / "mc_summary.json"));
    EXPECT_EQ(meta["study"]["nrep"], 4);
    EXPECT_EQ(meta["meta"]["seed"], 7);
    EXPECT_NE(slurp(dir / "a" / "mc_summary.csv").find("name,true_value,bias,mse"), std::string::npos);
}

TEST(Run, SimulateThenFitRecoversParameters) {
    const auto dir = scratch("roundtrip");
    ASSERT_EQ(run_quiet(simulate_config(dir / "sim", 2000, 1, 11)), kOk);
    const auto c = fit_config(dir / "sim" / "dataset.csv", dir / "fit");
    ASSERT_EQ(run_quiet(c), kOk);
    const auto report = nlohmann::json::parse(slurp(dir / "fit" / "fit_report.json"));
    EXPECT_TRUE(report["convergence"]["converged"].get<bool>());
    std::map<std::string, int> blocks;
    double beta2 = 0.0;
    for (const auto& row : report["estimates"]) {
        ++blocks[row["block"].get<std::string>()];
        for (const char* key : {"estimate", "std_error", "z_value", "p_value"}) EXPECT_TRUE(row.contains(key));
        if (row["block"] == "outcome" && row["name"] == "x1") beta2 = row["estimate"].get<double>();
    }
    EXPECT_EQ(blocks["outcome"], 3);
    EXPECT_EQ(blocks["selection"], 4);
    EXPECT_EQ(blocks["dispersion"], 2);
    EXPECT_EQ(blocks["correlation"], 2);
    EXPECT_EQ(blocks["nu"], 1);
    EXPECT_NEAR(beta2, 0.7, 3.0 * std::sqrt(0.0003));
    EXPECT_EQ(report["meta"]["version"], "0.1.0");
    EXPECT_TRUE(fs::exists(dir / "fit" / "residuals.csv"));

    // same seed and config: byte-identical report
    auto again = c;
    again.output_dir = (dir / "fit2").string();
    ASSERT_EQ(run_quiet(again), kOk);
    EXPECT_EQ(slurp(dir / "fit" / "fit_report.json"), slurp(dir / "fit2" / "fit_report.json"));
}

TEST(Run, DiagnoseOrdersByAic) {
    const auto dir = scratch("diag");
    ASSERT_EQ(run_quiet(simulate_config(dir / "sim", 1000, 1, 13)), kOk);
    auto c = fit_config(dir / "sim" / "dataset.csv", dir / "diag");
    c.command = Command::Diagnose;
    ASSERT_EQ(run_quiet(c), kOk);
    std::istringstream in(slurp(dir / "diag" / "comparison.csv"));
    std::string line;
    std::vector<double> aic;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("rank", 0) == 0) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
        aic.push_back(std::stod(f[4]));
    }
    ASSERT_EQ(aic.size(), 2u);
    EXPECT_LE(aic[0], aic[1]);
    EXPECT_TRUE(fs::exists(dir / "diag" / "qq.csv"));
}

TEST(Run, NonConvergedFitExitsNonZero) {
    const auto dir = scratch("nonconv");
    ASSERT_EQ(run_quiet(simulate_config(dir / "sim", 400, 1, 3)), kOk);
    auto c = fit_config(dir / "sim" / "dataset.csv", dir / "fit");
    c.fit.max_iterations = 1;
    EXPECT_EQ(run_quiet(c), kNotConverged);
    EXPECT_TRUE(fs::exists(dir / "fit" / "fit_report.json"));
    c.allow_nonconverged = true;
    EXPECT_EQ(run_quiet(c), kOk);
}

TEST(Run, FailureWritesErrorJson) {
    const auto dir = scratch("fail");
    write(dir / "d.csv", "y,u,x9\n1,1,1\n");
    auto c = fit_config(dir / "d.csv", dir / "out");
    EXPECT_EQ(run_quiet(c), kFailure);
    const auto err = nlohmann::json::parse(slurp(dir / "out" / "error.json"));
    EXPECT_EQ(err["error"]["kind"], "data_error");
    EXPECT_TRUE(err["meta"].contains("config_hash"));
}

TEST(Run, LockedDirectoryRefused) {
    const auto dir = scratch("lock");
    fs::create_directories(dir / "out");
    write(dir / "out" / ".symsel.lock", "1\n");
    EXPECT_EQ(run_quiet(simulate_config(dir / "out", 100, 1, 1)), kLocked);
    EXPECT_FALSE(fs::exists(dir / "out" / "dataset.csv"));
}

TEST(Tool, CommandLineSimulate) {
    const auto dir = scratch("tool");
    const std::string base = std::string(SYMSEL_TOOL_PATH) + " simulate --scenario 1 --n 500 --nrep 1 --seed 42 --out ";
    ASSERT_EQ(std::system((base + (dir / "a").string() + " > /dev/null").c_str()), 0);
    ASSERT_EQ(std::system((base + (dir / "b").string() + " > /dev/null").c_str()), 0);
    EXPECT_EQ(slurp(dir / "a" / "dataset.csv"), slurp(dir / "b" / "dataset.csv"));
    EXPECT_NE(std::system((std::string(SYMSEL_TOOL_PATH) + " simulate --scenario 7 2> /dev/null").c_str()), 0);
    EXPECT_NE(std::system((std::string(SYMSEL_TOOL_PATH) + " 2> /dev/null > /dev/null").c_str()), 0);
}
