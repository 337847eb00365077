#include "symsel/estimate.hpp"
#include "symsel/likelihood.hpp"
#include "symsel/simulate.hpp"
#include "symsel/special.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace symsel;

namespace {

SelectionDataset data_for(std::size_t n) {
    ScenarioConfig c = ScenarioConfig::preset(1);
    c.n = n;
    Rng rng(42);
    return generate_dataset(c, rng);
}

ParamVector truth() {
    ParamVector t = ScenarioConfig::preset(1).theta;
    t.log_nu = std::log(4.0);
    return t;
}

void BM_TCdf(benchmark::State& state) {
    double x = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_cdf(x, 4.5));
        x = x > 3.0 ? -3.0 : x + 0.01;
    }
}
BENCHMARK(BM_TCdf);

void BM_Loglik(benchmark::State& state) {
    const auto data = data_for(static_cast<std::size_t>(state.range(0)));
    const auto spec = ModelSpec::student_t();
    const auto theta = truth();
    for (auto _ : state) benchmark::DoNotOptimize(loglik(spec, theta, data));
}
BENCHMARK(BM_Loglik)->Arg(1000)->Arg(10000);

void BM_Score(benchmark::State& state) {
    const auto data = data_for(static_cast<std::size_t>(state.range(0)));
    const auto spec = ModelSpec::student_t();
    const auto theta = truth();
    for (auto _ : state) benchmark::DoNotOptimize(score(spec, theta, data));
}
BENCHMARK(BM_Score)->Arg(1000)->Arg(10000);

void BM_Fit(benchmark::State& state) {
    const auto data = data_for(static_cast<std::size_t>(state.range(0)));
    FitOptions o;
    o.compute_standard_errors = false;
    for (auto _ : state) benchmark::DoNotOptimize(fit(ModelSpec::student_t(), data, o).loglik_at_max);
}
BENCHMARK(BM_Fit)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
