#pragma once

#include "symsel/simulate.hpp"

namespace symsel::testing {

inline SelectionDataset scenario_data(int scenario, std::size_t n, std::uint64_t seed, Family family = Family::StudentT,
                                      double nu = 4.0) {
    ScenarioConfig c = ScenarioConfig::preset(scenario);
    c.n = n;
    c.family = family;
    c.nu = nu;
    Rng rng(seed);
    return generate_dataset(c, rng);
}

inline ParamVector scenario_theta(int scenario, std::optional<double> nu = std::nullopt) {
    ParamVector t = ScenarioConfig::preset(scenario).theta;
    if (nu) t.log_nu = std::log(*nu);
    return t;
}

}  // namespace symsel::testing
