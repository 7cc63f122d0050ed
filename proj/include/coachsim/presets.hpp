#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coachsim/churn_sim.hpp"

namespace coachsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PresetRow {
    std::string family;  // csv code_family
    CodeScenario scenario;
    double result_scale = 1.0;
    double rs_node_symbols = 1.0;
    int d = 0;  // informational CSV columns; 0 when not applicable
    int dv = 0;
    int dc = 0;
};

struct ExperimentPreset {
    std::string name;
    std::vector<PresetRow> rows;
    std::vector<double> deltas;
    std::vector<CostParams> rho_pairs;
    int trials = 10000;
    int windows = 1;
    std::uint64_t seed = 1;
    double lambda = 1.0;
    double mu = 1.0;
    ChurnMode churn = ChurnMode::binomial_survival;
    bool opt_compare = false;  // adds the exhaustive-baseline columns
    int opt_cap = 6;
};

const std::vector<std::string>& preset_names();
ExperimentPreset make_preset(const std::string& name);  // throws ConfigError

/// Config-file text equivalent of a simulation preset (opt-compare has no
/// config-file form).
std::string preset_to_config_text(const ExperimentPreset& preset);

}  // namespace coachsim
