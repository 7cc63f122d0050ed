#pragma once

#include <string>
#include <vector>

#include "coachsim/presets.hpp"

namespace coachsim {

/// One CSV line: a (code row, delta, price pair) grid point.
struct ReportLine {
    std::string family;
    int n = 0, k = 0, m = 0, d = 0, dv = 0, dc = 0;
    double delta = 0.0, rho_d2d = 0.0, rho_bs = 0.0;
    Stats tau, phi, gamma;
    double gamma_theory = 0.0;  // closed-form expectation (upper bound for LDPC)
    double lost_nodes = 0.0;
    long long starved = 0;

    bool has_opt = false;  // exhaustive-baseline columns below are filled
    double greepair_tau = 0.0, greepair_phi = 0.0, greepair_gamma = 0.0;
    double opt1_tau = 0.0, opt1_phi = 0.0, opt2_gamma = 0.0;
    double improvement_pct = 0.0;  // Opt-2 gain over the greedy repair
};

struct PresetOutput {
    std::string preset;
    bool has_opt = false;
    std::vector<ReportLine> lines;
};

PresetOutput run_preset(const ExperimentPreset& preset, bool parallel = true);

std::string to_csv(const PresetOutput& output);

std::string format_cell(double v);

void write_text_file(const std::string& path, const std::string& content);  // throws IoError

}  // namespace coachsim
