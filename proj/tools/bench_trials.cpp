#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "coachsim/churn_sim.hpp"
#include "coachsim/presets.hpp"
#include "coachsim/report.hpp"

// Times the Monte-Carlo trial loop serial vs OpenMP-parallel on one grid cell
// and checks that both paths agree bit for bit.

namespace {

double run_timed(const coachsim::SimConfig& cfg, bool parallel,
                 std::vector<coachsim::TrialMetrics>& out) {
    const auto start = std::chrono::steady_clock::now();
    out = coachsim::run_trials(cfg, parallel);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(elapsed).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs parallel trial-runner benchmark"};
    std::string preset_name = "rate-half";
    std::string family = "ldpc";
    int trials = 2000;
    double delta = 0.4;
    app.add_option("--preset", preset_name, "Preset supplying the scenario");
    app.add_option("--family", family, "Code family row to benchmark");
    app.add_option("--trials", trials, "Trials per run");
    app.add_option("--delta", delta, "Repair period");
    CLI11_PARSE(app, argc, argv);

    const auto preset = coachsim::make_preset(preset_name);
    const coachsim::PresetRow* row = nullptr;
    for (const auto& r : preset.rows)
        if (r.family == family) row = &r;
    if (row == nullptr) {
        std::fprintf(stderr, "no row named '%s' in preset '%s'\n", family.c_str(),
                     preset_name.c_str());
        return 2;
    }

    coachsim::SimConfig cfg;
    cfg.scenario = row->scenario;
    cfg.cost = preset.rho_pairs.front();
    cfg.delta = delta;
    cfg.trials = trials;
    cfg.seed = preset.seed;
    cfg.rs_node_symbols = row->rs_node_symbols;
    cfg.result_scale = row->result_scale;

    std::vector<coachsim::TrialMetrics> serial, parallel;
    const double warm = run_timed(cfg, false, serial);  // warm caches
    const double t_serial = run_timed(cfg, false, serial);
    const double t_parallel = run_timed(cfg, true, parallel);

    bool identical = serial.size() == parallel.size();
    for (size_t i = 0; identical && i < serial.size(); ++i)
        identical = serial[i].tau == parallel[i].tau && serial[i].phi == parallel[i].phi &&
                    serial[i].lost_nodes == parallel[i].lost_nodes;

    std::printf("scenario: %s %s n=%d m=%d delta=%.3g trials=%d (warmup %.0f ms)\n",
                preset_name.c_str(), family.c_str(), coachsim::scenario_n(cfg.scenario),
                coachsim::scenario_m(cfg.scenario), delta, trials, warm);
    std::printf("serial:   %10.1f ms\n", t_serial);
    std::printf("parallel: %10.1f ms  (%d threads)\n", t_parallel, coachsim::effective_threads());
    std::printf("speedup:  %10.2fx\n", t_serial / t_parallel);
    std::printf("results:  %s\n", identical ? "bit-identical" : "MISMATCH");
    return identical ? 0 : 1;
}
