#include "coachsim/report.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "coachsim/opt_search.hpp"

namespace coachsim {

namespace {

SimConfig config_for(const ExperimentPreset& preset, const PresetRow& row, double delta,
                     const CostParams& price) {
    SimConfig cfg;
    cfg.lambda = preset.lambda;
    cfg.mu = preset.mu;
    cfg.delta = delta;
    cfg.windows = preset.windows;
    cfg.trials = preset.trials;
    cfg.seed = preset.seed;
    cfg.scenario = row.scenario;
    cfg.cost = price;
    cfg.churn = preset.churn;
    cfg.rs_node_symbols = row.rs_node_symbols;
    cfg.result_scale = row.result_scale;
    return cfg;
}

ReportLine base_line(const PresetRow& row, double delta, const CostParams& price) {
    ReportLine line;
    line.family = row.family;
    line.n = scenario_n(row.scenario);
    line.k = scenario_k(row.scenario);
    line.m = scenario_m(row.scenario);
    line.d = row.d;
    line.dv = row.dv;
    line.dc = row.dc;
    line.delta = delta;
    line.rho_d2d = price.rho_d2d;
    line.rho_bs = price.rho_bs;
    return line;
}

void run_sim_rows(const ExperimentPreset& preset, bool parallel, PresetOutput& out) {
    for (const auto& row : preset.rows) {
        for (double delta : preset.deltas) {
            // Counters do not depend on prices: one simulation per grid cell,
            // then each price pair is a linear readout.
            const SimConfig cfg = config_for(preset, row, delta, preset.rho_pairs.front());
            const auto trials = run_trials(cfg, parallel);
            for (const auto& price : preset.rho_pairs) {
                ReportLine line = base_line(row, delta, price);
                line.tau = tau_stats(trials, row.result_scale);
                line.phi = phi_stats(trials, row.result_scale);
                line.gamma = gamma_stats(trials, price, row.rs_node_symbols, row.result_scale);
                line.gamma_theory = row.result_scale *
                                    expected_cost(row.scenario, price, preset.mu, delta).weighted /
                                    row.rs_node_symbols;
                line.lost_nodes = lost_nodes_mean(trials);
                line.starved = starved_total(trials);
                out.lines.push_back(std::move(line));
            }
        }
    }
}

struct OptTrialResult {
    double tau = 0.0, phi = 0.0, lost = 0.0;  // per-lost-node greedy metrics
    double g_tau = 0.0, g_phi = 0.0;          // greedy totals over repairs
    double o1_tau = 0.0, o1_phi = 0.0;        // lexicographic optimum totals
    std::vector<double> o2_weighted;          // per price pair, totals
    long long repairs = 0;
};

OptTrialResult run_opt_trial(const ExperimentPreset& preset, const PresetRow& row, double delta,
                             std::uint64_t trial) {
    const auto& ldpc = std::get<LdpcScenario>(row.scenario);
    const int n = ldpc.n;
    const int m = ldpc.m;
    const auto blocks = place_symbols(n, m);
    const double p = survival_p(preset.mu, delta);

    std::seed_seq seq{static_cast<std::uint32_t>(preset.seed),
                      static_cast<std::uint32_t>(preset.seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      static_cast<std::uint32_t>(0x6f7074)};
    std::mt19937_64 rng(seq);

    std::vector<int> alive(static_cast<size_t>(m));
    std::iota(alive.begin(), alive.end(), 0);
    const auto lost = draw_lost_blocks(rng, alive, p);

    OptTrialResult res;
    res.o2_weighted.assign(preset.rho_pairs.size(), 0.0);
    res.lost = static_cast<double>(lost.size());
    if (lost.empty()) return res;

    std::vector<int> block_syms, other_syms;
    for (int b : lost) {
        block_syms.clear();
        for (int s = blocks[static_cast<size_t>(b)].first; s <= blocks[static_cast<size_t>(b)].second; ++s)
            block_syms.push_back(s);
        other_syms.clear();
        for (int ob : lost) {
            if (ob == b) continue;
            for (int s = blocks[static_cast<size_t>(ob)].first; s <= blocks[static_cast<size_t>(ob)].second; ++s)
                other_syms.push_back(s);
        }
        RepairTask task;
        task.h = ldpc.h.get();
        task.lost_local = block_syms;
        task.lost_other = other_syms;

        const RepairOutcome greedy = repair_node(task);
        res.g_tau += static_cast<double>(greedy.tau);
        res.g_phi += static_cast<double>(greedy.phi);

        const OptEvaluation ev = evaluate_optima(task, preset.rho_pairs, preset.opt_cap);
        res.o1_tau += static_cast<double>(ev.opt1.tau);
        res.o1_phi += static_cast<double>(ev.opt1.phi);
        for (size_t r = 0; r < preset.rho_pairs.size(); ++r)
            res.o2_weighted[r] += ev.opt2_weighted[r];
        ++res.repairs;
    }
    const double stripes = ldpc.file_symbols / ldpc.k;
    res.tau = res.g_tau * stripes / static_cast<double>(res.repairs);
    res.phi = res.g_phi * stripes / static_cast<double>(res.repairs);
    return res;
}

void run_opt_rows(const ExperimentPreset& preset, bool parallel, PresetOutput& out) {
    for (const auto& row : preset.rows) {
        if (!std::holds_alternative<LdpcScenario>(row.scenario))
            throw ConfigError("opt-compare rows must be ldpc scenarios");
        if (scenario_units_per_node(row.scenario) > preset.opt_cap)
            throw ConfigError("opt-compare node blocks exceed the enumeration cap");
        for (double delta : preset.deltas) {
            std::vector<OptTrialResult> results(static_cast<size_t>(preset.trials));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) num_threads(effective_threads()) if (parallel)
#endif
            for (int t = 0; t < preset.trials; ++t)
                results[static_cast<size_t>(t)] =
                    run_opt_trial(preset, row, delta, static_cast<std::uint64_t>(t));

            std::vector<TrialMetrics> metrics(results.size());
            double g_tau = 0.0, g_phi = 0.0, o1_tau = 0.0, o1_phi = 0.0;
            std::vector<double> o2(preset.rho_pairs.size(), 0.0);
            long long repairs = 0;
            for (size_t i = 0; i < results.size(); ++i) {
                metrics[i].tau = results[i].tau;
                metrics[i].phi = results[i].phi;
                metrics[i].lost_nodes = results[i].lost;
                g_tau += results[i].g_tau;
                g_phi += results[i].g_phi;
                o1_tau += results[i].o1_tau;
                o1_phi += results[i].o1_phi;
                for (size_t r = 0; r < o2.size(); ++r) o2[r] += results[i].o2_weighted[r];
                repairs += results[i].repairs;
            }

            for (size_t r = 0; r < preset.rho_pairs.size(); ++r) {
                const CostParams& price = preset.rho_pairs[r];
                ReportLine line = base_line(row, delta, price);
                line.has_opt = true;
                line.tau = tau_stats(metrics, row.result_scale);
                line.phi = phi_stats(metrics, row.result_scale);
                line.gamma = gamma_stats(metrics, price, row.rs_node_symbols, row.result_scale);
                line.gamma_theory = row.result_scale *
                                    expected_cost(row.scenario, price, preset.mu, delta).weighted /
                                    row.rs_node_symbols;
                line.lost_nodes = lost_nodes_mean(metrics);
                if (repairs > 0) {
                    const double inv = 1.0 / static_cast<double>(repairs);
                    line.greepair_tau = g_tau * inv;
                    line.greepair_phi = g_phi * inv;
                    line.opt1_tau = o1_tau * inv;
                    line.opt1_phi = o1_phi * inv;
                    const double g_w = price.rho_d2d * g_tau + price.rho_bs * g_phi;
                    line.greepair_gamma = g_w * inv / row.rs_node_symbols;
                    line.opt2_gamma = o2[r] * inv / row.rs_node_symbols;
                    line.improvement_pct = g_w > 0.0 ? 100.0 * (g_w - o2[r]) / g_w : 0.0;
                }
                out.lines.push_back(std::move(line));
            }
        }
    }
}

}  // namespace

PresetOutput run_preset(const ExperimentPreset& preset, bool parallel) {
    if (preset.rows.empty() || preset.deltas.empty() || preset.rho_pairs.empty())
        throw ConfigError("preset '" + preset.name + "' has an empty grid");
    PresetOutput out;
    out.preset = preset.name;
    out.has_opt = preset.opt_compare;
    if (preset.opt_compare)
        run_opt_rows(preset, parallel, out);
    else
        run_sim_rows(preset, parallel, out);
    return out;
}

std::string format_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string to_csv(const PresetOutput& output) {
    std::ostringstream out;
    out << "preset,code_family,n,k,m,d,dv,dc,delta,rho_d2d,rho_bs,tau_mean,tau_ci95,phi_mean,"
           "phi_ci95,gamma_mean,gamma_ci95,gamma_theory,lost_nodes_mean,starved_windows";
    if (output.has_opt)
        out << ",greepair_tau,greepair_phi,greepair_gamma,opt1_tau,opt1_phi,opt2_gamma,"
               "improvement_pct";
    out << '\n';
    for (const auto& l : output.lines) {
        out << output.preset << ',' << l.family << ',' << l.n << ',' << l.k << ',' << l.m << ','
            << l.d << ',' << l.dv << ',' << l.dc << ',' << format_cell(l.delta) << ','
            << format_cell(l.rho_d2d) << ',' << format_cell(l.rho_bs) << ','
            << format_cell(l.tau.mean) << ',' << format_cell(l.tau.ci95) << ','
            << format_cell(l.phi.mean) << ',' << format_cell(l.phi.ci95) << ','
            << format_cell(l.gamma.mean) << ',' << format_cell(l.gamma.ci95) << ','
            << format_cell(l.gamma_theory) << ',' << format_cell(l.lost_nodes) << ',' << l.starved;
        if (output.has_opt)
            out << ',' << format_cell(l.greepair_tau) << ',' << format_cell(l.greepair_phi) << ','
                << format_cell(l.greepair_gamma) << ',' << format_cell(l.opt1_tau) << ','
                << format_cell(l.opt1_phi) << ',' << format_cell(l.opt2_gamma) << ','
                << format_cell(l.improvement_pct);
        out << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace coachsim
