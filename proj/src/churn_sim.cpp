#include "coachsim/churn_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coachsim {

void SimConfig::validate() const {
    validate_scenario(scenario);
    cost.validate();
    if (lambda <= 0.0 || mu <= 0.0) throw std::invalid_argument("sim config: rates must be positive");
    if (delta < 0.0) throw std::invalid_argument("sim config: delta must be non-negative");
    if (windows < 1) throw std::invalid_argument("sim config: need at least one window");
    if (trials < 1) throw std::invalid_argument("sim config: need at least one trial");
    if (rs_node_symbols <= 0.0) throw std::invalid_argument("sim config: normalization must be positive");
    if (result_scale <= 0.0) throw std::invalid_argument("sim config: result scale must be positive");
    const int m = scenario_m(scenario);
    if (n_initial != 0 && n_initial < m)
        throw std::invalid_argument("sim config: initial population below storage node count");
    if (std::holds_alternative<LdpcScenario>(scenario) && !std::get<LdpcScenario>(scenario).h)
        throw std::invalid_argument("sim config: ldpc simulation needs the parity matrix");
}

int SimConfig::effective_n_initial() const {
    return n_initial != 0 ? n_initial : 2 * scenario_m(scenario);
}

std::vector<std::pair<int, int>> place_symbols(int n, int m) {
    if (n < 1 || m < 1 || m > n) throw std::invalid_argument("placement: need 1 <= m <= n");
    const int per_node = (n + m - 1) / m;
    std::vector<std::pair<int, int>> blocks;
    blocks.reserve(static_cast<size_t>(m));
    for (int i = 1; i <= m; ++i) {
        const int first = (i - 1) * per_node + 1;
        const int last = std::min(i * per_node, n);
        if (first > last) throw std::invalid_argument("placement: m too large for block size");
        blocks.emplace_back(first, last);
    }
    if (blocks.back().second != n) throw std::invalid_argument("placement: blocks do not cover all symbols");
    return blocks;
}

std::vector<int> draw_lost_blocks(std::mt19937_64& rng, std::span<const int> alive_blocks, double p) {
    std::vector<int> lost;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int b : alive_blocks)
        if (u(rng) >= p) lost.push_back(b);
    return lost;
}

int step_mm_inf(std::mt19937_64& rng, int population, std::vector<int>& alive_blocks,
                std::vector<int>& lost_out, double arrival_rate, double mu, double delta) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double t = 0.0;
    while (true) {
        const double dep_rate = population * mu;
        const double total = arrival_rate + dep_rate;
        if (total <= 0.0) break;
        const double step = -std::log1p(-u(rng)) / total;
        t += step;
        if (t >= delta) break;
        if (u(rng) * total < arrival_rate) {
            ++population;
        } else {
            const int victim = static_cast<int>(u(rng) * population);
            if (victim < static_cast<int>(alive_blocks.size())) {
                lost_out.push_back(alive_blocks[static_cast<size_t>(victim)]);
                alive_blocks.erase(alive_blocks.begin() + victim);
            }
            --population;
        }
    }
    return population;
}

namespace {

struct NodeCounters {
    double tau = 0.0;
    double phi = 0.0;
};

// Per-node download counters for one repaired node given the system-wide
// state. For the analytic families these are the closed-form symbol counts;
// for LDPC it is one greedy repair scaled to the full file.
NodeCounters repaired_node_counters(const CodeScenario& scenario, int l_units,
                                    const std::vector<int>& block_symbols,
                                    const std::vector<int>& other_lost_symbols) {
    static const CostParams kUnit{1.0, 1.0};
    NodeCounters out;
    if (const auto* ldpc = std::get_if<LdpcScenario>(&scenario)) {
        RepairTask task;
        task.h = ldpc->h.get();
        task.lost_local = block_symbols;
        task.lost_other = other_lost_symbols;
        const RepairOutcome res = repair_node(task);
        const double stripes = ldpc->file_symbols / ldpc->k;
        out.tau = static_cast<double>(res.tau) * stripes;
        out.phi = static_cast<double>(res.phi) * stripes;
        return out;
    }
    Cost c;
    if (const auto* rs = std::get_if<RsScenario>(&scenario))
        c = c_rs(*rs, l_units, kUnit);
    else if (const auto* mbr = std::get_if<MbrScenario>(&scenario))
        c = c_mbr(*mbr, l_units, kUnit);
    else if (const auto* lr = std::get_if<MsrLrScenario>(&scenario))
        c = c_msr_lr(*lr, l_units, kUnit);
    else
        c = c_msr_hr_mixed(std::get<MsrHrScenario>(scenario), l_units, kUnit);
    out.tau = c.d2d_symbols;
    out.phi = c.bs_symbols;
    return out;
}

}  // namespace

TrialMetrics run_trial(const SimConfig& config, std::uint64_t trial_index) {
    config.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(trial_index), static_cast<std::uint32_t>(trial_index >> 32),
                      static_cast<std::uint32_t>(0x636f6163)};
    std::mt19937_64 rng(seq);

    const int n = scenario_n(config.scenario);
    const int m = scenario_m(config.scenario);
    const auto blocks = place_symbols(n, m);
    const double p = survival_p(config.mu, config.delta);
    const int n_init = config.effective_n_initial();
    const bool full_churn = config.churn == ChurnMode::full_mm_inf;

    std::vector<int> alive;  // block ids, ascending between windows
    alive.reserve(static_cast<size_t>(m));
    for (int b = 0; b < m; ++b) alive.push_back(b);
    std::vector<int> pending;  // lost blocks not yet repaired
    int population = n_init;

    TrialMetrics metrics;
    double tau_sum = 0.0, phi_sum = 0.0, lost_sum = 0.0;

    std::vector<int> lost;
    std::vector<int> block_syms, other_syms;
    for (int w = 0; w < config.windows; ++w) {
        lost = pending;
        if (full_churn) {
            population = step_mm_inf(rng, population, alive, lost, n_init * config.lambda,
                                     config.mu, config.delta);
        } else {
            auto departed = draw_lost_blocks(rng, alive, p);
            for (int b : departed) {
                alive.erase(std::find(alive.begin(), alive.end(), b));
                lost.push_back(b);
            }
        }
        std::sort(lost.begin(), lost.end());

        if (lost.empty()) continue;  // zero-cost window

        const int empties = full_churn ? population - static_cast<int>(alive.size())
                                       : n_init - static_cast<int>(lost.size()) -
                                             static_cast<int>(alive.size());
        const int repaired_count = std::min(static_cast<int>(lost.size()), std::max(0, empties));
        if (repaired_count < static_cast<int>(lost.size())) ++metrics.starved_windows;

        int l_units = 0;
        for (int b : lost) l_units += blocks[static_cast<size_t>(b)].second -
                                      blocks[static_cast<size_t>(b)].first + 1;

        double tau_w = 0.0, phi_w = 0.0;
        for (int i = 0; i < repaired_count; ++i) {
            const int b = lost[static_cast<size_t>(i)];
            block_syms.clear();
            for (int s = blocks[static_cast<size_t>(b)].first; s <= blocks[static_cast<size_t>(b)].second; ++s)
                block_syms.push_back(s);
            other_syms.clear();
            for (int ob : lost) {
                if (ob == b) continue;
                for (int s = blocks[static_cast<size_t>(ob)].first; s <= blocks[static_cast<size_t>(ob)].second; ++s)
                    other_syms.push_back(s);
            }
            const NodeCounters c =
                repaired_node_counters(config.scenario, l_units, block_syms, other_syms);
            tau_w += c.tau;
            phi_w += c.phi;
        }

        lost_sum += static_cast<double>(lost.size());
        if (repaired_count > 0) {
            tau_sum += tau_w / repaired_count;
            phi_sum += phi_w / repaired_count;
        }

        pending.assign(lost.begin() + repaired_count, lost.end());
        for (int i = 0; i < repaired_count; ++i) alive.push_back(lost[static_cast<size_t>(i)]);
        std::sort(alive.begin(), alive.end());
    }

    metrics.tau = tau_sum / config.windows;
    metrics.phi = phi_sum / config.windows;
    metrics.lost_nodes = lost_sum / config.windows;
    return metrics;
}

std::vector<TrialMetrics> run_trials_serial(const SimConfig& config) {
    config.validate();
    std::vector<TrialMetrics> out(static_cast<size_t>(config.trials));
    for (int t = 0; t < config.trials; ++t)
        out[static_cast<size_t>(t)] = run_trial(config, static_cast<std::uint64_t>(t));
    return out;
}

std::vector<TrialMetrics> run_trials_parallel(const SimConfig& config) {
    config.validate();
    std::vector<TrialMetrics> out(static_cast<size_t>(config.trials));
#ifdef _OPENMP
    const int threads = effective_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
    for (int t = 0; t < config.trials; ++t)
        out[static_cast<size_t>(t)] = run_trial(config, static_cast<std::uint64_t>(t));
#else
    for (int t = 0; t < config.trials; ++t)
        out[static_cast<size_t>(t)] = run_trial(config, static_cast<std::uint64_t>(t));
#endif
    return out;
}

std::vector<TrialMetrics> run_trials(const SimConfig& config, bool parallel) {
    return parallel ? run_trials_parallel(config) : run_trials_serial(config);
}

namespace {

Stats stats_of(std::span<const TrialMetrics> trials, double (*pick)(const TrialMetrics&),
               double scale) {
    const size_t n = trials.size();
    if (n == 0) return {};
    double sum = 0.0;
    for (const auto& t : trials) sum += pick(t);
    const double mean = scale * sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const auto& t : trials) {
        const double d = scale * pick(t) - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {mean, 1.96 * sd / std::sqrt(static_cast<double>(n))};
}

}  // namespace

Stats tau_stats(std::span<const TrialMetrics> trials, double scale) {
    return stats_of(trials, [](const TrialMetrics& t) { return t.tau; }, scale);
}

Stats phi_stats(std::span<const TrialMetrics> trials, double scale) {
    return stats_of(trials, [](const TrialMetrics& t) { return t.phi; }, scale);
}

Stats gamma_stats(std::span<const TrialMetrics> trials, const CostParams& price,
                  double rs_node_symbols, double scale) {
    const size_t n = trials.size();
    if (n == 0) return {};
    const double k = scale / rs_node_symbols;
    double sum = 0.0;
    for (const auto& t : trials) sum += k * (price.rho_d2d * t.tau + price.rho_bs * t.phi);
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const auto& t : trials) {
        const double d = k * (price.rho_d2d * t.tau + price.rho_bs * t.phi) - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {mean, 1.96 * sd / std::sqrt(static_cast<double>(n))};
}

double lost_nodes_mean(std::span<const TrialMetrics> trials) {
    if (trials.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& t : trials) sum += t.lost_nodes;
    return sum / static_cast<double>(trials.size());
}

long long starved_total(std::span<const TrialMetrics> trials) {
    long long sum = 0;
    for (const auto& t : trials) sum += t.starved_windows;
    return sum;
}

Aggregate run_experiment(const SimConfig& config, bool parallel) {
    const auto trials = run_trials(config, parallel);
    Aggregate agg;
    agg.tau = tau_stats(trials, config.result_scale);
    agg.phi = phi_stats(trials, config.result_scale);
    agg.gamma = gamma_stats(trials, config.cost, config.rs_node_symbols, config.result_scale);
    agg.lost_nodes_mean = lost_nodes_mean(trials);
    agg.starved_windows = starved_total(trials);
    agg.trials = config.trials;
    return agg;
}

int effective_threads() {
#ifdef _OPENMP
    if (const char* env = std::getenv("COACHSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double simulate_mean_population(int n_initial, double lambda, double mu, double delta,
                                int windows, std::uint64_t seed) {
    if (n_initial < 1 || windows < 1) throw std::invalid_argument("population probe: bad arguments");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(0x706f70)};
    std::mt19937_64 rng(seq);
    std::vector<int> no_blocks;
    std::vector<int> no_lost;
    int population = n_initial;
    double sum = 0.0;
    for (int w = 0; w < windows; ++w) {
        population = step_mm_inf(rng, population, no_blocks, no_lost, n_initial * lambda, mu, delta);
        sum += population;
    }
    return sum / windows;
}

}  // namespace coachsim
