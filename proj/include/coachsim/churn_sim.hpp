#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "coachsim/cost_models.hpp"
#include "coachsim/greedy_repair.hpp"

namespace coachsim {

enum class ChurnMode { binomial_survival, full_mm_inf };

struct SimConfig {
    int n_initial = 0;  // N; 0 picks 2m
    double lambda = 1.0;
    double mu = 1.0;
    double delta = 0.1;
    int windows = 1;
    int trials = 1;
    std::uint64_t seed = 1;
    CodeScenario scenario;
    CostParams cost{1.0, 1.0};
    ChurnMode churn = ChurnMode::binomial_survival;
    double rs_node_symbols = 1.0;  // normalization: content size of one RS node
    double result_scale = 1.0;     // e.g. m_msr/m_rs when comparing across m

    void validate() const;
    int effective_n_initial() const;
};

/// Per-trial means over the trial's windows; tau/phi are per-lost-node symbol
/// counts, zero for windows without failures.
struct TrialMetrics {
    double tau = 0.0;
    double phi = 0.0;
    double lost_nodes = 0.0;
    int starved_windows = 0;
};

struct Stats {
    double mean = 0.0;
    double ci95 = 0.0;
};

struct Aggregate {
    Stats tau;
    Stats phi;
    Stats gamma;
    double lost_nodes_mean = 0.0;
    long long starved_windows = 0;
    int trials = 0;
};

/// Contiguous block placement: node i holds (first, last) inclusive, blocks
/// of ceil(n/m) with a possibly smaller last node.
std::vector<std::pair<int, int>> place_symbols(int n, int m);

/// Survival draw for one lazy-repair window: each of the listed alive blocks
/// stays with probability p; returns the ids of the departed ones.
std::vector<int> draw_lost_blocks(std::mt19937_64& rng, std::span<const int> alive_blocks, double p);

/// One M/M/inf window: arrivals at fixed rate arrival_rate, per-node departure
/// rate mu, uniform victims. Departed storage blocks are moved from
/// alive_blocks to lost_out. Returns the new population.
int step_mm_inf(std::mt19937_64& rng, int population, std::vector<int>& alive_blocks,
                std::vector<int>& lost_out, double arrival_rate, double mu, double delta);

TrialMetrics run_trial(const SimConfig& config, std::uint64_t trial_index);

/// All trials, each on its own RNG stream keyed by (seed, trial index); the
/// parallel path gives bit-identical results to the serial one.
std::vector<TrialMetrics> run_trials_serial(const SimConfig& config);
std::vector<TrialMetrics> run_trials_parallel(const SimConfig& config);
std::vector<TrialMetrics> run_trials(const SimConfig& config, bool parallel = true);

Stats tau_stats(std::span<const TrialMetrics> trials, double scale);
Stats phi_stats(std::span<const TrialMetrics> trials, double scale);
Stats gamma_stats(std::span<const TrialMetrics> trials, const CostParams& price,
                  double rs_node_symbols, double scale);
double lost_nodes_mean(std::span<const TrialMetrics> trials);
long long starved_total(std::span<const TrialMetrics> trials);

Aggregate run_experiment(const SimConfig& config, bool parallel = true);

/// Thread budget for the parallel runner: COACHSIM_THREADS when set and
/// positive, otherwise the OpenMP default (serial build: 1).
int effective_threads();

/// Mean population across windows of one M/M/inf trial; the stationary value
/// is n_initial * lambda / mu.
double simulate_mean_population(int n_initial, double lambda, double mu, double delta,
                                int windows, std::uint64_t seed);

}  // namespace coachsim
