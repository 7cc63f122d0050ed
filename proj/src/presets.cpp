#include "coachsim/presets.hpp"

#include <cstdio>
#include <memory>
#include <sstream>

namespace coachsim {

namespace {

// Full precision so a dumped preset reloads to the exact same doubles.
std::string fp(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::shared_ptr<const ParityCheckMatrix> shared_array(int q, int j, int kk) {
    return std::make_shared<const ParityCheckMatrix>(build_array_ldpc({q, j, kk}));
}

PresetRow ldpc_row(int q, int j, int kk, int m, double file_symbols, double rs_node) {
    auto h = shared_array(q, j, kk);
    PresetRow row;
    row.family = "ldpc";
    LdpcScenario sc;
    sc.file_symbols = file_symbols;
    sc.n = h->n();
    sc.k = h->k();
    sc.m = m;
    sc.dv = j;
    sc.dc = kk;
    sc.h = std::move(h);
    row.dv = j;
    row.dc = kk;
    row.rs_node_symbols = rs_node;
    row.scenario = std::move(sc);
    return row;
}

std::vector<double> delta_grid() {
    return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

ExperimentPreset rate_half() {
    ExperimentPreset p;
    p.name = "rate-half";
    const double rs_node = 1.0 * 24 / (12.0 * 24);
    {
        PresetRow row{"rs", RsScenario{1.0, 24, 12, 24}, 1.0, rs_node, 0, 0, 0};
        p.rows.push_back(std::move(row));
    }
    {
        PresetRow row{"mbr", MbrScenario{1.0, 24, 12, 24, 23}, 1.0, rs_node, 23, 0, 0};
        p.rows.push_back(std::move(row));
    }
    {
        PresetRow row{"msr_lr", MsrLrScenario{1.0, 24, 12, 24, 23}, 1.0, rs_node, 23, 0, 0};
        p.rows.push_back(std::move(row));
    }
    p.rows.push_back(ldpc_row(227, 2, 4, 24, 1.0, rs_node));
    p.deltas = delta_grid();
    p.rho_pairs = {{1.0, 1.2}, {1.0, 12.0}, {1.0, 17.0}, {1.0, 26.0}};
    return p;
}

ExperimentPreset rate_three_quarters() {
    ExperimentPreset p;
    p.name = "rate-three-quarters";
    const double rs_node = 1.0 * 24 / (18.0 * 24);
    {
        PresetRow row{"rs", RsScenario{1.0, 24, 18, 24}, 1.0, rs_node, 0, 0, 0};
        p.rows.push_back(std::move(row));
    }
    {
        PresetRow row{"mbr", MbrScenario{1.0, 24, 18, 24, 23}, 1.0, rs_node, 23, 0, 0};
        p.rows.push_back(std::move(row));
    }
    {
        // Rate 18/23 construction over m = 23 nodes; results are scaled by
        // m_msr/m_rs = 23/24 to compare at equal system storage.
        PresetRow row{"msr_hr", MsrHrScenario{1.0, 5, 3}, 23.0 / 24.0, rs_node, 22, 0, 0};
        p.rows.push_back(std::move(row));
    }
    p.rows.push_back(ldpc_row(257, 2, 8, 24, 1.0, rs_node));
    p.deltas = delta_grid();
    p.rho_pairs = {{1.0, 3.0}, {1.0, 18.0}, {1.0, 24.0}, {1.0, 50.0}};
    return p;
}

ExperimentPreset blocklength_sweep() {
    ExperimentPreset p;
    p.name = "blocklength-sweep";
    const int m = 25;
    const double rs_node = 1.0 * (4.0 / 3.0) / m;
    for (int q : {31, 53, 137, 271, 503}) p.rows.push_back(ldpc_row(q, 2, 8, m, 1.0, rs_node));
    p.deltas = delta_grid();
    p.rho_pairs = {{1.0, 1.2}, {1.0, 3.0}, {1.0, 16.0}};
    p.trials = 3000;  // the n = 4024 rows dominate the runtime
    return p;
}

ExperimentPreset opt_compare() {
    ExperimentPreset p;
    p.name = "opt-compare";
    for (int m : {62, 31}) {
        // Whole stripes keep the counters integral; gamma is normalized by a
        // same-rate RS node of the same m.
        auto row = ldpc_row(23, 2, 8, m, 138.0, 138.0 * (4.0 / 3.0) / m);
        p.rows.push_back(std::move(row));
    }
    p.deltas = {0.1, 0.4, 0.7};
    p.rho_pairs = {{1.0, 10.0}, {1.0, 20.0}};
    p.trials = 1000;
    p.opt_compare = true;
    return p;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"rate-half", "rate-three-quarters",
                                                   "blocklength-sweep", "opt-compare"};
    return names;
}

ExperimentPreset make_preset(const std::string& name) {
    if (name == "rate-half") return rate_half();
    if (name == "rate-three-quarters") return rate_three_quarters();
    if (name == "blocklength-sweep") return blocklength_sweep();
    if (name == "opt-compare") return opt_compare();
    throw ConfigError("unknown preset: " + name);
}

std::string preset_to_config_text(const ExperimentPreset& preset) {
    if (preset.opt_compare)
        throw ConfigError("preset has no config-file form: " + preset.name);
    std::ostringstream out;
    out << "[sim]\n";
    out << "trials = " << preset.trials << "\n";
    out << "windows = " << preset.windows << "\n";
    out << "seed = " << preset.seed << "\n";
    out << "lambda = " << fp(preset.lambda) << "\n";
    out << "mu = " << fp(preset.mu) << "\n";
    out << "churn = "
        << (preset.churn == ChurnMode::binomial_survival ? "binomial-survival" : "full-mm-inf")
        << "\n";
    out << "deltas =";
    for (double d : preset.deltas) out << ' ' << fp(d);
    out << "\n\n[cost]\n";
    out << "rho_d2d = " << fp(preset.rho_pairs.front().rho_d2d) << "\n";
    out << "rho_bs =";
    for (const auto& r : preset.rho_pairs) out << ' ' << fp(r.rho_bs);
    out << "\n";
    for (const auto& row : preset.rows) {
        out << "\n[scenario]\n";
        out << "family = " << row.family << "\n";
        out << "file_symbols = " << fp(scenario_file_symbols(row.scenario)) << "\n";
        if (const auto* rs = std::get_if<RsScenario>(&row.scenario)) {
            out << "n = " << rs->n << "\nk = " << rs->k << "\nm = " << rs->m << "\n";
        } else if (const auto* mbr = std::get_if<MbrScenario>(&row.scenario)) {
            out << "n = " << mbr->n << "\nk = " << mbr->k << "\nm = " << mbr->m << "\nd = " << mbr->d
                << "\n";
        } else if (const auto* lr = std::get_if<MsrLrScenario>(&row.scenario)) {
            out << "n = " << lr->n << "\nk = " << lr->k << "\nm = " << lr->m << "\nd = " << lr->d
                << "\n";
        } else if (const auto* hr = std::get_if<MsrHrScenario>(&row.scenario)) {
            out << "t = " << hr->t << "\nz = " << hr->z << "\n";
        } else {
            const auto& ldpc = std::get<LdpcScenario>(row.scenario);
            // The array parameters regenerate the matrix on load.
            out << "q = " << ldpc.n / ldpc.dc << "\nj = " << ldpc.dv << "\nkk = " << ldpc.dc
                << "\nm = " << ldpc.m << "\n";
        }
        out << "scale = " << fp(row.result_scale) << "\n";
        out << "rs_node_symbols = " << fp(row.rs_node_symbols) << "\n";
    }
    return out.str();
}

}  // namespace coachsim
