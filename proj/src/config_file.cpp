#include "coachsim/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace coachsim {

namespace {

struct Line {
    int number = 0;
    std::string key;
    std::vector<std::string> values;
};

struct Section {
    int number = 0;
    std::string name;
    std::vector<Line> lines;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(std::string_view sv) {
    size_t b = sv.find_first_not_of(" \t\r");
    size_t e = sv.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return std::string(sv.substr(b, e - b + 1));
}

std::vector<Section> tokenize(std::string_view text) {
    std::vector<Section> sections;
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find_first_of("#;");
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(number, "unterminated section header");
            Section s;
            s.number = number;
            s.name = trim(std::string_view(line).substr(1, line.size() - 2));
            sections.push_back(std::move(s));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(number, "expected key = value");
        if (sections.empty()) fail(number, "key outside of any section");
        Line l;
        l.number = number;
        l.key = trim(std::string_view(line).substr(0, eq));
        std::istringstream vals(trim(std::string_view(line).substr(eq + 1)));
        std::string v;
        while (vals >> v) l.values.push_back(v);
        if (l.key.empty()) fail(number, "empty key");
        if (l.values.empty()) fail(number, "missing value for key '" + l.key + "'");
        sections.back().lines.push_back(std::move(l));
    }
    return sections;
}

double parse_double(const Line& l, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(l.number, "not a number: '" + v + "'");
    }
}

long long parse_int(const Line& l, const std::string& v) {
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail(l.number, "not an integer: '" + v + "'");
    return out;
}

void expect_single(const Line& l) {
    if (l.values.size() != 1) fail(l.number, "key '" + l.key + "' takes a single value");
}

class ScenarioBuilder {
public:
    explicit ScenarioBuilder(int section_line) : section_line_(section_line) {}

    void set(const Line& l) {
        static const std::vector<std::string> known = {"family", "file_symbols", "n", "k", "m", "d",
                                                       "t", "z", "q", "j", "kk", "scale",
                                                       "rs_node_symbols"};
        if (std::find(known.begin(), known.end(), l.key) == known.end())
            fail(l.number, "unknown scenario key '" + l.key + "'");
        expect_single(l);
        if (l.key == "family") {
            family_ = l.values[0];
            std::replace(family_.begin(), family_.end(), '-', '_');
        } else if (l.key == "file_symbols") {
            file_symbols_ = parse_double(l, l.values[0]);
        } else if (l.key == "scale") {
            scale_ = parse_double(l, l.values[0]);
        } else if (l.key == "rs_node_symbols") {
            rs_node_ = parse_double(l, l.values[0]);
        } else {
            ints_[l.key] = static_cast<int>(parse_int(l, l.values[0]));
        }
    }

    PresetRow build() const {
        PresetRow row;
        row.family = family_;
        row.result_scale = scale_;
        row.rs_node_symbols = rs_node_;
        try {
            if (family_ == "rs") {
                row.scenario = RsScenario{file_symbols_, need("n"), need("k"), need("m")};
            } else if (family_ == "mbr") {
                row.scenario = MbrScenario{file_symbols_, need("n"), need("k"), need("m"), need("d")};
                row.d = need("d");
            } else if (family_ == "msr_lr") {
                row.scenario = MsrLrScenario{file_symbols_, need("n"), need("k"), need("m"), need("d")};
                row.d = need("d");
            } else if (family_ == "msr_hr") {
                MsrHrScenario sc{file_symbols_, need("t"), need("z")};
                row.d = sc.d();
                row.scenario = std::move(sc);
            } else if (family_ == "ldpc") {
                const ArrayCodeSpec spec{need("q"), need("j"), need("kk")};
                auto h = std::make_shared<const ParityCheckMatrix>(build_array_ldpc(spec));
                LdpcScenario sc;
                sc.file_symbols = file_symbols_;
                sc.n = h->n();
                sc.k = h->k();
                sc.m = need("m");
                sc.dv = spec.j;
                sc.dc = spec.kk;
                sc.h = std::move(h);
                row.dv = sc.dv;
                row.dc = sc.dc;
                row.scenario = std::move(sc);
            } else if (family_.empty()) {
                fail(section_line_, "scenario is missing 'family'");
            } else {
                fail(section_line_, "unknown code family '" + family_ + "'");
            }
            validate_scenario(row.scenario);
            if (row.result_scale <= 0.0 || row.rs_node_symbols <= 0.0)
                fail(section_line_, "scale and rs_node_symbols must be positive");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(section_line_, std::string("invalid scenario: ") + e.what());
        }
        return row;
    }

private:
    int need(const std::string& key) const {
        auto it = ints_.find(key);
        if (it == ints_.end())
            fail(section_line_, "scenario family '" + family_ + "' requires key '" + key + "'");
        return it->second;
    }

    int section_line_;
    std::string family_;
    double file_symbols_ = 1.0;
    double scale_ = 1.0;
    double rs_node_ = 1.0;
    std::map<std::string, int> ints_;
};

}  // namespace

ExperimentPreset load_config_text(std::string_view text, const std::string& name) {
    const auto sections = tokenize(text);
    if (sections.empty()) throw ConfigError("config: no sections found");

    ExperimentPreset preset;
    preset.name = name;
    double rho_d2d = 1.0;
    std::vector<double> rho_bs;
    bool saw_sim = false, saw_cost = false;

    for (const auto& sec : sections) {
        if (sec.name == "sim") {
            if (saw_sim) fail(sec.number, "duplicate [sim] section");
            saw_sim = true;
            for (const auto& l : sec.lines) {
                if (l.key == "trials") {
                    expect_single(l);
                    preset.trials = static_cast<int>(parse_int(l, l.values[0]));
                } else if (l.key == "windows") {
                    expect_single(l);
                    preset.windows = static_cast<int>(parse_int(l, l.values[0]));
                } else if (l.key == "seed") {
                    expect_single(l);
                    preset.seed = static_cast<std::uint64_t>(parse_int(l, l.values[0]));
                } else if (l.key == "lambda") {
                    expect_single(l);
                    preset.lambda = parse_double(l, l.values[0]);
                } else if (l.key == "mu") {
                    expect_single(l);
                    preset.mu = parse_double(l, l.values[0]);
                } else if (l.key == "deltas") {
                    for (const auto& v : l.values) preset.deltas.push_back(parse_double(l, v));
                } else if (l.key == "churn") {
                    expect_single(l);
                    if (l.values[0] == "binomial-survival")
                        preset.churn = ChurnMode::binomial_survival;
                    else if (l.values[0] == "full-mm-inf")
                        preset.churn = ChurnMode::full_mm_inf;
                    else
                        fail(l.number, "unknown churn mode '" + l.values[0] + "'");
                } else {
                    fail(l.number, "unknown [sim] key '" + l.key + "'");
                }
            }
        } else if (sec.name == "cost") {
            if (saw_cost) fail(sec.number, "duplicate [cost] section");
            saw_cost = true;
            for (const auto& l : sec.lines) {
                if (l.key == "rho_d2d") {
                    expect_single(l);
                    rho_d2d = parse_double(l, l.values[0]);
                } else if (l.key == "rho_bs") {
                    for (const auto& v : l.values) rho_bs.push_back(parse_double(l, v));
                } else {
                    fail(l.number, "unknown [cost] key '" + l.key + "'");
                }
            }
        } else if (sec.name == "scenario") {
            ScenarioBuilder builder(sec.number);
            for (const auto& l : sec.lines) builder.set(l);
            preset.rows.push_back(builder.build());
        } else {
            fail(sec.number, "unknown section [" + sec.name + "]");
        }
    }

    if (preset.rows.empty()) throw ConfigError("config: at least one [scenario] is required");
    if (preset.deltas.empty()) throw ConfigError("config: [sim] deltas is required");
    if (rho_bs.empty()) throw ConfigError("config: [cost] rho_bs is required");
    for (double d : preset.deltas)
        if (d < 0.0) throw ConfigError("config: deltas must be non-negative");
    for (double bs : rho_bs) {
        const CostParams p{rho_d2d, bs};
        try {
            p.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        preset.rho_pairs.push_back(p);
    }
    if (preset.trials < 1 || preset.windows < 1)
        throw ConfigError("config: trials and windows must be positive");
    return preset;
}

ExperimentPreset load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str(), path);
}

std::vector<SimConfig> expand_configs(const ExperimentPreset& preset) {
    std::vector<SimConfig> out;
    for (const auto& row : preset.rows) {
        for (double delta : preset.deltas) {
            for (const auto& price : preset.rho_pairs) {
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
                cfg.validate();
                out.push_back(std::move(cfg));
            }
        }
    }
    return out;
}

}  // namespace coachsim
