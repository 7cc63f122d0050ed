#pragma once

#include <memory>
#include <string>
#include <variant>

#include "coachsim/parity_check.hpp"

namespace coachsim {

/// Per-symbol download prices. D2D is a transfer from another in-cell node,
/// BS a transfer from the base station.
struct CostParams {
    double rho_d2d = 1.0;
    double rho_bs = 1.0;

    void validate() const;  // requires 0 < rho_d2d <= rho_bs
};

/// Expected symbol counts by source plus their price-weighted total.
struct Cost {
    double d2d_symbols = 0.0;
    double bs_symbols = 0.0;
    double weighted = 0.0;
};

struct RsScenario {
    double file_symbols = 1.0;  // F
    int n = 0, k = 0, m = 0;
    void validate() const;
};

struct MbrScenario {
    double file_symbols = 1.0;
    int n = 0, k = 0, m = 0, d = 0;
    long long b1() const { return static_cast<long long>(k) * d - static_cast<long long>(k) * (k - 1) / 2; }
    void validate() const;
};

struct MsrLrScenario {
    double file_symbols = 1.0;
    int n = 0, k = 0, m = 0, d = 0;
    int alpha() const { return d - k + 1; }
    long long b2() const { return static_cast<long long>(k) * alpha(); }
    void validate() const;
};

/// High-rate MSR family; everything is derived from (t, z) and m = n.
struct MsrHrScenario {
    double file_symbols = 1.0;
    int t = 0, z = 0;
    int n() const { return (t + 1) * z + t; }
    int k() const { return (t + 1) * z; }
    int d() const { return n() - 1; }
    int m() const { return n(); }
    long long alpha() const;  // t^z
    long long b2() const { return static_cast<long long>(k()) * alpha(); }
    void validate() const;
};

struct LdpcScenario {
    double file_symbols = 1.0;
    int n = 0, k = 0, m = 0;
    int dv = 0, dc = 0;
    // Present when the scenario is simulated symbol-by-symbol; the analytic
    // bound only needs the counts above.
    std::shared_ptr<const ParityCheckMatrix> h;
    void validate() const;
};

using CodeScenario = std::variant<RsScenario, MbrScenario, MsrLrScenario, MsrHrScenario, LdpcScenario>;

void validate_scenario(const CodeScenario& s);
std::string family_name(const CodeScenario& s);
int scenario_n(const CodeScenario& s);
int scenario_k(const CodeScenario& s);
int scenario_m(const CodeScenario& s);
double scenario_file_symbols(const CodeScenario& s);
/// Storage units (symbols or packets) handled per node: ceil(n/m).
int scenario_units_per_node(const CodeScenario& s);

/// Repair cost of one lost node when l of the n symbols are missing
/// system-wide. l = 0 is a no-op by convention.
Cost c_rs(const RsScenario& s, int l, const CostParams& p);

/// Repair cost of one lost node (n/m packets) with packet-by-packet reuse of
/// already regenerated packets. l counts lost packets.
Cost c_mbr(const MbrScenario& s, int l, const CostParams& p);

Cost c_msr_lr(const MsrLrScenario& s, int l, const CostParams& p);

enum class MsrNodeKind { systematic, non_systematic };
Cost c_msr_hr(const MsrHrScenario& s, int l, MsrNodeKind kind, const CostParams& p);
/// Population mix of the two node kinds with weights k/n and t/n.
Cost c_msr_hr_mixed(const MsrHrScenario& s, int l, const CostParams& p);

/// Closed-form upper bound on the expected repair cost of one lost node.
/// l may be fractional (expected lost symbols); no clamping is applied.
Cost c_ldpc_ub(const LdpcScenario& s, double l, const CostParams& p);

/// Probability that a node is still in the cell after delta: e^{-mu * delta}.
double survival_p(double mu, double delta);

/// Binomially weighted expectation of the per-node repair cost over one
/// repair period, with the all-survived term contributing zero.
Cost expected_cost(const CodeScenario& s, const CostParams& p, double mu, double delta);

/// Per-lost-node cost at a given number of lost units (the LDPC entry is the
/// upper bound).
Cost per_node_cost(const CodeScenario& s, double l, const CostParams& p);

}  // namespace coachsim
