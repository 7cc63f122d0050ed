#include "coachsim/cost_models.hpp"

#include <cmath>
#include <stdexcept>

namespace coachsim {

namespace {

Cost make_cost(double d2d, double bs, const CostParams& p) {
    return Cost{d2d, bs, p.rho_d2d * d2d + p.rho_bs * bs};
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void CostParams::validate() const {
    require(rho_d2d > 0.0, "cost params: rho_d2d must be positive");
    require(rho_bs >= rho_d2d, "cost params: rho_bs must be >= rho_d2d");
}

void RsScenario::validate() const {
    require(file_symbols > 0.0, "rs: file size must be positive");
    require(n > 0 && k > 0 && k < n, "rs: need 0 < k < n");
    require(m > 0 && m <= n, "rs: need 0 < m <= n");
    require(n % m == 0, "rs: m must divide n");
}

void MbrScenario::validate() const {
    require(file_symbols > 0.0, "mbr: file size must be positive");
    require(n > 0 && k > 0 && k < n, "mbr: need 0 < k < n");
    require(m > 0 && m <= n && n % m == 0, "mbr: m must divide n");
    require(k <= d && d <= n - 1, "mbr: need k <= d <= n-1");
    require(d > n / m, "mbr: need d > n/m");
}

void MsrLrScenario::validate() const {
    require(file_symbols > 0.0, "msr-lr: file size must be positive");
    require(n > 0 && k > 0 && k < n, "msr-lr: need 0 < k < n");
    require(m > 0 && m <= n && n % m == 0, "msr-lr: m must divide n");
    require(k <= d && d <= n - 1, "msr-lr: need k <= d <= n-1");
    require(d >= 2 * k - 2, "msr-lr: need d >= 2k-2");
    require(d > n / m, "msr-lr: need d > n/m");
}

long long MsrHrScenario::alpha() const {
    long long a = 1;
    for (int i = 0; i < z; ++i) a *= t;
    return a;
}

void MsrHrScenario::validate() const {
    require(file_symbols > 0.0, "msr-hr: file size must be positive");
    require(t >= 1 && z >= 1, "msr-hr: need t, z >= 1");
    require(alpha() < (1LL << 50), "msr-hr: t^z overflows");
}

void LdpcScenario::validate() const {
    require(file_symbols > 0.0, "ldpc: file size must be positive");
    require(n > 0 && k > 0 && k < n, "ldpc: need 0 < k < n");
    require(m > 0 && m <= n, "ldpc: need 0 < m <= n");
    require(dv >= 1 && dc >= 2, "ldpc: need dv >= 1, dc >= 2");
    if (h) {
        require(h->n() == n, "ldpc: parity matrix column count mismatch");
        require(h->k() == k, "ldpc: parity matrix dimension mismatch");
    }
}

void validate_scenario(const CodeScenario& s) {
    std::visit([](const auto& v) { v.validate(); }, s);
}

std::string family_name(const CodeScenario& s) {
    struct Visitor {
        std::string operator()(const RsScenario&) const { return "rs"; }
        std::string operator()(const MbrScenario&) const { return "mbr"; }
        std::string operator()(const MsrLrScenario&) const { return "msr_lr"; }
        std::string operator()(const MsrHrScenario&) const { return "msr_hr"; }
        std::string operator()(const LdpcScenario&) const { return "ldpc"; }
    };
    return std::visit(Visitor{}, s);
}

int scenario_n(const CodeScenario& s) {
    struct Visitor {
        int operator()(const RsScenario& v) const { return v.n; }
        int operator()(const MbrScenario& v) const { return v.n; }
        int operator()(const MsrLrScenario& v) const { return v.n; }
        int operator()(const MsrHrScenario& v) const { return v.n(); }
        int operator()(const LdpcScenario& v) const { return v.n; }
    };
    return std::visit(Visitor{}, s);
}

int scenario_k(const CodeScenario& s) {
    struct Visitor {
        int operator()(const RsScenario& v) const { return v.k; }
        int operator()(const MbrScenario& v) const { return v.k; }
        int operator()(const MsrLrScenario& v) const { return v.k; }
        int operator()(const MsrHrScenario& v) const { return v.k(); }
        int operator()(const LdpcScenario& v) const { return v.k; }
    };
    return std::visit(Visitor{}, s);
}

int scenario_m(const CodeScenario& s) {
    struct Visitor {
        int operator()(const RsScenario& v) const { return v.m; }
        int operator()(const MbrScenario& v) const { return v.m; }
        int operator()(const MsrLrScenario& v) const { return v.m; }
        int operator()(const MsrHrScenario& v) const { return v.m(); }
        int operator()(const LdpcScenario& v) const { return v.m; }
    };
    return std::visit(Visitor{}, s);
}

double scenario_file_symbols(const CodeScenario& s) {
    return std::visit([](const auto& v) { return v.file_symbols; }, s);
}

int scenario_units_per_node(const CodeScenario& s) {
    const int n = scenario_n(s);
    const int m = scenario_m(s);
    return (n + m - 1) / m;
}

Cost c_rs(const RsScenario& s, int l, const CostParams& p) {
    s.validate();
    p.validate();
    require(l >= 0 && l <= s.n, "rs: l out of range");
    if (l == 0) return make_cost(0.0, 0.0, p);
    const double per_symbol = s.file_symbols / s.k;
    const int alive = s.n - l;
    const int per_node = s.n / s.m;
    if (s.k <= alive) return make_cost(s.file_symbols, 0.0, p);
    if (s.k < per_node + alive)
        return make_cost(per_symbol * alive, per_symbol * (s.k - alive), p);
    return make_cost(0.0, per_symbol * per_node, p);
}

Cost c_mbr(const MbrScenario& s, int l, const CostParams& p) {
    s.validate();
    p.validate();
    require(l >= 0 && l <= s.n, "mbr: l out of range");
    const double per_symbol = s.file_symbols / static_cast<double>(s.b1());
    const int per_node = s.n / s.m;
    double d2d = 0.0, bs = 0.0;
    for (int a = 0; a < per_node; ++a) {
        const int missing = s.d - s.n + l - a;  // helpers short of d after a local regenerations
        if (missing > 0) {
            d2d += s.n - l;
            bs += missing;
        } else {
            d2d += s.d - a;
        }
    }
    return make_cost(per_symbol * d2d, per_symbol * bs, p);
}

Cost c_msr_lr(const MsrLrScenario& s, int l, const CostParams& p) {
    s.validate();
    p.validate();
    require(l >= 0 && l <= s.n, "msr-lr: l out of range");
    const double per_symbol = s.file_symbols / static_cast<double>(s.b2());
    const int per_node = s.n / s.m;
    double d2d = 0.0, bs = 0.0;
    for (int a = 0; a < per_node; ++a) {
        const int missing = s.d - s.n + l - a;
        if (missing > 0) {
            if (missing < s.alpha()) {
                d2d += s.n - l;
                bs += missing;
            } else {
                // Hybrid would cost more than fetching the packet outright.
                bs += s.alpha();
            }
        } else {
            d2d += s.d - a;
        }
    }
    return make_cost(per_symbol * d2d, per_symbol * bs, p);
}

Cost c_msr_hr(const MsrHrScenario& s, int l, MsrNodeKind kind, const CostParams& p) {
    s.validate();
    p.validate();
    require(l >= 0 && l <= s.n(), "msr-hr: l out of range");
    const double per_symbol = s.file_symbols / static_cast<double>(s.b2());
    const double t_pow_zm1 = static_cast<double>(s.alpha()) / s.t;
    if (kind == MsrNodeKind::non_systematic)
        return make_cost(0.0, per_symbol * static_cast<double>(s.alpha()), p);
    const int d = s.d();
    const int alive = s.n() - l;
    if (d <= alive) return make_cost(per_symbol * t_pow_zm1 * d, 0.0, p);
    if (d - s.n() + l < s.t)
        return make_cost(per_symbol * t_pow_zm1 * alive, per_symbol * t_pow_zm1 * (d - s.n() + l), p);
    return make_cost(0.0, per_symbol * static_cast<double>(s.alpha()), p);
}

Cost c_msr_hr_mixed(const MsrHrScenario& s, int l, const CostParams& p) {
    const auto sys = c_msr_hr(s, l, MsrNodeKind::systematic, p);
    const auto non = c_msr_hr(s, l, MsrNodeKind::non_systematic, p);
    const double wk = static_cast<double>(s.k()) / s.n();
    const double wt = static_cast<double>(s.t) / s.n();
    return Cost{wk * sys.d2d_symbols + wt * non.d2d_symbols,
                wk * sys.bs_symbols + wt * non.bs_symbols,
                wk * sys.weighted + wt * non.weighted};
}

Cost c_ldpc_ub(const LdpcScenario& s, double l, const CostParams& p) {
    s.validate();
    p.validate();
    require(l >= 0.0 && l <= static_cast<double>(s.n), "ldpc: l out of range");
    const int per_node = (s.n + s.m - 1) / s.m;
    const double per_symbol = s.file_symbols / s.k;
    double d2d = 0.0, bs = 0.0;
    for (int a = 0; a < per_node; ++a) {
        // q(a) models losses among the n-a not-yet-regenerated symbols and is
        // only meaningful for a <= l; past that no lost symbols remain.
        const double q = std::max(0.0, (l - a) / static_cast<double>(s.n - a));
        const double all_alive = std::pow(1.0 - q, s.dc - 1);
        d2d += (s.dc - 1) * static_cast<double>(s.dv) * all_alive;
        bs += 1.0 - all_alive;
    }
    return make_cost(per_symbol * d2d, per_symbol * bs, p);
}

double survival_p(double mu, double delta) {
    if (mu <= 0.0) throw std::invalid_argument("survival_p: mu must be positive");
    if (delta < 0.0) throw std::invalid_argument("survival_p: delta must be non-negative");
    return std::exp(-mu * delta);
}

Cost per_node_cost(const CodeScenario& s, double l, const CostParams& p) {
    struct Visitor {
        double l;
        const CostParams& p;
        Cost operator()(const RsScenario& v) const { return c_rs(v, static_cast<int>(std::lround(l)), p); }
        Cost operator()(const MbrScenario& v) const { return c_mbr(v, static_cast<int>(std::lround(l)), p); }
        Cost operator()(const MsrLrScenario& v) const { return c_msr_lr(v, static_cast<int>(std::lround(l)), p); }
        Cost operator()(const MsrHrScenario& v) const { return c_msr_hr_mixed(v, static_cast<int>(std::lround(l)), p); }
        Cost operator()(const LdpcScenario& v) const { return c_ldpc_ub(v, l, p); }
    };
    return std::visit(Visitor{l, p}, s);
}

Cost expected_cost(const CodeScenario& s, const CostParams& p, double mu, double delta) {
    validate_scenario(s);
    p.validate();
    const double x = mu * delta;
    if (survival_p(mu, delta) == 1.0) return Cost{};  // only the zero all-survived term

    const int m = scenario_m(s);
    const int n = scenario_n(s);
    const double log_p = -x;
    const double log_q = std::log(-std::expm1(-x));
    const bool ldpc = std::holds_alternative<LdpcScenario>(s);

    double d2d = 0.0, bs = 0.0, weighted = 0.0;
    for (int i = 0; i < m; ++i) {  // i = m contributes zero by convention
        const double log_w = std::lgamma(m + 1.0) - std::lgamma(i + 1.0) - std::lgamma(m - i + 1.0) +
                             i * log_p + (m - i) * log_q;
        const double w = std::exp(log_w);
        const double lost_units = ldpc ? static_cast<double>(n) / m * (m - i)
                                       : static_cast<double>(n / m) * (m - i);
        const Cost c = per_node_cost(s, lost_units, p);
        d2d += w * c.d2d_symbols;
        bs += w * c.bs_symbols;
        weighted += w * c.weighted;
    }
    return Cost{d2d, bs, weighted};
}

}  // namespace coachsim
