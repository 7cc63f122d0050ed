#pragma once

#include <cstdint>
#include <vector>

#include "coachsim/parity_check.hpp"

namespace coachsim {

/// One node-repair instance: the symbols to rebuild on this newcomer (L),
/// the symbols lost on other nodes in the same window (G, unavailable for
/// the whole repair), and optionally the stripe values for bit-exact output.
struct RepairTask {
    const ParityCheckMatrix* h = nullptr;
    std::vector<int> lost_local;   // L, 1-based symbol indices
    std::vector<int> lost_other;   // G
    std::vector<std::uint8_t> codeword;  // size n, or empty to skip value tracking

    void validate() const;
};

enum class RepairSource : std::uint8_t { local_equation, bs_direct };

struct RepairAction {
    int target = 0;
    RepairSource source = RepairSource::local_equation;
    int row = -1;                 // parity-check row used; -1 for bs_direct
    std::vector<int> downloaded;  // helpers fetched from live nodes for this step
};

struct RepairOutcome {
    std::vector<RepairAction> actions;
    long long tau = 0;  // distinct symbols downloaded from live nodes
    long long phi = 0;  // symbols downloaded from the base station (BSScore)
    std::vector<std::pair<int, std::uint8_t>> values;  // target -> recovered bit
};

/// Snapshot of one pooled equation for inspection/tests.
struct PoolEquation {
    int target = 0;
    int row = 0;
    std::vector<int> reduced;   // original helpers minus everything cached
    std::vector<int> original;
    int bs_need = 0;            // lost symbols remaining in the reduced form
};

/// Two-phase repair. Phase 1 peels every symbol reachable through live
/// helpers only; phase 2 resolves the rest, fetching a blocked target itself
/// from the BS and reusing every previously cached symbol.
class RepairSession {
public:
    explicit RepairSession(const RepairTask& task);

    RepairSession(const RepairSession&) = delete;
    RepairSession& operator=(const RepairSession&) = delete;
    RepairSession(RepairSession&&) = default;
    RepairSession& operator=(RepairSession&&) = default;

    void run_phase1();
    void run_phase2();  // requires run_phase1()

    bool phase1_done() const { return p1_done_; }
    const RepairOutcome& outcome() const { return out_; }

    /// Equations currently usable without BS contact (R1), selection order.
    std::vector<PoolEquation> no_bs_pool() const;
    /// Equations still blocked by lost symbols (R2), selection order.
    std::vector<PoolEquation> bs_pool() const;
    /// Unrepaired L symbols currently having an equation in the no-BS pool.
    std::vector<int> locally_repairable() const;

private:
    struct Eq {
        int target = 0;
        int row = 0;
        std::vector<int> members;  // original helpers, ascending
        int need = 0;              // members still lost
        int redcard = 0;           // members not yet cached
        bool active = true;
        std::uint8_t pool = 2;
    };

    enum class SymbolState : std::uint8_t { alive, cached, lost_local, lost_other };

    int slot(int symbol) const;
    int freq(int symbol) const;
    void set_cached(int symbol);
    void deactivate(int eq_id);
    void drop_target_equations(int target);
    void repair_via(int eq_id);
    void bs_direct(int eq_id);
    void promote_pass();
    int select_phase1() const;
    int select_phase2() const;
    PoolEquation snapshot(const Eq& e) const;

    const RepairTask* task_;
    const ParityCheckMatrix* h_;
    bool track_values_ = false;
    std::vector<SymbolState> state_;   // 1-based
    std::vector<std::uint8_t> value_;  // valid where state is cached
    std::vector<Eq> eqs_;
    std::vector<int> adj_sym_;    // sorted symbols appearing as members
    std::vector<int> adj_start_;  // CSR offsets
    std::vector<int> adj_eq_;
    std::vector<int> contain_count_;  // active equations containing the symbol
    std::vector<int> targets_;        // sorted L
    std::vector<std::vector<int>> target_eqs_;
    int unresolved_ = 0;
    RepairOutcome out_;
    bool p1_done_ = false;
    bool p2_done_ = false;
};

/// Phase 1 alone; the returned session carries the partial outcome and pools.
RepairSession phase1(const RepairTask& task);

/// Full repair: phase 1 then phase 2.
RepairOutcome repair_node(const RepairTask& task);

}  // namespace coachsim
