#include "coachsim/greedy_repair.hpp"

#include <algorithm>
#include <stdexcept>

namespace coachsim {

void RepairTask::validate() const {
    if (h == nullptr) throw std::invalid_argument("repair task: missing parity matrix");
    if (lost_local.empty()) throw std::invalid_argument("repair task: no symbols to repair");
    const int n = h->n();
    auto check_range = [n](const std::vector<int>& v, const char* what) {
        for (int s : v)
            if (s < 1 || s > n) throw std::invalid_argument(std::string("repair task: ") + what + " index out of range");
    };
    check_range(lost_local, "lost");
    check_range(lost_other, "other-node");
    for (int s : lost_local)
        if (std::find(lost_other.begin(), lost_other.end(), s) != lost_other.end())
            throw std::invalid_argument("repair task: L and G must be disjoint");
    for (int s : lost_local)
        if (h->rows_containing(s).empty())
            throw std::invalid_argument("repair task: lost symbol has no recovery equation");
    if (!codeword.empty() && static_cast<int>(codeword.size()) != n)
        throw std::invalid_argument("repair task: codeword length must equal n");
}

RepairSession::RepairSession(const RepairTask& task) : task_(&task), h_(task.h) {
    task.validate();
    track_values_ = !task.codeword.empty();
    const int n = h_->n();
    state_.assign(static_cast<size_t>(n) + 1, SymbolState::alive);
    if (track_values_) value_.assign(static_cast<size_t>(n) + 1, 0);
    for (int s : task.lost_local) state_[static_cast<size_t>(s)] = SymbolState::lost_local;
    for (int s : task.lost_other) state_[static_cast<size_t>(s)] = SymbolState::lost_other;

    targets_ = task.lost_local;
    std::sort(targets_.begin(), targets_.end());
    target_eqs_.assign(targets_.size(), {});
    unresolved_ = static_cast<int>(targets_.size());

    for (size_t ti = 0; ti < targets_.size(); ++ti) {
        for (const auto& req : h_->recovery_equations(targets_[ti])) {
            Eq e;
            e.target = req.target;
            e.row = req.row;
            e.members = req.helpers;
            e.redcard = static_cast<int>(e.members.size());
            for (int m : e.members)
                if (state_[static_cast<size_t>(m)] == SymbolState::lost_local ||
                    state_[static_cast<size_t>(m)] == SymbolState::lost_other)
                    ++e.need;
            e.pool = e.need == 0 ? 1 : 2;
            target_eqs_[ti].push_back(static_cast<int>(eqs_.size()));
            eqs_.push_back(std::move(e));
        }
    }

    std::vector<std::pair<int, int>> pairs;  // (member symbol, eq id)
    for (size_t i = 0; i < eqs_.size(); ++i)
        for (int m : eqs_[i].members) pairs.emplace_back(m, static_cast<int>(i));
    std::sort(pairs.begin(), pairs.end());
    adj_eq_.reserve(pairs.size());
    for (const auto& [sym, eq] : pairs) {
        if (adj_sym_.empty() || adj_sym_.back() != sym) {
            adj_sym_.push_back(sym);
            adj_start_.push_back(static_cast<int>(adj_eq_.size()));
        }
        adj_eq_.push_back(eq);
    }
    adj_start_.push_back(static_cast<int>(adj_eq_.size()));
    contain_count_.assign(adj_sym_.size(), 0);
    for (size_t i = 0; i < adj_sym_.size(); ++i)
        contain_count_[i] = adj_start_[i + 1] - adj_start_[i];
}

int RepairSession::slot(int symbol) const {
    auto it = std::lower_bound(adj_sym_.begin(), adj_sym_.end(), symbol);
    if (it == adj_sym_.end() || *it != symbol) return -1;
    return static_cast<int>(it - adj_sym_.begin());
}

int RepairSession::freq(int symbol) const {
    if (state_[static_cast<size_t>(symbol)] == SymbolState::cached) return 0;
    const int sl = slot(symbol);
    return sl < 0 ? 0 : contain_count_[static_cast<size_t>(sl)];
}

void RepairSession::set_cached(int symbol) {
    const SymbolState prev = state_[static_cast<size_t>(symbol)];
    state_[static_cast<size_t>(symbol)] = SymbolState::cached;
    const int sl = slot(symbol);
    if (sl < 0) return;
    for (int i = adj_start_[static_cast<size_t>(sl)]; i < adj_start_[static_cast<size_t>(sl) + 1]; ++i) {
        Eq& e = eqs_[static_cast<size_t>(adj_eq_[static_cast<size_t>(i)])];
        if (!e.active) continue;
        --e.redcard;
        if (prev == SymbolState::lost_local) --e.need;
    }
}

void RepairSession::deactivate(int eq_id) {
    Eq& e = eqs_[static_cast<size_t>(eq_id)];
    if (!e.active) return;
    e.active = false;
    for (int m : e.members) {
        const int sl = slot(m);
        --contain_count_[static_cast<size_t>(sl)];
    }
}

void RepairSession::drop_target_equations(int target) {
    auto it = std::lower_bound(targets_.begin(), targets_.end(), target);
    for (int id : target_eqs_[static_cast<size_t>(it - targets_.begin())]) deactivate(id);
}

void RepairSession::repair_via(int eq_id) {
    Eq& e = eqs_[static_cast<size_t>(eq_id)];
    RepairAction act;
    act.target = e.target;
    act.source = RepairSource::local_equation;
    act.row = e.row;
    std::uint8_t acc = 0;
    for (int m : e.members) {
        const SymbolState st = state_[static_cast<size_t>(m)];
        if (st == SymbolState::alive) {
            ++out_.tau;
            act.downloaded.push_back(m);
            if (track_values_) value_[static_cast<size_t>(m)] = task_->codeword[static_cast<size_t>(m - 1)];
            set_cached(m);
        } else if (st != SymbolState::cached) {
            throw std::logic_error("greedy repair: selected equation still blocked");
        }
        if (track_values_) acc ^= value_[static_cast<size_t>(m)];
    }
    if (track_values_) {
        value_[static_cast<size_t>(e.target)] = acc;
        out_.values.emplace_back(e.target, acc);
    }
    set_cached(e.target);
    --unresolved_;
    drop_target_equations(e.target);
    out_.actions.push_back(std::move(act));
}

void RepairSession::bs_direct(int eq_id) {
    Eq& e = eqs_[static_cast<size_t>(eq_id)];
    RepairAction act;
    act.target = e.target;
    act.source = RepairSource::bs_direct;
    ++out_.phi;
    if (track_values_) {
        value_[static_cast<size_t>(e.target)] = task_->codeword[static_cast<size_t>(e.target - 1)];
        out_.values.emplace_back(e.target, value_[static_cast<size_t>(e.target)]);
    }
    set_cached(e.target);
    --unresolved_;
    drop_target_equations(e.target);
    out_.actions.push_back(std::move(act));
}

void RepairSession::promote_pass() {
    for (size_t i = 0; i < eqs_.size(); ++i) {
        Eq& e = eqs_[i];
        if (!e.active || e.pool != 2 || e.need != 0) continue;
        e.pool = 1;
        auto it = std::lower_bound(targets_.begin(), targets_.end(), e.target);
        for (int id : target_eqs_[static_cast<size_t>(it - targets_.begin())])
            if (id != static_cast<int>(i) && eqs_[static_cast<size_t>(id)].pool == 2)
                deactivate(id);
    }
}

int RepairSession::select_phase1() const {
    int best = -1;
    for (size_t i = 0; i < eqs_.size(); ++i) {
        const Eq& e = eqs_[i];
        if (!e.active || e.pool != 1) continue;
        if (best < 0) { best = static_cast<int>(i); continue; }
        const Eq& b = eqs_[static_cast<size_t>(best)];
        if (std::tuple(e.redcard, e.target, e.row) < std::tuple(b.redcard, b.target, b.row))
            best = static_cast<int>(i);
    }
    return best;
}

int RepairSession::select_phase2() const {
    int best = -1;
    int best_freq = 0;
    for (size_t i = 0; i < eqs_.size(); ++i) {
        const Eq& e = eqs_[i];
        if (!e.active) continue;
        const int f = freq(e.target);
        if (best < 0) { best = static_cast<int>(i); best_freq = f; continue; }
        const Eq& b = eqs_[static_cast<size_t>(best)];
        if (std::tuple(e.need, -f, e.target, e.row) < std::tuple(b.need, -best_freq, b.target, b.row)) {
            best = static_cast<int>(i);
            best_freq = f;
        }
    }
    return best;
}

void RepairSession::run_phase1() {
    if (p1_done_) throw std::logic_error("greedy repair: phase 1 already ran");
    promote_pass();  // initial classification already split the pools; no-op in practice
    for (int id = select_phase1(); id >= 0; id = select_phase1()) {
        repair_via(id);
        promote_pass();
    }
    p1_done_ = true;
}

void RepairSession::run_phase2() {
    if (!p1_done_) throw std::logic_error("greedy repair: phase 2 requires phase 1");
    if (p2_done_) throw std::logic_error("greedy repair: phase 2 already ran");
    while (unresolved_ > 0) {
        const int id = select_phase2();
        if (id < 0) throw std::logic_error("greedy repair: pool exhausted with symbols left");
        if (eqs_[static_cast<size_t>(id)].need > 0)
            bs_direct(id);
        else
            repair_via(id);
    }
    p2_done_ = true;
}

PoolEquation RepairSession::snapshot(const Eq& e) const {
    PoolEquation pe;
    pe.target = e.target;
    pe.row = e.row;
    pe.original = e.members;
    pe.bs_need = e.need;
    for (int m : e.members)
        if (state_[static_cast<size_t>(m)] != SymbolState::cached) pe.reduced.push_back(m);
    return pe;
}

std::vector<PoolEquation> RepairSession::no_bs_pool() const {
    std::vector<const Eq*> sel;
    for (const auto& e : eqs_)
        if (e.active && e.pool == 1) sel.push_back(&e);
    std::sort(sel.begin(), sel.end(), [](const Eq* a, const Eq* b) {
        return std::tuple(a->redcard, a->target, a->row) < std::tuple(b->redcard, b->target, b->row);
    });
    std::vector<PoolEquation> out;
    out.reserve(sel.size());
    for (const Eq* e : sel) out.push_back(snapshot(*e));
    return out;
}

std::vector<PoolEquation> RepairSession::bs_pool() const {
    std::vector<const Eq*> sel;
    for (const auto& e : eqs_)
        if (e.active && e.pool == 2) sel.push_back(&e);
    std::sort(sel.begin(), sel.end(), [this](const Eq* a, const Eq* b) {
        return std::tuple(a->need, -freq(a->target), a->target, a->row) <
               std::tuple(b->need, -freq(b->target), b->target, b->row);
    });
    std::vector<PoolEquation> out;
    out.reserve(sel.size());
    for (const Eq* e : sel) out.push_back(snapshot(*e));
    return out;
}

std::vector<int> RepairSession::locally_repairable() const {
    std::vector<int> l1;
    for (const auto& e : eqs_) {
        if (!e.active || e.pool != 1) continue;
        if (state_[static_cast<size_t>(e.target)] != SymbolState::cached) l1.push_back(e.target);
    }
    std::sort(l1.begin(), l1.end());
    l1.erase(std::unique(l1.begin(), l1.end()), l1.end());
    return l1;
}

RepairSession phase1(const RepairTask& task) {
    RepairSession s(task);
    s.run_phase1();
    return s;
}

RepairOutcome repair_node(const RepairTask& task) {
    RepairSession s(task);
    s.run_phase1();
    s.run_phase2();
    return s.outcome();
}

}  // namespace coachsim
