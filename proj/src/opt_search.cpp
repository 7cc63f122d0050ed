#include "coachsim/opt_search.hpp"

#include <algorithm>
#include <stdexcept>

namespace coachsim {

namespace {

struct Option {
    int equation_index = -1;      // -1 means BS direct
    std::vector<int> alive;       // helpers outside L (all live by construction)
    std::vector<int> dep_targets; // helpers inside L, as positions into the target list
};

struct SearchSpace {
    std::vector<int> targets;                  // sorted L
    std::vector<std::vector<Option>> options;  // per target, equation order then BS
};

// Options whose equations touch G are dropped outright: those helpers can
// never be produced within the window.
SearchSpace build_space(const RepairTask& task, int cap) {
    if (task.h == nullptr) throw std::invalid_argument("opt search: missing parity matrix");
    if (static_cast<int>(task.lost_local.size()) > cap)
        throw std::invalid_argument("opt search: lost set exceeds enumeration cap");
    SearchSpace sp;
    sp.targets = task.lost_local;
    std::sort(sp.targets.begin(), sp.targets.end());
    for (int s : sp.targets)
        if (s < 1 || s > task.h->n())
            throw std::invalid_argument("opt search: lost symbol index out of range");
    std::vector<char> in_g(static_cast<size_t>(task.h->n()) + 1, 0);
    for (int s : task.lost_other) {
        if (s < 1 || s > task.h->n())
            throw std::invalid_argument("opt search: other-node symbol index out of range");
        in_g[static_cast<size_t>(s)] = 1;
    }
    sp.options.resize(sp.targets.size());
    for (size_t ti = 0; ti < sp.targets.size(); ++ti) {
        const auto eqs = task.h->recovery_equations(sp.targets[ti]);
        for (size_t ei = 0; ei < eqs.size(); ++ei) {
            Option opt;
            opt.equation_index = static_cast<int>(ei);
            bool blocked = false;
            for (int hsym : eqs[ei].helpers) {
                if (in_g[static_cast<size_t>(hsym)]) { blocked = true; break; }
                auto it = std::lower_bound(sp.targets.begin(), sp.targets.end(), hsym);
                if (it != sp.targets.end() && *it == hsym)
                    opt.dep_targets.push_back(static_cast<int>(it - sp.targets.begin()));
                else
                    opt.alive.push_back(hsym);
            }
            if (!blocked) sp.options[ti].push_back(std::move(opt));
        }
        Option bs;  // always available
        sp.options[ti].push_back(std::move(bs));
    }
    return sp;
}

// Feasible orders exist exactly when the helper-dependency graph is acyclic;
// counters do not depend on the order, so optima are searched per assignment.
bool topological_order(const SearchSpace& sp, const std::vector<int>& choice,
                       std::vector<int>& order_out) {
    const int t = static_cast<int>(sp.targets.size());
    std::vector<int> indeg(static_cast<size_t>(t), 0);
    std::vector<std::vector<int>> out(static_cast<size_t>(t));
    for (int i = 0; i < t; ++i) {
        const Option& o = sp.options[static_cast<size_t>(i)][static_cast<size_t>(choice[static_cast<size_t>(i)])];
        if (o.equation_index < 0) continue;
        for (int dep : o.dep_targets) {
            out[static_cast<size_t>(dep)].push_back(i);
            ++indeg[static_cast<size_t>(i)];
        }
    }
    order_out.clear();
    std::vector<char> queued(static_cast<size_t>(t), 0);
    while (static_cast<int>(order_out.size()) < t) {
        int next = -1;
        for (int i = 0; i < t; ++i)
            if (!queued[static_cast<size_t>(i)] && indeg[static_cast<size_t>(i)] == 0) { next = i; break; }
        if (next < 0) return false;
        queued[static_cast<size_t>(next)] = 1;
        order_out.push_back(next);
        for (int succ : out[static_cast<size_t>(next)]) --indeg[static_cast<size_t>(succ)];
    }
    return true;
}

PlanCost assignment_cost(const SearchSpace& sp, const std::vector<int>& choice,
                         std::vector<int>& scratch) {
    PlanCost c;
    scratch.clear();
    for (size_t i = 0; i < sp.targets.size(); ++i) {
        const Option& o = sp.options[i][static_cast<size_t>(choice[i])];
        if (o.equation_index < 0) {
            ++c.phi;
        } else {
            scratch.insert(scratch.end(), o.alive.begin(), o.alive.end());
        }
    }
    std::sort(scratch.begin(), scratch.end());
    c.tau = static_cast<long long>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
    return c;
}

RepairPlan assignment_plan(const SearchSpace& sp, const std::vector<int>& choice,
                           const std::vector<int>& order) {
    RepairPlan plan;
    for (int pos : order) {
        const Option& o = sp.options[static_cast<size_t>(pos)][static_cast<size_t>(choice[static_cast<size_t>(pos)])];
        PlanStep step;
        step.target = sp.targets[static_cast<size_t>(pos)];
        step.bs = o.equation_index < 0;
        step.equation_index = o.equation_index;
        plan.steps.push_back(step);
    }
    return plan;
}

template <typename Visit>
void for_each_feasible_assignment(const SearchSpace& sp, Visit&& visit) {
    const int t = static_cast<int>(sp.targets.size());
    std::vector<int> choice(static_cast<size_t>(t), 0);
    std::vector<int> order;
    std::vector<int> scratch;
    if (t == 0) {
        visit(choice, order, PlanCost{});
        return;
    }
    while (true) {
        if (topological_order(sp, choice, order))
            visit(choice, order, assignment_cost(sp, choice, scratch));
        int pos = t - 1;
        while (pos >= 0) {
            if (++choice[static_cast<size_t>(pos)] <
                static_cast<int>(sp.options[static_cast<size_t>(pos)].size()))
                break;
            choice[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
}

}  // namespace

void enumerate_plans(const RepairTask& task,
                     const std::function<void(const RepairPlan&, const PlanCost&)>& yield,
                     int cap) {
    const SearchSpace sp = build_space(task, cap);
    const int t = static_cast<int>(sp.targets.size());

    std::vector<char> resolved(static_cast<size_t>(t), 0);
    std::vector<char> cached(static_cast<size_t>(task.h->n()) + 1, 0);
    RepairPlan plan;
    PlanCost cost;

    std::function<void(int)> dfs = [&](int depth) {
        if (depth == t) {
            yield(plan, cost);
            return;
        }
        for (int i = 0; i < t; ++i) {
            if (resolved[static_cast<size_t>(i)]) continue;
            for (const Option& o : sp.options[static_cast<size_t>(i)]) {
                std::vector<int> downloads;
                if (o.equation_index >= 0) {
                    bool feasible = true;
                    for (int dep : o.dep_targets)
                        if (!resolved[static_cast<size_t>(dep)]) { feasible = false; break; }
                    if (!feasible) continue;
                    for (int a : o.alive)
                        if (!cached[static_cast<size_t>(a)]) downloads.push_back(a);
                }
                PlanStep step{sp.targets[static_cast<size_t>(i)], o.equation_index < 0, o.equation_index};
                plan.steps.push_back(step);
                resolved[static_cast<size_t>(i)] = 1;
                for (int d : downloads) cached[static_cast<size_t>(d)] = 1;
                cost.tau += static_cast<long long>(downloads.size());
                if (step.bs) ++cost.phi;

                dfs(depth + 1);

                if (step.bs) --cost.phi;
                cost.tau -= static_cast<long long>(downloads.size());
                for (int d : downloads) cached[static_cast<size_t>(d)] = 0;
                resolved[static_cast<size_t>(i)] = 0;
                plan.steps.pop_back();
            }
        }
    };
    dfs(0);
}

PlanCost simulate_plan(const RepairTask& task, const RepairPlan& plan) {
    if (task.h == nullptr) throw std::invalid_argument("simulate plan: missing parity matrix");
    std::vector<int> targets = task.lost_local;
    std::sort(targets.begin(), targets.end());
    if (plan.steps.size() != targets.size())
        throw std::invalid_argument("simulate plan: plan must cover L exactly");

    std::vector<char> in_g(static_cast<size_t>(task.h->n()) + 1, 0);
    for (int s : task.lost_other) in_g[static_cast<size_t>(s)] = 1;
    std::vector<char> resolved(static_cast<size_t>(task.h->n()) + 1, 0);
    std::vector<char> cached(static_cast<size_t>(task.h->n()) + 1, 0);
    std::vector<char> seen(targets.size(), 0);

    PlanCost cost;
    for (const PlanStep& step : plan.steps) {
        auto it = std::lower_bound(targets.begin(), targets.end(), step.target);
        if (it == targets.end() || *it != step.target)
            throw std::invalid_argument("simulate plan: step target not in L");
        if (seen[static_cast<size_t>(it - targets.begin())]++)
            throw std::invalid_argument("simulate plan: duplicate target");
        if (step.bs) {
            ++cost.phi;
        } else {
            const auto eqs = task.h->recovery_equations(step.target);
            if (step.equation_index < 0 || step.equation_index >= static_cast<int>(eqs.size()))
                throw std::invalid_argument("simulate plan: equation index out of range");
            for (int hsym : eqs[static_cast<size_t>(step.equation_index)].helpers) {
                if (in_g[static_cast<size_t>(hsym)])
                    throw std::invalid_argument("simulate plan: equation uses a permanently lost symbol");
                auto lit = std::lower_bound(targets.begin(), targets.end(), hsym);
                const bool is_target = lit != targets.end() && *lit == hsym;
                if (is_target) {
                    if (!resolved[static_cast<size_t>(hsym)])
                        throw std::invalid_argument("simulate plan: equation uses an unresolved lost symbol");
                } else if (!cached[static_cast<size_t>(hsym)]) {
                    cached[static_cast<size_t>(hsym)] = 1;
                    ++cost.tau;
                }
            }
        }
        resolved[static_cast<size_t>(step.target)] = 1;
        cached[static_cast<size_t>(step.target)] = 1;
    }
    return cost;
}

Opt1Result opt1(const RepairTask& task, int cap) {
    const SearchSpace sp = build_space(task, cap);
    bool have = false;
    Opt1Result best;
    for_each_feasible_assignment(sp, [&](const std::vector<int>& choice, const std::vector<int>& order,
                                         const PlanCost& cost) {
        if (!have || std::pair(cost.phi, cost.tau) < std::pair(best.cost.phi, best.cost.tau)) {
            have = true;
            best.cost = cost;
            best.plan = assignment_plan(sp, choice, order);
        }
    });
    if (!have) throw std::logic_error("opt search: no feasible plan");  // BS direct always feasible
    return best;
}

Opt2Result opt2(const RepairTask& task, const CostParams& params, int cap) {
    params.validate();
    const SearchSpace sp = build_space(task, cap);
    bool have = false;
    Opt2Result best;
    for_each_feasible_assignment(sp, [&](const std::vector<int>& choice, const std::vector<int>& order,
                                         const PlanCost& cost) {
        const double w = params.rho_d2d * static_cast<double>(cost.tau) +
                         params.rho_bs * static_cast<double>(cost.phi);
        if (!have || w < best.weighted) {
            have = true;
            best.weighted = w;
            best.cost = cost;
            best.plan = assignment_plan(sp, choice, order);
        }
    });
    if (!have) throw std::logic_error("opt search: no feasible plan");
    return best;
}

OptEvaluation evaluate_optima(const RepairTask& task, const std::vector<CostParams>& prices,
                              int cap) {
    const SearchSpace sp = build_space(task, cap);
    OptEvaluation ev;
    ev.opt2_weighted.assign(prices.size(), 0.0);
    bool have = false;
    for_each_feasible_assignment(sp, [&](const std::vector<int>&, const std::vector<int>&,
                                         const PlanCost& cost) {
        if (!have) {
            ev.opt1 = cost;
            for (size_t i = 0; i < prices.size(); ++i)
                ev.opt2_weighted[i] = prices[i].rho_d2d * static_cast<double>(cost.tau) +
                                      prices[i].rho_bs * static_cast<double>(cost.phi);
            have = true;
            return;
        }
        if (std::pair(cost.phi, cost.tau) < std::pair(ev.opt1.phi, ev.opt1.tau)) ev.opt1 = cost;
        for (size_t i = 0; i < prices.size(); ++i) {
            const double w = prices[i].rho_d2d * static_cast<double>(cost.tau) +
                             prices[i].rho_bs * static_cast<double>(cost.phi);
            ev.opt2_weighted[i] = std::min(ev.opt2_weighted[i], w);
        }
    });
    if (!have) throw std::logic_error("opt search: no feasible plan");
    return ev;
}

}  // namespace coachsim
