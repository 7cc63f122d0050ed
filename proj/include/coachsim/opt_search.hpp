#pragma once

#include <functional>
#include <vector>

#include "coachsim/cost_models.hpp"
#include "coachsim/greedy_repair.hpp"

namespace coachsim {

/// One step of an explicit repair plan: either apply one of the target's
/// recovery equations (indexed into recovery_equations(h, target) order) or
/// fetch the target from the BS.
struct PlanStep {
    int target = 0;
    bool bs = false;
    int equation_index = -1;  // valid when !bs
};

struct RepairPlan {
    std::vector<PlanStep> steps;
};

struct PlanCost {
    long long tau = 0;
    long long phi = 0;
};

/// Streams every feasible ordered plan for the task together with its exact
/// download counters, under the same caching semantics as the greedy repair.
/// Throws when |L| exceeds the enumeration cap.
void enumerate_plans(const RepairTask& task,
                     const std::function<void(const RepairPlan&, const PlanCost&)>& yield,
                     int cap = 6);

/// Executes a plan step by step and returns its counters; throws if any step
/// is infeasible or the plan does not cover L exactly once each.
PlanCost simulate_plan(const RepairTask& task, const RepairPlan& plan);

struct Opt1Result {
    RepairPlan plan;
    PlanCost cost;
};

/// Exhaustive minimum of (phi, tau), lexicographic.
Opt1Result opt1(const RepairTask& task, int cap = 6);

struct Opt2Result {
    RepairPlan plan;
    PlanCost cost;
    double weighted = 0.0;
};

/// Exhaustive minimum of rho_d2d * tau + rho_bs * phi.
Opt2Result opt2(const RepairTask& task, const CostParams& params, int cap = 6);

/// One exhaustive pass evaluating Opt-1 and Opt-2 for several price pairs at
/// once (the search space does not depend on prices).
struct OptEvaluation {
    PlanCost opt1;
    std::vector<double> opt2_weighted;  // aligned with the input price list
};
OptEvaluation evaluate_optima(const RepairTask& task, const std::vector<CostParams>& prices,
                              int cap = 6);

}  // namespace coachsim
