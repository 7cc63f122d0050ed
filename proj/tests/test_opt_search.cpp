#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coachsim/opt_search.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace coachsim;
using doctest::Approx;

namespace {

std::vector<int> node_block(int node, int per_node, int n) {
    std::vector<int> block;
    for (int s = (node - 1) * per_node + 1; s <= std::min(node * per_node, n); ++s) block.push_back(s);
    return block;
}

struct PlanSummary {
    long long count = 0;
    PlanCost best_lex;   // min (phi, tau)
    bool have = false;
};

PlanSummary summarize(const RepairTask& task) {
    PlanSummary sum;
    enumerate_plans(task, [&](const RepairPlan&, const PlanCost& c) {
        ++sum.count;
        if (!sum.have || std::pair(c.phi, c.tau) < std::pair(sum.best_lex.phi, sum.best_lex.tau)) {
            sum.best_lex = c;
            sum.have = true;
        }
    });
    return sum;
}

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

TEST_CASE("single lost symbol enumerates the local and the BS plan") {
    auto h = example_h8();
    RepairTask task{&h, {8}, {}, {}};
    std::vector<std::pair<long long, long long>> costs;
    enumerate_plans(task, [&](const RepairPlan& p, const PlanCost& c) {
        REQUIRE(p.steps.size() == 1);
        costs.emplace_back(c.tau, c.phi);
    });
    std::sort(costs.begin(), costs.end());
    REQUIRE(costs.size() == 2);
    CHECK(costs[0] == std::pair<long long, long long>{0, 1});  // BS direct
    CHECK(costs[1] == std::pair<long long, long long>{3, 0});  // {2,4,7} locally
}

TEST_CASE("blocked worked instance needs two BS downloads at minimum") {
    auto h = example_h8();
    RepairTask task{&h, {1, 2}, {3, 4}, {}};
    auto sum = summarize(task);
    CHECK(sum.best_lex.phi == 2);
    auto o1 = opt1(task);
    CHECK(o1.cost.phi == 2);
    CHECK(o1.cost.tau == sum.best_lex.tau);
}

TEST_CASE("empty lost set yields exactly the empty plan") {
    auto h = example_h8();
    RepairTask task{&h, {}, {}, {}};
    long long count = 0;
    enumerate_plans(task, [&](const RepairPlan& p, const PlanCost& c) {
        CHECK(p.steps.empty());
        CHECK(c.tau == 0);
        CHECK(c.phi == 0);
        ++count;
    });
    CHECK(count == 1);
    CHECK(opt1(task).cost.phi == 0);
    CHECK(opt2(task, CostParams{1.0, 10.0}).weighted == 0.0);
}

TEST_CASE("opt1 on the intact-helpers instance") {
    auto h = example_h8();
    RepairTask task{&h, {1, 2}, {}, {}};
    auto o1 = opt1(task);
    CHECK(o1.cost.phi == 0);
    CHECK(o1.cost.tau == 3);
}

TEST_CASE("opt2 switches between local and BS with the price ratio") {
    auto h = example_h8();
    RepairTask task{&h, {8}, {}, {}};
    auto expensive_bs = opt2(task, CostParams{1.0, 10.0});
    CHECK(expensive_bs.weighted == Approx(3.0));
    CHECK(expensive_bs.cost.tau == 3);
    auto cheap_bs = opt2(task, CostParams{1.0, 2.0});
    CHECK(cheap_bs.weighted == Approx(2.0));
    CHECK(cheap_bs.cost.phi == 1);
}

TEST_CASE("every yielded plan re-simulates to the same counters") {
    auto h = example_h8();
    for (const auto& task : {RepairTask{&h, {1, 2}, {3, 4}, {}}, RepairTask{&h, {1, 2, 7}, {}, {}},
                             RepairTask{&h, {5, 8}, {1}, {}}}) {
        enumerate_plans(task, [&](const RepairPlan& p, const PlanCost& c) {
            auto replay = simulate_plan(task, p);
            REQUIRE(replay.tau == c.tau);
            REQUIRE(replay.phi == c.phi);
        });
    }
}

TEST_CASE("plan count matches the closed form when every plan is feasible") {
    auto h = example_h8();
    // s5 and s8 have one equation each touching neither L nor G.
    RepairTask task{&h, {5, 8}, {}, {}};
    auto sum = summarize(task);
    CHECK(sum.count == factorial(2) * 2 * 2);

    // Two interior symbols of an array code with d_v = 2 alternatives each.
    auto ha = build_array_ldpc({5, 2, 4});  // n = 20
    int s_a = -1, s_b = -1;
    for (int s = 6; s <= ha.n() && s_b < 0; ++s) {
        auto eqs = ha.recovery_equations(s);
        if (eqs.size() != 2) continue;
        if (s_a < 0) { s_a = s; continue; }
        bool overlap = false;
        for (const auto& eq : ha.recovery_equations(s_a))
            for (int hh : eq.helpers) overlap |= hh == s;
        for (const auto& eq : eqs)
            for (int hh : eq.helpers) overlap |= hh == s_a;
        if (!overlap) s_b = s;
    }
    REQUIRE(s_a > 0);
    REQUIRE(s_b > 0);
    RepairTask task2{&ha, {s_a, s_b}, {}, {}};
    CHECK(summarize(task2).count == factorial(2) * 3 * 3);
}

TEST_CASE("assignment search agrees with plan enumeration minima") {
    auto h = example_h8();
    std::mt19937_64 rng(31);
    const CostParams prices[] = {CostParams{1.0, 1.5}, CostParams{1.0, 4.0}, CostParams{1.0, 20.0}};
    for (int it = 0; it < 200; ++it) {
        std::set<int> lost;
        const int count = 1 + static_cast<int>(rng() % 4);
        while (static_cast<int>(lost.size()) < count) lost.insert(1 + static_cast<int>(rng() % 8));
        std::vector<int> l, g;
        for (int s = 1; s <= 8; ++s) {
            if (lost.count(s)) continue;
            if (rng() % 5 == 0) g.push_back(s);
        }
        l.assign(lost.begin(), lost.end());
        RepairTask task{&h, l, g, {}};

        long long best_phi = -1, best_tau = -1;
        std::vector<double> best_w(3, 1e18);
        enumerate_plans(task, [&](const RepairPlan&, const PlanCost& c) {
            if (best_phi < 0 || std::pair(c.phi, c.tau) < std::pair(best_phi, best_tau)) {
                best_phi = c.phi;
                best_tau = c.tau;
            }
            for (int i = 0; i < 3; ++i)
                best_w[static_cast<size_t>(i)] =
                    std::min(best_w[static_cast<size_t>(i)],
                             prices[i].rho_d2d * static_cast<double>(c.tau) +
                                 prices[i].rho_bs * static_cast<double>(c.phi));
        });

        auto o1 = opt1(task);
        REQUIRE(o1.cost.phi == best_phi);
        REQUIRE(o1.cost.tau == best_tau);
        REQUIRE(simulate_plan(task, o1.plan).phi == best_phi);

        auto ev = evaluate_optima(task, {prices[0], prices[1], prices[2]});
        REQUIRE(ev.opt1.phi == best_phi);
        REQUIRE(ev.opt1.tau == best_tau);
        for (int i = 0; i < 3; ++i) {
            REQUIRE(ev.opt2_weighted[static_cast<size_t>(i)] == Approx(best_w[static_cast<size_t>(i)]));
            auto o2 = opt2(task, prices[i]);
            REQUIRE(o2.weighted == Approx(best_w[static_cast<size_t>(i)]));
            auto replay = simulate_plan(task, o2.plan);
            REQUIRE(prices[i].rho_d2d * static_cast<double>(replay.tau) +
                        prices[i].rho_bs * static_cast<double>(replay.phi) ==
                    Approx(o2.weighted));
        }
    }
}

TEST_CASE("greedy repair never beats the exhaustive optima") {
    auto h = example_h8();
    const CostParams price{1.0, 10.0};
    // Every lost-node pattern of the worked example layout.
    for (int lost_mask = 1; lost_mask < 16; ++lost_mask) {
        for (int repaired = 0; repaired < 4; ++repaired) {
            if (!(lost_mask & (1 << repaired))) continue;
            std::vector<int> g;
            for (int other = 0; other < 4; ++other)
                if (other != repaired && (lost_mask & (1 << other)))
                    for (int s : node_block(other + 1, 2, 8)) g.push_back(s);
            RepairTask task{&h, node_block(repaired + 1, 2, 8), g, {}};

            auto greedy = repair_node(task);
            auto ev = evaluate_optima(task, {price});
            CHECK(ev.opt1.phi <= greedy.phi);
            CHECK(ev.opt2_weighted[0] <=
                  price.rho_d2d * static_cast<double>(greedy.tau) +
                      price.rho_bs * static_cast<double>(greedy.phi) + 1e-9);
        }
    }

    // Sampled instances on the n = 184 array code with three-symbol nodes.
    auto ha = build_array_ldpc({23, 2, 8});
    std::mt19937_64 rng(77);
    const int m = 62;
    const int per_node = 3;
    for (int it = 0; it < 300; ++it) {
        std::set<int> lost_nodes;
        const int count = 1 + static_cast<int>(rng() % 7);
        while (static_cast<int>(lost_nodes.size()) < count)
            lost_nodes.insert(1 + static_cast<int>(rng() % m));
        const int repaired = *lost_nodes.begin();
        std::vector<int> g;
        for (int node : lost_nodes)
            if (node != repaired)
                for (int s : node_block(node, per_node, ha.n())) g.push_back(s);
        RepairTask task{&ha, node_block(repaired, per_node, ha.n()), g, {}};
        auto greedy = repair_node(task);
        auto ev = evaluate_optima(task, {price});
        REQUIRE(ev.opt1.phi <= greedy.phi);
        REQUIRE(ev.opt2_weighted[0] <=
                price.rho_d2d * static_cast<double>(greedy.tau) +
                    price.rho_bs * static_cast<double>(greedy.phi) + 1e-9);
    }
}

TEST_CASE("worked example: greedy and opt1 coincide") {
    auto h = example_h8();
    RepairTask blocked{&h, {1, 2}, {3, 4}, {}};
    auto greedy_blocked = repair_node(blocked);
    auto o1_blocked = opt1(blocked);
    CHECK(greedy_blocked.phi == 2);
    CHECK(o1_blocked.cost.phi == 2);

    RepairTask open{&h, {1, 2}, {}, {}};
    auto greedy_open = repair_node(open);
    auto o1_open = opt1(open);
    CHECK(greedy_open.tau == 3);
    CHECK(greedy_open.phi == 0);
    CHECK(o1_open.cost.tau == 3);
    CHECK(o1_open.cost.phi == 0);
}

TEST_CASE("enumeration cap") {
    auto h = build_array_ldpc({23, 2, 8});
    std::vector<int> l;
    for (int s = 1; s <= 7; ++s) l.push_back(s);
    RepairTask task{&h, l, {}, {}};
    CHECK_THROWS_AS(opt1(task), std::invalid_argument);        // default cap 6
    CHECK_NOTHROW(opt1(task, 7));
}

TEST_CASE("simulate_plan rejects malformed plans") {
    auto h = example_h8();
    RepairTask task{&h, {1, 2}, {3, 4}, {}};
    RepairPlan missing;  // wrong length
    missing.steps.push_back(PlanStep{1, true, -1});
    CHECK_THROWS_AS(simulate_plan(task, missing), std::invalid_argument);

    RepairPlan blocked_local;
    blocked_local.steps.push_back(PlanStep{1, false, 0});  // {3,7} with s3 in G
    blocked_local.steps.push_back(PlanStep{2, true, -1});
    CHECK_THROWS_AS(simulate_plan(task, blocked_local), std::invalid_argument);

    RepairPlan dup;
    dup.steps.push_back(PlanStep{1, true, -1});
    dup.steps.push_back(PlanStep{1, true, -1});
    CHECK_THROWS_AS(simulate_plan(task, dup), std::invalid_argument);
}
