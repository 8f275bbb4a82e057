#include "doctest.h"
#include "oracles.hpp"

#include "coordlang/error.hpp"
#include "coordlang/parallel.hpp"

using namespace coordlang;

namespace {

struct Fixture {
    StateGraph graph;
    DistanceTable dist;

    explicit Fixture(const DomainSpec& spec) : graph(build_state_graph(spec)), dist(all_pairs_distances(graph)) {}
};

}  // namespace

TEST_CASE("swap mixing on ring(3)") {
    Fixture f(generate_ring(3));
    const Instance inst{*parse_state(f.graph, "(1,2)"), *parse_state(f.graph, "(2,1)")};
    const auto plans = enumerate_optimal_plans(plan_dag(f.graph, f.dist, inst));
    REQUIRE(plans.size() == 4);
    CHECK(rc_present(f.graph, f.dist, inst));
    CHECK(safe_plans(f.graph, f.dist, inst, plans).empty());

    // A moves first to 3 in one plan, B moves first to 3 in another.
    const auto through = [&](const char* mid) {
        const auto m = *parse_state(f.graph, mid);
        return *std::find_if(plans.begin(), plans.end(), [&](const Plan& p) { return p.states[1] == m; });
    };
    const auto a_first = through("(3,2)");
    const auto b_first = through("(1,3)");
    const auto out = mix(f.graph, f.dist, inst, a_first, b_first);
    CHECK(out.failure_step == 1);
    CHECK(out.failure_kind == FailureKind::InvalidJointAction);
    CHECK(mix(f.graph, f.dist, inst, a_first, a_first).success());
}

TEST_CASE("goal analyzer agrees with the literal definition") {
    for (const auto& spec : {generate_ring(3), generate_ring(4), generate_grid_loop(2, 2), generate_turn_and_open(2, 0)}) {
        Fixture f(spec);
        for (StateId t = 0; t < f.graph.size(); ++t) {
            GoalAnalyzer an(f.graph, f.dist, t);
            for (StateId s = 0; s < f.graph.size(); ++s) {
                if (s == t || !f.dist.reachable(s, t)) continue;
                const Instance inst{s, t};
                const auto plans = enumerate_optimal_plans(plan_dag(f.graph, f.dist, inst), 1000000);
                const bool literal = oracle::rc(f.graph, f.dist, inst, plans);
                REQUIRE(an.rc_present(s) == literal);
                REQUIRE(rc_present(f.graph, f.dist, inst, 1000000) == literal);
                REQUIRE(an.has_safe_plan(s) == !safe_plans(f.graph, f.dist, inst, plans).empty());
            }
        }
    }
}

TEST_CASE("conflict pairs agree with pairwise enumeration") {
    for (const auto rule : {ConflictRule::FailureStep, ConflictRule::FirstDivergence}) {
        for (const auto& spec : {generate_ring(3), generate_grid_loop(2, 2), generate_grid_loop(2, 3),
                                 generate_turn_and_open(2, 1)}) {
            Fixture f(spec);
            for (StateId t = 0; t < f.graph.size(); ++t) {
                GoalAnalyzer an(f.graph, f.dist, t);
                for (StateId s = 0; s < f.graph.size(); ++s) {
                    if (s == t || !f.dist.reachable(s, t)) continue;
                    const Instance inst{s, t};
                    const auto plans = enumerate_optimal_plans(plan_dag(f.graph, f.dist, inst), 1000000);
                    if (plans.size() > 300) continue;
                    const auto expect = oracle::conflicts(f.graph, f.dist, inst, plans, rule);
                    const auto got = an.conflict_pairs(s, rule);
                    REQUIRE(std::set<StatePair>(got.begin(), got.end()) == expect);
                    CHECK(std::is_sorted(got.begin(), got.end()));
                }
            }
        }
    }
}

TEST_CASE("connected or theta key, never both") {
    for (const auto& spec : {generate_ring(3), generate_grid_loop(2, 2), generate_turn_and_open(2, 0)}) {
        Fixture f(spec);
        const auto rc = build_rc_graph(f.graph, f.dist, {.cap = 0});
        for (const auto inst : all_instances(f.graph.size())) {
            const bool edge = rc.connected(inst.initial, inst.goal);
            const bool key = rc.theta_at(inst.initial, inst.goal) != nullptr;
            if (!f.dist.reachable(inst.initial, inst.goal)) {
                CHECK_FALSE((edge || key));
                continue;
            }
            REQUIRE(edge != key);
            const int cost = edge ? rc.edges.at({inst.initial, inst.goal}) : rc.theta_at(inst.initial, inst.goal)->cost;
            CHECK(cost == f.dist(inst.initial, inst.goal));
            CHECK(edge == !rc_present(f.graph, f.dist, inst, 1000000));
            if (cost == 1) CHECK(edge);
        }
    }
}

TEST_CASE("ring(3) RC graph") {
    Fixture f(generate_ring(3));
    const auto rc = build_rc_graph(f.graph, f.dist);
    CHECK(rc.edges.size() == 24);
    CHECK(rc.theta.size() == 6);
    for (const auto& [key, entry] : rc.theta) {
        CHECK(entry.cost == 2);
        CHECK_FALSE(entry.conflicts.empty());
        for (const auto& [m, n] : entry.conflicts) CHECK(m < n);
    }
}

TEST_CASE("Turn-and-Open without balls needs no coordination") {
    Fixture f(generate_turn_and_open(2, 0));
    const auto rc = build_rc_graph(f.graph, f.dist);
    CHECK(rc.theta.empty());
}

TEST_CASE("plan-set cap") {
    Fixture f(generate_ring(3));
    try {
        build_rc_graph(f.graph, f.dist, {.cap = 1});
        FAIL("cap not enforced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PlanSetTooLarge);
        CHECK(std::string(e.what()).find("(") != std::string::npos);
    }
    CHECK_NOTHROW(build_rc_graph(f.graph, f.dist, {.cap = 4}));
    CHECK_NOTHROW(build_rc_graph(f.graph, f.dist, {.cap = 0}));
}

TEST_CASE("RC graph does not depend on the worker count") {
    Fixture f(generate_grid_loop(3, 3));
    thread_setting() = 1;
    const auto one = build_rc_graph(f.graph, f.dist, {.cap = 0});
    thread_setting() = 4;
    const auto four = build_rc_graph(f.graph, f.dist, {.cap = 0});
    thread_setting() = 0;
    CHECK(one == four);
}

TEST_CASE("conflict rule names") {
    CHECK(parse_conflict_rule("failure-step") == ConflictRule::FailureStep);
    CHECK(parse_conflict_rule("first-divergence") == ConflictRule::FirstDivergence);
    CHECK_FALSE(parse_conflict_rule("other"));
    CHECK(std::string(to_string(ConflictRule::FirstDivergence)) == "first-divergence");
}
