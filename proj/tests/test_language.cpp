#include "doctest.h"
#include "oracles.hpp"

#include <random>

#include "coordlang/error.hpp"

using namespace coordlang;

namespace {

struct Setup {
    StateGraph graph;
    DistanceTable dist;
    Abstraction abs;
    Language lang;

    explicit Setup(const DomainSpec& spec) : graph(build_state_graph(spec)), dist(all_pairs_distances(graph)) {
        const auto cg = conflict_graph(build_rc_graph(graph, dist, {.cap = 0}));
        abs = refine_until_perfect(graph, dist, cg, ColorOrder::Saturation, SIZE_MAX, InstanceScope::all()).abstraction;
        lang = language_from_abstraction(abs);
    }
};

}  // namespace

TEST_CASE("words are the blocks") {
    Setup r(generate_ring(3));
    CHECK(r.lang.size() == 3);
    for (const auto& w : r.lang.words) {
        CHECK_FALSE(w.members.empty());
        for (const auto s : w.members) CHECK(r.lang.word_of[s] == w.id);
    }
    CHECK(language_from_abstraction(single_block_abstraction(r.graph)).size() == 1);
    Setup t(generate_turn_and_open(2, 0));
    CHECK(t.lang.size() == 1);
}

TEST_CASE("compatibility example") {
    // States a..f as 0..5.
    const std::vector<Word> zeta = {{0, {0, 2}}, {1, {1, 3}}};
    const std::vector<StateId> plan = {4, 2, 5, 0, 3};  // (e, c, f, a, d)
    CHECK(compatible(zeta, plan));
    const std::vector<StateId> reversed = {3, 2};
    CHECK_FALSE(compatible(zeta, reversed));
    CHECK(compatible(std::span<const Word>{}, plan));
}

TEST_CASE("compatibility agrees with exhaustive index maps") {
    std::mt19937 rng(5);
    for (int round = 0; round < 2000; ++round) {
        std::vector<Word> words;
        std::vector<std::set<StateId>> sets;
        const int len = static_cast<int>(rng() % 4);
        for (int i = 0; i < len; ++i) {
            std::set<StateId> m;
            for (int k = 0; k < 1 + static_cast<int>(rng() % 3); ++k) m.insert(rng() % 6);
            words.push_back({i, {m.begin(), m.end()}});
            sets.push_back(m);
        }
        std::vector<StateId> seq(rng() % 7);
        for (auto& s : seq) s = rng() % 6;
        REQUIRE(compatible(words, seq) == oracle::compatible(sets, seq));
    }
}

TEST_CASE("expressed plans equal the naive filter") {
    for (const auto& spec : {generate_ring(3), generate_grid_loop(2, 2)}) {
        Setup r(spec);
        std::mt19937 rng(3);
        for (const auto inst : all_instances(r.graph.size())) {
            const auto plans = enumerate_optimal_plans(plan_dag(r.graph, r.dist, inst));
            std::set<std::vector<int>> rhos;
            for (const auto& p : plans) {
                rhos.insert(block_path(r.abs, p));
                auto doubled = block_path(r.abs, p);  // repeated words are allowed too
                if (!doubled.empty()) doubled.insert(doubled.begin(), doubled.front());
                rhos.insert(doubled);
            }
            for (int k = 0; k < 5; ++k) {
                std::vector<int> rho(rng() % 4);
                for (auto& b : rho) b = static_cast<int>(rng() % r.abs.size());
                rhos.insert(rho);
            }
            for (const auto& rho : rhos) {
                std::vector<Plan> naive;
                for (const auto& p : plans) {
                    const bool e = expresses(r.abs, inst, rho, p);
                    REQUIRE(e == oracle::expresses(r.abs, rho, p));
                    if (e) naive.push_back(p);
                }
                REQUIRE(expressed_plans(r.abs, r.graph, r.dist, inst, rho) == naive);
            }
        }
    }
}

TEST_CASE("expresses") {
    Setup r(generate_ring(3));
    const Instance inst{0, 2};
    const auto plans = enumerate_optimal_plans(plan_dag(r.graph, r.dist, inst));
    for (const auto& p : plans) {
        const auto rho = block_path(r.abs, p);
        CHECK(expresses(r.abs, inst, rho, p));
        // expresses implies compatible with the intermediate states
        std::vector<Word> words;
        for (const int b : rho) words.push_back(r.lang.words[b]);
        const std::vector<StateId> mid(p.states.begin() + 1, p.states.end() - 1);
        CHECK(compatible(words, mid));
        CHECK_FALSE(expresses(r.abs, Instance{1, 2}, rho, p));
    }
    // One-step plans have no intermediate states.
    const auto edge = r.graph.edges(0).front();
    const Plan one{{0, edge.to}, {edge.action}};
    if (edge.to != 0) {
        CHECK(expresses(r.abs, {0, edge.to}, {}, one));
        const int b = 0;
        CHECK_FALSE(expresses(r.abs, {0, edge.to}, std::span<const int>(&b, 1), one));
    }
}

TEST_CASE("speak") {
    Setup r(generate_ring(3));
    const Instance inst{*parse_state(r.graph, "(1,2)"), *parse_state(r.graph, "(2,1)")};
    const auto s = speak(r.abs, r.lang, r.graph, r.dist, inst);
    REQUIRE(s.words.size() == 1);
    const auto canonical = canonical_plan(plan_dag(r.graph, r.dist, inst));
    CHECK(s.words[0] == r.abs.block_of[canonical.states[1]]);
    CHECK(s == speak(r.abs, r.lang, r.graph, r.dist, inst));

    const auto same = speak(r.abs, r.lang, r.graph, r.dist, {3, 3});
    CHECK(same.words.empty());
    const auto trivial = expressed_plans(r.abs, r.graph, r.dist, {3, 3}, {});
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].states == std::vector<StateId>{3});

    Setup t(generate_turn_and_open(2, 0));
    for (const auto i : select_instances(t.dist, InstanceScope::all())) {
        const auto words = speak(t.abs, t.lang, t.graph, t.dist, i).words;
        CHECK(words.size() <= 1);
    }
}

TEST_CASE("speak without a plan") {
    Setup t(generate_turn_and_open(2, 1));
    for (const auto i : all_instances(t.graph.size())) {
        if (t.dist.reachable(i.initial, i.goal)) continue;
        try {
            speak(t.abs, t.lang, t.graph, t.dist, i);
            FAIL("spoke for an unsolvable instance");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NoPlan);
        }
        break;
    }
}

TEST_CASE("sentences of a perfect abstraction leave a safe choice") {
    for (const auto& spec : {generate_ring(3), generate_grid_loop(2, 2), generate_turn_and_open(2, 1)}) {
        Setup r(spec);
        for (const auto inst : select_instances(r.dist, InstanceScope::all())) {
            const auto s = speak(r.abs, r.lang, r.graph, r.dist, inst);
            const auto plans = expressed_plans(r.abs, r.graph, r.dist, inst, s.words, SIZE_MAX);
            REQUIRE_FALSE(plans.empty());
            CHECK(std::find(plans.begin(), plans.end(), canonical_plan(plan_dag(r.graph, r.dist, inst))) != plans.end());
            const auto safe = safe_plans(r.graph, r.dist, inst, plans);
            REQUIRE_FALSE(safe.empty());
            for (const auto& p : safe)
                for (const auto& q : safe) CHECK_FALSE(pair_introduces_rc(r.graph, r.dist, inst, p, q));
        }
    }
}

TEST_CASE("expressed plan cap") {
    Setup r(generate_grid_loop(3, 3));
    const auto single = single_block_abstraction(r.graph);
    for (const auto inst : all_instances(r.graph.size())) {
        const auto dag = plan_dag(r.graph, r.dist, inst);
        if (count_plans(dag) < 3 || dag.length < 2) continue;
        const int b = 0;
        CHECK_THROWS_AS(expressed_plans(single, r.graph, r.dist, inst, std::span<const int>(&b, 1), 2), Error);
        break;
    }
}
