#include "doctest.h"
#include "oracles.hpp"

#include "coordlang/error.hpp"

using namespace coordlang;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("state counts of the benchmark configurations") {
    const int tao[] = {16, 64, 128, 192, 256};
    for (int balls = 0; balls < 5; ++balls)
        CHECK(build_state_graph(generate_turn_and_open(2, balls)).size() == static_cast<std::size_t>(tao[balls]));
    const std::pair<int, int> dims[] = {{2, 2}, {3, 3}, {3, 4}, {4, 4}, {4, 5}};
    const int gw[] = {12, 56, 90, 132, 182};
    for (int i = 0; i < 5; ++i)
        CHECK(build_state_graph(generate_grid_loop(dims[i].first, dims[i].second)).size() ==
              static_cast<std::size_t>(gw[i]));
    CHECK(build_state_graph(generate_ring(3)).size() == 6);
}

TEST_CASE("grid loop states are ordered pairs of distinct perimeter cells") {
    for (int w = 2; w <= 5; ++w) {
        for (int h = 2; h <= 5; ++h) {
            const int p = grid_loop_perimeter(w, h);
            CHECK(build_state_graph(generate_grid_loop(w, h)).size() == static_cast<std::size_t>(p * (p - 1)));
        }
    }
}

TEST_CASE("generator parameter errors") {
    CHECK(kind_of([] { generate_ring(2); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { generate_grid_loop(1, 4); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([] { generate_turn_and_open(3, 1); }) == ErrorKind::UnsupportedParameter);
    CHECK(kind_of([] { generate_turn_and_open(2, -1); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("ring(3) transitions") {
    const auto g = build_state_graph(generate_ring(3));
    std::size_t moves = 0, loops = 0;
    for (StateId s = 0; s < g.size(); ++s) {
        for (const auto& e : g.edges(s)) (e.to == s ? loops : moves)++;
    }
    CHECK(moves == 24);
    CHECK(loops == 6);
    CHECK(g.describe(0) == "(1,2)");
    CHECK(g.describe(5) == "(3,2)");
}

TEST_CASE("materialized edges agree with the domain rule") {
    for (const auto& spec : {generate_ring(4), generate_grid_loop(2, 3), generate_turn_and_open(2, 1)}) {
        const auto g = build_state_graph(spec);
        CHECK(oracle::transitions(g) == g.edge_count());
        for (StateId s = 0; s < g.size(); ++s) {
            for (int a = 0; a < static_cast<int>(spec.labels[0].size()); ++a) {
                for (int b = 0; b < static_cast<int>(spec.labels[1].size()); ++b) {
                    const auto next = spec.successor(g.assignment(s), {a, b});
                    const auto table = g.successor(s, {a, b});
                    REQUIRE(next.has_value() == table.has_value());
                    if (next) CHECK(g.assignment(*table) == *next);
                }
            }
            for (const auto& e : g.edges(s)) {
                const auto back = g.predecessors(e.to);
                CHECK(std::any_of(back.begin(), back.end(), [&](const Edge& p) { return p.to == s; }));
            }
        }
    }
}

TEST_CASE("no transition enters a state where an agent holds a ball and a door") {
    const auto g = build_state_graph(generate_turn_and_open(2, 2));
    // room_A, room_B, door_A, door_B, ball_A, ball_B, balls_room_0
    auto odd = [&](StateId s) {
        const auto& v = g.assignment(s);
        return (v[2] && v[4]) || (v[3] && v[5]);
    };
    std::size_t odd_states = 0;
    for (StateId s = 0; s < g.size(); ++s) {
        if (odd(s)) ++odd_states;
        if (odd(s)) continue;
        for (const auto& e : g.edges(s)) CHECK_FALSE(odd(e.to));
    }
    CHECK(odd_states > 0);
}

TEST_CASE("door and ball rules") {
    const auto spec = generate_turn_and_open(2, 1);
    // stay, cross, pickup, drop, grab, release
    const Assignment apart{0, 1, 0, 0, 0, 0, 1};
    CHECK_FALSE(spec.successor(apart, {1, 0}));  // nobody holds the door
    const Assignment held{0, 0, 0, 1, 0, 0, 1};
    CHECK(spec.successor(held, {1, 0}) == Assignment{1, 0, 0, 1, 0, 0, 1});
    CHECK_FALSE(spec.successor(held, {1, 5}));   // released while crossing
    CHECK(spec.successor(held, {0, 1}) == Assignment{0, 1, 0, 1, 0, 0, 1});  // the holder may cross
    CHECK_FALSE(spec.successor(held, {0, 2}));   // no pickup while holding a door
    CHECK_FALSE(spec.successor(held, {2, 2}));   // one ball, two hands
    CHECK(spec.successor(held, {2, 0}) == Assignment{0, 0, 0, 1, 1, 0, 0});
    const Assignment carrying{0, 0, 0, 0, 1, 0, 0};
    CHECK_FALSE(spec.successor(carrying, {4, 0}));  // no door while holding a ball
    CHECK(spec.successor(carrying, {3, 0}) == Assignment{0, 0, 0, 0, 0, 0, 1});
}

TEST_CASE("state lookup by id or description") {
    const auto g = build_state_graph(generate_ring(3));
    CHECK(parse_state(g, "4") == StateId{4});
    CHECK(parse_state(g, "(2,1)") == StateId{2});
    CHECK(parse_state(g, " 2 , 1 ") == StateId{2});
    CHECK_FALSE(parse_state(g, "(1,1)"));
    CHECK_FALSE(parse_state(g, "6"));
}

TEST_CASE("domain files round trip") {
    for (const auto& spec : {generate_ring(5), generate_grid_loop(3, 4), generate_turn_and_open(2, 3)}) {
        const auto back = parse_domain(format_domain(spec));
        CHECK(back == spec);
        CHECK(build_state_graph(back).size() == build_state_graph(spec).size());
    }
    const auto tao = parse_domain(R"({"generator": "turn_and_open", "params": {"balls": 2}})");
    CHECK(std::get<TurnAndOpenParams>(tao.source).rooms == 2);
}

TEST_CASE("explicit graphs") {
    const char* text = R"({
        "name": "corridor",
        "agents": {"A": ["wait", "go"], "B": ["wait", "go"]},
        "states": ["s0", "s1", "s2"],
        "actions": [
            {"a": "go", "b": "wait", "from": 0, "to": 1},
            {"a": "wait", "b": "go", "from": 1, "to": 2},
            {"a": "go", "b": "go", "from": 0, "to": 2}
        ]
    })";
    const auto spec = parse_domain(text);
    CHECK(spec.name == "corridor");
    const auto g = build_state_graph(spec);
    CHECK(g.size() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.describe(2) == "s2");
    CHECK(parse_domain(format_domain(spec)) == spec);

    const char* ambiguous = R"({
        "agents": {"A": ["x", "y"], "B": ["x"]},
        "states": ["a", "b"],
        "actions": [{"a": "x", "b": "x", "from": 0, "to": 1}, {"a": "y", "b": "x", "from": 0, "to": 1}]
    })";
    CHECK(kind_of([&] { build_state_graph(parse_domain(ambiguous)); }) == ErrorKind::AmbiguousActions);
}

TEST_CASE("domain parse errors") {
    CHECK(kind_of([] { parse_domain(R"({"generator": "ring", "params": {"n": 3}, "extra": 1})"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { parse_domain(R"({"generator": "maze", "params": {}})"); }) == ErrorKind::Parse);
    try {
        parse_domain("{\n  \"generator\": \"ring\",\n  \"params\": {\"n\": }\n}");
        FAIL("accepted broken JSON");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        parse_domain(R"({"agents": {"A": ["x"], "B": ["x"]}, "actions": []})");
        FAIL("accepted a graph without states");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("states") != std::string::npos);
    }
}
