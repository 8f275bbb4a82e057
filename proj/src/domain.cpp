#include "coordlang/domain.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "coordlang/error.hpp"
#include "json.hpp"

namespace coordlang {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::UnsupportedParameter: return "unsupported-parameter";
        case ErrorKind::AmbiguousActions: return "ambiguous-actions";
        case ErrorKind::Parse: return "parse-error";
        case ErrorKind::NoPlan: return "no-plan";
        case ErrorKind::PlanSetTooLarge: return "plan-set-too-large";
        case ErrorKind::SeparationViolation: return "separation-violation";
    }
    return "unknown";
}

bool DomainSpec::operator==(const DomainSpec& other) const {
    return name == other.name && static_facts == other.static_facts &&
           variables == other.variables && labels == other.labels && source == other.source;
}

namespace {

const std::vector<std::string> kMoveLabels = {"stay", "move-cw", "move-ccw"};

/// Cyclic corridor of `cells` positions shared by the ring and grid-loop
/// domains: stay or step to a neighbouring cell, no shared cell, no swap.
void install_cycle_dynamics(DomainSpec& spec, int cells) {
    spec.variables = {{"pos_A", cells}, {"pos_B", cells}};
    spec.labels = {kMoveLabels, kMoveLabels};
    spec.admissible = [](const Assignment& s) { return s[0] != s[1]; };
    spec.successor = [cells](const Assignment& s, JointAction act) -> std::optional<Assignment> {
        auto move = [cells](int pos, int label) {
            switch (label) {
                case 1: return (pos + 1) % cells;
                case 2: return (pos + cells - 1) % cells;
                default: return pos;
            }
        };
        const int a = move(s[0], act.a);
        const int b = move(s[1], act.b);
        if (a == b) return std::nullopt;
        if (a == s[1] && b == s[0]) return std::nullopt;
        return Assignment{a, b};
    };
    spec.describe = [](const Assignment& s) {
        return "(" + std::to_string(s[0] + 1) + "," + std::to_string(s[1] + 1) + ")";
    };
}

// Turn-and-Open variable layout.
enum TaoVar { kRoomA, kRoomB, kDoorA, kDoorB, kBallA, kBallB, kBallsRoom0, kTaoVars };
enum TaoLabel { kStay, kCross, kPickup, kDrop, kGrab, kRelease };

}  // namespace

int grid_loop_perimeter(int w, int h) { return 2 * (w + h) - 4; }

DomainSpec generate_ring(int n) {
    if (n < 3) throw Error(ErrorKind::InvalidParameter, "ring needs n >= 3, got " + std::to_string(n));
    DomainSpec spec;
    spec.name = "ring_" + std::to_string(n);
    spec.source = RingParams{n};
    for (int i = 0; i < n; ++i) spec.static_facts.push_back("room(" + std::to_string(i + 1) + ")");
    for (int i = 0; i < n; ++i)
        spec.static_facts.push_back("adjacent(" + std::to_string(i + 1) + "," + std::to_string((i + 1) % n + 1) + ")");
    install_cycle_dynamics(spec, n);
    return spec;
}

DomainSpec generate_grid_loop(int w, int h) {
    if (w < 2 || h < 2)
        throw Error(ErrorKind::InvalidParameter,
                    "grid_loop needs w >= 2 and h >= 2, got " + std::to_string(w) + "x" + std::to_string(h));
    DomainSpec spec;
    spec.name = "grid_loop_" + std::to_string(w) + "x" + std::to_string(h);
    spec.source = GridLoopParams{w, h};

    // Perimeter walked counter-clockwise from the origin.
    std::vector<std::pair<int, int>> cells;
    for (int x = 0; x < w; ++x) cells.emplace_back(x, 0);
    for (int y = 1; y < h; ++y) cells.emplace_back(w - 1, y);
    for (int x = w - 2; x >= 0; --x) cells.emplace_back(x, h - 1);
    for (int y = h - 2; y >= 1; --y) cells.emplace_back(0, y);
    const int p = static_cast<int>(cells.size());
    for (int i = 0; i < p; ++i) {
        spec.static_facts.push_back("cell(" + std::to_string(i + 1) + "," + std::to_string(cells[i].first) + "," +
                                    std::to_string(cells[i].second) + ")");
    }
    for (int i = 0; i < p; ++i)
        spec.static_facts.push_back("adjacent(" + std::to_string(i + 1) + "," + std::to_string((i + 1) % p + 1) + ")");
    install_cycle_dynamics(spec, p);
    return spec;
}

DomainSpec generate_turn_and_open(int rooms, int balls) {
    if (rooms != 2)
        throw Error(ErrorKind::UnsupportedParameter, "turn_and_open supports rooms = 2 only, got " + std::to_string(rooms));
    if (balls < 0) throw Error(ErrorKind::InvalidParameter, "turn_and_open needs balls >= 0");

    DomainSpec spec;
    spec.name = "turn_and_open_" + std::to_string(rooms) + "r" + std::to_string(balls) + "b";
    spec.source = TurnAndOpenParams{rooms, balls};
    spec.static_facts = {"room(0)", "room(1)", "door(d0,0,1)", "balls(" + std::to_string(balls) + ")"};
    spec.variables = {{"room_A", 2},         {"room_B", 2}, {"holds_door_A", 2}, {"holds_door_B", 2},
                      {"holds_ball_A", 2},   {"holds_ball_B", 2}, {"balls_room_0", balls + 1}};
    const std::vector<std::string> labels = {"stay", "cross(d0)", "pickup", "drop", "grab-door(d0)", "release-door(d0)"};
    spec.labels = {labels, labels};

    spec.admissible = [balls](const Assignment& s) { return s[kBallA] + s[kBallB] + s[kBallsRoom0] <= balls; };
    spec.successor = [balls](const Assignment& s, JointAction act) -> std::optional<Assignment> {
        const std::array<int, 2> label = {act.a, act.b};
        int in_room[2] = {s[kBallsRoom0], balls - s[kBallA] - s[kBallB] - s[kBallsRoom0]};
        Assignment next = s;
        for (int agent = 0; agent < 2; ++agent) {
            const int other = 1 - agent;
            const int room = s[kRoomA + agent];
            const bool door = s[kDoorA + agent] != 0;
            const bool ball = s[kBallA + agent] != 0;
            switch (label[agent]) {
                case kStay: break;
                case kCross: {
                    // The door must be held open at the start of the step and
                    // stay held through it.
                    const bool other_holds = s[kDoorA + other] != 0 && label[other] != kRelease;
                    const bool self_holds = door;
                    if (!other_holds && !self_holds) return std::nullopt;
                    next[kRoomA + agent] = 1 - room;
                    break;
                }
                case kPickup:
                    if (ball || door) return std::nullopt;
                    next[kBallA + agent] = 1;
                    --in_room[room];
                    break;
                case kDrop:
                    if (!ball) return std::nullopt;
                    next[kBallA + agent] = 0;
                    ++in_room[room];
                    break;
                case kGrab:
                    if (door || ball) return std::nullopt;
                    next[kDoorA + agent] = 1;
                    break;
                case kRelease:
                    if (!door) return std::nullopt;
                    next[kDoorA + agent] = 0;
                    break;
                default: return std::nullopt;
            }
        }
        // Pickups draw from the balls present at the start of the step.
        for (int room = 0; room < 2; ++room) {
            int taken = 0;
            for (int agent = 0; agent < 2; ++agent)
                if (label[agent] == kPickup && s[kRoomA + agent] == room) ++taken;
            const int present = room == 0 ? s[kBallsRoom0] : balls - s[kBallA] - s[kBallB] - s[kBallsRoom0];
            if (taken > present) return std::nullopt;
        }
        next[kBallsRoom0] = in_room[0];
        return next;
    };
    spec.describe = [balls](const Assignment& s) {
        auto agent = [&](char name, int i) {
            std::string out(1, name);
            out += ":r" + std::to_string(s[kRoomA + i]);
            if (s[kDoorA + i]) out += "+door";
            if (s[kBallA + i]) out += "+ball";
            return out;
        };
        const int room1 = balls - s[kBallA] - s[kBallB] - s[kBallsRoom0];
        return agent('A', 0) + " " + agent('B', 1) + " balls:" + std::to_string(s[kBallsRoom0]) + "/" +
               std::to_string(room1);
    };
    return spec;
}

DomainSpec domain_from_explicit(ExplicitGraph graph, std::string name) {
    for (int agent = 0; agent < 2; ++agent) {
        const auto& catalog = graph.agents[agent];
        if (catalog.empty())
            throw Error(ErrorKind::Parse, std::string("agent ") + (agent == 0 ? "A" : "B") + " has an empty catalog");
        std::set<std::string> unique(catalog.begin(), catalog.end());
        if (unique.size() != catalog.size())
            throw Error(ErrorKind::Parse, std::string("agent ") + (agent == 0 ? "A" : "B") + " repeats an action label");
    }
    if (graph.states.empty()) throw Error(ErrorKind::Parse, "explicit graph has no states");

    auto index_of = [&](int agent, const std::string& label, std::size_t i) {
        const auto& catalog = graph.agents[agent];
        auto it = std::find(catalog.begin(), catalog.end(), label);
        if (it == catalog.end())
            throw Error(ErrorKind::Parse, "actions[" + std::to_string(i) + "]: label '" + label + "' not in agent " +
                                              (agent == 0 ? "A" : "B") + " catalog");
        return static_cast<int>(it - catalog.begin());
    };

    // (state, a, b) -> successor
    auto table = std::make_shared<std::map<std::tuple<int, int, int>, int>>();
    for (std::size_t i = 0; i < graph.actions.size(); ++i) {
        const auto& act = graph.actions[i];
        if (act.from >= graph.states.size() || act.to >= graph.states.size())
            throw Error(ErrorKind::Parse, "actions[" + std::to_string(i) + "]: state id out of range");
        const auto key = std::make_tuple(static_cast<int>(act.from), index_of(0, act.a, i), index_of(1, act.b, i));
        auto [it, inserted] = table->emplace(key, static_cast<int>(act.to));
        if (!inserted && it->second != static_cast<int>(act.to))
            throw Error(ErrorKind::Parse, "actions[" + std::to_string(i) + "]: nondeterministic joint action");
    }

    DomainSpec spec;
    spec.name = std::move(name);
    spec.variables = {{"state", static_cast<int>(graph.states.size())}};
    spec.labels = graph.agents;
    auto names = std::make_shared<std::vector<std::string>>(graph.states);
    spec.admissible = [](const Assignment&) { return true; };
    spec.successor = [table](const Assignment& s, JointAction act) -> std::optional<Assignment> {
        auto it = table->find({s[0], act.a, act.b});
        if (it == table->end()) return std::nullopt;
        return Assignment{it->second};
    };
    spec.describe = [names](const Assignment& s) { return (*names)[s[0]]; };
    spec.source = std::move(graph);
    return spec;
}

DomainSpec make_domain(const DomainSource& source) {
    return std::visit(
        [](const auto& p) -> DomainSpec {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RingParams>) return generate_ring(p.n);
            else if constexpr (std::is_same_v<T, GridLoopParams>) return generate_grid_loop(p.w, p.h);
            else if constexpr (std::is_same_v<T, TurnAndOpenParams>) return generate_turn_and_open(p.rooms, p.balls);
            else return domain_from_explicit(p);
        },
        source);
}

std::optional<StateId> StateGraph::successor(StateId s, JointAction action) const {
    if (action.a < 0 || action.b < 0 || action.b >= labels_b_ || action.a * labels_b_ + action.b >= labels_ab_)
        return std::nullopt;
    const auto v = table_[static_cast<std::size_t>(s) * labels_ab_ + action.a * labels_b_ + action.b];
    if (v < 0) return std::nullopt;
    return static_cast<StateId>(v);
}

std::optional<StateId> StateGraph::find(const Assignment& assignment) const {
    auto it = index_.find(assignment);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string StateGraph::describe(StateId s) const { return domain_.describe(states_.at(s)); }

std::size_t StateGraph::edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& e : edges_) n += e.size();
    return n;
}

StateGraph build_state_graph(const DomainSpec& spec) {
    StateGraph g;
    g.domain_ = spec;
    const int na = static_cast<int>(spec.labels[0].size());
    const int nb = static_cast<int>(spec.labels[1].size());
    g.labels_b_ = nb;
    g.labels_ab_ = na * nb;

    Assignment cursor(spec.variables.size(), 0);
    for (const auto& v : spec.variables)
        if (v.cardinality <= 0) throw Error(ErrorKind::InvalidParameter, "variable '" + v.name + "' has empty range");
    while (true) {
        if (spec.admissible(cursor)) {
            g.index_.emplace(cursor, static_cast<StateId>(g.states_.size()));
            g.states_.push_back(cursor);
        }
        int i = static_cast<int>(cursor.size()) - 1;
        while (i >= 0 && ++cursor[i] == spec.variables[i].cardinality) cursor[i--] = 0;
        if (i < 0) break;
    }

    const std::size_t n = g.states_.size();
    g.edges_.resize(n);
    g.reverse_.resize(n);
    g.table_.assign(n * g.labels_ab_, -1);
    for (StateId s = 0; s < n; ++s) {
        std::map<StateId, JointAction> seen;
        for (int a = 0; a < na; ++a) {
            for (int b = 0; b < nb; ++b) {
                auto next = spec.successor(g.states_[s], {a, b});
                if (!next) continue;
                auto it = g.index_.find(*next);
                if (it == g.index_.end())
                    throw Error(ErrorKind::InvalidParameter, "action leads outside the state space from " + g.describe(s));
                const StateId t = it->second;
                auto [prev, inserted] = seen.emplace(t, JointAction{a, b});
                if (!inserted) {
                    throw Error(ErrorKind::AmbiguousActions,
                                "state " + g.describe(s) + ": joint actions (" + spec.labels[0][prev->second.a] + "," +
                                    spec.labels[1][prev->second.b] + ") and (" + spec.labels[0][a] + "," +
                                    spec.labels[1][b] + ") both lead to " + g.describe(t));
                }
                g.table_[s * g.labels_ab_ + a * nb + b] = static_cast<std::int32_t>(t);
            }
        }
        for (const auto& [t, act] : seen) {
            g.edges_[s].push_back({act, t});
            g.reverse_[t].push_back({act, s});
        }
    }
    return g;
}

std::optional<StateId> parse_state(const StateGraph& graph, const std::string& text) {
    auto normalize = [](const std::string& in) {
        std::string out;
        for (char c : in)
            if (c != '(' && c != ')' && c != ' ' && c != '\t') out += c;
        return out;
    };
    const std::string key = normalize(text);
    if (!key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        const auto id = std::stoull(key);
        if (id < graph.size()) return static_cast<StateId>(id);
        return std::nullopt;
    }
    for (StateId s = 0; s < graph.size(); ++s)
        if (normalize(graph.describe(s)) == key) return s;
    return std::nullopt;
}

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }))
            throw Error(ErrorKind::Parse, where + ": unknown field '" + key + "'");
    }
}

const json& field(const json& j, const std::string& where, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::Parse, where + ": missing field '" + key + "'");
    return *it;
}

int int_field(const json& j, const std::string& where, const char* key) {
    const auto& v = field(j, where, key);
    if (!v.is_number_integer()) throw Error(ErrorKind::Parse, where + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string string_value(const json& v, const std::string& where) {
    if (!v.is_string()) throw Error(ErrorKind::Parse, where + ": expected a string");
    return v.get<std::string>();
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw Error(ErrorKind::Parse, where + ": expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(string_value(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

DomainSpec domain_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "domain: expected an object");
    if (j.contains("generator")) {
        require_keys(j, "domain", {"generator", "params"});
        const auto gen = string_value(j["generator"], "generator");
        const auto& params = field(j, "domain", "params");
        if (gen == "ring") {
            require_keys(params, "params", {"n"});
            return generate_ring(int_field(params, "params", "n"));
        }
        if (gen == "grid_loop") {
            require_keys(params, "params", {"w", "h"});
            return generate_grid_loop(int_field(params, "params", "w"), int_field(params, "params", "h"));
        }
        if (gen == "turn_and_open") {
            require_keys(params, "params", {"rooms", "balls"});
            const int rooms = params.contains("rooms") ? int_field(params, "params", "rooms") : 2;
            return generate_turn_and_open(rooms, int_field(params, "params", "balls"));
        }
        throw Error(ErrorKind::Parse, "generator: unknown generator '" + gen + "'");
    }

    require_keys(j, "domain", {"name", "agents", "states", "actions"});
    ExplicitGraph graph;
    const auto& agents = field(j, "domain", "agents");
    require_keys(agents, "agents", {"A", "B"});
    graph.agents[0] = string_list(field(agents, "agents", "A"), "agents.A");
    graph.agents[1] = string_list(field(agents, "agents", "B"), "agents.B");
    graph.states = string_list(field(j, "domain", "states"), "states");
    const auto& actions = field(j, "domain", "actions");
    if (!actions.is_array()) throw Error(ErrorKind::Parse, "actions: expected an array");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const std::string where = "actions[" + std::to_string(i) + "]";
        require_keys(actions[i], where, {"a", "b", "from", "to"});
        ExplicitAction act;
        act.a = string_value(field(actions[i], where, "a"), where + ".a");
        act.b = string_value(field(actions[i], where, "b"), where + ".b");
        const int from = int_field(actions[i], where, "from");
        const int to = int_field(actions[i], where, "to");
        if (from < 0 || to < 0) throw Error(ErrorKind::Parse, where + ": negative state id");
        act.from = static_cast<StateId>(from);
        act.to = static_cast<StateId>(to);
        graph.actions.push_back(std::move(act));
    }
    const std::string name = j.contains("name") ? string_value(j["name"], "name") : "explicit";
    return domain_from_explicit(std::move(graph), name);
}

json domain_to_json(const DomainSpec& spec) {
    return std::visit(
        [&](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RingParams>) {
                return {{"generator", "ring"}, {"params", {{"n", p.n}}}};
            } else if constexpr (std::is_same_v<T, GridLoopParams>) {
                return {{"generator", "grid_loop"}, {"params", {{"w", p.w}, {"h", p.h}}}};
            } else if constexpr (std::is_same_v<T, TurnAndOpenParams>) {
                return {{"generator", "turn_and_open"}, {"params", {{"rooms", p.rooms}, {"balls", p.balls}}}};
            } else {
                json actions = json::array();
                for (const auto& a : p.actions) actions.push_back({{"a", a.a}, {"b", a.b}, {"from", a.from}, {"to", a.to}});
                return {{"name", spec.name},
                        {"agents", {{"A", p.agents[0]}, {"B", p.agents[1]}}},
                        {"states", p.states},
                        {"actions", actions}};
            }
        },
        spec.source);
}

}  // namespace

DomainSpec parse_domain(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line number for the diagnostic.
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + e.what());
    }
    return domain_from_json(j);
}

std::string format_domain(const DomainSpec& spec) { return domain_to_json(spec).dump(2) + "\n"; }

DomainSpec load_domain(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_domain(buffer.str());
}

void save_domain(const DomainSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Parse, "cannot write " + path.string());
    out << format_domain(spec);
}

}  // namespace coordlang
