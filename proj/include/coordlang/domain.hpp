#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace coordlang {

using StateId = std::uint32_t;
using Assignment = std::vector<int>;

inline constexpr int kAgentA = 0;
inline constexpr int kAgentB = 1;

/// A pair of per-agent action labels, stored as indices into the agents'
/// label catalogs.
struct JointAction {
    int a = 0;
    int b = 0;

    auto operator<=>(const JointAction&) const = default;
};

struct Variable {
    std::string name;
    int cardinality = 0;

    bool operator==(const Variable&) const = default;
};

struct RingParams {
    int n = 3;
    bool operator==(const RingParams&) const = default;
};

struct GridLoopParams {
    int w = 2;
    int h = 2;
    bool operator==(const GridLoopParams&) const = default;
};

struct TurnAndOpenParams {
    int rooms = 2;
    int balls = 0;
    bool operator==(const TurnAndOpenParams&) const = default;
};

struct ExplicitAction {
    std::string a;
    std::string b;
    StateId from = 0;
    StateId to = 0;
    bool operator==(const ExplicitAction&) const = default;
};

/// Hand-written state graph: named states plus labelled transitions.
struct ExplicitGraph {
    std::array<std::vector<std::string>, 2> agents;
    std::vector<std::string> states;
    std::vector<ExplicitAction> actions;
    bool operator==(const ExplicitGraph&) const = default;
};

using DomainSource = std::variant<RingParams, GridLoopParams, TurnAndOpenParams, ExplicitGraph>;

/// Factored two-agent model. The dynamics are carried as callables so the
/// generators and explicit graphs share one representation; equality looks
/// only at the declarative parts (the callables are a pure function of them).
struct DomainSpec {
    std::string name;
    std::vector<std::string> static_facts;
    std::vector<Variable> variables;
    std::array<std::vector<std::string>, 2> labels;
    DomainSource source;

    /// Filters full assignments that do not denote a state.
    std::function<bool(const Assignment&)> admissible;
    /// Joint validity and effect: nullopt when the label pair is not a valid
    /// joint action at the given state.
    std::function<std::optional<Assignment>(const Assignment&, JointAction)> successor;
    std::function<std::string(const Assignment&)> describe;

    bool operator==(const DomainSpec& other) const;
};

DomainSpec generate_ring(int n);
DomainSpec generate_grid_loop(int w, int h);
DomainSpec generate_turn_and_open(int rooms, int balls);
DomainSpec domain_from_explicit(ExplicitGraph graph, std::string name = "explicit");
DomainSpec make_domain(const DomainSource& source);

/// Number of perimeter cells of a w x h grid with a blocked interior.
int grid_loop_perimeter(int w, int h);

struct Edge {
    JointAction action;
    StateId to = 0;
};

struct Instance {
    StateId initial = 0;
    StateId goal = 0;

    auto operator<=>(const Instance&) const = default;
};

/// Explicit joint state graph D = (S_o, E_o). Immutable once built.
class StateGraph {
public:
    StateGraph() = default;

    std::size_t size() const noexcept { return states_.size(); }
    const DomainSpec& domain() const noexcept { return domain_; }

    const Assignment& assignment(StateId s) const { return states_.at(s); }
    std::span<const Edge> edges(StateId s) const { return edges_.at(s); }
    std::span<const Edge> predecessors(StateId s) const { return reverse_.at(s); }

    /// Successor of `s` under `action`, or nullopt if the pair is invalid there.
    std::optional<StateId> successor(StateId s, JointAction action) const;
    std::optional<StateId> find(const Assignment& assignment) const;

    std::string describe(StateId s) const;
    const std::string& label(int agent, int index) const { return domain_.labels.at(agent).at(index); }
    std::size_t edge_count() const noexcept;

private:
    friend StateGraph build_state_graph(const DomainSpec& spec);

    DomainSpec domain_;
    std::vector<Assignment> states_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<std::vector<Edge>> reverse_;
    std::vector<std::int32_t> table_;  // state * |A| * |B| -> successor or -1
    std::map<Assignment, StateId> index_;
    int labels_b_ = 0;
    int labels_ab_ = 0;
};

/// Enumerates every admissible full state in lexicographic assignment order
/// and materializes all valid joint actions. Throws AmbiguousActions when two
/// distinct joint actions at one state lead to the same successor.
StateGraph build_state_graph(const DomainSpec& spec);

/// Parses a state either by dense id ("4") or by its description, ignoring
/// parentheses and whitespace ("(1,2)" == "1,2").
std::optional<StateId> parse_state(const StateGraph& graph, const std::string& text);

DomainSpec parse_domain(const std::string& text);
std::string format_domain(const DomainSpec& spec);
DomainSpec load_domain(const std::filesystem::path& path);
void save_domain(const DomainSpec& spec, const std::filesystem::path& path);

}  // namespace coordlang
