#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coordlang/rc_analysis.hpp"

namespace coordlang {

/// Undirected graph over all states whose edges are the theta conflict pairs.
struct ConflictGraph {
    std::size_t vertices = 0;
    std::vector<StatePair> edges;                 // sorted, unique, first < second
    std::vector<std::vector<StateId>> adjacency;  // sorted neighbour lists
};

ConflictGraph conflict_graph(const RcGraph& rc);
ConflictGraph make_conflict_graph(std::size_t vertices, std::vector<StatePair> edges);

enum class ColorOrder { Saturation, Degree, Index };

const char* to_string(ColorOrder order) noexcept;
std::optional<ColorOrder> parse_color_order(const std::string& text);

/// Color per state id.
using Coloring = std::vector<int>;

/// First-fit greedy coloring. Saturation is DSATUR (saturation, then degree);
/// Degree visits vertices by decreasing degree; Index by id. Remaining ties go
/// to the smallest state id.
Coloring greedy_color(const ConflictGraph& cg, ColorOrder order = ColorOrder::Saturation);

int color_count(const Coloring& coloring);
bool is_proper(const ConflictGraph& cg, const Coloring& coloring);
std::size_t max_degree(const ConflictGraph& cg);

/// Size of a clique found greedily; a lower bound on the chromatic number.
std::size_t greedy_clique_bound(const ConflictGraph& cg);

/// Partition of the states into abstract states with internal and crossing
/// edges. Blocks are numbered in increasing order of their color.
struct Abstraction {
    std::vector<std::vector<StateId>> blocks;
    std::vector<int> block_of;                               // state -> block
    std::vector<std::vector<std::pair<StateId, StateId>>> local_edges;  // per block, s != t
    std::vector<std::pair<int, int>> abstract_edges;        // sorted, unique, b != b'

    std::size_t size() const noexcept { return blocks.size(); }
    bool operator==(const Abstraction&) const = default;
};

Abstraction build_abstraction(const StateGraph& graph, const Coloring& coloring);

/// As above, but first checks the separation condition against `cg` and
/// throws SeparationViolation if some conflict pair shares a color.
Abstraction build_abstraction(const StateGraph& graph, const Coloring& coloring, const ConflictGraph& cg);

/// Every state its own block.
Abstraction singleton_abstraction(const StateGraph& graph);
/// All states in one block.
Abstraction single_block_abstraction(const StateGraph& graph);

/// Run-length-encoded block sequence of a plan's intermediate states
/// (everything strictly between s_I and s_G).
std::vector<int> block_path(const Abstraction& abs, const Plan& plan);

struct PerfectionViolation {
    Instance instance;
    std::vector<int> path;
    Plan first;
    Plan second;
};

struct PerfectionReport {
    std::size_t instances = 0;
    std::size_t paths = 0;
    std::size_t pairs = 0;
    std::vector<PerfectionViolation> violations;  // one per (instance, path) whose plan set has RC

    bool perfect() const noexcept { return violations.empty(); }
};

/// For every instance in scope, groups the optimal plans by the block path
/// that expresses them and requires each group to be free of required
/// coordination: some member must survive mixing with every other member.
PerfectionReport verify_perfect(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist,
                                std::size_t cap, const InstanceScope& scope);

/// Coloring plus the conflict pairs that verification had to add on top of
/// theta before the abstraction came out perfect on `scope`.
struct Refinement {
    ConflictGraph conflicts;
    Coloring coloring;
    Abstraction abstraction;
    std::vector<StatePair> added;
    int rounds = 0;
    PerfectionReport report;  // of the final round
};

/// Colors `cg`, verifies on `scope`, and for every violating group separates
/// the first diverging states of its witness pair; repeats until perfect.
/// Terminates because each round adds at least one new conflict pair.
Refinement refine_until_perfect(const StateGraph& graph, const DistanceTable& dist, ConflictGraph cg,
                                ColorOrder order, std::size_t cap, const InstanceScope& scope);

/// Upper bound on the number of states of a plan segment inside one block.
int epsilon(const Abstraction& abs);

struct PathBoundWitness {
    int shortest_valid_path = 0;    // |rho*|: fewest runs over any plan, optimal or not
    int shortest_optimal_path = 0;  // fewest runs over optimal plans
    int epsilon = 0;
    bool holds = false;
};

PathBoundWitness path_bound_witness(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist,
                                 Instance inst);

/// Some block path of length <= |rho*| * epsilon expresses an optimal plan.
bool theorem6_check(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist, Instance inst);

}  // namespace coordlang
