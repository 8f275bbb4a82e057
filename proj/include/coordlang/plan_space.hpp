#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "coordlang/domain.hpp"

namespace coordlang {

inline constexpr std::size_t kDefaultPlanCap = 10000;

/// Dense |S| x |S| table of optimal (unit-cost) plan lengths.
class DistanceTable {
public:
    static constexpr int kUnreachable = -1;

    DistanceTable() = default;
    explicit DistanceTable(std::size_t n) : n_(n), dist_(n * n, kUnreachable) {}

    std::size_t size() const noexcept { return n_; }
    int operator()(StateId from, StateId to) const noexcept { return dist_[from * n_ + to]; }
    bool reachable(StateId from, StateId to) const noexcept { return (*this)(from, to) != kUnreachable; }
    std::span<const int> row(StateId from) const { return {dist_.data() + from * n_, n_}; }
    std::span<int> row(StateId from) { return {dist_.data() + from * n_, n_}; }

    bool operator==(const DistanceTable&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<int> dist_;
};

/// Breadth-first search from every source.
DistanceTable all_pairs_distances(const StateGraph& graph);

/// One optimal plan: L + 1 states and the L joint actions between them.
struct Plan {
    std::vector<StateId> states;
    std::vector<JointAction> actions;

    std::size_t length() const noexcept { return actions.size(); }

    bool operator==(const Plan& other) const { return states == other.states; }
    std::strong_ordering operator<=>(const Plan& other) const { return states <=> other.states; }
};

/// The optimal-plan set of one instance in factored form: every node lies on
/// some optimal plan and `out` keeps only transitions that stay optimal.
struct PlanDag {
    Instance instance;
    int length = 0;
    std::vector<StateId> nodes;           // sorted by (layer, id)
    std::vector<int> layer;               // parallel to nodes
    std::vector<std::vector<Edge>> out;   // parallel to nodes, sorted by successor id
    std::unordered_map<StateId, std::uint32_t> index;

    bool contains(StateId s) const { return index.contains(s); }
    std::span<const Edge> successors(StateId s) const { return out[index.at(s)]; }
};

/// Throws NoPlan if the goal is unreachable.
PlanDag plan_dag(const StateGraph& graph, const DistanceTable& dist, Instance inst);

/// Number of optimal plans, saturating at UINT64_MAX.
std::uint64_t count_plans(const PlanDag& dag);

/// All optimal plans in lexicographic order of their state sequences.
/// Throws PlanSetTooLarge (before enumerating) when there are more than `cap`.
std::vector<Plan> enumerate_optimal_plans(const PlanDag& dag, std::size_t cap = kDefaultPlanCap);

/// The lexicographically smallest optimal plan.
Plan canonical_plan(const PlanDag& dag);

/// Membership in Prefix(Pi) decided from distances alone.
bool is_optimal_prefix(const StateGraph& graph, const DistanceTable& dist, Instance inst,
                       std::span<const StateId> seq);

/// Every ordered pair (s, t) with s != t, in (s, t) order.
std::vector<Instance> all_instances(std::size_t states);

/// Which instances a sweep visits: all ordered pairs, or a seeded sample of
/// `sample` of them (kept in (s, t) order).
struct InstanceScope {
    bool exhaustive = true;
    std::size_t sample = 0;
    std::uint64_t seed = 0;

    static InstanceScope all() { return {}; }
    static InstanceScope sampled(std::size_t k, std::uint64_t seed) { return {false, k, seed}; }
};

std::vector<Instance> select_instances(std::size_t states, const InstanceScope& scope);

/// As above, restricted to solvable instances before sampling.
std::vector<Instance> select_instances(const DistanceTable& dist, const InstanceScope& scope);

}  // namespace coordlang
