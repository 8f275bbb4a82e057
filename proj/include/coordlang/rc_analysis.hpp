#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coordlang/plan_space.hpp"

namespace coordlang {

enum class FailureKind { InvalidJointAction, OffOptimalPrefix };

const char* to_string(FailureKind kind) noexcept;

/// What actually happens when agent A follows one plan and agent B another.
struct MixedOutcome {
    std::vector<StateId> states;  // realized prefix, starting at s_I
    std::optional<int> failure_step;  // 1-based index of the first failing action
    std::optional<FailureKind> failure_kind;

    bool success() const noexcept { return !failure_step.has_value(); }
};

/// Step-synchronized mix: at step t the joint action is (a_plan's A label,
/// b_plan's B label) applied to the current mixed state.
MixedOutcome mix(const StateGraph& graph, const DistanceTable& dist, Instance inst, const Plan& a_plan,
                 const Plan& b_plan);

/// Both orientations of the mix are tried.
bool pair_introduces_rc(const StateGraph& graph, const DistanceTable& dist, Instance inst, const Plan& first,
                        const Plan& second);

/// Plans that survive mixing with every other plan of the set.
std::vector<Plan> safe_plans(const StateGraph& graph, const DistanceTable& dist, Instance inst,
                             const std::vector<Plan>& plans);

/// Required coordination decided by enumerating the optimal-plan set.
bool rc_present(const StateGraph& graph, const DistanceTable& dist, Instance inst,
                std::size_t cap = kDefaultPlanCap);

/// Unordered state pair, normalized so first < second.
using StatePair = std::pair<StateId, StateId>;

inline StatePair make_pair_sorted(StateId a, StateId b) { return a < b ? StatePair{a, b} : StatePair{b, a}; }

/// Which two states of an RC-introducing plan pair are recorded in theta.
enum class ConflictRule {
    /// States of the two plans at the step where the mixed execution fails
    /// (skipped when the plans coincide there).
    FailureStep,
    /// States at the first index where the two plans' state sequences differ.
    FirstDivergence,
};

const char* to_string(ConflictRule rule) noexcept;
std::optional<ConflictRule> parse_conflict_rule(const std::string& text);

struct ThetaEntry {
    int cost = 0;
    std::vector<StatePair> conflicts;  // sorted, unique

    bool operator==(const ThetaEntry&) const = default;
};

using OrderedPair = std::pair<StateId, StateId>;

/// (S, E, Theta): every reachable ordered pair s != t is either an edge
/// (no RC, keyed with its optimal cost) or a theta key.
struct RcGraph {
    std::size_t states = 0;
    std::map<OrderedPair, int> edges;
    std::map<OrderedPair, ThetaEntry> theta;

    bool connected(StateId s, StateId t) const { return edges.contains({s, t}); }
    const ThetaEntry* theta_at(StateId s, StateId t) const {
        auto it = theta.find({s, t});
        return it == theta.end() ? nullptr : &it->second;
    }

    bool operator==(const RcGraph&) const = default;
};

struct RcBuildOptions {
    /// Largest optimal-plan set accepted per pair; 0 disables the check.
    std::size_t cap = kDefaultPlanCap;
    ConflictRule rule = ConflictRule::FailureStep;
};

/// Answers RC questions for one goal state without enumerating plans: the
/// optimal-plan set of (s, t) is walked as a DAG and mixed executions are
/// tracked as (A-plan state, B-plan state, mixed state) triples.
class GoalAnalyzer {
public:
    GoalAnalyzer(const StateGraph& graph, const DistanceTable& dist, StateId goal);

    /// True when some optimal plan from `start` survives mixing with every
    /// other optimal plan (no required coordination, or fewer than two plans exist).
    bool has_safe_plan(StateId start) const;
    bool rc_present(StateId start) const;

    /// Conflict pairs recorded for (start, goal) over every RC-introducing
    /// plan pair, whether or not RC is present for the instance.
    std::vector<StatePair> conflict_pairs(StateId start, ConflictRule rule) const;

private:
    const StateGraph& graph_;
    const DistanceTable& dist_;
    StateId goal_;
    std::vector<std::vector<Edge>> toward_;  // optimal next steps to goal_

    bool steps_ok(StateId x, JointAction action, StateId& next) const;
};

RcGraph build_rc_graph(const StateGraph& graph, const DistanceTable& dist, const RcBuildOptions& options = {});

}  // namespace coordlang
