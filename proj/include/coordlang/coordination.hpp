#pragma once

#include <iosfwd>
#include <vector>

#include "coordlang/language.hpp"

namespace coordlang {

enum class Outcome { Success, Collision, OffOptimal, WrongFinalState };

const char* to_string(Outcome outcome) noexcept;

struct ExecutionReport {
    Instance instance;
    Plan first;   // followed by agent A
    Plan second;  // followed by agent B
    Outcome outcome = Outcome::Success;
    int step = 0;  // 1-based step of a collision or off-optimal move, else 0
    std::vector<StateId> realized;
};

/// Runs both agents step by step against the domain's own transition rule.
/// A collision is a joint action the domain rejects.
ExecutionReport execute_pair(const StateGraph& graph, const DistanceTable& dist, Instance inst, const Plan& first,
                             const Plan& second);

struct InstanceCheck {
    Instance instance;
    std::size_t candidates = 0;  // plans the agents may pick from
    std::size_t pairs = 0;       // ordered pairs executed
    std::size_t failures = 0;
    std::size_t collisions = 0;
    std::size_t off_optimal = 0;
    std::size_t wrong_final = 0;
    bool skipped = false;  // plan set over the cap
};

struct CheckSummary {
    std::size_t instances = 0;
    std::size_t pairs = 0;
    std::size_t failures = 0;
    std::size_t failing_instances = 0;
    std::size_t skipped = 0;
    std::vector<InstanceCheck> rows;  // in instance order
};

/// Each agent speaks for itself: both take the sentence's expressed plans and
/// keep those that survive mixing with every other expressed plan, then every
/// ordered pair of kept plans is executed. An instance whose expressed set
/// keeps nothing counts as one failure.
CheckSummary exhaustive_check(const Abstraction& abs, const Language& lang, const StateGraph& graph,
                              const DistanceTable& dist, const InstanceScope& scope,
                              std::size_t cap = kDefaultPlanCap);

/// Same sweep with no sentence: every ordered pair of optimal plans.
CheckSummary baseline_failures(const StateGraph& graph, const DistanceTable& dist, const InstanceScope& scope,
                               std::size_t cap = kDefaultPlanCap);

/// CSV with header instance,pairs,failures,collisions,off_optimal,wrong_final,skipped.
void write_check_csv(std::ostream& out, const StateGraph& graph, const CheckSummary& summary);

}  // namespace coordlang
