#include "coordlang/coordination.hpp"

#include <ostream>

#include "coordlang/error.hpp"
#include "coordlang/parallel.hpp"

namespace coordlang {

const char* to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::Success: return "success";
        case Outcome::Collision: return "collision";
        case Outcome::OffOptimal: return "off-optimal";
        case Outcome::WrongFinalState: return "wrong-final-state";
    }
    return "unknown";
}

namespace {

std::optional<StateId> apply(const StateGraph& graph, StateId s, JointAction act) {
    const auto& spec = graph.domain();
    if (spec.successor) {
        const auto next = spec.successor(graph.assignment(s), act);
        if (!next) return std::nullopt;
        return graph.find(*next);
    }
    for (const auto& e : graph.edges(s))
        if (e.action == act) return e.to;
    return std::nullopt;
}

}  // namespace

ExecutionReport execute_pair(const StateGraph& graph, const DistanceTable& dist, Instance inst, const Plan& first,
                             const Plan& second) {
    ExecutionReport r{inst, first, second, Outcome::Success, 0, {inst.initial}};
    const auto [s, t] = inst;
    const int length = dist(s, t);
    const std::size_t steps = std::min(first.actions.size(), second.actions.size());
    StateId x = s;
    for (std::size_t i = 0; i < steps; ++i) {
        const auto next = apply(graph, x, JointAction{first.actions[i].a, second.actions[i].b});
        if (!next) {
            r.outcome = Outcome::Collision;
            r.step = static_cast<int>(i + 1);
            return r;
        }
        x = *next;
        r.realized.push_back(x);
        const int done = static_cast<int>(i + 1);
        if (dist(s, x) != done || dist(x, t) != length - done) {
            r.outcome = Outcome::OffOptimal;
            r.step = done;
            return r;
        }
    }
    if (x != t) r.outcome = Outcome::WrongFinalState;
    return r;
}

namespace {

void run_pairs(const StateGraph& graph, const DistanceTable& dist, Instance inst, const std::vector<Plan>& plans,
               InstanceCheck& row) {
    row.candidates = plans.size();
    for (const auto& p : plans) {
        for (const auto& q : plans) {
            ++row.pairs;
            const auto rep = execute_pair(graph, dist, inst, p, q);
            switch (rep.outcome) {
                case Outcome::Success: continue;
                case Outcome::Collision: ++row.collisions; break;
                case Outcome::OffOptimal: ++row.off_optimal; break;
                case Outcome::WrongFinalState: ++row.wrong_final; break;
            }
            ++row.failures;
        }
    }
}

template <class Candidates>
CheckSummary sweep(const DistanceTable& dist, const InstanceScope& scope, Candidates candidates) {
    const auto instances = select_instances(dist, scope);
    std::vector<InstanceCheck> rows(instances.size());
    parallel_for(instances.size(), [&](std::size_t i) {
        auto& row = rows[i];
        row.instance = instances[i];
        try {
            candidates(row);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PlanSetTooLarge) throw;
            row = InstanceCheck{instances[i]};
            row.skipped = true;
        }
    });
    CheckSummary summary;
    for (auto& row : rows) {
        if (row.skipped) {
            ++summary.skipped;
        } else {
            ++summary.instances;
            summary.pairs += row.pairs;
            summary.failures += row.failures;
            if (row.failures > 0) ++summary.failing_instances;
        }
    }
    summary.rows = std::move(rows);
    return summary;
}

}  // namespace

CheckSummary exhaustive_check(const Abstraction& abs, const Language& lang, const StateGraph& graph,
                              const DistanceTable& dist, const InstanceScope& scope, std::size_t cap) {
    return sweep(dist, scope, [&](InstanceCheck& row) {
        const auto sentence = speak(abs, lang, graph, dist, row.instance);
        const auto expressed = expressed_plans(abs, graph, dist, row.instance, sentence.words, cap);
        const auto kept = safe_plans(graph, dist, row.instance, expressed);
        run_pairs(graph, dist, row.instance, kept, row);
        if (kept.empty()) ++row.failures;
    });
}

CheckSummary baseline_failures(const StateGraph& graph, const DistanceTable& dist, const InstanceScope& scope,
                               std::size_t cap) {
    return sweep(dist, scope, [&](InstanceCheck& row) {
        const auto plans = enumerate_optimal_plans(plan_dag(graph, dist, row.instance), cap);
        run_pairs(graph, dist, row.instance, plans, row);
    });
}

void write_check_csv(std::ostream& out, const StateGraph& graph, const CheckSummary& summary) {
    out << "instance,pairs,failures,collisions,off_optimal,wrong_final,skipped\n";
    for (const auto& r : summary.rows) {
        out << '"' << graph.describe(r.instance.initial) << "->" << graph.describe(r.instance.goal) << "\"," << r.pairs
            << ',' << r.failures << ',' << r.collisions << ',' << r.off_optimal << ',' << r.wrong_final << ','
            << (r.skipped ? 1 : 0) << '\n';
    }
}

}  // namespace coordlang
