#include "coordlang/plan_space.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "coordlang/error.hpp"
#include "coordlang/parallel.hpp"

namespace coordlang {

DistanceTable all_pairs_distances(const StateGraph& graph) {
    const std::size_t n = graph.size();
    DistanceTable table(n);
    parallel_for(n, [&](std::size_t source) {
        auto row = table.row(static_cast<StateId>(source));
        std::vector<StateId> queue;
        queue.reserve(n);
        row[source] = 0;
        queue.push_back(static_cast<StateId>(source));
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const StateId u = queue[head];
            for (const auto& e : graph.edges(u)) {
                if (row[e.to] != DistanceTable::kUnreachable) continue;
                row[e.to] = row[u] + 1;
                queue.push_back(e.to);
            }
        }
    });
    return table;
}

PlanDag plan_dag(const StateGraph& graph, const DistanceTable& dist, Instance inst) {
    const auto [s, t] = inst;
    if (!dist.reachable(s, t))
        throw Error(ErrorKind::NoPlan, "no plan from " + graph.describe(s) + " to " + graph.describe(t));
    PlanDag dag;
    dag.instance = inst;
    dag.length = dist(s, t);

    std::vector<std::pair<int, StateId>> members;
    for (StateId u = 0; u < graph.size(); ++u) {
        if (!dist.reachable(s, u) || !dist.reachable(u, t)) continue;
        if (dist(s, u) + dist(u, t) == dag.length) members.emplace_back(dist(s, u), u);
    }
    std::sort(members.begin(), members.end());
    for (const auto& [layer, u] : members) {
        dag.index.emplace(u, static_cast<std::uint32_t>(dag.nodes.size()));
        dag.nodes.push_back(u);
        dag.layer.push_back(layer);
    }
    dag.out.resize(dag.nodes.size());
    for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
        const StateId u = dag.nodes[i];
        for (const auto& e : graph.edges(u)) {
            if (!dist.reachable(e.to, t)) continue;
            if (dist(e.to, t) == dist(u, t) - 1 && dist(s, e.to) == dist(s, u) + 1) dag.out[i].push_back(e);
        }
    }
    return dag;
}

std::uint64_t count_plans(const PlanDag& dag) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> ways(dag.nodes.size(), 0);
    // Nodes are sorted by layer, so a reverse sweep sees successors first.
    for (std::size_t i = dag.nodes.size(); i-- > 0;) {
        if (dag.nodes[i] == dag.instance.goal && dag.layer[i] == dag.length) {
            ways[i] = 1;
            continue;
        }
        std::uint64_t total = 0;
        for (const auto& e : dag.out[i]) {
            const auto w = ways[dag.index.at(e.to)];
            total = (kMax - total < w) ? kMax : total + w;
        }
        ways[i] = total;
    }
    return ways.empty() ? 0 : ways[dag.index.at(dag.instance.initial)];
}

std::vector<Plan> enumerate_optimal_plans(const PlanDag& dag, std::size_t cap) {
    const auto count = count_plans(dag);
    if (count > cap) {
        throw Error(ErrorKind::PlanSetTooLarge, "instance (" + std::to_string(dag.instance.initial) + "," +
                                                    std::to_string(dag.instance.goal) + ") has more than " +
                                                    std::to_string(cap) + " optimal plans");
    }
    std::vector<Plan> plans;
    plans.reserve(count);
    Plan current;
    current.states.push_back(dag.instance.initial);
    auto walk = [&](auto&& self, StateId u) -> void {
        if (u == dag.instance.goal && static_cast<int>(current.actions.size()) == dag.length) {
            plans.push_back(current);
            return;
        }
        for (const auto& e : dag.successors(u)) {
            current.states.push_back(e.to);
            current.actions.push_back(e.action);
            self(self, e.to);
            current.states.pop_back();
            current.actions.pop_back();
        }
    };
    walk(walk, dag.instance.initial);
    return plans;
}

Plan canonical_plan(const PlanDag& dag) {
    Plan plan;
    StateId u = dag.instance.initial;
    plan.states.push_back(u);
    while (static_cast<int>(plan.actions.size()) < dag.length) {
        // Every DAG node reaches the goal, so the smallest successor is safe.
        const auto& e = dag.successors(u).front();
        plan.actions.push_back(e.action);
        plan.states.push_back(e.to);
        u = e.to;
    }
    return plan;
}

bool is_optimal_prefix(const StateGraph& graph, const DistanceTable& dist, Instance inst,
                       std::span<const StateId> seq) {
    const auto [s, t] = inst;
    if (seq.empty() || seq.front() != s || !dist.reachable(s, t)) return false;
    const int length = dist(s, t);
    if (static_cast<int>(seq.size()) > length + 1) return false;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const StateId q = seq[i];
        if (q >= graph.size() || !dist.reachable(s, q) || !dist.reachable(q, t)) return false;
        if (dist(s, q) != static_cast<int>(i) || dist(q, t) != length - static_cast<int>(i)) return false;
        if (i > 0) {
            const auto edges = graph.edges(seq[i - 1]);
            if (std::none_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.to == q; })) return false;
        }
    }
    return true;
}

std::vector<Instance> all_instances(std::size_t states) {
    std::vector<Instance> out;
    if (states < 2) return out;
    out.reserve(states * (states - 1));
    for (StateId s = 0; s < states; ++s)
        for (StateId t = 0; t < states; ++t)
            if (s != t) out.push_back({s, t});
    return out;
}

namespace {

std::vector<Instance> sample(std::vector<Instance> instances, const InstanceScope& scope) {
    if (scope.exhaustive || scope.sample >= instances.size()) return instances;
    // Partial Fisher-Yates with an explicitly specified engine, then restore
    // (s, t) order, so a seed names the same sample on every platform.
    std::mt19937_64 rng(scope.seed);
    for (std::size_t i = 0; i < scope.sample; ++i) {
        const std::size_t span = instances.size() - i;
        const std::size_t j = i + static_cast<std::size_t>(rng() % span);
        std::swap(instances[i], instances[j]);
    }
    instances.resize(scope.sample);
    std::sort(instances.begin(), instances.end());
    return instances;
}

}  // namespace

std::vector<Instance> select_instances(std::size_t states, const InstanceScope& scope) {
    return sample(all_instances(states), scope);
}

std::vector<Instance> select_instances(const DistanceTable& dist, const InstanceScope& scope) {
    auto instances = all_instances(dist.size());
    std::erase_if(instances, [&](Instance i) { return !dist.reachable(i.initial, i.goal); });
    return sample(std::move(instances), scope);
}

}  // namespace coordlang
