#include "coordlang/abstraction.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "coordlang/error.hpp"
#include "coordlang/parallel.hpp"

namespace coordlang {

ConflictGraph make_conflict_graph(std::size_t vertices, std::vector<StatePair> edges) {
    ConflictGraph cg;
    cg.vertices = vertices;
    for (auto& e : edges) e = make_pair_sorted(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    cg.adjacency.resize(vertices);
    for (const auto& [a, b] : edges) {
        if (a == b) throw Error(ErrorKind::InvalidParameter, "conflict pair with identical states");
        if (b >= vertices) throw Error(ErrorKind::InvalidParameter, "conflict pair outside the state range");
        cg.adjacency[a].push_back(b);
        cg.adjacency[b].push_back(a);
    }
    for (auto& nb : cg.adjacency) std::sort(nb.begin(), nb.end());
    cg.edges = std::move(edges);
    return cg;
}

ConflictGraph conflict_graph(const RcGraph& rc) {
    std::vector<StatePair> edges;
    for (const auto& [key, entry] : rc.theta) edges.insert(edges.end(), entry.conflicts.begin(), entry.conflicts.end());
    return make_conflict_graph(rc.states, std::move(edges));
}

const char* to_string(ColorOrder order) noexcept {
    switch (order) {
        case ColorOrder::Saturation: return "saturation";
        case ColorOrder::Degree: return "degree";
        case ColorOrder::Index: return "index";
    }
    return "unknown";
}

std::optional<ColorOrder> parse_color_order(const std::string& text) {
    if (text == "saturation") return ColorOrder::Saturation;
    if (text == "degree") return ColorOrder::Degree;
    if (text == "index") return ColorOrder::Index;
    return std::nullopt;
}

namespace {

int smallest_free_color(const ConflictGraph& cg, const Coloring& colors, StateId v) {
    std::vector<bool> used(cg.adjacency[v].size() + 1, false);
    for (const auto u : cg.adjacency[v]) {
        const int c = colors[u];
        if (c >= 0 && c < static_cast<int>(used.size())) used[c] = true;
    }
    int c = 0;
    while (used[c]) ++c;
    return c;
}

}  // namespace

Coloring greedy_color(const ConflictGraph& cg, ColorOrder order) {
    const std::size_t n = cg.vertices;
    Coloring colors(n, -1);
    if (order != ColorOrder::Saturation) {
        std::vector<StateId> visit(n);
        for (StateId v = 0; v < n; ++v) visit[v] = v;
        if (order == ColorOrder::Degree) {
            std::stable_sort(visit.begin(), visit.end(), [&](StateId a, StateId b) {
                return cg.adjacency[a].size() > cg.adjacency[b].size();
            });
        }
        for (const auto v : visit) colors[v] = smallest_free_color(cg, colors, v);
        return colors;
    }

    // DSATUR: (saturation, degree, -id) kept in an ordered set.
    std::vector<std::set<int>> seen(n);
    using Key = std::tuple<int, int, long>;
    std::set<Key> queue;
    for (StateId v = 0; v < n; ++v) queue.emplace(0, static_cast<int>(cg.adjacency[v].size()), -static_cast<long>(v));
    while (!queue.empty()) {
        const auto top = std::prev(queue.end());
        const auto v = static_cast<StateId>(-std::get<2>(*top));
        queue.erase(top);
        colors[v] = smallest_free_color(cg, colors, v);
        for (const auto u : cg.adjacency[v]) {
            if (colors[u] >= 0) continue;
            const Key old{static_cast<int>(seen[u].size()), static_cast<int>(cg.adjacency[u].size()),
                          -static_cast<long>(u)};
            if (seen[u].insert(colors[v]).second) {
                queue.erase(old);
                queue.emplace(static_cast<int>(seen[u].size()), std::get<1>(old), std::get<2>(old));
            }
        }
    }
    return colors;
}

int color_count(const Coloring& coloring) {
    std::set<int> used(coloring.begin(), coloring.end());
    return static_cast<int>(used.size());
}

bool is_proper(const ConflictGraph& cg, const Coloring& coloring) {
    return std::none_of(cg.edges.begin(), cg.edges.end(),
                        [&](const StatePair& e) { return coloring[e.first] == coloring[e.second]; });
}

std::size_t max_degree(const ConflictGraph& cg) {
    std::size_t d = 0;
    for (const auto& nb : cg.adjacency) d = std::max(d, nb.size());
    return d;
}

std::size_t greedy_clique_bound(const ConflictGraph& cg) {
    std::size_t best = cg.vertices == 0 ? 0 : 1;
    for (StateId v = 0; v < cg.vertices; ++v) {
        auto candidates = cg.adjacency[v];
        std::stable_sort(candidates.begin(), candidates.end(), [&](StateId a, StateId b) {
            return cg.adjacency[a].size() > cg.adjacency[b].size();
        });
        std::vector<StateId> clique{v};
        for (const auto u : candidates) {
            const bool joins = std::all_of(clique.begin(), clique.end(), [&](StateId w) {
                return std::binary_search(cg.adjacency[u].begin(), cg.adjacency[u].end(), w);
            });
            if (joins) clique.push_back(u);
        }
        best = std::max(best, clique.size());
    }
    return best;
}

Abstraction build_abstraction(const StateGraph& graph, const Coloring& coloring) {
    if (coloring.size() != graph.size())
        throw Error(ErrorKind::InvalidParameter, "coloring does not cover every state");
    std::map<int, int> block_of_color;
    for (const int c : coloring) block_of_color.emplace(c, 0);
    int next = 0;
    for (auto& [color, block] : block_of_color) block = next++;

    Abstraction abs;
    abs.blocks.resize(block_of_color.size());
    abs.local_edges.resize(block_of_color.size());
    abs.block_of.resize(graph.size());
    for (StateId s = 0; s < graph.size(); ++s) {
        const int b = block_of_color.at(coloring[s]);
        abs.block_of[s] = b;
        abs.blocks[b].push_back(s);
    }
    std::set<std::pair<int, int>> crossing;
    for (StateId s = 0; s < graph.size(); ++s) {
        for (const auto& e : graph.edges(s)) {
            if (e.to == s) continue;
            const int b = abs.block_of[s];
            const int b2 = abs.block_of[e.to];
            if (b == b2) abs.local_edges[b].emplace_back(s, e.to);
            else crossing.emplace(b, b2);
        }
    }
    abs.abstract_edges.assign(crossing.begin(), crossing.end());
    return abs;
}

Abstraction build_abstraction(const StateGraph& graph, const Coloring& coloring, const ConflictGraph& cg) {
    if (coloring.size() != graph.size())
        throw Error(ErrorKind::InvalidParameter, "coloring does not cover every state");
    for (const auto& [a, b] : cg.edges) {
        if (coloring[a] == coloring[b]) {
            throw Error(ErrorKind::SeparationViolation,
                        "states " + graph.describe(a) + " and " + graph.describe(b) + " conflict but share a block");
        }
    }
    return build_abstraction(graph, coloring);
}

Abstraction singleton_abstraction(const StateGraph& graph) {
    Coloring c(graph.size());
    for (StateId s = 0; s < graph.size(); ++s) c[s] = static_cast<int>(s);
    return build_abstraction(graph, c);
}

Abstraction single_block_abstraction(const StateGraph& graph) { return build_abstraction(graph, Coloring(graph.size(), 0)); }

std::vector<int> block_path(const Abstraction& abs, const Plan& plan) {
    std::vector<int> path;
    for (std::size_t i = 1; i + 1 < plan.states.size(); ++i) {
        const int b = abs.block_of[plan.states[i]];
        if (path.empty() || path.back() != b) path.push_back(b);
    }
    return path;
}

PerfectionReport verify_perfect(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist,
                                std::size_t cap, const InstanceScope& scope) {
    const auto instances = select_instances(dist, scope);
    std::vector<PerfectionReport> partial(instances.size());
    parallel_for(instances.size(), [&](std::size_t i) {
        const Instance inst = instances[i];
        auto& report = partial[i];
        report.instances = 1;
        const auto plans = enumerate_optimal_plans(plan_dag(graph, dist, inst), cap);
        std::map<std::vector<int>, std::vector<std::size_t>> groups;
        for (std::size_t p = 0; p < plans.size(); ++p) groups[block_path(abs, plans[p])].push_back(p);
        report.paths = groups.size();
        for (const auto& [path, members] : groups) {
            // The group is fine as soon as one member survives every partner.
            std::optional<std::pair<std::size_t, std::size_t>> witness;
            bool found_safe = false;
            for (std::size_t x = 0; x < members.size() && !found_safe; ++x) {
                found_safe = true;
                for (std::size_t y = 0; y < members.size(); ++y) {
                    if (x == y) continue;
                    ++report.pairs;
                    if (pair_introduces_rc(graph, dist, inst, plans[members[x]], plans[members[y]])) {
                        if (!witness) witness.emplace(members[x], members[y]);
                        found_safe = false;
                        break;
                    }
                }
            }
            if (!found_safe) report.violations.push_back({inst, path, plans[witness->first], plans[witness->second]});
        }
    });
    PerfectionReport total;
    for (auto& r : partial) {
        total.instances += r.instances;
        total.paths += r.paths;
        total.pairs += r.pairs;
        for (auto& v : r.violations) total.violations.push_back(std::move(v));
    }
    return total;
}

Refinement refine_until_perfect(const StateGraph& graph, const DistanceTable& dist, ConflictGraph cg,
                                ColorOrder order, std::size_t cap, const InstanceScope& scope) {
    Refinement r;
    for (;;) {
        ++r.rounds;
        r.coloring = greedy_color(cg, order);
        r.abstraction = build_abstraction(graph, r.coloring);
        r.report = verify_perfect(r.abstraction, graph, dist, cap, scope);
        if (r.report.perfect()) break;
        std::vector<StatePair> edges = cg.edges;
        for (const auto& v : r.report.violations) {
            const auto& a = v.first.states;
            const auto& b = v.second.states;
            std::size_t k = 1;
            while (a[k] == b[k]) ++k;  // plans differ somewhere strictly inside
            // Same block path yet different states at k: either they share a
            // block, or one of them extends the run of the common prefix.
            const auto& blk = r.abstraction.block_of;
            StatePair pair;
            if (blk[a[k]] == blk[b[k]]) pair = make_pair_sorted(a[k], b[k]);
            else if (blk[a[k]] == blk[a[k - 1]]) pair = make_pair_sorted(a[k - 1], a[k]);
            else pair = make_pair_sorted(b[k - 1], b[k]);
            edges.push_back(pair);
            r.added.push_back(pair);
        }
        cg = make_conflict_graph(graph.size(), std::move(edges));
    }
    std::sort(r.added.begin(), r.added.end());
    r.added.erase(std::unique(r.added.begin(), r.added.end()), r.added.end());
    r.conflicts = std::move(cg);
    return r;
}

int epsilon(const Abstraction& abs) {
    std::size_t e = 0;
    for (const auto& b : abs.blocks) e = std::max(e, b.size());
    return static_cast<int>(e);
}

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Fewest runs of the intermediate-state block sequence over s_I -> s_G
/// paths whose edges pass `allowed`. 0-1 BFS over states.
template <class Allowed>
int fewest_runs(const Abstraction& abs, const StateGraph& graph, Instance inst, Allowed allowed) {
    const auto [s, t] = inst;
    if (s == t) return 0;
    std::vector<int> runs(graph.size(), kInf);
    std::deque<StateId> queue;
    int best = kInf;
    for (const auto& e : graph.edges(s)) {
        if (!allowed(s, e.to)) continue;
        if (e.to == t) best = 0;
        else if (e.to != s && runs[e.to] > 1) {
            runs[e.to] = 1;
            queue.push_back(e.to);
        }
    }
    while (!queue.empty()) {
        const StateId u = queue.front();
        queue.pop_front();
        if (runs[u] >= best) continue;
        for (const auto& e : graph.edges(u)) {
            if (!allowed(u, e.to)) continue;
            if (e.to == t) {
                best = std::min(best, runs[u]);
                continue;
            }
            const int step = abs.block_of[e.to] == abs.block_of[u] ? 0 : 1;
            if (runs[u] + step < runs[e.to]) {
                runs[e.to] = runs[u] + step;
                if (step == 0) queue.push_front(e.to);
                else queue.push_back(e.to);
            }
        }
    }
    return best;
}

}  // namespace

PathBoundWitness path_bound_witness(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist,
                                 Instance inst) {
    const auto [s, t] = inst;
    if (!dist.reachable(s, t))
        throw Error(ErrorKind::NoPlan, "no plan from " + graph.describe(s) + " to " + graph.describe(t));
    PathBoundWitness w;
    w.epsilon = epsilon(abs);
    w.shortest_valid_path = fewest_runs(abs, graph, inst, [](StateId, StateId) { return true; });
    w.shortest_optimal_path = fewest_runs(abs, graph, inst, [&](StateId u, StateId v) {
        return dist.reachable(v, t) && dist(v, t) == dist(u, t) - 1 && dist(s, v) == dist(s, u) + 1;
    });
    w.holds = w.shortest_optimal_path <= w.shortest_valid_path * w.epsilon;
    return w;
}

bool theorem6_check(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist, Instance inst) {
    return path_bound_witness(abs, graph, dist, inst).holds;
}

}  // namespace coordlang
