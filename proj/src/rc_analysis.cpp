#include "coordlang/rc_analysis.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "coordlang/error.hpp"
#include "coordlang/parallel.hpp"

namespace coordlang {

const char* to_string(FailureKind kind) noexcept {
    switch (kind) {
        case FailureKind::InvalidJointAction: return "invalid-joint-action";
        case FailureKind::OffOptimalPrefix: return "off-optimal-prefix";
    }
    return "unknown";
}

const char* to_string(ConflictRule rule) noexcept {
    switch (rule) {
        case ConflictRule::FailureStep: return "failure-step";
        case ConflictRule::FirstDivergence: return "first-divergence";
    }
    return "unknown";
}

std::optional<ConflictRule> parse_conflict_rule(const std::string& text) {
    if (text == "failure-step") return ConflictRule::FailureStep;
    if (text == "first-divergence") return ConflictRule::FirstDivergence;
    return std::nullopt;
}

MixedOutcome mix(const StateGraph& graph, const DistanceTable& dist, Instance inst, const Plan& a_plan,
                 const Plan& b_plan) {
    MixedOutcome out;
    const auto [s, t] = inst;
    out.states.push_back(s);
    const int length = dist(s, t);
    StateId x = s;
    for (int i = 0; i < length; ++i) {
        const JointAction act{a_plan.actions[i].a, b_plan.actions[i].b};
        const auto next = graph.successor(x, act);
        if (!next) {
            out.failure_step = i + 1;
            out.failure_kind = FailureKind::InvalidJointAction;
            return out;
        }
        x = *next;
        out.states.push_back(x);
        const bool on_prefix = dist.reachable(s, x) && dist.reachable(x, t) && dist(s, x) == i + 1 &&
                               dist(x, t) == length - i - 1;
        if (!on_prefix) {
            out.failure_step = i + 1;
            out.failure_kind = FailureKind::OffOptimalPrefix;
            return out;
        }
    }
    return out;
}

bool pair_introduces_rc(const StateGraph& graph, const DistanceTable& dist, Instance inst, const Plan& first,
                        const Plan& second) {
    return !mix(graph, dist, inst, first, second).success() || !mix(graph, dist, inst, second, first).success();
}

std::vector<Plan> safe_plans(const StateGraph& graph, const DistanceTable& dist, Instance inst,
                             const std::vector<Plan>& plans) {
    const std::size_t n = plans.size();
    std::vector<bool> unsafe(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (unsafe[i] && unsafe[j]) continue;
            if (pair_introduces_rc(graph, dist, inst, plans[i], plans[j])) unsafe[i] = unsafe[j] = true;
        }
    }
    std::vector<Plan> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!unsafe[i]) out.push_back(plans[i]);
    return out;
}

bool rc_present(const StateGraph& graph, const DistanceTable& dist, Instance inst, std::size_t cap) {
    if (!dist.reachable(inst.initial, inst.goal)) return false;
    const auto plans = enumerate_optimal_plans(plan_dag(graph, dist, inst), cap);
    if (plans.size() <= 1) return false;
    return safe_plans(graph, dist, inst, plans).empty();
}

namespace {

constexpr int kBits = 21;
constexpr std::uint64_t kMask = (std::uint64_t{1} << kBits) - 1;

std::uint64_t pack(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return (a << (2 * kBits)) | (b << kBits) | c; }
StateId first_of(std::uint64_t k) { return static_cast<StateId>((k >> (2 * kBits)) & kMask); }
StateId second_of(std::uint64_t k) { return static_cast<StateId>((k >> kBits) & kMask); }
StateId third_of(std::uint64_t k) { return static_cast<StateId>(k & kMask); }

struct FrontierKey {
    StateId plan_state;
    std::vector<std::uint64_t> mixes;
    bool operator==(const FrontierKey&) const = default;
};

struct FrontierHash {
    std::size_t operator()(const FrontierKey& k) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ k.plan_state;
        for (auto v : k.mixes) h = (h ^ v) * 0x100000001b3ull + (h >> 29);
        return static_cast<std::size_t>(h);
    }
};

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const noexcept {
        return static_cast<std::size_t>(p.first * 0x9e3779b97f4a7c15ull ^ (p.second + (p.first >> 17)));
    }
};

}  // namespace

GoalAnalyzer::GoalAnalyzer(const StateGraph& graph, const DistanceTable& dist, StateId goal)
    : graph_(graph), dist_(dist), goal_(goal), toward_(graph.size()) {
    if (graph.size() > kMask) throw Error(ErrorKind::InvalidParameter, "state graph too large for RC analysis");
    for (StateId u = 0; u < graph.size(); ++u) {
        if (!dist.reachable(u, goal)) continue;
        for (const auto& e : graph.edges(u))
            if (dist.reachable(e.to, goal) && dist(e.to, goal) == dist(u, goal) - 1) toward_[u].push_back(e);
    }
}

bool GoalAnalyzer::steps_ok(StateId x, JointAction action, StateId& next) const {
    const auto succ = graph_.successor(x, action);
    if (!succ || !dist_.reachable(*succ, goal_)) return false;
    if (dist_(*succ, goal_) != dist_(x, goal_) - 1) return false;
    next = *succ;
    return true;
}

bool GoalAnalyzer::rc_present(StateId start) const { return !has_safe_plan(start); }

bool GoalAnalyzer::has_safe_plan(StateId start) const {
    if (!dist_.reachable(start, goal_)) return true;

    // Depth-first over the candidate safe plan. Alongside its current state we
    // carry every (orientation, partner-plan state, mixed state) reachable by
    // some partner prefix; a branch dies as soon as any mix can fail.
    std::unordered_set<FrontierKey, FrontierHash> dead;
    auto search = [&](auto&& self, StateId p, const std::vector<std::uint64_t>& mixes) -> bool {
        if (p == goal_) return true;
        FrontierKey key{p, mixes};
        if (dead.contains(key)) return false;
        for (const auto& own : toward_[p]) {
            std::vector<std::uint64_t> next;
            bool failed = false;
            for (const auto m : mixes) {
                const auto orientation = first_of(m);
                const StateId q = second_of(m);
                const StateId x = third_of(m);
                for (const auto& other : toward_[q]) {
                    const JointAction act = orientation == 0 ? JointAction{own.action.a, other.action.b}
                                                             : JointAction{other.action.a, own.action.b};
                    StateId x2 = 0;
                    if (!steps_ok(x, act, x2)) {
                        failed = true;
                        break;
                    }
                    next.push_back(pack(orientation, other.to, x2));
                }
                if (failed) break;
            }
            if (failed) continue;
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            if (self(self, own.to, next)) return true;
        }
        dead.insert(std::move(key));
        return false;
    };
    return search(search, start, {pack(0, start, start), pack(1, start, start)});
}

std::vector<StatePair> GoalAnalyzer::conflict_pairs(StateId start, ConflictRule rule) const {
    std::vector<StatePair> out;
    if (!dist_.reachable(start, goal_)) return out;

    // Layered sweep over the plan pair's current states (p for the first plan,
    // q for the second) together with what the rule needs to remember:
    //   FailureStep: both mixed states (A of p with B of q, and A of q with B
    //     of p); the pair breaks at the first step where either mix fails.
    //   FirstDivergence: the one-orientation mixed state plus the divergence
    //     pair seen so far (the reverse orientation is the swapped pair).
    constexpr std::uint64_t kNone = ~std::uint64_t{0};
    auto encode = [](StatePair sp) { return (std::uint64_t{sp.first} << 32) | sp.second; };
    using Node = std::pair<std::uint64_t, std::uint64_t>;
    std::vector<Node> layer;
    if (rule == ConflictRule::FailureStep) layer.push_back({pack(start, start, start), start});
    else layer.push_back({pack(start, start, start), kNone});
    std::vector<std::uint64_t> found;
    while (!layer.empty()) {
        std::unordered_set<Node, PairHash> next;
        for (const auto& [triple, extra] : layer) {
            const StateId p = first_of(triple);
            const StateId q = second_of(triple);
            const StateId x = third_of(triple);
            if (p == goal_) continue;
            for (const auto& ea : toward_[p]) {
                for (const auto& eb : toward_[q]) {
                    StateId x2 = 0;
                    if (rule == ConflictRule::FailureStep) {
                        const auto y = static_cast<StateId>(extra);
                        StateId y2 = 0;
                        const bool ok = steps_ok(x, {ea.action.a, eb.action.b}, x2) &&
                                        steps_ok(y, {eb.action.a, ea.action.b}, y2);
                        if (ok) next.insert({pack(ea.to, eb.to, x2), y2});
                        else if (ea.to != eb.to) found.push_back(encode(make_pair_sorted(ea.to, eb.to)));
                        continue;
                    }
                    auto tag = extra;
                    if (tag == kNone && ea.to != eb.to) tag = encode(make_pair_sorted(ea.to, eb.to));
                    if (steps_ok(x, {ea.action.a, eb.action.b}, x2)) next.insert({pack(ea.to, eb.to, x2), tag});
                    else if (tag != kNone) found.push_back(tag);
                }
            }
        }
        layer.assign(next.begin(), next.end());
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    out.reserve(found.size());
    for (const auto v : found) out.emplace_back(static_cast<StateId>(v >> 32), static_cast<StateId>(v & 0xffffffffu));
    return out;
}

RcGraph build_rc_graph(const StateGraph& graph, const DistanceTable& dist, const RcBuildOptions& options) {
    const std::size_t n = graph.size();
    struct Placed {
        StateId start;
        int cost;
        bool rc;
        std::vector<StatePair> conflicts;
    };
    std::vector<std::vector<Placed>> per_goal(n);

    parallel_for(n, [&](std::size_t goal_index) {
        const auto goal = static_cast<StateId>(goal_index);
        GoalAnalyzer analyzer(graph, dist, goal);

        // Optimal-path counts into `goal`, for the plan-set cap.
        std::vector<std::uint64_t> ways(n, 0);
        if (options.cap != 0) {
            std::vector<StateId> order;
            for (StateId u = 0; u < n; ++u)
                if (dist.reachable(u, goal)) order.push_back(u);
            std::sort(order.begin(), order.end(), [&](StateId a, StateId b) { return dist(a, goal) < dist(b, goal); });
            for (const StateId u : order) {
                if (u == goal) {
                    ways[u] = 1;
                    continue;
                }
                std::uint64_t total = 0;
                for (const auto& e : graph.edges(u)) {
                    if (!dist.reachable(e.to, goal) || dist(e.to, goal) != dist(u, goal) - 1) continue;
                    total = std::min<std::uint64_t>(std::numeric_limits<std::uint64_t>::max() / 2, total + ways[e.to]);
                }
                ways[u] = total;
            }
        }

        auto& placed = per_goal[goal_index];
        for (StateId start = 0; start < n; ++start) {
            if (start == goal || !dist.reachable(start, goal)) continue;
            const int cost = dist(start, goal);
            if (options.cap != 0 && ways[start] > options.cap) {
                throw Error(ErrorKind::PlanSetTooLarge,
                            "pair (" + graph.describe(start) + ", " + graph.describe(goal) + ") has " +
                                std::to_string(ways[start]) + " optimal plans, above the cap of " +
                                std::to_string(options.cap));
            }
            // A single action is the unique optimal plan, so level one never has RC.
            if (cost == 1 || !analyzer.rc_present(start)) {
                placed.push_back({start, cost, false, {}});
            } else {
                placed.push_back({start, cost, true, analyzer.conflict_pairs(start, options.rule)});
            }
        }
    });

    RcGraph rc;
    rc.states = n;
    for (StateId goal = 0; goal < n; ++goal) {
        for (auto& p : per_goal[goal]) {
            if (p.rc) rc.theta.emplace(OrderedPair{p.start, goal}, ThetaEntry{p.cost, std::move(p.conflicts)});
            else rc.edges.emplace(OrderedPair{p.start, goal}, p.cost);
        }
    }
    return rc;
}

}  // namespace coordlang
