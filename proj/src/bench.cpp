#include "coordlang/bench.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

namespace coordlang {

std::vector<BenchConfig> paper_table1_suite() {
    std::vector<BenchConfig> suite;
    for (int balls = 0; balls <= 4; ++balls)
        suite.push_back({"T&O #" + std::to_string(balls + 1), generate_turn_and_open(2, balls)});
    const std::pair<int, int> grids[] = {{2, 2}, {3, 3}, {3, 4}, {4, 4}, {4, 5}};
    for (int i = 0; i < 5; ++i)
        suite.push_back({"GW #" + std::to_string(i + 1), generate_grid_loop(grids[i].first, grids[i].second)});
    return suite;
}

BenchRow run_bench(const BenchConfig& config, const BenchOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    BenchRow row;
    row.problem = config.problem;

    const auto graph = build_state_graph(config.domain);
    const auto dist = all_pairs_distances(graph);
    // Analysis walks plan DAGs, so no plan-count cap is needed here.
    const auto rc = build_rc_graph(graph, dist, {.cap = 0});
    const auto cg = conflict_graph(rc);
    row.theta_colors = static_cast<std::size_t>(color_count(greedy_color(cg, options.order)));

    row.states = graph.size();
    row.pairs = row.states * (row.states - 1);
    row.exhaustive = row.pairs <= options.exhaustive_limit;
    const auto scope = row.exhaustive ? InstanceScope::all() : InstanceScope::sampled(options.sample, options.seed);
    const auto refined = refine_until_perfect(graph, dist, cg, options.order, SIZE_MAX, scope);

    row.abs_states = refined.abstraction.size();
    row.added_conflicts = refined.added.size();
    row.verified_instances = refined.report.instances;
    row.violations = refined.report.violations.size();
    row.proper = is_proper(refined.conflicts, refined.coloring);
    row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "problem,pairs,states,abs_states,time_s\n";
    for (const auto& r : rows) {
        out << r.problem << ',' << r.pairs << ',' << r.states << ',' << r.abs_states << ',' << std::fixed
            << std::setprecision(3) << r.time_s << '\n';
        out << std::defaultfloat;
    }
}

}  // namespace coordlang
