// Command-line front end: gen, rcgraph, abstract, speak, verify, simulate, bench.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "coordlang/bench.hpp"
#include "coordlang/coordination.hpp"
#include "coordlang/error.hpp"
#include "coordlang/serialization.hpp"

using namespace coordlang;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kCap = 3 };

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PlanSetTooLarge: return kCap;
        case ErrorKind::NoPlan:
        case ErrorKind::SeparationViolation: return kFailed;
        default: return kUsage;
    }
}

StateId state_arg(const StateGraph& graph, const std::string& text) {
    const auto s = parse_state(graph, text);
    if (!s) throw Error(ErrorKind::InvalidParameter, "unknown state \"" + text + "\"");
    return *s;
}

InstanceScope scope_from(bool exhaustive, std::size_t sample, std::uint64_t seed) {
    return exhaustive || sample == 0 ? InstanceScope::all() : InstanceScope::sampled(sample, seed);
}

std::string plan_text(const StateGraph& graph, const Plan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.states.size(); ++i) out += (i ? " " : "") + graph.describe(plan.states[i]);
    return out;
}

struct Options {
    // gen
    std::string domain;
    int n = 3, w = 2, h = 2, rooms = 2, balls = 0;
    std::string out;
    // shared inputs
    std::string input;
    std::size_t cap = kDefaultPlanCap;
    std::string rule = "failure-step";
    std::string dot;
    std::string order = "saturation";
    bool no_refine = false;
    bool exhaustive = false;
    std::size_t sample = 0;
    std::uint64_t seed = 7;
    std::string from, to;
    std::string suite = "paper-table1";
    std::string csv;
};

int cmd_gen(const Options& o) {
    DomainSpec spec;
    if (o.domain == "ring") spec = generate_ring(o.n);
    else if (o.domain == "grid_loop") spec = generate_grid_loop(o.w, o.h);
    else if (o.domain == "turn_and_open") spec = generate_turn_and_open(o.rooms, o.balls);
    else throw Error(ErrorKind::InvalidParameter, "unknown domain \"" + o.domain + "\"");
    const auto graph = build_state_graph(spec);
    if (!o.out.empty()) save_domain(spec, o.out);
    std::cout << graph.size() << " states\n";
    return kOk;
}

int cmd_rcgraph(const Options& o) {
    const auto rule = parse_conflict_rule(o.rule);
    if (!rule) throw Error(ErrorKind::InvalidParameter, "unknown conflict rule \"" + o.rule + "\"");
    RcDocument doc;
    doc.domain = load_domain(o.input);
    doc.rule = *rule;
    const auto graph = build_state_graph(doc.domain);
    const auto dist = all_pairs_distances(graph);
    doc.rc = build_rc_graph(graph, dist, {.cap = o.cap, .rule = *rule});
    std::cout << graph.size() << " states\nedges: " << doc.rc.edges.size() << "\ntheta entries: " << doc.rc.theta.size()
              << "\nconflict pairs: " << conflict_graph(doc.rc).edges.size() << "\n";
    if (!o.out.empty()) write_text(o.out, format_rc(doc));
    if (!o.dot.empty()) write_text(o.dot, format_dot(graph, doc.rc));
    return kOk;
}

int cmd_abstract(const Options& o) {
    const auto order = parse_color_order(o.order);
    if (!order) throw Error(ErrorKind::InvalidParameter, "unknown order \"" + o.order + "\"");
    const auto rc = parse_rc(read_text(o.input));
    const auto graph = build_state_graph(rc.domain);
    if (graph.size() != rc.rc.states) throw Error(ErrorKind::Parse, "rc graph does not match its domain");
    const auto dist = all_pairs_distances(graph);
    const auto cg = conflict_graph(rc.rc);

    AbstractionDocument doc{rc.domain, *order, {}, {}};
    Abstraction abs;
    if (o.no_refine) {
        abs = build_abstraction(graph, greedy_color(cg, *order), cg);
    } else {
        const auto refined = refine_until_perfect(graph, dist, cg, *order, o.cap, scope_from(o.exhaustive, o.sample, o.seed));
        abs = refined.abstraction;
        doc.added = refined.added;
    }
    doc.blocks = abs.blocks;
    std::cout << abs.size() << " abstract states\ntheta colors: " << color_count(greedy_color(cg, *order))
              << "\nadded conflicts: " << doc.added.size() << "\nclique bound: " << greedy_clique_bound(cg)
              << "\nepsilon: " << epsilon(abs) << "\n";
    if (!o.out.empty()) write_text(o.out, format_abstraction(doc));
    if (!o.dot.empty()) write_text(o.dot, format_dot(graph, rc.rc, &abs));
    return kOk;
}

int cmd_speak(const Options& o) {
    const auto doc = parse_abstraction(read_text(o.input));
    const auto graph = build_state_graph(doc.domain);
    const auto dist = all_pairs_distances(graph);
    const auto abs = restore_abstraction(doc, graph);
    const auto lang = language_from_abstraction(abs);
    const Instance inst{state_arg(graph, o.from), state_arg(graph, o.to)};
    std::cout << format_sentence(speak(abs, lang, graph, dist, inst));
    return kOk;
}

int cmd_verify(const Options& o) {
    const auto doc = parse_abstraction(read_text(o.input));
    const auto graph = build_state_graph(doc.domain);
    const auto dist = all_pairs_distances(graph);
    const auto abs = restore_abstraction(doc, graph);
    const auto report = verify_perfect(abs, graph, dist, o.cap, scope_from(o.exhaustive, o.sample, o.seed));
    std::cout << "instances: " << report.instances << "\nblock paths: " << report.paths << "\nplan pairs: " << report.pairs
              << "\nviolations: " << report.violations.size() << "\n";
    for (const auto& v : report.violations) {
        std::cout << "violation " << graph.describe(v.instance.initial) << " -> " << graph.describe(v.instance.goal)
                  << " path [";
        for (std::size_t i = 0; i < v.path.size(); ++i) std::cout << (i ? "," : "") << v.path[i];
        std::cout << "]\n  " << plan_text(graph, v.first) << "\n  " << plan_text(graph, v.second) << "\n";
    }
    return report.perfect() ? kOk : kFailed;
}

int cmd_simulate(const Options& o) {
    const auto doc = parse_abstraction(read_text(o.input));
    const auto graph = build_state_graph(doc.domain);
    const auto dist = all_pairs_distances(graph);
    const auto abs = restore_abstraction(doc, graph);
    const auto lang = language_from_abstraction(abs);
    const auto scope = scope_from(o.exhaustive, o.sample, o.seed);
    const auto with = exhaustive_check(abs, lang, graph, dist, scope, o.cap);
    const auto without = baseline_failures(graph, dist, scope, o.cap);
    std::cout << "with language: instances " << with.instances << ", pairs " << with.pairs << ", failures "
              << with.failures << ", skipped " << with.skipped << "\n";
    std::cout << "without language: instances " << without.instances << ", pairs " << without.pairs
              << ", failing instances " << without.failing_instances << ", skipped " << without.skipped << "\n";
    if (!o.csv.empty()) {
        std::ofstream out(o.csv);
        write_check_csv(out, graph, with);
    }
    return with.failures == 0 ? kOk : kFailed;
}

int cmd_bench(const Options& o) {
    if (o.suite != "paper-table1") throw Error(ErrorKind::InvalidParameter, "unknown suite \"" + o.suite + "\"");
    const auto order = parse_color_order(o.order);
    if (!order) throw Error(ErrorKind::InvalidParameter, "unknown order \"" + o.order + "\"");
    BenchOptions options;
    options.order = *order;
    options.seed = o.seed;
    if (o.sample > 0) options.sample = o.sample;
    std::vector<BenchRow> rows;
    bool ok = true;
    for (const auto& config : paper_table1_suite()) {
        rows.push_back(run_bench(config, options));
        const auto& r = rows.back();
        ok = ok && r.violations == 0 && r.proper;
        std::cout << r.problem << ": states " << r.states << ", pairs " << r.pairs << ", abstract " << r.abs_states
                  << " (theta colors " << r.theta_colors << ", added " << r.added_conflicts << "), verified "
                  << r.verified_instances << (r.exhaustive ? " exhaustive" : " sampled") << ", violations "
                  << r.violations << ", " << r.time_s << " s" << std::endl;
    }
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        write_bench_csv(out, rows);
    } else {
        write_bench_csv(std::cout, rows);
    }
    return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordination languages from perfect abstractions of two-agent domains"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "Generate a domain and report its state count");
    gen->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
    gen->add_option("--domain", o.domain, "ring, grid_loop or turn_and_open")->required();
    gen->add_option("--n", o.n, "ring size");
    gen->add_option("--w", o.w, "grid width");
    gen->add_option("--h", o.h, "grid height");
    gen->add_option("--rooms", o.rooms, "Turn-and-Open rooms");
    gen->add_option("--balls", o.balls, "Turn-and-Open balls");
    gen->add_option("--out", o.out, "domain file to write");

    auto* rcgraph = app.add_subcommand("rcgraph", "Build the RC graph of a domain file");
    rcgraph->add_option("domain", o.input, "domain file")->required();
    rcgraph->add_option("--cap", o.cap, "largest optimal-plan set per pair; 0 disables");
    rcgraph->add_option("--rule", o.rule, "failure-step or first-divergence");
    rcgraph->add_option("--out", o.out, "RC graph file to write");
    rcgraph->add_option("--dot", o.dot, "Graphviz file to write");

    auto* abstract = app.add_subcommand("abstract", "Color the conflict graph into an abstraction and language");
    abstract->add_option("rcgraph", o.input, "RC graph file")->required();
    abstract->add_option("--order", o.order, "saturation, degree or index");
    abstract->add_flag("--no-refine", o.no_refine, "keep the plain theta coloring");
    abstract->add_flag("--exhaustive", o.exhaustive, "refine against every instance (default)");
    abstract->add_option("--sample", o.sample, "refine against a sample of instances");
    abstract->add_option("--seed", o.seed, "sample seed");
    abstract->add_option("--cap", o.cap, "largest optimal-plan set enumerated per instance")->default_val(SIZE_MAX);
    abstract->add_option("--out", o.out, "abstraction file to write");
    abstract->add_option("--dot", o.dot, "Graphviz file with blocks as clusters");

    auto* speak_cmd = app.add_subcommand("speak", "Print the sentence for one instance");
    speak_cmd->add_option("abstraction", o.input, "abstraction file")->required();
    speak_cmd->add_option("--from", o.from, "initial state, id or description")->required();
    speak_cmd->add_option("--to", o.to, "goal state, id or description")->required();

    auto* verify = app.add_subcommand("verify", "Check that an abstraction is perfect");
    verify->add_option("abstraction", o.input, "abstraction file")->required();
    auto* exh = verify->add_flag("--exhaustive", o.exhaustive, "every instance");
    verify->add_option("--sample", o.sample, "number of sampled instances")->excludes(exh);
    verify->add_option("--seed", o.seed, "sample seed");
    verify->add_option("--cap", o.cap, "largest optimal-plan set enumerated per instance")->default_val(SIZE_MAX);

    auto* simulate = app.add_subcommand("simulate", "Execute sentence-constrained plan pairs and the no-language baseline");
    simulate->add_option("abstraction", o.input, "abstraction file")->required();
    auto* sim_exh = simulate->add_flag("--exhaustive", o.exhaustive, "every instance");
    simulate->add_option("--sample", o.sample, "number of sampled instances")->excludes(sim_exh);
    simulate->add_option("--seed", o.seed, "sample seed");
    simulate->add_option("--cap", o.cap, "largest plan set per instance");
    simulate->add_option("--csv", o.csv, "per-instance CSV to write");

    auto* bench = app.add_subcommand("bench", "Run the benchmark suite");
    bench->add_option("--suite", o.suite, "paper-table1");
    bench->add_option("--out", o.out, "CSV file to write");
    bench->add_option("--order", o.order, "saturation, degree or index");
    bench->add_option("--sample", o.sample, "instances sampled for large rows");
    bench->add_option("--seed", o.seed, "sample seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_gen(o);
        if (*rcgraph) return cmd_rcgraph(o);
        if (*abstract) return cmd_abstract(o);
        if (*speak_cmd) return cmd_speak(o);
        if (*verify) return cmd_verify(o);
        if (*simulate) return cmd_simulate(o);
        if (*bench) return cmd_bench(o);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    }
    return kUsage;
}
