#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coordlang/abstraction.hpp"

namespace coordlang {

struct BenchConfig {
    std::string problem;  // "T&O #1", "GW #3", ...
    DomainSpec domain;
};

/// The five Turn-and-Open (0..4 balls) and five grid-loop (2x2, 3x3, 3x4,
/// 4x4, 4x5) configurations.
std::vector<BenchConfig> paper_table1_suite();

struct BenchOptions {
    ColorOrder order = ColorOrder::Saturation;
    std::size_t exhaustive_limit = 20000;  // instance pairs verified exhaustively up to this
    std::size_t sample = 1000;
    std::uint64_t seed = 7;
};

struct BenchRow {
    std::string problem;
    std::size_t pairs = 0;
    std::size_t states = 0;
    std::size_t abs_states = 0;
    double time_s = 0;
    // Not part of the CSV.
    std::size_t theta_colors = 0;  // colors before refinement
    std::size_t added_conflicts = 0;
    bool exhaustive = false;
    std::size_t verified_instances = 0;
    std::size_t violations = 0;
    bool proper = false;
};

/// gen -> graph -> rc graph -> color -> refine/verify, timed end to end.
BenchRow run_bench(const BenchConfig& config, const BenchOptions& options = {});

/// Header: problem,pairs,states,abs_states,time_s
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace coordlang
