#pragma once

#include <filesystem>
#include <string>

#include "coordlang/language.hpp"

namespace coordlang {

/// RC graph together with the domain it was built from.
struct RcDocument {
    DomainSpec domain;
    ConflictRule rule = ConflictRule::FailureStep;
    RcGraph rc;
};

std::string format_rc(const RcDocument& doc);
RcDocument parse_rc(const std::string& text);

/// Abstraction, its language, and what produced it. `added` are conflict
/// pairs introduced by refinement on top of theta.
struct AbstractionDocument {
    DomainSpec domain;
    ColorOrder order = ColorOrder::Saturation;
    std::vector<std::vector<StateId>> blocks;
    std::vector<StatePair> added;
};

std::string format_abstraction(const AbstractionDocument& doc);
AbstractionDocument parse_abstraction(const std::string& text);

/// Rebuilds the abstraction over `graph` from the stored blocks.
Abstraction restore_abstraction(const AbstractionDocument& doc, const StateGraph& graph);

/// {"instance": [s, t], "sentence": [word ids]}
std::string format_sentence(const Sentence& sentence);
Sentence parse_sentence(const std::string& text);

/// Graphviz rendering: one node per state, edges of cost 1, blocks as
/// clusters when `abs` is given, theta as a table node.
std::string format_dot(const StateGraph& graph, const RcGraph& rc, const Abstraction* abs = nullptr);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace coordlang
