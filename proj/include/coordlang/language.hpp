#pragma once

#include <span>
#include <vector>

#include "coordlang/abstraction.hpp"

namespace coordlang {

/// A word names a set of states. Words built from an abstraction are its blocks.
struct Word {
    int id = 0;
    std::vector<StateId> members;  // sorted

    bool contains(StateId s) const;
    bool operator==(const Word&) const = default;
};

/// Words plus concatenation, the only operator used.
struct Language {
    std::vector<Word> words;  // words[i].id == i
    std::vector<int> word_of;  // state -> word

    std::size_t size() const noexcept { return words.size(); }
    bool operator==(const Language&) const = default;
};

struct Sentence {
    Instance instance;
    std::vector<int> words;  // adjacent ids distinct

    bool operator==(const Sentence&) const = default;
};

Language language_from_abstraction(const Abstraction& abs);

/// Some strictly increasing index map places the i-th word on a state of
/// `states` that belongs to it. Greedy earliest placement decides this.
bool compatible(std::span<const Word> sentence, std::span<const StateId> states);
bool compatible(const Language& lang, const Sentence& sentence, std::span<const StateId> states);

/// s_I . rho . s_G expresses `plan`: the plan's intermediate states split into
/// consecutive nonempty runs, the i-th lying in block rho[i].
bool expresses(const Abstraction& abs, Instance inst, std::span<const int> rho, const Plan& plan);

/// Block path of the canonical optimal plan. Empty when s_I == s_G.
/// Throws NoPlan when the goal is unreachable.
Sentence speak(const Abstraction& abs, const Language& lang, const StateGraph& graph, const DistanceTable& dist,
               Instance inst);

/// Every optimal plan that s_I . rho . s_G expresses, in lexicographic order.
/// Throws PlanSetTooLarge once more than `cap` plans are found.
std::vector<Plan> expressed_plans(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist,
                                  Instance inst, std::span<const int> rho, std::size_t cap = kDefaultPlanCap);

}  // namespace coordlang
