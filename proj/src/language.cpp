#include "coordlang/language.hpp"

#include <algorithm>

#include "coordlang/error.hpp"

namespace coordlang {

bool Word::contains(StateId s) const { return std::binary_search(members.begin(), members.end(), s); }

Language language_from_abstraction(const Abstraction& abs) {
    Language lang;
    lang.word_of = abs.block_of;
    lang.words.reserve(abs.size());
    for (std::size_t b = 0; b < abs.size(); ++b) {
        Word w{static_cast<int>(b), abs.blocks[b]};
        std::sort(w.members.begin(), w.members.end());
        lang.words.push_back(std::move(w));
    }
    return lang;
}

bool compatible(std::span<const Word> sentence, std::span<const StateId> states) {
    std::size_t pos = 0;
    for (const auto& word : sentence) {
        while (pos < states.size() && !word.contains(states[pos])) ++pos;
        if (pos == states.size()) return false;
        ++pos;
    }
    return true;
}

bool compatible(const Language& lang, const Sentence& sentence, std::span<const StateId> states) {
    std::vector<Word> words;
    for (const int id : sentence.words) {
        if (id < 0 || id >= static_cast<int>(lang.size()))
            throw Error(ErrorKind::InvalidParameter, "word id " + std::to_string(id) + " is not in the language");
        words.push_back(lang.words[id]);
    }
    return compatible(words, states);
}

namespace {

/// Positions in rho the segmentation may currently be in, as a bitmap over
/// 0..|rho|-1. Advancing stays in the current run or opens the next one.
class Segmenter {
public:
    Segmenter(const Abstraction& abs, std::span<const int> rho) : abs_(abs), rho_(rho) {}

    std::vector<bool> start(StateId first) const {
        std::vector<bool> at(rho_.size(), false);
        if (!rho_.empty() && abs_.block_of[first] == rho_[0]) at[0] = true;
        return at;
    }

    std::vector<bool> step(const std::vector<bool>& at, StateId next) const {
        std::vector<bool> out(rho_.size(), false);
        const int b = abs_.block_of[next];
        for (std::size_t j = 0; j < rho_.size(); ++j) {
            if (!at[j]) continue;
            if (rho_[j] == b) out[j] = true;
            if (j + 1 < rho_.size() && rho_[j + 1] == b) out[j + 1] = true;
        }
        return out;
    }

    bool finished(const std::vector<bool>& at) const { return !rho_.empty() && at.back(); }

    static bool alive(const std::vector<bool>& at) { return std::find(at.begin(), at.end(), true) != at.end(); }

private:
    const Abstraction& abs_;
    std::span<const int> rho_;
};

bool valid_blocks(const Abstraction& abs, std::span<const int> rho) {
    return std::all_of(rho.begin(), rho.end(), [&](int b) { return b >= 0 && b < static_cast<int>(abs.size()); });
}

}  // namespace

bool expresses(const Abstraction& abs, Instance inst, std::span<const int> rho, const Plan& plan) {
    const auto& st = plan.states;
    if (st.empty() || st.front() != inst.initial || st.back() != inst.goal) return false;
    if (!valid_blocks(abs, rho)) return false;
    if (st.size() <= 2) return rho.empty();
    const Segmenter seg(abs, rho);
    auto at = seg.start(st[1]);
    for (std::size_t i = 2; i + 1 < st.size() && Segmenter::alive(at); ++i) at = seg.step(at, st[i]);
    return seg.finished(at);
}

Sentence speak(const Abstraction& abs, const Language& lang, const StateGraph& graph, const DistanceTable& dist,
               Instance inst) {
    if (lang.size() != abs.size()) throw Error(ErrorKind::InvalidParameter, "language does not match the abstraction");
    Sentence sentence{inst, {}};
    if (inst.initial == inst.goal) return sentence;
    sentence.words = block_path(abs, canonical_plan(plan_dag(graph, dist, inst)));
    return sentence;
}

std::vector<Plan> expressed_plans(const Abstraction& abs, const StateGraph& graph, const DistanceTable& dist,
                                  Instance inst, std::span<const int> rho, std::size_t cap) {
    std::vector<Plan> plans;
    if (inst.initial == inst.goal) {
        if (rho.empty()) plans.push_back(Plan{{inst.initial}, {}});
        return plans;
    }
    const PlanDag dag = plan_dag(graph, dist, inst);
    if (!valid_blocks(abs, rho)) return plans;
    const Segmenter seg(abs, rho);
    const auto n = dag.nodes.size();

    // completes[i][j]: from node i in rho position j the goal is reachable
    // with the last run ending at the last intermediate state.
    std::vector<std::vector<bool>> completes(n, std::vector<bool>(rho.size(), false));
    for (std::size_t i = n; i-- > 0;) {
        if (dag.layer[i] >= dag.length - 1) {
            if (dag.layer[i] == dag.length - 1 && !rho.empty()) completes[i].back() = true;
            continue;
        }
        for (std::size_t j = 0; j < rho.size(); ++j) {
            std::vector<bool> at(rho.size(), false);
            at[j] = true;
            for (const auto& e : dag.out[i]) {
                const auto next = seg.step(at, e.to);
                const auto k = dag.index.at(e.to);
                for (std::size_t m = 0; m < rho.size(); ++m) {
                    if (next[m] && completes[k][m]) completes[i][j] = true;
                }
            }
        }
    }
    auto viable = [&](StateId s, const std::vector<bool>& at) {
        const auto k = dag.index.at(s);
        for (std::size_t m = 0; m < rho.size(); ++m)
            if (at[m] && completes[k][m]) return true;
        return false;
    };

    Plan current;
    current.states.push_back(inst.initial);
    auto walk = [&](auto&& self, StateId u, const std::vector<bool>& at) -> void {
        for (const auto& e : dag.successors(u)) {
            const bool last = static_cast<int>(current.actions.size()) + 1 == dag.length;
            std::vector<bool> next;
            if (last) {
                if (dag.length == 1 ? !rho.empty() : !seg.finished(at)) continue;
            } else {
                next = current.actions.empty() ? seg.start(e.to) : seg.step(at, e.to);
                if (!viable(e.to, next)) continue;
            }
            current.states.push_back(e.to);
            current.actions.push_back(e.action);
            if (last) {
                if (plans.size() == cap)
                    throw Error(ErrorKind::PlanSetTooLarge, "block path expresses more than " + std::to_string(cap) +
                                                                " optimal plans from " + graph.describe(inst.initial) +
                                                                " to " + graph.describe(inst.goal));
                plans.push_back(current);
            } else {
                self(self, e.to, next);
            }
            current.states.pop_back();
            current.actions.pop_back();
        }
    };
    walk(walk, inst.initial, {});
    return plans;
}

}  // namespace coordlang
