#include "coordlang/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "coordlang/error.hpp"
#include "json.hpp"

namespace coordlang {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorKind::Parse, std::string(what) + ": missing field \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorKind::Parse, std::string(what) + ": field \"" + key + "\" has the wrong type");
    }
}

void only_fields(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw Error(ErrorKind::Parse, std::string(what) + ": unknown field \"" + key + "\"");
    }
}

json domain_json(const DomainSpec& spec) { return json::parse(format_domain(spec)); }

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string format_rc(const RcDocument& doc) {
    json edges = json::array();
    for (const auto& [key, cost] : doc.rc.edges) edges.push_back({key.first, key.second, cost});
    json theta = json::array();
    for (const auto& [key, entry] : doc.rc.theta) {
        json conflicts = json::array();
        for (const auto& [m, n] : entry.conflicts) conflicts.push_back({m, n});
        theta.push_back({{"from", key.first}, {"to", key.second}, {"cost", entry.cost}, {"conflicts", conflicts}});
    }
    json j = {{"domain", domain_json(doc.domain)},
              {"rule", to_string(doc.rule)},
              {"states", doc.rc.states},
              {"edges", edges},
              {"theta", theta}};
    return j.dump(1) + "\n";
}

static RcDocument parse_rc_unchecked(const std::string& text) {
    constexpr const char* what = "rc graph";
    const json j = parse_json(text, what);
    only_fields(j, {"domain", "rule", "states", "edges", "theta"}, what);
    RcDocument doc;
    doc.domain = parse_domain(field<json>(j, "domain", what).dump());
    const auto rule = parse_conflict_rule(field<std::string>(j, "rule", what));
    if (!rule) throw Error(ErrorKind::Parse, "rc graph: unknown conflict rule");
    doc.rule = *rule;
    doc.rc.states = field<std::size_t>(j, "states", what);
    for (const auto& e : field<json>(j, "edges", what)) {
        const auto v = e.get<std::vector<long long>>();
        if (v.size() != 3) throw Error(ErrorKind::Parse, "rc graph: an edge needs [from, to, cost]");
        doc.rc.edges[{static_cast<StateId>(v[0]), static_cast<StateId>(v[1])}] = static_cast<int>(v[2]);
    }
    for (const auto& t : field<json>(j, "theta", what)) {
        only_fields(t, {"from", "to", "cost", "conflicts"}, "theta entry");
        ThetaEntry entry;
        entry.cost = field<int>(t, "cost", "theta entry");
        for (const auto& c : field<json>(t, "conflicts", "theta entry")) {
            const auto v = c.get<std::vector<StateId>>();
            if (v.size() != 2) throw Error(ErrorKind::Parse, "theta entry: a conflict needs [m, n]");
            entry.conflicts.push_back(make_pair_sorted(v[0], v[1]));
        }
        doc.rc.theta[{field<StateId>(t, "from", "theta entry"), field<StateId>(t, "to", "theta entry")}] =
            std::move(entry);
    }
    return doc;
}

RcDocument parse_rc(const std::string& text) {
    try {
        return parse_rc_unchecked(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

std::string format_abstraction(const AbstractionDocument& doc) {
    json words = json::array();
    for (std::size_t b = 0; b < doc.blocks.size(); ++b) words.push_back({{"id", b}, {"members", doc.blocks[b]}});
    json added = json::array();
    for (const auto& [m, n] : doc.added) added.push_back({m, n});
    json j = {{"domain", domain_json(doc.domain)},
              {"order", to_string(doc.order)},
              {"added_conflicts", added},
              {"words", words}};
    return j.dump(1) + "\n";
}

static AbstractionDocument parse_abstraction_unchecked(const std::string& text) {
    constexpr const char* what = "abstraction";
    const json j = parse_json(text, what);
    only_fields(j, {"domain", "order", "added_conflicts", "words"}, what);
    AbstractionDocument doc;
    doc.domain = parse_domain(field<json>(j, "domain", what).dump());
    const auto order = parse_color_order(field<std::string>(j, "order", what));
    if (!order) throw Error(ErrorKind::Parse, "abstraction: unknown color order");
    doc.order = *order;
    if (j.contains("added_conflicts")) {
        for (const auto& c : j.at("added_conflicts")) {
            const auto v = c.get<std::vector<StateId>>();
            if (v.size() != 2) throw Error(ErrorKind::Parse, "abstraction: a conflict needs [m, n]");
            doc.added.push_back(make_pair_sorted(v[0], v[1]));
        }
    }
    const auto words = field<json>(j, "words", what);
    for (std::size_t i = 0; i < words.size(); ++i) {
        only_fields(words[i], {"id", "members"}, "word");
        if (field<std::size_t>(words[i], "id", "word") != i)
            throw Error(ErrorKind::Parse, "abstraction: word ids must be 0, 1, 2, ... in order");
        doc.blocks.push_back(field<std::vector<StateId>>(words[i], "members", "word"));
    }
    return doc;
}

AbstractionDocument parse_abstraction(const std::string& text) {
    try {
        return parse_abstraction_unchecked(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

Abstraction restore_abstraction(const AbstractionDocument& doc, const StateGraph& graph) {
    Coloring coloring(graph.size(), -1);
    for (std::size_t b = 0; b < doc.blocks.size(); ++b) {
        if (doc.blocks[b].empty()) throw Error(ErrorKind::InvalidParameter, "abstraction has an empty word");
        for (const auto s : doc.blocks[b]) {
            if (s >= graph.size() || coloring[s] != -1)
                throw Error(ErrorKind::InvalidParameter, "words do not partition the states");
            coloring[s] = static_cast<int>(b);
        }
    }
    if (std::find(coloring.begin(), coloring.end(), -1) != coloring.end())
        throw Error(ErrorKind::InvalidParameter, "words do not cover every state");
    return build_abstraction(graph, coloring);
}

std::string format_sentence(const Sentence& sentence) {
    json j = {{"instance", {sentence.instance.initial, sentence.instance.goal}}, {"sentence", sentence.words}};
    return j.dump() + "\n";
}

static Sentence parse_sentence_unchecked(const std::string& text) {
    constexpr const char* what = "sentence";
    const json j = parse_json(text, what);
    only_fields(j, {"instance", "sentence"}, what);
    const auto inst = field<std::vector<StateId>>(j, "instance", what);
    if (inst.size() != 2) throw Error(ErrorKind::Parse, "sentence: instance needs [s_I, s_G]");
    return Sentence{{inst[0], inst[1]}, field<std::vector<int>>(j, "sentence", what)};
}

Sentence parse_sentence(const std::string& text) {
    try {
        return parse_sentence_unchecked(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

std::string format_dot(const StateGraph& graph, const RcGraph& rc, const Abstraction* abs) {
    std::ostringstream out;
    out << "digraph rc {\n  node [shape=circle];\n";
    auto node = [&](StateId s) {
        out << "    s" << s << " [label=\"" << s << "\\n" << escape(graph.describe(s)) << "\"];\n";
    };
    if (abs) {
        for (std::size_t b = 0; b < abs->size(); ++b) {
            out << "  subgraph cluster_" << b << " {\n    label=\"word " << b << "\";\n";
            for (const auto s : abs->blocks[b]) node(s);
            out << "  }\n";
        }
    } else {
        for (StateId s = 0; s < graph.size(); ++s) node(s);
    }
    // Cost-1 edges in both directions are drawn once, undirected.
    std::set<StatePair> drawn;
    for (const auto& [key, cost] : rc.edges) {
        if (cost != 1) continue;
        const auto [s, t] = key;
        const bool both = rc.connected(t, s) && rc.edges.at({t, s}) == 1;
        if (both && !drawn.insert(make_pair_sorted(s, t)).second) continue;
        out << "  s" << s << " -> s" << t << (both ? " [dir=none]" : "") << ";\n";
    }
    if (!rc.theta.empty()) {
        out << "  theta [shape=plaintext, label=<<table border=\"1\" cellborder=\"0\">"
            << "<tr><td><b>from</b></td><td><b>to</b></td><td><b>cost</b></td><td><b>conflicts</b></td></tr>";
        for (const auto& [key, entry] : rc.theta) {
            out << "<tr><td>" << key.first << "</td><td>" << key.second << "</td><td>" << entry.cost << "</td><td>";
            for (std::size_t i = 0; i < entry.conflicts.size(); ++i)
                out << (i ? " " : "") << "(" << entry.conflicts[i].first << "," << entry.conflicts[i].second << ")";
            out << "</td></tr>";
        }
        out << "</table>>];\n";
    }
    out << "}\n";
    return out.str();
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidParameter, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidParameter, "cannot write " + path.string());
    out << text;
}

}  // namespace coordlang
