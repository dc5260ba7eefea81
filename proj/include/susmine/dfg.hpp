#pragma once

#include "susmine/annotation.hpp"
#include "susmine/inventory.hpp"
#include "susmine/model.hpp"
#include "susmine/ocel.hpp"
#include "susmine/scoping.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace susmine {

struct DfgNode {
    std::size_t event_count = 0;
    ScopedImpactVector impacts;
};

/// Directly-follows graph over activity types, one trace per object.
struct AnnotatedDFG {
    std::map<std::string, DfgNode> nodes;
    std::map<std::pair<std::string, std::string>, std::size_t> edges;
    std::string log_digest;
    std::map<std::string, std::string> category_units;
};

/// Flattens the log per object: each object's related events, ordered by
/// (timestamp, event_id), form a trace whose consecutive activity pairs are edges.
/// Events without objects still count toward their node.
inline AnnotatedDFG build_dfg(const EventLog& log)
{
    AnnotatedDFG dfg;
    dfg.log_digest = log_digest(log);
    for (const auto& a : log.activity_types()) {
        dfg.nodes[a];
    }
    for (const auto& e : log.events()) {
        ++dfg.nodes[e.activity].event_count;
    }
    std::map<std::string, std::set<std::string>> traces;
    for (const auto& r : log.relations()) {
        if (log.find_event(r.event_id) != nullptr) {
            traces[r.object_id].insert(r.event_id);
        }
    }
    for (const auto& [object_id, event_ids] : traces) {
        std::vector<const Event*> trace;
        for (const auto& id : event_ids) {
            trace.push_back(log.find_event(id));
        }
        std::sort(trace.begin(), trace.end(), [](const Event* a, const Event* b) {
            return std::tie(a->timestamp, a->event_id) < std::tie(b->timestamp, b->event_id);
        });
        for (std::size_t i = 1; i < trace.size(); ++i) {
            ++dfg.edges[{trace[i - 1]->activity, trace[i]->activity}];
        }
    }
    return dfg;
}

/// Attaches activity-type impact totals: each node receives the impacts of its
/// event instances plus those assigned directly to its activity type.
inline AnnotatedDFG annotate_dfg(AnnotatedDFG dfg, const AnnotatedLog& al, const ScopedImpactMap& impacts)
{
    if (dfg.log_digest != al.digest()) {
        throw LogMismatch("graph was built from log " + dfg.log_digest.substr(0, 12) + ", results from " +
                          al.digest().substr(0, 12));
    }
    for (const auto& [name, info] : al.table().categories()) {
        dfg.category_units[name] = info.impact_unit;
    }
    for (const auto& [component, vec] : impacts) {
        auto target = rollup_target(component, RollupLevel::activity_type, al.log());
        if (!target) {
            continue;
        }
        auto& node = dfg.nodes[target->id];
        for (const auto& [key, amount] : vec) {
            node.impacts[key] += amount;
        }
    }
    return dfg;
}

namespace detail {

inline std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

/// Graphviz DOT text; byte-identical for identical graphs.
inline std::string emit_dot(const AnnotatedDFG& dfg)
{
    if (dfg.nodes.empty() && dfg.edges.empty()) {
        return "digraph {}\n";
    }
    std::string out = "digraph {\n  rankdir=LR;\n  node [shape=box];\n";
    for (const auto& [name, node] : dfg.nodes) {
        std::string label = detail::dot_escape(name) + "\\n" + std::to_string(node.event_count) +
                            (node.event_count == 1 ? " event" : " events");
        for (const auto& [key, amount] : node.impacts) {
            label += "\\n" + detail::dot_escape(key.category) + " [" + detail::dot_escape(key.scope) +
                     "]: " + format_double(amount);
            if (auto it = dfg.category_units.find(key.category); it != dfg.category_units.end()) {
                label += " " + detail::dot_escape(it->second);
            }
        }
        out += "  \"" + detail::dot_escape(name) + "\" [label=\"" + label + "\"];\n";
    }
    for (const auto& [edge, freq] : dfg.edges) {
        out += "  \"" + detail::dot_escape(edge.first) + "\" -> \"" + detail::dot_escape(edge.second) +
               "\" [label=\"" + std::to_string(freq) + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace susmine
