#pragma once

#include "susmine/annotation.hpp"
#include "susmine/impact.hpp"
#include "susmine/scoping.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace susmine {

struct TargetWeight {
    ComponentRef target;
    double weight = 0.0;
};

struct WeightResult {
    std::vector<TargetWeight> weights;  // sorted by target
    std::vector<std::string> warnings;
};

/// Resolves the rule's target selector to a sorted, duplicate-free component list.
inline std::vector<ComponentRef> select_targets(const AllocationRule& rule, const EventLog& log)
{
    std::set<ComponentRef> targets;
    if (const auto* explicit_refs = std::get_if<std::vector<ComponentRef>>(&rule.targets)) {
        for (const auto& t : *explicit_refs) {
            resolve_component(t, log);
            targets.insert(t);
        }
    } else {
        const auto& sel = std::get<RelatedEvents>(rule.targets);
        std::vector<std::string> object_ids;
        if (rule.source.kind == ComponentKind::object_instance) {
            object_ids.push_back(rule.source.id);
        } else if (rule.source.kind == ComponentKind::object_type) {
            for (const auto* o : log.objects_of_type(rule.source.id)) {
                object_ids.push_back(o->object_id);
            }
        } else {
            throw NoTargets("related_events selection needs an object source, got '" + rule.source.to_string() + "'");
        }
        for (const auto& oid : object_ids) {
            for (const auto* r : log.relations_of_object(oid)) {
                bool wanted = sel.qualifiers.empty() ||
                              std::find(sel.qualifiers.begin(), sel.qualifiers.end(), r->qualifier) != sel.qualifiers.end();
                if (wanted && log.find_event(r->event_id) != nullptr) {
                    targets.insert(ComponentRef::activity_instance(r->event_id));
                }
            }
        }
    }
    if (targets.empty()) {
        throw NoTargets("allocation rule for '" + rule.source.to_string() + "' selects no targets");
    }
    return {targets.begin(), targets.end()};
}

inline const AttributeMap* attributes_of(const ComponentRef& c, const EventLog& log)
{
    if (c.kind == ComponentKind::activity_instance) {
        if (const auto* e = log.find_event(c.id)) {
            return &e->attributes;
        }
    } else if (c.kind == ComponentKind::object_instance) {
        if (const auto* o = log.find_object(c.id)) {
            return &o->attributes;
        }
    }
    return nullptr;
}

/// Non-negative weights summing to one over the rule's targets.
///
/// Proportional keys divide each target's attribute value by the sum over targets.
/// Missing attributes are an error in strict mode and count as zero in lenient
/// mode; an all-zero key falls back to equal weights with a warning.
inline WeightResult allocation_weights(const AllocationRule& rule, const AnnotatedLog& al, Mode mode = Mode::strict)
{
    WeightResult result;
    auto targets = select_targets(rule, al.log());
    const double n = static_cast<double>(targets.size());
    auto equal = [&]() {
        result.weights.clear();
        for (const auto& t : targets) {
            result.weights.push_back({t, 1.0 / n});
        }
    };
    if (rule.key.kind == KeyKind::equal) {
        equal();
        return result;
    }
    const std::string attribute = rule.key.attribute_name();
    std::vector<double> values;
    double total = 0.0;
    for (const auto& t : targets) {
        const AttributeMap* attrs = attributes_of(t, al.log());
        std::optional<double> v;
        if (attrs != nullptr) {
            if (auto it = attrs->find(attribute); it != attrs->end()) {
                v = numeric_value(it->second);
            }
        }
        if (!v) {
            if (mode == Mode::strict) {
                throw MissingAttribute("allocation target '" + t.to_string() + "' lacks numeric attribute '" +
                                       attribute + "'");
            }
            result.warnings.push_back("allocation target '" + t.to_string() + "' lacks attribute '" + attribute +
                                      "'; counted as 0");
            v = 0.0;
        }
        if (*v < 0.0 || !std::isfinite(*v)) {
            throw SchemaError("allocation key '" + attribute + "' on '" + t.to_string() +
                              "' must be finite and non-negative");
        }
        values.push_back(*v);
        total += *v;
    }
    if (total == 0.0) {
        result.warnings.push_back("allocation of '" + rule.source.to_string() + "': all '" + attribute +
                                  "' values are zero; falling back to equal weights");
        equal();
        return result;
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        result.weights.push_back({targets[i], values[i] / total});
    }
    return result;
}

struct LedgerEntry {
    ComponentRef source;
    ComponentRef target;
    std::string category;
    std::string scope;
    double amount = 0.0;
    double weight = 0.0;
};

/// Per (source, category, scope): source_amount = allocated + residual.
struct ResidualEntry {
    ComponentRef source;
    std::string category;
    std::string scope;
    double source_amount = 0.0;
    double allocated = 0.0;
    double residual = 0.0;
};

struct AllocationLedger {
    std::vector<LedgerEntry> entries;
    std::vector<ResidualEntry> residuals;
    std::vector<std::string> warnings;
};

struct AllocationResult {
    ScopedImpactMap impacts;
    AllocationLedger ledger;
};

/// Moves `fraction` of each rule source's scoped impact vector to its targets.
///
/// Every transfer is computed from the impacts as passed in, so a target that is
/// itself a source does not forward what it receives. Category and scope labels
/// are preserved on transfer.
inline AllocationResult apply_allocations(const AnnotatedLog& al, const ScopedImpactMap& impacts,
                                          const std::vector<AllocationRule>& rules, Mode mode = Mode::strict)
{
    std::set<ComponentRef> sources;
    for (const auto& rule : rules) {
        if (!sources.insert(rule.source).second) {
            throw DuplicateSource("'" + rule.source.to_string() + "' is the source of more than one allocation rule");
        }
    }
    std::vector<const AllocationRule*> ordered;
    for (const auto& rule : rules) {
        ordered.push_back(&rule);
    }
    std::sort(ordered.begin(), ordered.end(), [](const AllocationRule* a, const AllocationRule* b) {
        return std::tie(a->source.id, a->source.kind) < std::tie(b->source.id, b->source.kind);
    });

    AllocationResult result{impacts, {}};
    for (const auto* rule : ordered) {
        if (rule->fraction.is_zero()) {
            continue;
        }
        WeightResult weights = allocation_weights(*rule, al, mode);
        result.ledger.warnings.insert(result.ledger.warnings.end(), weights.warnings.begin(), weights.warnings.end());
        auto src = impacts.find(rule->source);
        if (src == impacts.end()) {
            continue;
        }
        const double fraction = rule->fraction.to_double();
        for (const auto& [key, amount] : src->second) {
            const double allocated = fraction * amount;
            double moved = 0.0;
            for (const auto& tw : weights.weights) {
                const double transfer = allocated * tw.weight;
                result.impacts[tw.target][key] += transfer;
                moved += transfer;
                result.ledger.entries.push_back({rule->source, tw.target, key.category, key.scope, transfer, tw.weight});
            }
            result.impacts[rule->source][key] -= moved;
            result.ledger.residuals.push_back({rule->source, key.category, key.scope, amount, moved, amount - moved});
        }
    }
    std::stable_sort(result.ledger.entries.begin(), result.ledger.entries.end(),
                     [](const LedgerEntry& a, const LedgerEntry& b) {
                         return std::tie(a.source.id, a.source.kind, a.target.id, a.target.kind, a.category, a.scope) <
                                std::tie(b.source.id, b.source.kind, b.target.id, b.target.kind, b.category, b.scope);
                     });
    return result;
}

inline std::string ledger_csv(const AllocationLedger& ledger)
{
    std::string out = "source_kind,source_id,target_kind,target_id,category,scope,weight,amount\n";
    for (const auto& e : ledger.entries) {
        out += std::string(to_string(e.source.kind)) + "," + detail::csv_field(e.source.id) + "," +
               std::string(to_string(e.target.kind)) + "," + detail::csv_field(e.target.id) + "," +
               detail::csv_field(e.category) + "," + detail::csv_field(e.scope) + "," + format_double(e.weight) +
               "," + format_double(e.amount) + "\n";
    }
    return out;
}

}  // namespace susmine
