#pragma once

#include "susmine/annotation.hpp"
#include "susmine/impact.hpp"
#include "susmine/inventory.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace susmine {

struct ImpactKey {
    std::string category;
    std::string scope;

    friend bool operator==(const ImpactKey&, const ImpactKey&) = default;
    friend auto operator<=>(const ImpactKey&, const ImpactKey&) = default;
};

/// Impact amounts per (category, scope bucket). Buckets are disjoint.
using ScopedImpactVector = std::map<ImpactKey, double>;

using ScopedImpactMap = std::map<ComponentRef, ScopedImpactVector>;

struct ScopedResult {
    ScopedImpactMap impacts;
    std::vector<UncharacterizedEntry> uncharacterized;
};

/// Characterizes each inventory line within its own scope bucket.
template <class Amount>
ScopedResult characterize_scoped(const std::map<InventoryKey, Amount>& inv, const CharacterizationTable& table,
                                 const UnitRegistry& registry, Mode mode = Mode::strict)
{
    ScopedResult result;
    FactorLookup lookup(table, registry);
    for (const auto& [key, amount] : inv) {
        auto& vec = result.impacts[key.component];
        const auto& factors = lookup(key.flow, key.direction, key.unit);
        if (!factors) {
            detail::note_uncharacterized(result.uncharacterized, {key.flow, key.direction, key.unit}, mode);
            continue;
        }
        double a = as_double(amount);
        for (const auto& [category, factor] : *factors) {
            vec[{category, key.scope}] += a * factor;
        }
    }
    return result;
}

/// Scoped impacts of every concrete component carrying assignments.
inline ScopedResult scoped_impacts(const AnnotatedLog& al, Mode mode = Mode::strict)
{
    return characterize_scoped(flat_inventory(al), al.table(), al.registry(), mode);
}

/// Collapses scope buckets.
inline ImpactVector total_over_scopes(const ScopedImpactVector& sv)
{
    ImpactVector out;
    for (const auto& [key, amount] : sv) {
        out[key.category] += amount;
    }
    return out;
}

/// Entrywise sum over components.
inline ScopedImpactVector sum_components(const ScopedImpactMap& impacts)
{
    ScopedImpactVector out;
    for (const auto& [component, vec] : impacts) {
        for (const auto& [key, amount] : vec) {
            out[key] += amount;
        }
    }
    return out;
}

/// Running sums of scope buckets along an ordering, per category:
/// `amounts.at(category)[i]` is the sum of buckets `order[0..i]`.
struct CumulativeView {
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> amounts;

    double through(const std::string& category, const std::string& scope) const
    {
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (order[i] == scope) {
                return amounts.at(category)[i];
            }
        }
        throw UnknownScope("scope '" + scope + "' is not in the cumulative order");
    }
};

/// `order` must be a permutation of the scope set, optionally with `unscoped`
/// inserted at any position.
inline CumulativeView cumulative_view(const ScopedImpactVector& sv, const ScopeSet& scopes,
                                      const std::vector<std::string>& order)
{
    std::set<std::string> seen;
    for (const auto& label : order) {
        if (label != unscoped && !scopes.contains(label)) {
            throw UnknownScope("scope '" + label + "' is not in scope set '" + scopes.name + "'");
        }
        if (!seen.insert(label).second) {
            throw SchemaError("scope '" + label + "' appears twice in the cumulative order");
        }
    }
    for (const auto& label : scopes.scopes) {
        if (seen.count(label) == 0) {
            throw SchemaError("cumulative order omits scope '" + label + "'");
        }
    }
    CumulativeView view;
    view.order = order;
    std::set<std::string> categories;
    for (const auto& [key, amount] : sv) {
        categories.insert(key.category);
    }
    for (const auto& category : categories) {
        std::vector<double> running;
        double acc = 0.0;
        for (const auto& label : order) {
            if (auto it = sv.find({category, label}); it != sv.end()) {
                acc += it->second;
            }
            running.push_back(acc);
        }
        view.amounts[category] = std::move(running);
    }
    return view;
}

}  // namespace susmine
