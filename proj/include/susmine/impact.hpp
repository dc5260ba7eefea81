#pragma once

#include "susmine/annotation.hpp"
#include "susmine/error.hpp"
#include "susmine/inventory.hpp"
#include "susmine/units.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace susmine {

enum class Mode { strict, lenient };

inline std::string_view to_string(Mode m) { return m == Mode::strict ? "strict" : "lenient"; }

/// Impact amounts per category, each in the category's impact unit.
using ImpactVector = std::map<std::string, double>;

/// A flow the table could not characterize (reported in lenient mode).
struct UncharacterizedEntry {
    std::string flow;
    Direction direction = Direction::output;
    std::string unit;

    friend bool operator==(const UncharacterizedEntry&, const UncharacterizedEntry&) = default;
    friend auto operator<=>(const UncharacterizedEntry&, const UncharacterizedEntry&) = default;
};

/// Per-category factors for one (flow, direction, unit), unit conversion folded in.
using EffectiveFactors = std::vector<std::pair<std::string, double>>;

/// Looks up characterization factors for an inventory line.
///
/// Returns nothing when the table has no entry for the flow in that direction.
/// Prefers an entry in the same unit; otherwise takes the first entry (by unit)
/// reachable through the registry. Throws UnitMismatch when entries exist but
/// none is reachable.
class FactorLookup {
public:
    FactorLookup(const CharacterizationTable& table, const UnitRegistry& registry)
        : table_(table), registry_(registry)
    {
    }

    const std::optional<EffectiveFactors>& operator()(const std::string& flow, Direction direction,
                                                      const std::string& unit)
    {
        auto key = std::make_tuple(flow, direction, unit);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        return cache_.emplace(key, compute(flow, direction, unit)).first->second;
    }

private:
    std::optional<EffectiveFactors> compute(const std::string& flow, Direction direction, const std::string& unit) const
    {
        auto entries = table_.entries_for(flow, direction);
        if (entries.empty()) {
            return std::nullopt;
        }
        const CharacterizationEntry* chosen = nullptr;
        double conversion = 1.0;
        for (const auto* e : entries) {
            if (e->unit == unit) {
                chosen = e;
                break;
            }
        }
        if (chosen == nullptr) {
            for (const auto* e : entries) {
                if (auto f = registry_.factor(unit, e->unit)) {
                    chosen = e;
                    conversion = *f;
                    break;
                }
            }
        }
        if (chosen == nullptr) {
            throw UnitMismatch("flow '" + flow + "' in unit '" + unit +
                               "' has no characterization entry reachable by unit conversion");
        }
        EffectiveFactors out;
        for (const auto& [category, factor] : chosen->factors) {
            out.emplace_back(category, factor * conversion);
        }
        return out;
    }

    const CharacterizationTable& table_;
    const UnitRegistry& registry_;
    std::map<std::tuple<std::string, Direction, std::string>, std::optional<EffectiveFactors>> cache_;
};

inline double as_double(const Decimal& d) { return d.to_double(); }
inline double as_double(double d) { return d; }

struct CharacterizationResult {
    std::map<ComponentRef, ImpactVector> impacts;
    std::vector<UncharacterizedEntry> uncharacterized;
};

namespace detail {

inline void note_uncharacterized(std::vector<UncharacterizedEntry>& list, UncharacterizedEntry entry, Mode mode)
{
    if (mode == Mode::strict) {
        throw UncharacterizedFlow("flow '" + entry.flow + "' (" + std::string(to_string(entry.direction)) + ", " +
                                  entry.unit + ") has no characterization factor");
    }
    auto pos = std::lower_bound(list.begin(), list.end(), entry);
    if (pos == list.end() || !(*pos == entry)) {
        list.insert(pos, std::move(entry));
    }
}

}  // namespace detail

/// impact(c, k) = sum over inventory lines of c: amount * factor(flow -> k).
template <class Amount>
CharacterizationResult characterize(const std::map<InventoryKey, Amount>& inv, const CharacterizationTable& table,
                                    const UnitRegistry& registry, Mode mode = Mode::strict)
{
    CharacterizationResult result;
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
            vec[category] += a * factor;
        }
    }
    return result;
}

/// Partition of an impact vector by the class of each category. All three classes
/// are present in the result, possibly empty.
inline std::map<ImpactClass, ImpactVector> classify_impacts(const ImpactVector& vec, const CharacterizationTable& table)
{
    std::map<ImpactClass, ImpactVector> out{
        {ImpactClass::climate, {}}, {ImpactClass::environmental, {}}, {ImpactClass::social, {}}};
    for (const auto& [category, amount] : vec) {
        out[table.category(category).impact_class][category] = amount;
    }
    return out;
}

}  // namespace susmine
