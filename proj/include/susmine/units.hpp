#pragma once

#include "susmine/error.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace susmine {

/// A floating-point amount tagged with its unit.
struct Measure {
    double amount = 0.0;
    std::string unit;

    friend bool operator==(const Measure&, const Measure&) = default;
};

/// Closed set of unit identifiers plus declared linear conversions.
///
/// Declaring `a -> b` with factor f implies `b -> a` with 1/f unless the reverse is
/// declared explicitly, in which case the two must agree. Conversions compose along
/// paths; `validate()` checks that every path between two units yields the same
/// product.
class UnitRegistry {
public:
    static UnitRegistry with_defaults()
    {
        UnitRegistry reg;
        for (const char* u : {"kg", "g", "kWh", "Wh", "MJ", "count", "h"}) {
            reg.add_unit(u);
        }
        return reg;
    }

    void add_unit(const std::string& unit)
    {
        if (unit.empty()) {
            throw UnknownUnit("empty unit identifier");
        }
        units_.insert(unit);
    }

    void add_conversion(const std::string& from, const std::string& to, double factor)
    {
        require_unit(from);
        require_unit(to);
        if (!std::isfinite(factor) || factor <= 0.0) {
            throw InconsistentRegistry("conversion " + from + " -> " + to + " must have a positive finite factor");
        }
        if (from == to) {
            if (factor != 1.0) {
                throw InconsistentRegistry("self conversion of " + from + " must be 1");
            }
            return;
        }
        auto key = std::make_pair(from, to);
        if (declared_.count(key) != 0) {
            throw InconsistentRegistry("conversion " + from + " -> " + to + " declared twice");
        }
        declared_[key] = factor;
        edges_[key] = factor;
        auto rev = std::make_pair(to, from);
        if (declared_.count(rev) != 0) {
            if (std::abs(declared_[rev] * factor - 1.0) > 1e-12) {
                throw InconsistentRegistry("conversions " + from + " <-> " + to + " are not reciprocal");
            }
        } else {
            edges_[rev] = 1.0 / factor;
        }
    }

    bool has_unit(const std::string& unit) const { return units_.count(unit) != 0; }

    void require_unit(const std::string& unit) const
    {
        if (!has_unit(unit)) {
            throw UnknownUnit("unit '" + unit + "' is not in the registry");
        }
    }

    const std::set<std::string>& units() const { return units_; }
    const std::map<std::pair<std::string, std::string>, double>& declared_conversions() const
    {
        return declared_;
    }

    /// Product of factors along the shortest conversion path, if any.
    std::optional<double> factor(const std::string& from, const std::string& to) const
    {
        if (from == to) {
            return has_unit(from) ? std::optional<double>(1.0) : std::nullopt;
        }
        std::map<std::string, double> reached{{from, 1.0}};
        std::deque<std::string> queue{from};
        while (!queue.empty()) {
            std::string cur = queue.front();
            queue.pop_front();
            for (auto it = edges_.lower_bound({cur, std::string()}); it != edges_.end() && it->first.first == cur; ++it) {
                const std::string& next = it->first.second;
                if (reached.count(next) != 0) {
                    continue;
                }
                reached[next] = reached[cur] * it->second;
                if (next == to) {
                    return reached[next];
                }
                queue.push_back(next);
            }
        }
        return std::nullopt;
    }

    Measure convert(const Measure& q, const std::string& to_unit) const
    {
        auto f = factor(q.unit, to_unit);
        if (!f) {
            throw NoConversionPath("no conversion from '" + q.unit + "' to '" + to_unit + "'");
        }
        if (q.unit == to_unit) {
            return q;
        }
        return Measure{q.amount * *f, to_unit};
    }

    /// Every cycle in the conversion graph must multiply to 1 within 1e-9.
    void validate() const
    {
        std::set<std::string> seen;
        for (const auto& root : units_) {
            if (seen.count(root) != 0) {
                continue;
            }
            std::map<std::string, double> potential{{root, 1.0}};
            std::deque<std::string> queue{root};
            seen.insert(root);
            while (!queue.empty()) {
                std::string cur = queue.front();
                queue.pop_front();
                for (auto it = edges_.lower_bound({cur, std::string()}); it != edges_.end() && it->first.first == cur; ++it) {
                    const std::string& next = it->first.second;
                    double expected = potential[cur] * it->second;
                    auto found = potential.find(next);
                    if (found == potential.end()) {
                        potential[next] = expected;
                        seen.insert(next);
                        queue.push_back(next);
                    } else if (std::abs(found->second - expected) > 1e-9 * std::abs(expected)) {
                        throw InconsistentRegistry("conversion paths between '" + root + "' and '" + next +
                                                   "' disagree");
                    }
                }
            }
        }
    }

private:
    std::set<std::string> units_;
    std::map<std::pair<std::string, std::string>, double> declared_;
    std::map<std::pair<std::string, std::string>, double> edges_;
};

}  // namespace susmine
