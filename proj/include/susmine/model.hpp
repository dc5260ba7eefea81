#pragma once

#include "susmine/decimal.hpp"
#include "susmine/error.hpp"
#include "susmine/units.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace susmine {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

/// Parses ISO-8601 date-times (`YYYY-MM-DDTHH:MM:SS[.fraction][Z|+HH:MM|-HH:MM]`)
/// and normalizes them to UTC. A missing offset is read as UTC. Sub-microsecond
/// digits are truncated.
inline std::optional<Timestamp> parse_timestamp(std::string_view s)
{
    auto digits = [&](std::size_t pos, std::size_t n, int& out) {
        if (pos + n > s.size()) {
            return false;
        }
        out = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (s[i] < '0' || s[i] > '9') {
                return false;
            }
            out = out * 10 + (s[i] - '0');
        }
        return true;
    };
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!digits(0, 4, y) || s.size() < 19 || s[4] != '-' || !digits(5, 2, mo) || s[7] != '-' ||
        !digits(8, 2, d) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !digits(11, 2, h) ||
        s[13] != ':' || !digits(14, 2, mi) || s[16] != ':' || !digits(17, 2, sec)) {
        return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) {
        return std::nullopt;
    }
    std::size_t pos = 19;
    std::int64_t micros = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        int scale = 100000;
        std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            if (scale > 0) {
                micros += (s[pos] - '0') * scale;
                scale /= 10;
            }
            ++pos;
        }
        if (pos == start) {
            return std::nullopt;
        }
    }
    std::int64_t offset_minutes = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' || s[pos] == 'z') {
            ++pos;
        } else if (s[pos] == '+' || s[pos] == '-') {
            int oh = 0, om = 0;
            int sign = s[pos] == '-' ? -1 : 1;
            if (!digits(pos + 1, 2, oh)) {
                return std::nullopt;
            }
            std::size_t mpos = pos + 3;
            if (mpos < s.size() && s[mpos] == ':') {
                ++mpos;
            }
            if (!digits(mpos, 2, om) || oh > 23 || om > 59) {
                return std::nullopt;
            }
            offset_minutes = sign * (oh * 60 + om);
            pos = mpos + 2;
        } else {
            return std::nullopt;
        }
    }
    if (pos != s.size()) {
        return std::nullopt;
    }
    using namespace std::chrono;
    auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} + microseconds{micros} -
              minutes{offset_minutes};
    return time_point_cast<microseconds>(tp);
}

/// Canonical UTC rendering; fractional seconds only when non-zero, trailing zeros trimmed.
inline std::string format_timestamp(Timestamp t)
{
    using namespace std::chrono;
    auto day = floor<days>(t);
    year_month_day ymd{day};
    auto tod = t - day;
    auto total_us = tod.count();
    std::int64_t secs = total_us / 1000000;
    std::int64_t us = total_us % 1000000;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(secs / 3600), static_cast<long long>((secs / 60) % 60),
                  static_cast<long long>(secs % 60));
    std::string out = buf;
    if (us != 0) {
        char frac[16];
        std::snprintf(frac, sizeof(frac), ".%06lld", static_cast<long long>(us));
        std::string f = frac;
        while (f.back() == '0') {
            f.pop_back();
        }
        out += f;
    }
    return out + "Z";
}

/// Attribute value as it appears in the log.
using ScalarValue = std::variant<bool, std::int64_t, double, std::string>;

inline std::optional<double> numeric_value(const ScalarValue& v)
{
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return static_cast<double>(*i);
    }
    if (const auto* d = std::get_if<double>(&v)) {
        return *d;
    }
    return std::nullopt;
}

using AttributeMap = std::map<std::string, ScalarValue>;

struct Event {
    std::string event_id;
    std::string activity;
    Timestamp timestamp{};
    AttributeMap attributes;

    friend bool operator==(const Event&, const Event&) = default;
};

struct ObjectInstance {
    std::string object_id;
    std::string object_type;
    AttributeMap attributes;

    friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

/// Qualified event-to-object relation.
struct Relation {
    std::string event_id;
    std::string object_id;
    std::string qualifier;

    friend bool operator==(const Relation&, const Relation&) = default;
};

/// Object-centric event log. Immutable after construction.
class EventLog {
public:
    EventLog() = default;

    EventLog(std::set<std::string> activity_types, std::set<std::string> object_types, std::vector<Event> events,
             std::vector<ObjectInstance> objects, std::vector<Relation> relations)
        : activity_types_(std::move(activity_types)),
          object_types_(std::move(object_types)),
          events_(std::move(events)),
          objects_(std::move(objects)),
          relations_(std::move(relations))
    {
        // First occurrence wins on duplicate ids; validate_log reports the duplicates.
        for (std::size_t i = 0; i < events_.size(); ++i) {
            event_index_.try_emplace(events_[i].event_id, i);
        }
        for (std::size_t i = 0; i < objects_.size(); ++i) {
            object_index_.try_emplace(objects_[i].object_id, i);
        }
        for (std::size_t i = 0; i < relations_.size(); ++i) {
            relations_by_event_[relations_[i].event_id].push_back(i);
            relations_by_object_[relations_[i].object_id].push_back(i);
        }
    }

    const std::set<std::string>& activity_types() const { return activity_types_; }
    const std::set<std::string>& object_types() const { return object_types_; }
    const std::vector<Event>& events() const { return events_; }
    const std::vector<ObjectInstance>& objects() const { return objects_; }
    const std::vector<Relation>& relations() const { return relations_; }

    const Event* find_event(const std::string& id) const
    {
        auto it = event_index_.find(id);
        return it == event_index_.end() ? nullptr : &events_[it->second];
    }

    const ObjectInstance* find_object(const std::string& id) const
    {
        auto it = object_index_.find(id);
        return it == object_index_.end() ? nullptr : &objects_[it->second];
    }

    std::vector<const Event*> events_of_activity(const std::string& activity) const
    {
        std::vector<const Event*> out;
        for (const auto& e : events_) {
            if (e.activity == activity) {
                out.push_back(&e);
            }
        }
        return out;
    }

    std::vector<const ObjectInstance*> objects_of_type(const std::string& type) const
    {
        std::vector<const ObjectInstance*> out;
        for (const auto& o : objects_) {
            if (o.object_type == type) {
                out.push_back(&o);
            }
        }
        return out;
    }

    std::vector<const Relation*> relations_of_event(const std::string& event_id) const
    {
        return collect(relations_by_event_, event_id);
    }

    std::vector<const Relation*> relations_of_object(const std::string& object_id) const
    {
        return collect(relations_by_object_, object_id);
    }

    friend bool operator==(const EventLog& a, const EventLog& b)
    {
        return a.activity_types_ == b.activity_types_ && a.object_types_ == b.object_types_ &&
               a.events_ == b.events_ && a.objects_ == b.objects_ && a.relations_ == b.relations_;
    }

    /// Events ordered by (timestamp, event_id).
    std::vector<const Event*> sorted_events() const
    {
        std::vector<const Event*> out;
        out.reserve(events_.size());
        for (const auto& e : events_) {
            out.push_back(&e);
        }
        std::stable_sort(out.begin(), out.end(), [](const Event* a, const Event* b) {
            if (a->timestamp != b->timestamp) {
                return a->timestamp < b->timestamp;
            }
            return a->event_id < b->event_id;
        });
        return out;
    }

private:
    std::vector<const Relation*> collect(const std::unordered_map<std::string, std::vector<std::size_t>>& idx,
                                         const std::string& key) const
    {
        std::vector<const Relation*> out;
        if (auto it = idx.find(key); it != idx.end()) {
            for (auto i : it->second) {
                out.push_back(&relations_[i]);
            }
        }
        return out;
    }

    std::set<std::string> activity_types_;
    std::set<std::string> object_types_;
    std::vector<Event> events_;
    std::vector<ObjectInstance> objects_;
    std::vector<Relation> relations_;
    std::unordered_map<std::string, std::size_t> event_index_;
    std::unordered_map<std::string, std::size_t> object_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> relations_by_event_;
    std::unordered_map<std::string, std::vector<std::size_t>> relations_by_object_;
};

enum class ComponentKind { process, activity_type, activity_instance, object_type, object_instance };

inline std::string_view to_string(ComponentKind k)
{
    switch (k) {
    case ComponentKind::process: return "process";
    case ComponentKind::activity_type: return "activity_type";
    case ComponentKind::activity_instance: return "activity_instance";
    case ComponentKind::object_type: return "object_type";
    case ComponentKind::object_instance: return "object_instance";
    }
    return "process";
}

inline std::optional<ComponentKind> parse_component_kind(std::string_view s)
{
    for (auto k : {ComponentKind::process, ComponentKind::activity_type, ComponentKind::activity_instance,
                   ComponentKind::object_type, ComponentKind::object_instance}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

inline bool is_type_level(ComponentKind k)
{
    return k == ComponentKind::activity_type || k == ComponentKind::object_type;
}

inline bool is_instance_level(ComponentKind k)
{
    return k == ComponentKind::activity_instance || k == ComponentKind::object_instance;
}

/// Names any BPM concept a sustainability annotation can attach to.
struct ComponentRef {
    ComponentKind kind = ComponentKind::process;
    std::string id;  // empty for the process

    static ComponentRef process() { return {}; }
    static ComponentRef activity_type(std::string id) { return {ComponentKind::activity_type, std::move(id)}; }
    static ComponentRef activity_instance(std::string id) { return {ComponentKind::activity_instance, std::move(id)}; }
    static ComponentRef object_type(std::string id) { return {ComponentKind::object_type, std::move(id)}; }
    static ComponentRef object_instance(std::string id) { return {ComponentKind::object_instance, std::move(id)}; }

    std::string to_string() const
    {
        std::string s(susmine::to_string(kind));
        return kind == ComponentKind::process ? s : s + ":" + id;
    }

    friend bool operator==(const ComponentRef&, const ComponentRef&) = default;
    friend auto operator<=>(const ComponentRef&, const ComponentRef&) = default;
};

/// Exact amount with a unit from the active registry.
struct Quantity {
    Decimal amount;
    std::string unit;

    Measure to_measure() const { return Measure{amount.to_double(), unit}; }

    friend bool operator==(const Quantity&, const Quantity&) = default;
};

struct ProcessComponent {
    const EventLog* log = nullptr;
};

struct ActivityTypeComponent {
    std::string name;
    std::vector<const Event*> instances;
};

struct ObjectTypeComponent {
    std::string name;
    std::vector<const ObjectInstance*> instances;
};

using ResolvedComponent =
    std::variant<ProcessComponent, ActivityTypeComponent, const Event*, ObjectTypeComponent, const ObjectInstance*>;

inline ResolvedComponent resolve_component(const ComponentRef& ref, const EventLog& log)
{
    auto unknown = [&]() { return UnknownComponent("'" + ref.to_string() + "' is not in the log"); };
    switch (ref.kind) {
    case ComponentKind::process:
        return ProcessComponent{&log};
    case ComponentKind::activity_type:
        if (log.activity_types().count(ref.id) == 0) {
            throw unknown();
        }
        return ActivityTypeComponent{ref.id, log.events_of_activity(ref.id)};
    case ComponentKind::activity_instance:
        if (const auto* e = log.find_event(ref.id)) {
            return e;
        }
        throw unknown();
    case ComponentKind::object_type:
        if (log.object_types().count(ref.id) == 0) {
            throw unknown();
        }
        return ObjectTypeComponent{ref.id, log.objects_of_type(ref.id)};
    case ComponentKind::object_instance:
        if (const auto* o = log.find_object(ref.id)) {
            return o;
        }
        throw unknown();
    }
    throw unknown();
}

struct Violation {
    std::string entity;
    std::string code;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
    friend auto operator<=>(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

/// Lists every structural invariant violation, ordered by entity id.
inline ValidationReport validate_log(const EventLog& log)
{
    ValidationReport report;
    std::map<std::string, int> event_ids;
    for (const auto& e : log.events()) {
        if (e.event_id.empty()) {
            report.push_back({"", "empty_event_id", "event with activity '" + e.activity + "' has an empty id"});
        } else {
            ++event_ids[e.event_id];
        }
        if (log.activity_types().count(e.activity) == 0) {
            report.push_back({e.event_id, "unknown_activity_type",
                              "event '" + e.event_id + "' has undeclared activity '" + e.activity + "'"});
        }
    }
    for (const auto& [id, n] : event_ids) {
        if (n > 1) {
            report.push_back({id, "duplicate_event_id", "event id '" + id + "' occurs " + std::to_string(n) + " times"});
        }
    }
    std::map<std::string, int> object_ids;
    for (const auto& o : log.objects()) {
        if (o.object_id.empty()) {
            report.push_back({"", "empty_object_id", "object of type '" + o.object_type + "' has an empty id"});
        } else {
            ++object_ids[o.object_id];
        }
        if (log.object_types().count(o.object_type) == 0) {
            report.push_back({o.object_id, "unknown_object_type",
                              "object '" + o.object_id + "' has undeclared type '" + o.object_type + "'"});
        }
    }
    for (const auto& [id, n] : object_ids) {
        if (n > 1) {
            report.push_back(
                {id, "duplicate_object_id", "object id '" + id + "' occurs " + std::to_string(n) + " times"});
        }
    }
    for (const auto& r : log.relations()) {
        if (log.find_event(r.event_id) == nullptr) {
            report.push_back({r.event_id, "dangling_relation_event",
                              "relation references missing event '" + r.event_id + "'"});
        }
        if (log.find_object(r.object_id) == nullptr) {
            report.push_back({r.event_id, "dangling_relation_object",
                              "event '" + r.event_id + "' relates to missing object '" + r.object_id + "'"});
        }
    }
    std::sort(report.begin(), report.end());
    report.erase(std::unique(report.begin(), report.end()), report.end());
    return report;
}

}  // namespace susmine
