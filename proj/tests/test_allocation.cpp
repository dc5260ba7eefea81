#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace susmine;
using namespace testing_support;
using nlohmann::json;

namespace {

json machine_log()
{
    return make_log(json::array({{{"id", "m1"}, {"type", "cut"}, {"rels", {{"machine1", "uses"}}}, {"attrs", {{"duration_h", 2}}}},
                                 {{"id", "m2"}, {"type", "cut"}, {"rels", {{"machine1", "uses"}}}, {"attrs", {{"duration_h", 1}}}},
                                 {{"id", "m3"}, {"type", "weld"}, {"rels", {{"machine1", "uses"}}}, {"attrs", {{"duration_h", 0.0}}}},
                                 {{"id", "m4"}, {"type", "inspect"}, {"rels", {{"machine1", "watched"}}}}}),
                    json::array({{{"id", "machine1"}, {"type", "machine"}}}));
}

json machine_bundle(json key, const std::string& fraction = "1")
{
    json b = climate_bundle();
    b["assignments"].push_back(assign("object_instance", "machine1", "CO2", "30", "kg", "scope3"));
    b["allocations"].push_back({{"source", {{"kind", "object_instance"}, {"id", "machine1"}}},
                                {"targets", "related_events"},
                                {"qualifiers", {"uses"}},
                                {"key", key},
                                {"fraction", fraction}});
    return b;
}

AllocationResult run(const AnnotatedLog& al, Mode mode = Mode::strict)
{
    return apply_allocations(al, scoped_impacts(al, mode).impacts, al.rules(), mode);
}

}  // namespace

TEST(Allocation, SharedMachineEqualSplit)
{
    AnnotatedLog al = fixture_bundle("shared_machine", "shared_machine");
    AllocationResult r = run(al);
    for (const char* e : {"m1", "m2", "m3"}) {
        EXPECT_DOUBLE_EQ(r.impacts.at(ComponentRef::activity_instance(e)).at({"climate_change", "scope3"}), 10.0) << e;
    }
    EXPECT_EQ(r.impacts.at(ComponentRef::object_instance("machine1")).at({"climate_change", "scope3"}), 0.0);
    EXPECT_EQ(r.ledger.entries.size(), 3u);
    EXPECT_EQ(r.impacts.count(ComponentRef::activity_instance("m4")), 0u);
}

TEST(Allocation, QualifierFilterSelectsTargets)
{
    AnnotatedLog al = bind_json(machine_log(), machine_bundle("equal"));
    auto targets = select_targets(al.rules()[0], al.log());
    EXPECT_EQ(targets, (std::vector<ComponentRef>{ComponentRef::activity_instance("m1"), ComponentRef::activity_instance("m2"),
                                                  ComponentRef::activity_instance("m3")}));
}

TEST(Allocation, ProportionalKeyWeights)
{
    AnnotatedLog al = bind_json(machine_log(), machine_bundle({{"attribute", "duration_h"}}));
    WeightResult w = allocation_weights(al.rules()[0], al);
    ASSERT_EQ(w.weights.size(), 3u);
    EXPECT_DOUBLE_EQ(w.weights[0].weight, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(w.weights[1].weight, 1.0 / 3.0);
    EXPECT_EQ(w.weights[2].weight, 0.0);
    AllocationResult r = run(al);
    EXPECT_DOUBLE_EQ(r.impacts.at(ComponentRef::activity_instance("m1")).at({"climate_change", "scope3"}), 20.0);
}

TEST(Allocation, AllZeroKeyFallsBackToEqual)
{
    json log = machine_log();
    for (auto& e : log["events"]) {
        e["attributes"] = json::array({{{"name", "duration_h"}, {"value", 0}}});
    }
    AnnotatedLog al = bind_json(log, machine_bundle({{"attribute", "duration_h"}}));
    WeightResult w = allocation_weights(al.rules()[0], al);
    for (const auto& tw : w.weights) {
        EXPECT_DOUBLE_EQ(tw.weight, 1.0 / 3.0);
    }
    EXPECT_EQ(w.warnings.size(), 1u);
}

TEST(Allocation, MissingKeyAttribute)
{
    AnnotatedLog al = bind_json(machine_log(), machine_bundle("mass"));
    EXPECT_THROW(allocation_weights(al.rules()[0], al, Mode::strict), MissingAttribute);
    WeightResult w = allocation_weights(al.rules()[0], al, Mode::lenient);
    EXPECT_FALSE(w.warnings.empty());
}

TEST(Allocation, NegativeKeyValueRejected)
{
    json log = machine_log();
    log["events"][1]["attributes"][0]["value"] = -1;
    AnnotatedLog al = bind_json(log, machine_bundle({{"attribute", "duration_h"}}));
    EXPECT_THROW(allocation_weights(al.rules()[0], al), SchemaError);
}

TEST(Allocation, NoTargetsAndDuplicateSource)
{
    json b = machine_bundle("equal");
    b["allocations"][0]["qualifiers"] = {"nonexistent"};
    AnnotatedLog al = bind_json(machine_log(), b);
    EXPECT_THROW(run(al), NoTargets);

    b = machine_bundle("equal");
    b["allocations"].push_back(b["allocations"][0]);
    EXPECT_THROW(run(bind_json(machine_log(), b)), DuplicateSource);

    b = machine_bundle("equal");
    b["allocations"][0]["source"] = {{"kind", "activity_instance"}, {"id", "m1"}};
    EXPECT_THROW(run(bind_json(machine_log(), b)), NoTargets);
}

TEST(Allocation, PartialFractionLeavesResidual)
{
    AnnotatedLog al = bind_json(machine_log(), machine_bundle("equal", "0.5"));
    AllocationResult r = run(al);
    EXPECT_DOUBLE_EQ(r.impacts.at(ComponentRef::object_instance("machine1")).at({"climate_change", "scope3"}), 15.0);
    EXPECT_DOUBLE_EQ(r.impacts.at(ComponentRef::activity_instance("m2")).at({"climate_change", "scope3"}), 5.0);
    ASSERT_EQ(r.ledger.residuals.size(), 1u);
    EXPECT_DOUBLE_EQ(r.ledger.residuals[0].residual, 15.0);
    EXPECT_DOUBLE_EQ(r.ledger.residuals[0].allocated + r.ledger.residuals[0].residual, r.ledger.residuals[0].source_amount);
}

TEST(Allocation, ZeroFractionIsNoOp)
{
    AnnotatedLog al = bind_json(machine_log(), machine_bundle("equal", "0"));
    AllocationResult r = run(al);
    EXPECT_TRUE(r.ledger.entries.empty());
    EXPECT_EQ(r.impacts, scoped_impacts(al).impacts);
}

TEST(Allocation, ExplicitTargetsAndChainsUseOriginalImpacts)
{
    // machine1 -> m1 and m1 -> m2: the second rule moves only m1's own impact.
    json b = machine_bundle("equal");
    b["allocations"][0] = {{"source", {{"kind", "object_instance"}, {"id", "machine1"}}},
                           {"targets", json::array({{{"kind", "activity_instance"}, {"id", "m1"}}})}};
    b["assignments"].push_back(assign("activity_instance", "m1", "CO2", "4", "kg", "scope1"));
    b["allocations"].push_back({{"source", {{"kind", "activity_instance"}, {"id", "m1"}}},
                                {"targets", json::array({{{"kind", "activity_instance"}, {"id", "m2"}}})}});
    AllocationResult r = run(bind_json(machine_log(), b));
    const auto& m1 = r.impacts.at(ComponentRef::activity_instance("m1"));
    const auto& m2 = r.impacts.at(ComponentRef::activity_instance("m2"));
    EXPECT_DOUBLE_EQ(m1.at({"climate_change", "scope3"}), 30.0);
    EXPECT_DOUBLE_EQ(m1.at({"climate_change", "scope1"}), 0.0);
    EXPECT_DOUBLE_EQ(m2.at({"climate_change", "scope1"}), 4.0);
}

TEST(Allocation, LedgerCsvIsSortedAndStable)
{
    AnnotatedLog al = fixture_bundle("order_fulfilment", "order_fulfilment");
    std::string a = ledger_csv(run(al).ledger);
    std::string b = ledger_csv(run(al).ledger);
    EXPECT_EQ(a, b);
    AllocationLedger ledger = run(al).ledger;
    EXPECT_TRUE(std::is_sorted(ledger.entries.begin(), ledger.entries.end(), [](const LedgerEntry& x, const LedgerEntry& y) {
        return std::tie(x.source.id, x.target.id) < std::tie(y.source.id, y.target.id);
    }));
}

TEST(AllocationProperty, PermutationEquivariance)
{
    // relabelling target events permutes the weight vector the same way
    std::mt19937_64 rng(5);
    for (int round = 0; round < 30; ++round) {
        std::vector<double> durations;
        json events = json::array();
        for (int i = 0; i < 6; ++i) {
            double d = static_cast<double>(rng() % 7);
            durations.push_back(d);
            events.push_back({{"id", "x" + std::to_string(i)}, {"type", "cut"}, {"rels", {{"machine1", "uses"}}},
                              {"attrs", {{"duration_h", d}}}});
        }
        json objects = json::array({{{"id", "machine1"}, {"type", "machine"}}});
        std::vector<int> perm{0, 1, 2, 3, 4, 5};
        std::shuffle(perm.begin(), perm.end(), rng);
        json renamed = events;
        for (int i = 0; i < 6; ++i) {
            renamed[i]["id"] = "x" + std::to_string(perm[i]);
        }
        auto weights = [&](const json& evs) {
            AnnotatedLog al = bind_json(make_log(evs, objects), machine_bundle({{"attribute", "duration_h"}}));
            std::map<std::string, double> out;
            for (const auto& tw : allocation_weights(al.rules()[0], al).weights) {
                out[tw.target.id] = tw.weight;
            }
            return out;
        };
        auto w = weights(events);
        auto wp = weights(renamed);
        for (int i = 0; i < 6; ++i) {
            EXPECT_EQ(w["x" + std::to_string(i)], wp["x" + std::to_string(perm[i])]);
        }
    }
}
