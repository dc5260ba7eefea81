#include "support.hpp"

#include <gtest/gtest.h>

using namespace susmine;
using namespace testing_support;
using nlohmann::json;

TEST(Scoping, WorkedScopesStayInSeparateBuckets)
{
    AnnotatedLog al = fixture_bundle("worked_example", "worked_example");
    ScopedResult r = scoped_impacts(al);
    const auto& e1 = r.impacts.at(ComponentRef::activity_instance("e1"));
    EXPECT_EQ(e1.at({"climate_change", "scope1"}), 5.0);
    EXPECT_EQ(e1.at({"climate_change", "scope3"}), 30.0);
    EXPECT_EQ(e1.at({"ozone_depletion", "unscoped"}), 3.0);
    EXPECT_EQ(e1.at({"work_accidents", "company"}), 0.00001);
    EXPECT_EQ(e1.at({"work_accidents", "value_chain"}), 0.00001);
    EXPECT_EQ(e1.count({"climate_change", "scope2"}), 0u);
}

TEST(Scoping, UnscopedDataLandsInUnscoped)
{
    json log = make_log(json::array({{{"id", "e1"}, {"type", "a"}}}), json::array());
    json b = climate_bundle();
    json a = assign("activity_instance", "e1", "CO2", "4", "kg", "scope1");
    a.erase("scope");
    b["assignments"].push_back(a);
    ScopedResult r = scoped_impacts(bind_json(log, b));
    EXPECT_EQ(r.impacts.at(ComponentRef::activity_instance("e1")).at({"climate_change", "unscoped"}), 4.0);
}

TEST(Scoping, TotalOverScopesEqualsUnscopedCharacterization)
{
    AnnotatedLog al = fixture_bundle("order_fulfilment", "order_fulfilment");
    ScopedResult scoped = scoped_impacts(al);
    CharacterizationResult plain = characterize(flat_inventory(al), al.table(), al.registry());
    for (const auto& [c, vec] : plain.impacts) {
        ImpactVector summed = total_over_scopes(scoped.impacts.at(c));
        for (const auto& [cat, x] : vec) {
            EXPECT_NEAR(summed.at(cat), x, 1e-12 * std::max(1.0, std::fabs(x))) << c.to_string() << " " << cat;
        }
    }
}

TEST(Scoping, CumulativeThroughScope3)
{
    ScopedImpactVector sv{{{"climate_change", "scope1"}, 5.0}, {{"climate_change", "scope3"}, 30.0}};
    CumulativeView v = cumulative_view(sv, ScopeSet::ghg(), {"scope1", "scope2", "scope3"});
    EXPECT_EQ(v.through("climate_change", "scope1"), 5.0);
    EXPECT_EQ(v.through("climate_change", "scope2"), 5.0);
    EXPECT_EQ(v.through("climate_change", "scope3"), 35.0);
}

TEST(Scoping, CumulativeSocialReadingOfBuckets)
{
    AnnotatedLog al = fixture_bundle("worked_example", "worked_example");
    ScopedResult r = scoped_impacts(al);
    const auto& e1 = r.impacts.at(ComponentRef::activity_instance("e1"));
    CumulativeView v = cumulative_view(e1, al.scope_set(), {"company", "value_chain", "scope1", "scope2", "scope3"});
    EXPECT_DOUBLE_EQ(v.through("work_accidents", "company"), 0.00001);
    EXPECT_DOUBLE_EQ(v.through("work_accidents", "value_chain"), 0.00002);
}

TEST(Scoping, CumulativeOrderErrors)
{
    ScopedImpactVector sv;
    EXPECT_THROW(cumulative_view(sv, ScopeSet::ghg(), {"scope1", "scope9", "scope3"}), UnknownScope);
    EXPECT_THROW(cumulative_view(sv, ScopeSet::ghg(), {"scope1", "scope1", "scope3"}), SchemaError);
    EXPECT_THROW(cumulative_view(sv, ScopeSet::ghg(), {"scope1", "scope3"}), SchemaError);
    EXPECT_NO_THROW(cumulative_view(sv, ScopeSet::ghg(), {"scope3", "scope2", "scope1", std::string(unscoped)}));
}

TEST(Scoping, CustomScopeSetsWork)
{
    json log = make_log(json::array({{{"id", "e1"}, {"type", "a"}}}), json::array());
    json b = climate_bundle();
    b["scopes"] = {{"name", "plant"}, {"scopes", {"onsite", "supplier"}}};
    b["assignments"].push_back(assign("activity_instance", "e1", "CO2", "2", "kg", "supplier"));
    ScopedResult r = scoped_impacts(bind_json(log, b));
    EXPECT_EQ(r.impacts.at(ComponentRef::activity_instance("e1")).at({"climate_change", "supplier"}), 2.0);
}
