#include "support.hpp"

#include <gtest/gtest.h>

using namespace susmine;
using namespace testing_support;
using nlohmann::json;

TEST(Annotation, WorkedAssignmentParsesIntact)
{
    AnnotationBundle b = parse_annotations(fixture_text("annotations/worked_example.json"));
    ASSERT_EQ(b.assignments.size(), 5u);
    const FlowAssignment& a = b.assignments[0];
    EXPECT_EQ(a.component, ComponentRef::activity_instance("e1"));
    EXPECT_EQ(a.flow, "CO2");
    EXPECT_EQ(a.direction, Direction::output);
    EXPECT_EQ(a.quantity.amount, Decimal::from_integer(5));
    EXPECT_EQ(a.quantity.unit, "kg");
    EXPECT_EQ(a.scope_label(), "scope1");
    EXPECT_EQ(b.assignments[2].scope_label(), "unscoped");
    EXPECT_FALSE(b.assignments[2].scope.has_value());
    EXPECT_EQ(b.scope_set.scopes.size(), 5u);
}

TEST(Annotation, UnknownScopeRejected)
{
    EXPECT_THROW(parse_annotations(fixture_text("invalid/unknown_scope.json")), UnknownScope);
}

TEST(Annotation, InvalidBundlesRejected)
{
    EXPECT_THROW(parse_annotations(fixture_text("invalid/bad_bundle_schema.json")), SchemaError);
    EXPECT_THROW(parse_annotations(fixture_text("invalid/per_instance_on_instance.json")), SchemaError);
    EXPECT_THROW(parse_annotations("{\"schema\": \"susmine/1\""), SyntaxError);

    json b = climate_bundle();
    b["assignments"].push_back(assign("activity_instance", "e1", "CO2", "5", "furlong", "scope1"));
    EXPECT_THROW(parse_annotations(b.dump()), UnknownUnit);

    b = climate_bundle();
    b["assignments"].push_back(assign("activity_type", "a", "CO2", "5", "kg", "scope1"));
    b["assignments"][0]["override"] = true;
    EXPECT_THROW(parse_annotations(b.dump()), SchemaError);

    b = climate_bundle();
    b["allocations"].push_back({{"source", {{"kind", "process"}}}, {"targets", "related_events"}, {"fraction", "1.5"}});
    EXPECT_THROW(parse_annotations(b.dump()), SchemaError);
}

TEST(Annotation, ClimateCategoryMustUseCo2eUnderGhg)
{
    json b = climate_bundle();
    b["categories"]["climate_change"]["impact_unit"] = "kg CO2";
    EXPECT_THROW(parse_annotations(b.dump()), SchemaError);
    b["scopes"] = "lca";
    EXPECT_NO_THROW(parse_annotations(b.dump()));
}

TEST(Annotation, ScopeOverrideReplacesBundleScopes)
{
    json b = climate_bundle();
    b["assignments"].push_back(assign("activity_instance", "e1", "CO2", "5", "kg", "upstream"));
    EXPECT_THROW(parse_annotations(b.dump()), UnknownScope);
    AnnotationBundle lca = parse_annotations(b.dump(), ScopeSet::lca());
    EXPECT_EQ(lca.scope_set.name, "lca");
}

TEST(ScopeSet, PresetsAndReservedLabel)
{
    EXPECT_EQ(ScopeSet::ghg().scopes, (std::vector<std::string>{"scope1", "scope2", "scope3"}));
    EXPECT_EQ(ScopeSet::lca().scopes, (std::vector<std::string>{"gate_to_gate", "upstream"}));
    EXPECT_FALSE(ScopeSet::preset("iso").has_value());
    ScopeSet bad{"bad", {"scope1", std::string(unscoped)}};
    EXPECT_THROW(bad.validate(), SchemaError);
    ScopeSet dup{"dup", {"a", "a"}};
    EXPECT_THROW(dup.validate(), SchemaError);

    auto custom = detail::parse_scope_set(json::parse(fixture_text("scopes/lca_extended.json")), "file");
    EXPECT_EQ(custom.scopes.back(), "downstream");
    EXPECT_THROW(detail::parse_scope_set(json::parse(fixture_text("invalid/scopes_reserved_label.json")), "file"),
                 SchemaError);
}

TEST(Annotation, BindRejectsUnknownComponents)
{
    json b = climate_bundle();
    b["assignments"].push_back(assign("activity_instance", "e404", "CO2", "5", "kg", "scope1"));
    EXPECT_THROW(bind_annotations(fixture_log("worked_example"), parse_annotations(b.dump())), UnknownComponent);
}

TEST(Annotation, PerInstanceExpandsWithOverrides)
{
    AnnotatedLog al = fixture_bundle("order_fulfilment", "order_fulfilment");
    std::map<std::string, Decimal> electricity;
    for (const auto& r : al.resolved()) {
        if (r.flow == "electricity" && r.component.kind == ComponentKind::activity_instance) {
            electricity[r.component.id] += r.quantity.amount;
        }
    }
    // e05 overrides the 120 Wh type default with its own 300 Wh
    EXPECT_EQ(electricity.size(), 3u);
    EXPECT_EQ(electricity["e03"], Decimal::from_integer(120));
    EXPECT_EQ(electricity["e04"], Decimal::from_integer(120));
    EXPECT_EQ(electricity["e05"], Decimal::from_integer(300));
}

TEST(Annotation, AbsoluteTypeAssignmentStaysOnType)
{
    AnnotatedLog al = fixture_bundle("order_fulfilment", "order_fulfilment");
    bool found = false;
    for (const auto& r : al.resolved()) {
        if (r.flow == "CO2") {
            EXPECT_EQ(r.component, ComponentRef::object_type("item"));
            EXPECT_EQ(r.quantity.amount, Decimal::from_integer(750));
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(CharacterizationCsv, ParsesValidTable)
{
    auto reg = UnitRegistry::with_defaults();
    CharacterizationTable t = parse_characterization_csv(fixture_text("factors/climate.csv"), reg);
    EXPECT_EQ(t.categories().size(), 3u);
    EXPECT_EQ(t.category("ozone_depletion").impact_class, ImpactClass::environmental);
    auto ch4 = t.entries_for("CH4", Direction::output);
    ASSERT_EQ(ch4.size(), 1u);
    EXPECT_EQ(ch4[0]->factors.at("climate_change"), 28.0);
    EXPECT_TRUE(t.entries_for("electricity", Direction::output).empty());
    EXPECT_EQ(t.entries_for("accident", Direction::input).size(), 1u);
}

TEST(CharacterizationCsv, RejectsMissingColumn)
{
    auto reg = UnitRegistry::with_defaults();
    EXPECT_THROW(parse_characterization_csv(fixture_text("invalid/factors_missing_column.csv"), reg), SchemaError);
    EXPECT_THROW(parse_characterization_csv("flow,unit,category,factor,impact_unit,class\nCO2,kg,cc,1,kg CO2e,weather\n", reg),
                 SchemaError);
}

TEST(CharacterizationTable, ConflictingCategoryRedeclaration)
{
    CharacterizationTable t;
    t.add_category("cc", {"kg CO2e", ImpactClass::climate});
    EXPECT_NO_THROW(t.add_category("cc", {"kg CO2e", ImpactClass::climate}));
    EXPECT_THROW(t.add_category("cc", {"t CO2e", ImpactClass::climate}), SchemaError);
}
