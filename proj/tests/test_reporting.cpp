#include "support.hpp"

#include <gtest/gtest.h>

using namespace susmine;
using namespace testing_support;
using nlohmann::json;

TEST(Dfg, OrderFulfilmentEdges)
{
    AnnotatedDFG dfg = build_dfg(fixture_log("order_fulfilment"));
    EXPECT_EQ(dfg.nodes.size(), 5u);
    EXPECT_EQ(dfg.nodes.at("pick item").event_count, 3u);
    EXPECT_EQ((dfg.edges.at({"place order", "pick item"})), 3u);
    EXPECT_EQ((dfg.edges.at({"load truck", "deliver"})), 3u);
    EXPECT_EQ((dfg.edges.at({"deliver", "deliver"})), 1u);
    EXPECT_EQ(dfg.edges.count({"pack", "pick item"}), 0u);
}

TEST(Dfg, TimestampTiesBrokenByEventId)
{
    json log = make_log(json::array({{{"id", "b"}, {"type", "second"}, {"time", "2024-01-01T10:00:00Z"}, {"rels", {{"o", "x"}}}},
                                     {{"id", "a"}, {"type", "first"}, {"time", "2024-01-01T10:00:00Z"}, {"rels", {{"o", "x"}}}}}),
                        json::array({{{"id", "o"}, {"type", "t"}}}));
    AnnotatedDFG dfg = build_dfg(parse_ocel(log.dump()).log);
    EXPECT_EQ(dfg.edges.size(), 1u);
    EXPECT_EQ((dfg.edges.at({"first", "second"})), 1u);
}

TEST(Dfg, AnnotationRollsImpactsToActivities)
{
    AnnotatedLog al = fixture_bundle("shared_machine", "shared_machine");
    ScopedResult scoped = scoped_impacts(al);
    AllocationResult alloc = apply_allocations(al, scoped.impacts, al.rules());
    AnnotatedDFG dfg = annotate_dfg(build_dfg(al.log()), al, alloc.impacts);
    EXPECT_DOUBLE_EQ(dfg.nodes.at("cut").impacts.at({"climate_change", "scope3"}), 20.0);
    EXPECT_DOUBLE_EQ(dfg.nodes.at("weld").impacts.at({"climate_change", "scope3"}), 10.0);
    EXPECT_TRUE(dfg.nodes.at("inspect").impacts.empty());

    AnnotatedDFG foreign = build_dfg(fixture_log("worked_example"));
    EXPECT_THROW(annotate_dfg(foreign, al, alloc.impacts), LogMismatch);
}

TEST(Dfg, ZeroImpactLogHasEmptyVectors)
{
    AnnotatedLog al = bind_json(json::parse(fixture_text("logs/order_fulfilment.json")), climate_bundle());
    AnnotatedDFG dfg = annotate_dfg(build_dfg(al.log()), al, {});
    for (const auto& [name, node] : dfg.nodes) {
        EXPECT_TRUE(node.impacts.empty()) << name;
    }
}

TEST(Dot, LabelContents)
{
    json log = make_log(json::array({{{"id", "e1"}, {"type", "pack"}}}), json::array());
    json b = climate_bundle();
    b["assignments"].push_back(assign("activity_instance", "e1", "CO2", "5", "kg", "scope1"));
    AnnotatedLog al = bind_json(log, b);
    AnnotatedDFG dfg = annotate_dfg(build_dfg(al.log()), al, scoped_impacts(al).impacts);
    std::string dot = emit_dot(dfg);
    EXPECT_NE(dot.find("pack"), std::string::npos);
    EXPECT_NE(dot.find("5 kg CO2e"), std::string::npos);
    EXPECT_EQ(dot.rfind("digraph {", 0), 0u);
    EXPECT_EQ(emit_dot(dfg), dot);
    EXPECT_EQ(emit_dot(AnnotatedDFG{}), "digraph {}\n");
}

TEST(Dot, EscapesQuotes)
{
    json log = make_log(json::array({{{"id", "e1"}, {"type", "say \"hi\""}}}), json::array());
    std::string dot = emit_dot(build_dfg(parse_ocel(log.dump()).log));
    EXPECT_NE(dot.find("say \\\"hi\\\""), std::string::npos);
}

namespace {

CapabilityRow audit_of(const AnnotatedLog& al)
{
    return run_assessment(al, {}).audit;
}

}  // namespace

TEST(Audit, FullBundleScoresFull)
{
    json log = make_log(json::array({{{"id", "e1"}, {"type", "a"}, {"rels", {{"m", "uses"}}}},
                                     {{"id", "e2"}, {"type", "a"}, {"rels", {{"m", "uses"}}}}}),
                        json::array({{{"id", "m"}, {"type", "machine"}}}));
    json b = climate_bundle();
    b["assignments"].push_back(assign("activity_instance", "e1", "CO2", "5", "kg", "scope1"));
    b["assignments"].push_back(assign("object_instance", "m", "CO2", "30", "kg", "scope3"));
    b["allocations"].push_back({{"source", {{"kind", "object_instance"}, {"id", "m"}}}, {"targets", "related_events"}});
    CapabilityRow row = audit_of(bind_json(log, b));
    for (const char* col : {"AP1", "AP2-Climate", "AP3-Climate", "AP4"}) {
        EXPECT_EQ(row.at(col), SupportLevel::full) << col;
    }
    EXPECT_EQ(row.at("AP2-Env"), SupportLevel::none);
}

TEST(Audit, EmptyBundleScoresNone)
{
    AnnotatedLog al = fixture_bundle("worked_example", "empty");
    for (auto c : audit_of(al).cells) {
        EXPECT_EQ(c, SupportLevel::none);
    }
}

TEST(Audit, SingleScopeIsHalf)
{
    json log = make_log(json::array({{{"id", "e1"}, {"type", "a"}}}), json::array());
    json b = climate_bundle();
    b["assignments"].push_back(assign("activity_instance", "e1", "CO2", "5", "kg", "scope2"));
    CapabilityRow row = audit_of(bind_json(log, b));
    EXPECT_EQ(row.at("AP3-Climate"), SupportLevel::half);
    EXPECT_EQ(row.at("AP4"), SupportLevel::none);
    // half never appears outside the scoping columns
    for (std::size_t i = 0; i < capability_columns.size(); ++i) {
        if (!capability_columns[i].starts_with("AP3")) {
            EXPECT_NE(row.cells[i], SupportLevel::half);
        }
    }
}

TEST(Audit, WorkedBundle)
{
    CapabilityRow row = audit_of(fixture_bundle("worked_example", "worked_example"));
    EXPECT_EQ(row.at("AP3-Climate"), SupportLevel::full);
    EXPECT_EQ(row.at("AP3-Social"), SupportLevel::full);
    EXPECT_EQ(row.at("AP3-Env"), SupportLevel::none);  // CFC-11 is unscoped
    EXPECT_EQ(row.at("AP2-Env"), SupportLevel::full);
}

TEST(LiteratureMatrix, MatchesPublishedRows)
{
    CapabilityMatrix m = load_literature_matrix(fixture_text("literature_matrix.json"));
    ASSERT_EQ(m.rows.size(), 6u);
    const auto& houy = m.rows[0];
    EXPECT_EQ(houy.approach, "Houy et al.");
    EXPECT_EQ(houy.at("AP1"), SupportLevel::full);
    for (std::size_t i = 1; i < 8; ++i) {
        EXPECT_EQ(houy.cells[i], SupportLevel::none);
    }
    const auto& hk = m.rows[1];
    EXPECT_EQ(hk.approach, "Hoesch-Klohe et al.");
    EXPECT_EQ(hk.at("AP2-Climate"), SupportLevel::full);
    EXPECT_EQ(hk.at("AP3-Climate"), SupportLevel::half);
    EXPECT_EQ(hk.at("AP4"), SupportLevel::full);
    EXPECT_EQ(hk.at("AP2-Env"), SupportLevel::none);
    const auto& betz = m.rows[5];
    EXPECT_EQ(betz.approach, "Betz");
    EXPECT_EQ(betz.at("AP1"), SupportLevel::none);
    EXPECT_EQ(betz.at("AP4"), SupportLevel::none);
    for (const char* c : {"AP2-Climate", "AP2-Env", "AP2-Social", "AP3-Climate", "AP3-Env", "AP3-Social"}) {
        EXPECT_EQ(betz.at(c), SupportLevel::full) << c;
    }
}

TEST(LiteratureMatrix, RoundTripIsIdentity)
{
    std::string text = fixture_text("literature_matrix.json");
    CapabilityMatrix m = load_literature_matrix(text);
    std::string once = serialize_matrix(m);
    CapabilityMatrix again = load_literature_matrix(once);
    EXPECT_EQ(serialize_matrix(again), once);
    EXPECT_EQ(to_json(again), to_json(m));
    EXPECT_EQ(json::parse(once), json::parse(text));
}

TEST(LiteratureMatrix, InvalidMatrixRejected)
{
    EXPECT_THROW(load_literature_matrix(fixture_text("invalid/matrix_bad_cell.json")), SchemaError);
    EXPECT_THROW(load_literature_matrix("{\"schema\": \"other\"}"), SchemaError);
}

TEST(Report, WorkedExampleTotals)
{
    AnnotatedLog al = fixture_bundle("worked_example", "worked_example");
    Assessment a = run_assessment(al);
    json r = build_report(a, al);
    EXPECT_EQ(r["schema"], "susmine-report/1");
    EXPECT_EQ(r["totals"]["by_scope"]["scope1"]["climate_change"].get<double>(), 5.0);
    EXPECT_EQ(r["totals"]["by_scope"]["scope3"]["climate_change"].get<double>(), 30.0);
    EXPECT_EQ(r["totals"]["by_scope"]["unscoped"]["ozone_depletion"].get<double>(), 3.0);
    EXPECT_EQ(r["log_digest"], log_digest(al.log()));
    EXPECT_TRUE(r["functional_unit"].is_null());
    for (const char* key : {"summary", "categories", "inventory", "impacts", "dfg", "allocation", "audit", "uncharacterized"}) {
        EXPECT_TRUE(r.contains(key)) << key;
    }
}

TEST(Report, InventoryAmountsAreExactStrings)
{
    AnnotatedLog al = fixture_bundle("worked_example", "worked_example");
    json r = build_report(run_assessment(al), al);
    bool saw = false;
    for (const auto& line : r["inventory"]) {
        if (line["flow"] == "accident") {
            EXPECT_EQ(line["amount"], "0.00001");
            saw = true;
        }
    }
    EXPECT_TRUE(saw);
}

TEST(Report, ConservationThroughDfg)
{
    AnnotatedLog al = fixture_bundle("order_fulfilment", "order_fulfilment");
    Assessment a = run_assessment(al);
    json r = build_report(a, al);
    std::map<std::pair<std::string, std::string>, double> nodes;
    for (const auto& n : r["dfg"]["nodes"]) {
        for (const auto& [scope, cats] : n["impacts"].items()) {
            for (const auto& [cat, x] : cats.items()) nodes[{cat, scope}] += x.get<double>();
        }
    }
    for (const auto& [scope, cats] : r["totals"]["non_activity_residual"].items()) {
        for (const auto& [cat, x] : cats.items()) nodes[{cat, scope}] += x.get<double>();
    }
    for (const auto& [scope, cats] : r["totals"]["by_scope"].items()) {
        for (const auto& [cat, x] : cats.items()) {
            const double got = nodes[std::pair<std::string, std::string>(cat, scope)];
            EXPECT_NEAR(got, x.get<double>(), 1e-9 * std::max(1.0, std::fabs(x.get<double>())))
                << cat << " " << scope;
        }
    }
}

TEST(Report, CsvProjections)
{
    AnnotatedLog al = fixture_bundle("shared_machine", "shared_machine");
    json r = build_report(run_assessment(al), al);
    std::string ledger = report_ledger_csv(r);
    EXPECT_EQ(std::count(ledger.begin(), ledger.end(), '\n'), 4);
    std::string impacts = report_impacts_csv(r, true);
    EXPECT_NE(impacts.find("activity_instance,m1,climate_change,climate,scope3,10,kg CO2e"), std::string::npos);
}

TEST(Report, StageErrorsNameTheStage)
{
    AnnotatedLog al = bind_json(json::parse(fixture_text("logs/worked_example.json")),
                           json::parse(fixture_text("invalid/missing_factor.json")));
    try {
        run_assessment(al);
        FAIL() << "expected an error";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "impact");
        EXPECT_EQ(e.exit_code(), 1);
        EXPECT_NE(std::string(e.what()).find("N2O"), std::string::npos);
    }
    AssessOptions lenient;
    lenient.mode = Mode::lenient;
    Assessment a = run_assessment(al, lenient);
    EXPECT_EQ(a.characterized.uncharacterized.size(), 1u);
}

TEST(Report, FunctionalUnitSection)
{
    AnnotatedLog al = fixture_bundle("worked_example", "worked_example");
    AssessOptions opts;
    opts.functional_unit = FunctionalUnit::parse("product:mass_kg:1");
    Assessment a = run_assessment(al, opts);
    ASSERT_TRUE(a.functional_unit.has_value());
    EXPECT_DOUBLE_EQ(a.functional_unit->measured_output, 2.5);
    EXPECT_DOUBLE_EQ(a.functional_unit->impacts.at({"climate_change", "scope3"}), 12.0);
    json r = build_report(a, al);
    EXPECT_FALSE(r["functional_unit"].is_null());
}

TEST(ReportSchema, ShippedExamplesAndFreshReports)
{
    json shipped = json::parse(fixture_text("reports/worked_example.json"));
    EXPECT_NO_THROW(validate_report(shipped));
    EXPECT_THROW(validate_report(json::parse(fixture_text("invalid/report_missing_totals.json"))), SchemaError);

    AnnotatedLog al = fixture_bundle("worked_example", "worked_example");
    json fresh = build_report(run_assessment(al), al);
    EXPECT_NO_THROW(validate_report(fresh));
    EXPECT_EQ(fresh, shipped);
}

TEST(ReportSchema, WrongMemberTypeNamed)
{
    AnnotatedLog al = fixture_bundle("worked_example", "worked_example");
    json r = build_report(run_assessment(al), al);
    r["inventory"] = "none";
    try {
        validate_report(r);
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("inventory"), std::string::npos);
    }
}
