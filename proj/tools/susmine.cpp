// susmine: sustainability analysis of object-centric event logs.

#include "susmine/susmine.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#ifndef SUSMINE_FIXTURE_DIR
#define SUSMINE_FIXTURE_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using namespace susmine;

namespace {

struct RunConfig {
    std::string log;
    std::string annotations;
    std::string out;
    std::string mode = "strict";
    std::string scopes;
    std::string fu;
    std::string factors;
    std::string level = "instance";
    std::string fixtures = SUSMINE_FIXTURE_DIR;
    std::string config;
    std::uint64_t seed = 1;
    std::size_t size = 50;
    bool literature = false;
    bool update = false;
};

/// Options of one subcommand, by config-file key.
using OptionIndex = std::map<std::string, CLI::Option*>;

class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error("UsageError", message, ErrorClass::environment) {}
};

Mode parse_mode(const std::string& s)
{
    if (s == "strict") return Mode::strict;
    if (s == "lenient") return Mode::lenient;
    throw UsageError("--mode must be strict or lenient");
}

std::optional<ScopeSet> parse_scopes_flag(const std::string& s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    if (auto preset = ScopeSet::preset(s)) {
        return preset;
    }
    nlohmann::json doc = detail::parse_json(read_text_file(s), "scope set file");
    return detail::parse_scope_set(doc, "scope set file");
}

/// Fills options not given on the command line from the `--config` JSON file.
void apply_config_file(RunConfig& cfg, const OptionIndex& opts)
{
    if (cfg.config.empty()) {
        return;
    }
    nlohmann::json doc = detail::parse_json(read_text_file(cfg.config), "config file");
    if (!doc.is_object()) {
        throw SchemaError("config file must be a JSON object");
    }
    auto given = [&](const std::string& key) {
        auto it = opts.find(key);
        return it != opts.end() && it->second->count() > 0;
    };
    auto known = [&](const std::string& key) { return opts.count(key) != 0; };
    // Relative paths in the file are taken relative to the file itself.
    const fs::path base = fs::path(cfg.config).parent_path();
    auto path_of = [&](const nlohmann::json& v) {
        fs::path p = v.get<std::string>();
        return p.is_relative() ? (base / p).string() : p.string();
    };
    for (const auto& [key, value] : doc.items()) {
        if (!known(key)) {
            throw SchemaError("config key '" + key + "' does not apply to this command");
        }
        if (given(key)) {
            continue;
        }
        try {
            if (key == "log") cfg.log = path_of(value);
            else if (key == "annotations") cfg.annotations = path_of(value);
            else if (key == "out") cfg.out = path_of(value);
            else if (key == "mode") cfg.mode = value.get<std::string>();
            else if (key == "scopes") cfg.scopes = ScopeSet::preset(value.get<std::string>()) ? value.get<std::string>() : path_of(value);
            else if (key == "fu") cfg.fu = value.get<std::string>();
            else if (key == "factors") cfg.factors = path_of(value);
            else if (key == "level") cfg.level = value.get<std::string>();
            else if (key == "fixtures") cfg.fixtures = path_of(value);
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "size") cfg.size = value.get<std::size_t>();
            else if (key == "literature") cfg.literature = value.get<bool>();
        } catch (const nlohmann::json::exception&) {
            throw SchemaError("config key '" + key + "' has the wrong type");
        }
    }
}

void require_path(const std::string& value, const char* flag)
{
    if (value.empty()) {
        throw UsageError(std::string(flag) + " is required");
    }
}

template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

IngestResult load_log(const RunConfig& cfg)
{
    require_path(cfg.log, "--log");
    Mode mode = parse_mode(cfg.mode);
    return in_stage("ingest", [&] {
        return parse_ocel(read_text_file(cfg.log), mode == Mode::strict ? IngestMode::strict : IngestMode::lenient);
    });
}

AnnotatedLog load_annotated(const RunConfig& cfg)
{
    IngestResult ingest = load_log(cfg);
    for (const auto& w : ingest.warnings) {
        std::cerr << "warning: " << w.message << "\n";
    }
    require_path(cfg.annotations, "--annotations");
    AnnotationBundle bundle = in_stage("annotation", [&] {
        auto b = parse_annotations(read_text_file(cfg.annotations), parse_scopes_flag(cfg.scopes));
        if (!cfg.factors.empty()) {
            b.table = parse_characterization_csv(read_text_file(cfg.factors), b.registry);
            check_table_against_scopes(b.table, b.scope_set);
        }
        return b;
    });
    return in_stage("bind", [&] { return bind_annotations(ingest.log, std::move(bundle)); });
}

AssessOptions assess_options(const RunConfig& cfg)
{
    AssessOptions opts;
    opts.mode = parse_mode(cfg.mode);
    if (!cfg.fu.empty()) {
        opts.functional_unit = FunctionalUnit::parse(cfg.fu);
    }
    return opts;
}

void emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(cfg.out, text);
    }
}

int cmd_validate(const RunConfig& cfg)
{
    require_path(cfg.log, "--log");
    Mode mode = parse_mode(cfg.mode);
    std::string text = read_text_file(cfg.log);
    IngestResult ingest;
    try {
        ingest = parse_ocel(text, IngestMode::lenient);
    } catch (const SyntaxError&) {
        throw;
    }
    auto summary = log_summary(ingest.log);
    std::cout << "events: " << summary.event_count << "\nobjects: " << summary.object_count
              << "\nrelations: " << summary.relation_count << "\n";
    if (ingest.warnings.empty()) {
        std::cout << "valid\n";
        return 0;
    }
    for (const auto& v : ingest.warnings) {
        std::cout << (mode == Mode::strict ? "violation: " : "warning: ") << v.code << " " << v.message << "\n";
    }
    if (mode == Mode::strict) {
        std::cout << "invalid (" << ingest.warnings.size() << " violations)\n";
        return 1;
    }
    std::cout << "valid with warnings (lenient)\n";
    return 0;
}

int cmd_assess(const RunConfig& cfg)
{
    require_path(cfg.out, "--out");
    AnnotatedLog al = load_annotated(cfg);
    Assessment a = run_assessment(al, assess_options(cfg));
    write_assessment(cfg.out, a, al);
    ScopedImpactVector totals = sum_components(a.allocation.impacts);
    std::cout << "assessed " << a.summary.event_count << " events, " << al.resolved().size()
              << " resolved assignments, " << a.allocation.ledger.entries.size() << " allocation transfers\n";
    for (const auto& [key, amount] : totals) {
        std::cout << "  " << key.category << " [" << key.scope << "]: " << format_double(amount) << " "
                  << al.table().category(key.category).impact_unit << "\n";
    }
    for (const auto& u : a.characterized.uncharacterized) {
        std::cerr << "warning: uncharacterized flow '" << u.flow << "' (" << to_string(u.direction) << ", " << u.unit
                  << ")\n";
    }
    for (const auto& w : a.allocation.ledger.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    std::cout << "wrote " << cfg.out << "\n";
    return 0;
}

int cmd_inventory(const RunConfig& cfg)
{
    AnnotatedLog al = load_annotated(cfg);
    Inventory inv = in_stage("inventory", [&] {
        if (cfg.level == "instance") return flat_inventory(al);
        if (cfg.level == "activity_type") return rollup_inventory(al, RollupLevel::activity_type);
        if (cfg.level == "object_type") return rollup_inventory(al, RollupLevel::object_type);
        if (cfg.level == "process") return rollup_inventory(al, RollupLevel::process);
        throw UsageError("--level must be instance, activity_type, object_type or process");
    });
    if (!cfg.fu.empty()) {
        auto fu = FunctionalUnit::parse(cfg.fu);
        emit(cfg, inventory_csv(in_stage("functional_unit", [&] { return scale_to_functional_unit(inv, fu, al); })));
    } else {
        emit(cfg, inventory_csv(inv));
    }
    return 0;
}

int cmd_allocate(const RunConfig& cfg)
{
    AnnotatedLog al = load_annotated(cfg);
    Mode mode = parse_mode(cfg.mode);
    auto scoped = in_stage("impact", [&] { return scoped_impacts(al, mode); });
    auto result = in_stage("allocation", [&] { return apply_allocations(al, scoped.impacts, al.rules(), mode); });
    for (const auto& w : result.ledger.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    emit(cfg, ledger_csv(result.ledger));
    return 0;
}

int cmd_dfg(const RunConfig& cfg)
{
    if (cfg.annotations.empty()) {
        IngestResult ingest = load_log(cfg);
        emit(cfg, emit_dot(build_dfg(ingest.log)));
        return 0;
    }
    AnnotatedLog al = load_annotated(cfg);
    Assessment a = run_assessment(al, assess_options(cfg));
    emit(cfg, emit_dot(a.dfg));
    return 0;
}

int cmd_audit(const RunConfig& cfg)
{
    CapabilityMatrix matrix;
    if (cfg.literature) {
        matrix = load_literature_matrix(read_text_file(fs::path(cfg.fixtures) / "literature_matrix.json"));
    } else {
        AnnotatedLog al = load_annotated(cfg);
        AssessOptions opts = assess_options(cfg);
        opts.functional_unit.reset();
        Assessment a = run_assessment(al, opts);
        a.audit.approach = fs::path(cfg.annotations).stem().string();
        matrix.rows.push_back(a.audit);
    }
    std::cout << render_matrix_table(matrix);
    if (cfg.out.empty()) {
        std::cout << serialize_matrix(matrix);
    } else {
        write_text_file(cfg.out, serialize_matrix(matrix));
    }
    return 0;
}

int cmd_generate(const RunConfig& cfg)
{
    require_path(cfg.out, "--out");
    GeneratedBundle g = generate_bundle({cfg.seed, cfg.size});
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) {
        throw IoError("cannot create '" + cfg.out + "': " + ec.message());
    }
    write_text_file(fs::path(cfg.out) / "log.json", g.log_json);
    write_text_file(fs::path(cfg.out) / "annotations.json", g.annotations_json);
    write_text_file(fs::path(cfg.out) / "truth.json", g.truth.dump(2) + "\n");
    std::cout << "generated seed " << cfg.seed << " with " << cfg.size << " events into " << cfg.out << "\n";
    return 0;
}

int cmd_fixtures(const RunConfig& cfg)
{
    fs::path manifest_path = fs::path(cfg.fixtures) / "MANIFEST.json";
    FixtureManifest manifest = parse_manifest(read_text_file(manifest_path));
    if (cfg.update) {
        write_text_file(manifest_path, serialize_manifest(refresh_manifest(manifest, cfg.fixtures)));
        std::cout << "updated " << manifest_path.string() << "\n";
        return 0;
    }
    bool ok = true;
    for (const auto& check : verify_fixtures(manifest, cfg.fixtures)) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.path << "\n";
        ok = ok && check.pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sustainability analysis of object-centric event logs"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::map<CLI::App*, OptionIndex> index;

    auto add = [&](const char* name, const char* description, std::initializer_list<const char*> keys) {
        CLI::App* sub = app.add_subcommand(name, description);
        OptionIndex& opts = index[sub];
        for (std::string key : keys) {
            if (key == "log") opts[key] = sub->add_option("--log", cfg.log, "OCEL 2.0 JSON event log");
            else if (key == "annotations") opts[key] = sub->add_option("--annotations", cfg.annotations, "annotation bundle JSON");
            else if (key == "out") opts[key] = sub->add_option("--out", cfg.out, "output file or directory");
            else if (key == "mode") opts[key] = sub->add_option("--mode", cfg.mode, "strict|lenient");
            else if (key == "scopes") opts[key] = sub->add_option("--scopes", cfg.scopes, "ghg|lca|<scope set JSON file>");
            else if (key == "fu") opts[key] = sub->add_option("--fu", cfg.fu, "functional unit <type>:[<attribute>:]<amount>");
            else if (key == "factors") opts[key] = sub->add_option("--factors", cfg.factors, "characterization table CSV (replaces bundle factors)");
            else if (key == "level") opts[key] = sub->add_option("--level", cfg.level, "instance|activity_type|object_type|process");
            else if (key == "seed") opts[key] = sub->add_option("--seed", cfg.seed, "generator seed (uint64)");
            else if (key == "size") opts[key] = sub->add_option("--size", cfg.size, "number of generated events");
            else if (key == "fixtures") opts[key] = sub->add_option("--fixtures", cfg.fixtures, "fixture directory");
            else if (key == "literature") opts[key] = sub->add_flag("--literature", cfg.literature, "print the literature capability matrix");
        }
        sub->add_option("--config", cfg.config, "JSON file supplying the same keys; flags win");
        return sub;
    };

    const std::initializer_list<const char*> analysis{"log", "annotations", "out", "mode", "scopes", "factors"};
    auto* validate = add("validate", "check an event log", {"log", "mode"});
    auto* assess = add("assess", "run the full pipeline and write reports",
                       {"log", "annotations", "out", "mode", "scopes", "factors", "fu"});
    auto* inventory = add("inventory", "print the flow inventory as CSV",
                          {"log", "annotations", "out", "mode", "scopes", "factors", "fu", "level"});
    auto* allocate = add("allocate", "print the allocation ledger as CSV", analysis);
    auto* dfg = add("dfg", "print the (impact-annotated) directly-follows graph as DOT", analysis);
    auto* audit = add("audit", "score a bundle against the analysis patterns",
                      {"log", "annotations", "out", "mode", "scopes", "factors", "literature", "fixtures"});
    auto* generate = add("generate", "write a synthetic log, bundle and ground truth", {"seed", "size", "out"});
    auto* fixtures = add("fixtures", "verify shipped fixtures against their manifest", {"fixtures"});
    bool update = false;
    fixtures->add_flag("--update", update, "rewrite the manifest digests");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.update = update;

    try {
        for (auto& [sub, opts] : index) {
            if (sub->parsed()) {
                apply_config_file(cfg, opts);
            }
        }
        if (validate->parsed()) return cmd_validate(cfg);
        if (assess->parsed()) return cmd_assess(cfg);
        if (inventory->parsed()) return cmd_inventory(cfg);
        if (allocate->parsed()) return cmd_allocate(cfg);
        if (dfg->parsed()) return cmd_dfg(cfg);
        if (audit->parsed()) return cmd_audit(cfg);
        if (generate->parsed()) return cmd_generate(cfg);
        if (fixtures->parsed()) return cmd_fixtures(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
