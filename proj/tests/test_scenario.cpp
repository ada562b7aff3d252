// Config parsing, scenario execution, deterministic reports, exit-code
// semantics, and schema conformance of the JSON report.
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "carnot/error.hpp"
#include "carnot/scenario.hpp"

using namespace carnot;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
    return std::string(CARNOT_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// minimal JSON-schema conformance walker: type / required / properties /
// items / enum, which is the subset the shipped schema uses
bool conforms(const json& schema, const json& value, std::string& why) {
    if (schema.contains("type")) {
        const std::string t = schema["type"];
        const bool ok = (t == "object" && value.is_object()) ||
                        (t == "array" && value.is_array()) ||
                        (t == "string" && value.is_string()) ||
                        (t == "integer" && value.is_number_integer()) ||
                        (t == "number" && value.is_number()) ||
                        (t == "boolean" && value.is_boolean());
        if (!ok) {
            why = "expected type " + t;
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& e : schema["enum"]) hit = hit || e == value;
        if (!hit) {
            why = "value not in enum";
            return false;
        }
    }
    if (schema.contains("required"))
        for (const auto& k : schema["required"])
            if (!value.contains(k.get<std::string>())) {
                why = "missing required key " + k.get<std::string>();
                return false;
            }
    if (schema.contains("properties"))
        for (const auto& [k, sub] : schema["properties"].items())
            if (value.contains(k) && !conforms(sub, value[k], why)) {
                why = k + ": " + why;
                return false;
            }
    if (schema.contains("items") && value.is_array())
        for (const auto& item : value)
            if (!conforms(schema["items"], item, why)) return false;
    return true;
}

} // namespace

TEST_CASE("config parser: values, tables, arrays") {
    const auto root = parse_config("a = 1\nb = 2.5\nc = \"hi\"\nd = true\n"
                                   "e = [1, 2, 3]\nf = [\"x\", \"y\"]\n"
                                   "[t]\nk = 4\n[t.u]\nk2 = 5\n"
                                   "[[arr]]\nv = 1\n[[arr]]\nv = 2\n");
    CHECK(root->get_int("a", 0) == 1);
    CHECK(root->get_double("b", 0) == doctest::Approx(2.5));
    CHECK(root->get_string("c", "") == "hi");
    CHECK(root->get_bool("d", false));
    CHECK(root->get_double_array("e") == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(root->get_string_array("f") == std::vector<std::string>{"x", "y"});
    const auto t = root->get_table("t");
    REQUIRE(t);
    CHECK(t->get_int("k", 0) == 4);
    CHECK(t->get_table("u")->get_int("k2", 0) == 5);
    CHECK(root->get_tables("arr").size() == 2);
}

TEST_CASE("config parser reports line and column on malformed input") {
    try {
        parse_config("ok = 1\n[broken\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2:") != std::string::npos); // line 2
    }
    CHECK_THROWS_AS(parse_config("x 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("x = \"unterminated\n"), ParseError);
    CHECK_THROWS_AS(parse_config("x = 1\nx = 2\n"), ParseError);
}

TEST_CASE("unknown scenario fields are rejected with their path") {
    const std::string cfg = "[group]\nkind = \"heisenberg\"\nn = 1\nbogus = 3\n"
                            "[[verifier]]\ntype = \"identities\"\n";
    try {
        run_scenario_text(cfg);
        FAIL("expected a scenario error");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find("group.bogus") != std::string::npos);
    }
    // unknown verifier fields carry the block index
    const std::string cfg2 = "[group]\nkind = \"heisenberg\"\nn = 1\n"
                             "[[verifier]]\ntype = \"identities\"\nwat = 1\n";
    try {
        run_scenario_text(cfg2);
        FAIL("expected a scenario error");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find("verifier[1].wat") != std::string::npos);
    }
    CHECK_THROWS_AS(run_scenario_text("top = 1\n[[verifier]]\ntype = \"identities\"\n"),
                    ScenarioError);
}

TEST_CASE("identity fixture passes and reports are byte-deterministic") {
    const std::string text = slurp(fixture("identities.toml"));
    const RunReport a = run_scenario_text(text);
    const RunReport b = run_scenario_text(text);
    CHECK(a.exit_code() == 0);
    CHECK(report_json(a) == report_json(b));
    CHECK(report_summary_text(a) == report_summary_text(b));
    for (const auto& block : a.blocks) CHECK(block.status == "pass");
}

TEST_CASE("adams fixture: scan CSV and growth column") {
    const std::string text = slurp(fixture("adams_kaplan.toml"));
    const RunReport rep = run_scenario_text(text);
    CHECK(rep.exit_code() == 0);
    REQUIRE(rep.blocks.size() == 2);
    REQUIRE(rep.blocks[0].csv_files.size() == 1);
    const std::string& csv = rep.blocks[0].csv_files[0].second;
    // header + 4 shell rows
    std::size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 5);
    // growth column sits last-but-one; decade growth is 10
    const json j = json::parse(rep.blocks[0].json);
    CHECK(j["points"][1]["values"][5].get<double>() == doctest::Approx(10.0));
}

TEST_CASE("violation fixture exits 2, malformed config raises a parse error") {
    const RunReport rep = run_scenario(fixture("violation.toml"));
    CHECK(rep.exit_code() == 2);
    CHECK_THROWS_AS(run_scenario(fixture("malformed.toml")), ParseError);
}

TEST_CASE("quadric fixture: all contracts pass end to end") {
    const RunReport rep = run_scenario(fixture("quadric_forms.toml"));
    CHECK(rep.exit_code() == 0);
    for (const auto& block : rep.blocks) {
        INFO(block.name);
        CHECK(block.status != "fail");
    }
}

TEST_CASE("every remaining verifier type runs through the config layer") {
    for (const std::string name :
         {"kaplan_hardy.toml", "dual_adams.toml", "eg2_cosine.toml", "quadric_extra.toml"}) {
        const RunReport rep = run_scenario(fixture(name));
        INFO(name);
        CHECK(rep.exit_code() == 0);
        for (const auto& block : rep.blocks) {
            INFO(block.name);
            CHECK(block.status != "fail");
        }
    }
}

TEST_CASE("report JSON validates against the shipped schema") {
    const json schema = json::parse(slurp(CARNOT_SCHEMA_FILE));
    const RunReport rep = run_scenario(fixture("identities.toml"));
    const json j = json::parse(report_json(rep));
    std::string why;
    const bool ok = conforms(schema, j, why);
    INFO(why);
    CHECK(ok);
}

TEST_CASE("emit_report writes deterministic files") {
    namespace fs = std::filesystem;
    const RunReport rep = run_scenario(fixture("adams_kaplan.toml"));
    const std::string dir1 = (fs::temp_directory_path() / "carnot_t1").string();
    const std::string dir2 = (fs::temp_directory_path() / "carnot_t2").string();
    const auto w1 = emit_report(rep, dir1, {"json", "csv", "summary"});
    const auto w2 = emit_report(rep, dir2, {"json", "csv", "summary"});
    REQUIRE(w1.size() == w2.size());
    REQUIRE(w1.size() == 4); // report.json + 2 csv + summary.txt
    for (std::size_t i = 0; i < w1.size(); ++i) CHECK(slurp(w1[i]) == slurp(w2[i]));
    // summary has one PASS/FAIL/INFO line per verifier
    const std::string summary = report_summary_text(rep);
    std::size_t marks = 0;
    for (std::size_t pos = 0; (pos = summary.find("[PASS]", pos)) != std::string::npos; ++pos)
        ++marks;
    CHECK(marks == rep.blocks.size());
}

TEST_CASE("seed override flows into the report") {
    RunOptions opts;
    opts.seed = 99;
    const RunReport rep = run_scenario(fixture("identities.toml"), opts);
    CHECK(rep.seed == 99);
}
