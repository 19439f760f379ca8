#include "support.hpp"

#include <filesystem>
#include <random>

using namespace motif;

TEST_CASE("empty file is an empty model")
{
    auto r = parse("");
    REQUIRE(r.ok());
    CHECK(*r.model == ModelFile{});
    CHECK(validate(*r.model).empty());
    CHECK(print(*r.model).empty());
}

TEST_CASE("exchange-speeds rule parses and type-checks")
{
    auto r = parse(R"(
type vehicle agent { var speed: int[0, 5]; }
motif Road {
    map line(10);
    rule exchange_speeds(a: vehicle, a': vehicle) when distance(@(a), @(a')) < 2
        do exchange(a.speed, a'.speed);
}
)");
    REQUIRE(r.ok());
    const Rule& rule = r.model->motifs.at(0).rules.at(0);
    CHECK(rule.params.size() == 2);
    CHECK(rule.effects.at(0).kind == Effect::Kind::Exchange);
    CHECK(validate(*r.model).empty());
}

TEST_CASE("undeclared variable yields one diagnostic with a span")
{
    auto r = parse("type t object { var x: int[0, 3]; }\n"
                   "motif M { map line(2);\n"
                   "  rule r(a: t) when a.y > 1 do a.x := 0; }\n");
    CHECK_FALSE(r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].message.find("'y'") != std::string::npos);
    CHECK(r.diagnostics[0].span.line == 3);
    CHECK(r.diagnostics[0].span.col == 21);
}

TEST_CASE("parse errors")
{
    auto expect_error = [](const std::string& text, const std::string& fragment) {
        auto r = parse(text);
        CHECK_FALSE(r.ok());
        REQUIRE_FALSE(r.diagnostics.empty());
        CHECK(r.diagnostics[0].span.valid());
        INFO(r.diagnostics[0].message);
        CHECK(r.diagnostics[0].message.find(fragment) != std::string::npos);
    };
    expect_error("type t object { var x: int[0, 3] }", "expected ';'");
    expect_error("type t object { var x: int[0, 3]; }\nmotif M { map line(2); rule r(a: u) do a.x := 1; }",
                 "unknown type 'u'");
    expect_error("type t object { var x: bool; }\nmotif M { map line(2); rule r(a: t) when a.x + 1 do a.x := true; }",
                 "expects numbers");
    expect_error("type t object { var x: bool; }\nmotif M { map line(2); rule r(a: t) when distance(@(a)) > 1 do a.x := true; }",
                 "arity mismatch");
    expect_error("type t object { var x: bool; }\nmotif M { map line(2); rule r(a: t) do a.x := 3; }",
                 "cannot assign");
    expect_error("check c always \"unterminated;", "unterminated");
}

TEST_CASE("validation diagnostics")
{
    auto diags_of = [](const std::string& text) {
        auto r = parse(text);
        REQUIRE(r.ok());
        return validate(*r.model);
    };
    const std::string types = "type t object { var x: int[0, 3]; dynamics d do self.x := 0; }\n"
                              "type a agent { var y: int[0, 3]; }\n"
                              "motif M { map line(3); }\n";
    CHECK(diags_of(types).empty());

    auto d = diags_of(types + "component c: t in M at 7;\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("not on the map") != std::string::npos);

    d = diags_of(types + "component c: t in M at 1;\ncomponent e: t in M at 1;\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("occupied") != std::string::npos);

    d = diags_of("type t object { var x: int[0, 3]; dynamics d do other.x := 0; }\n"
                 "component other: t;\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("not a variable of self") != std::string::npos);

    d = diags_of(types + "goal g critical utility 3;\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("avoid or reach") != std::string::npos);

    d = diags_of(types + "component me: a in M;\nagent me { goals nope; }\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("undeclared goal") != std::string::npos);

    d = diags_of(types + "motif N { map line(2); rule r(p: t) do @(p) := 1; }\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("reconfigure") != std::string::npos);
}

TEST_CASE("printer respects precedence and associativity")
{
    auto roundtrip = [](const std::string& expr) {
        auto r = parse("type t object { var v: bool; }\ncheck c always " + expr + ";");
        REQUIRE(r.ok());
        const Expr& e = r.model->checks[0].expr;
        std::string text = print(e);
        auto again = parse("type t object { var v: bool; }\ncheck c always " + text + ";");
        REQUIRE(again.ok());
        CHECK(again.model->checks[0].expr == e);
        return text;
    };
    CHECK(roundtrip("(1 - 2) - 3 == 1 - (2 - 3)") == "1 - 2 - 3 == 1 - (2 - 3)");
    CHECK(roundtrip("true implies (false implies true)") == "true implies false implies true");
    CHECK(roundtrip("(true implies false) implies true") == "(true implies false) implies true");
    CHECK(roundtrip("not (true and false) or -(2) * 3 < -1.5") == "not (true and false) or -(2) * 3 < -1.5");
    CHECK(roundtrip("(forall x: t . true) and true").find("(forall") == 0);
}

TEST_CASE("real literals keep the declared precision")
{
    auto r = parse("type room object { var temp: real[17, 23] step 0.5; }\ncomponent r: room {temp = 20};\n");
    REQUIRE(r.ok());
    std::string text = print(*r.model);
    CHECK(text.find("real[17.0, 23.0] step 0.5") != std::string::npos);
    CHECK(text.find("temp = 20.0") != std::string::npos);
}

TEST_CASE("declaration order is preserved")
{
    auto r = parse("goal zeta best_effort reach true;\ngoal alpha best_effort reach false;\n");
    REQUIRE(r.ok());
    std::string text = print(*r.model);
    CHECK(text.find("zeta") < text.find("alpha"));
}

TEST_CASE("round trip is a fixpoint on the scenario corpus")
{
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(MOTIF_SCENARIO_DIR)) {
        if (entry.path().extension() != ".motif")
            continue;
        ++files;
        INFO(entry.path().string());
        ModelFile m = load_model(entry.path());
        std::string once = print(m);
        auto r = parse(once);
        for (const auto& d : r.diagnostics)
            INFO(d.format());
        REQUIRE(r.ok());
        CHECK(*r.model == m);
        CHECK(print(*r.model) == once);
        CHECK(model_hash(*r.model) == model_hash(m));
    }
    CHECK(files >= 1);
}

TEST_CASE("parsing is total on mangled input")
{
    std::string base = read_file(testing::scenario_path("thermostat"));
    std::mt19937_64 rng(11);
    const std::string alphabet = "{}()[];:.,@?=<>-+*%\"'/ \nabcxyz019_";
    for (int trial = 0; trial < 400; ++trial) {
        std::string text = base;
        int edits = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < edits; ++i) {
            std::size_t pos = rng() % (text.size() + 1);
            switch (rng() % 3) {
            case 0: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
            case 1:
                if (pos < text.size())
                    text.erase(pos, 1 + rng() % 8);
                break;
            default: text = text.substr(0, pos); break;
            }
        }
        auto r = parse(text);
        if (!r.ok()) {
            CHECK_FALSE(r.diagnostics.empty());
            for (const auto& d : r.diagnostics)
                CHECK(d.span.valid());
        }
        else {
            validate(*r.model);
        }
    }
    std::string deep(5000, '(');
    auto r = parse("check c always " + deep);
    CHECK_FALSE(r.ok());
}
