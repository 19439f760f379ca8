#include "support.hpp"

#include "motif/sim.hpp"

using namespace motif;
using testing::model_of;

namespace {

const char* const kRing = R"(
type mob agent { var n: int[0, 9]; }
motif Ring {
    map ring(6);
    reconfigure step(a: mob) when empty((@(a) + 1) % 6) do @(a) := (@(a) + 1) % 6;
}
component m1: mob in Ring at 0;
component m2: mob in Ring at 2;
component m3: mob in Ring at 4;
check apart always forall a: mob . forall b: mob . a == b or @(a, Ring) != @(b, Ring);
)";

RunOptions opts(long steps, std::uint64_t seed, PolicyKind p = PolicyKind::Random)
{
    RunOptions o;
    o.steps = steps;
    o.seed = seed;
    o.policy = p;
    return o;
}

}  // namespace

TEST_CASE("runs are deterministic and replay exactly")
{
    ModelFile m = model_of(kRing);
    RunResult a = run(m, opts(200, 4));
    RunResult b = run(m, opts(200, 4));
    CHECK(a.trace.to_jsonl() == b.trace.to_jsonl());
    CHECK(a.trace.events.size() == 200);
    CHECK(a.checks_passed());
    CHECK(replay(m, a.trace) == a.final);
    Trace parsed = Trace::parse(a.trace.to_jsonl());
    CHECK(parsed.to_jsonl() == a.trace.to_jsonl());
    CHECK(replay(m, parsed) == a.final);
    CHECK(run(m, opts(200, 5)).trace.to_jsonl() != a.trace.to_jsonl());
}

TEST_CASE("replay detects tampering")
{
    ModelFile m = model_of(kRing);
    RunResult r = run(m, opts(50, 2));
    Trace cut = r.trace;
    cut.events.erase(cut.events.begin() + 10);
    try {
        replay(m, cut);
        FAIL("expected ReplayDivergence");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ReplayDivergence);
        CHECK(std::string(e.what()).find("step 11") != std::string::npos);
    }
    Trace empty = r.trace;
    empty.events.clear();
    empty.final = empty.initial;
    CHECK(replay(m, empty) == instantiate(m));
    ModelFile other = model_of(std::string(kRing) + "component m4: mob in Ring at 5;\n");
    CHECK_THROWS_AS(replay(other, r.trace), Error);

    std::string text = r.trace.to_jsonl();
    text.erase(text.find("{\"type\":\"event\""), text.find('\n', text.find("{\"type\":\"event\"")) + 1 -
                                                     text.find("{\"type\":\"event\""));
    try {
        replay(m, Trace::parse(text));
        FAIL("expected ReplayDivergence");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ReplayDivergence);
    }
    CHECK_THROWS_AS(Trace::parse("{\"type\":\"event\"}\n"), Error);
}

TEST_CASE("a model without rules is quiescent at once")
{
    ModelFile m = model_of("type t object { var v: bool; }\ncomponent x: t;\n");
    RunResult r = run(m, opts(10, 1));
    CHECK(r.trace.events.empty());
    CHECK(r.trace.stop == "quiescent");
    RunResult z = run(model_of(kRing), opts(0, 1));
    CHECK(z.trace.events.empty());
    CHECK(z.trace.stop == "budget");
}

TEST_CASE("turns alternate between agents and the environment")
{
    ModelFile m = load_model(testing::scenario_path("thermostat"));
    RunResult r = run(m, opts(400, 3));
    REQUIRE(r.trace.events.size() == 400);
    std::uint64_t seen = r.trace.initial;
    for (const auto& ev : r.trace.events) {
        CHECK((ev.turn == Turn::Agent) == (ev.step % 2 == 0));
        if (ev.turn == Turn::Env)
            CHECK(ev.issuer == "env");
        else
            CHECK(ev.issuer != "env");
        // beliefs are those held when the event was chosen
        CHECK(ev.beliefs.at("stat") == seen);
        seen = ev.state;
    }
    CHECK(r.checks_passed());
}

TEST_CASE("round robin fires every persistently enabled candidate within a rotation")
{
    ModelFile m = model_of(R"(
type cell object {
    var a: int[0, 1000];
    var b: int[0, 1000];
    var c: int[0, 1000];
    dynamics ia when self.a < 1000 do self.a := self.a + 1;
    dynamics ib when self.b < 1000 do self.b := self.b + 1;
    dynamics ic when self.c < 1000 do self.c := self.c + 1;
}
component x: cell;
)");
    RunResult r = run(m, opts(60, 1, PolicyKind::RoundRobin));
    std::vector<std::string> env;
    for (const auto& ev : r.trace.events)
        if (ev.turn == Turn::Env)
            env.push_back(ev.label);
    REQUIRE(env.size() == 30);
    for (std::size_t i = 0; i + 3 <= env.size(); ++i) {
        std::set<std::string> window(env.begin() + static_cast<long>(i), env.begin() + static_cast<long>(i) + 3);
        CHECK(window.size() == 3);
    }
}

TEST_CASE("scripted runs follow the event list")
{
    ModelFile m = model_of(kRing);
    RunOptions o = opts(100, 0, PolicyKind::Script);
    o.script = {"Ring/step(a=m1)", "Ring/step(a=m2)", "pass", "Ring/step(a=m1)"};
    RunResult r = run(m, o);
    REQUIRE(r.trace.events.size() == 4);
    CHECK(r.trace.stop == "script-end");
    CHECK(r.final.address("m1", "Ring") == NodeId("2"));
    CHECK(r.final.address("m2", "Ring") == NodeId("3"));
    o.script = {"Ring/step(a=m1)", "Ring/step(a=m1)"};
    RunResult blocked = run(m, o);
    CHECK(blocked.trace.stop == "script-blocked");
    CHECK(blocked.trace.events.size() == 1);
}

TEST_CASE("check monitor windows")
{
    ModelFile m = model_of(R"(
type lamp object { var on: bool; var ack: bool; }
component l: lamp;
check quick within 1 after rise l.on : l.ack;
check seen within 2 after change l.on : l.ack;
check lit final l.on;
check never always not l.ack;
)");
    Configuration s0 = instantiate(m);
    auto with = [&](bool on, bool ack) {
        Configuration c = s0;
        c.set_var("l", "on", Value::boolean(on));
        c.set_var("l", "ack", Value::boolean(ack));
        return c;
    };
    std::vector<Configuration> states{with(false, false), with(true, false), with(true, false), with(true, true),
                                      with(false, false), with(false, false), with(false, false)};
    CheckMonitor mon(m.checks);
    for (std::size_t i = 0; i < states.size(); ++i)
        mon.observe(static_cast<long>(i), states[i], i ? &states[i - 1] : nullptr);
    auto res = mon.finish();
    REQUIRE(res.size() == 4);
    CHECK_FALSE(res[0].passed);
    CHECK(res[0].first_failure == 2);
    CHECK_FALSE(res[1].passed);
    CHECK(res[1].first_failure == 6);
    CHECK_FALSE(res[2].passed);
    CHECK(res[2].first_failure == 6);
    CHECK_FALSE(res[3].passed);
    CHECK(res[3].first_failure == 3);
}

TEST_CASE("bundled scenarios meet their checks")
{
    for (const auto& name : {"thermostat", "platoon", "soccer", "shuttle", "exchange", "mobility"}) {
        ModelFile m = load_model(testing::scenario_path(name));
        for (std::uint64_t seed : {1, 2}) {
            RunOptions o = opts(m.scenario ? std::min<long>(m.scenario->steps, 1000) : 300, seed);
            if (m.scenario)
                o.policy = m.scenario->policy;
            RunResult r = run(m, o);
            INFO(name << " seed " << seed);
            for (const auto& c : r.checks)
                CHECK_MESSAGE(c.passed, c.name << " failed at step " << c.first_failure << ": " << c.note);
            CHECK(replay(m, r.trace) == r.final);
        }
    }
}

TEST_CASE("synthesized thermostat controller drives the agent")
{
    ModelFile m = load_model(testing::scenario_path("thermostat"));
    Synthesis s = synthesize(m, "stat", "band");
    REQUIRE(s.initial_wins());
    CHECK(s.game.size() <= 52);
    RunOptions o = opts(2000, 3);
    o.controllers["stat"] = ControllerTable::from(s.game, s.result());
    long switches = 0;
    o.on_state = [&](long, const Configuration& truth, const std::vector<Agent>& agents) {
        const Agent& a = agents.at(0);
        REQUIRE(a.repo().controller);
        CHECK(a.repo().controller->find(a.model().believed.hash()));
        Value t = truth.component("lounge").state.at("temp");
        CHECK(t.as_double() >= 17.5);
        CHECK(t.as_double() <= 22.5);
    };
    RunResult r = run(m, o);
    for (const auto& ev : r.trace.events)
        if (ev.issuer == "stat")
            ++switches;
    CHECK(switches > 0);
    CHECK(r.checks_passed());
    CHECK_THROWS_AS(synthesize(m, "nobody", "band"), Error);
    CHECK_THROWS_AS(synthesize(m, "stat", "nothing"), Error);
}
