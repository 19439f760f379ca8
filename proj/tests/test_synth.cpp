#include "game_oracle.hpp"
#include "support.hpp"

#include <chrono>

using namespace motif;

namespace {

GameModel hand_game(std::vector<std::tuple<Turn, bool, bool, std::vector<std::size_t>>> spec)
{
    GameModel g;
    for (std::size_t s = 0; s < spec.size(); ++s) {
        auto& [turn, bad, target, succ] = spec[s];
        GameState st;
        st.turn = turn;
        st.bad = bad;
        st.target = target;
        st.key = stable_hash("h" + std::to_string(s));
        st.twin = s;
        for (std::size_t i = 0; i < succ.size(); ++i)
            st.actions.push_back({"a" + std::to_string(i), turn == Turn::Agent, succ[i]});
        g.states.push_back(st);
    }
    return g;
}

Goal avoid(const std::string& text, bool critical = true)
{
    auto r = parse("type room object { var temp: real[17, 23] step 0.5; }\n"
                   "type thermostat agent { var mode: {Off, On}; }\n"
                   "type unit agent { var x: int[0, 3]; }\n"
                   "type clock object { var v: int[0, 5]; }\n"
                   "component lounge: room;\ncomponent me: unit;\ncomponent c: clock;\n"
                   "goal g " + std::string(critical ? "critical" : "best_effort") + " avoid " + text + ";\n");
    REQUIRE(r.ok());
    return r.model->goals.at(0);
}

}  // namespace

TEST_CASE("solvers agree with positional-strategy brute force")
{
    auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        GameModel g = oracle::random_game(seed);
        Controller safe = solve_safety(g);
        Controller reach = solve_reach(g);
        INFO("seed " << seed);
        CHECK(safe.winning == oracle::safety_winning(g));
        CHECK(reach.winning == oracle::reach_winning(g));
        CHECK(oracle::maximally_permissive(g, safe));
        CHECK(oracle::closure_violations(g, safe) == 0);
        CHECK(controller_violations(g, safe).empty());
        CHECK(controller_violations(g, reach).empty());
        for (std::size_t s = 0; s < g.size(); ++s)
            if (reach.wins(s))
                CHECK(oracle::reach_progress(g, reach, s));
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 10.0);
}

TEST_CASE("safety basics")
{
    // agent 0 -> env 1 -> agent 0; nothing bad
    GameModel g = hand_game({{Turn::Agent, false, false, {1, 1}}, {Turn::Env, false, false, {0}}});
    Controller c = solve_safety(g);
    CHECK(c.winning_count() == 2);
    CHECK(c.kept.at(0).size() == 2);

    // env 1 may go to bad 2: 1 loses, and agent 0 forced through it loses too
    g = hand_game({{Turn::Agent, false, false, {1}},
                   {Turn::Env, false, false, {0, 2}},
                   {Turn::Agent, true, false, {2}}});
    c = solve_safety(g);
    CHECK(c.winning_count() == 0);

    // a second agent choice avoiding 1 keeps 0 winning
    g = hand_game({{Turn::Agent, false, false, {1, 3}},
                   {Turn::Env, false, false, {0, 2}},
                   {Turn::Agent, true, false, {2}},
                   {Turn::Env, false, false, {0}}});
    c = solve_safety(g);
    CHECK(c.wins(0));
    CHECK_FALSE(c.wins(1));
    CHECK(c.kept.at(0) == std::vector<std::size_t>{1});
}

TEST_CASE("reach basics")
{
    GameModel g = hand_game({{Turn::Agent, false, true, {1}}, {Turn::Env, false, false, {0}}});
    Controller c = solve_reach(g);
    CHECK(c.rank[0] == 0);
    CHECK(c.kept.at(0).empty());

    // Fig. 1 shape: from 0 the agent can go via env 1 (may hit bad 4) or env 2 (always to target 3)
    g = hand_game({{Turn::Agent, false, false, {1, 2}},
                   {Turn::Env, false, false, {3, 4}},
                   {Turn::Env, false, false, {3}},
                   {Turn::Agent, false, true, {2}},
                   {Turn::Agent, true, false, {4}}});
    Controller safe = solve_safety(g);
    Controller r = solve_reach(g, &safe);
    REQUIRE(r.wins(0));
    CHECK(r.rank[0] == 2);
    CHECK(r.kept.at(0) == std::vector<std::size_t>{1});
    CHECK(oracle::reach_progress(g, r, 0));
}

TEST_CASE("monotonicity in bad and target")
{
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        GameModel g = oracle::random_game(seed);
        GameModel more = g;
        for (std::size_t s = 0; s < g.size(); s += 3) {
            more.states[s].bad = true;
            more.states[s].target = true;
        }
        auto w1 = solve_safety(g).winning, w2 = solve_safety(more).winning;
        auto r1 = solve_reach(g).winning, r2 = solve_reach(more).winning;
        for (std::size_t s = 0; s < g.size(); ++s) {
            CHECK((!w2[s] || w1[s]));
            CHECK((!r1[s] || r2[s]));
        }
    }
}

TEST_CASE("thermostat grounds into at most 2*13*2 states")
{
    Configuration cfg = instantiate(load_model(testing::scenario_path("thermostat")));
    GameModel g = ground(cfg, "stat");
    CHECK(g.size() <= 2 * 13 * 2);
    CHECK(g.size() >= 4);
    for (const auto& s : g.states) {
        CHECK_FALSE(s.actions.empty());
        for (const auto& a : s.actions) {
            CHECK(a.controllable == (s.turn == Turn::Agent));
            CHECK(g.states[a.target].turn != s.turn);
        }
    }
    mark_bad(g, avoid("lounge.temp < 17.5 or lounge.temp > 22.5").expr, "stat");
    Controller c = solve_safety(g);
    CHECK(c.wins(g.initial));
    CHECK(oracle::closure_violations(g, c) == 0);
    CHECK(controller_violations(g, c).empty());
}

TEST_CASE("a world without candidates is a two-state game")
{
    Configuration cfg = testing::config_of("type unit agent { var x: int[0, 3]; }\ncomponent me: unit;\n");
    GameModel g = ground(cfg, "me");
    REQUIRE(g.size() == 2);
    CHECK(g.states[0].actions.at(0).label == kIdle);
    CHECK(g.states[1].actions.at(0).label == kPass);
}

TEST_CASE("grounding respects the state budget")
{
    Configuration cfg = instantiate(load_model(testing::scenario_path("thermostat")));
    try {
        ground(cfg, "stat", Bounds{1, 100});
        FAIL("expected StateBudgetExceeded");
    }
    catch (const BudgetExceeded& e) {
        CHECK(e.code() == ErrorCode::StateBudgetExceeded);
    }
    CHECK_THROWS_AS(ground(cfg, "stat", Bounds{1000, 2}), BudgetExceeded);
}

TEST_CASE("composition with a trivial internal game is the identity")
{
    GameModel unit = hand_game({{Turn::Agent, false, true, {1}}, {Turn::Env, false, true, {0}}});
    unit.states[0].actions[0].label = kIdle;
    unit.states[1].actions[0].label = kPass;
    unit.states[0].twin = 1;
    unit.states[1].twin = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        GameModel g = oracle::random_game(seed, 8, 3, true);
        GameModel p = compose_environments(g, unit);
        CHECK(p.size() <= g.size() * unit.size());
        Controller a = solve_safety(g), b = solve_safety(p);
        CHECK(a.wins(g.initial) == b.wins(p.initial));
        Controller ra = solve_reach(g), rb = solve_reach(p);
        CHECK(ra.wins(g.initial) == rb.wins(p.initial));
    }
}

TEST_CASE("2x2 product by hand")
{
    // external: agent e0 --x--> env e1 --u--> e0 ; internal: agent i0 --y--> env i1 --pass--> i0
    GameModel ext = hand_game({{Turn::Agent, false, false, {1}}, {Turn::Env, true, false, {0}}});
    ext.states[0].actions[0].label = "x";
    ext.states[1].actions[0].label = "u";
    ext.states[0].twin = 1;
    ext.states[1].twin = 0;
    GameModel in = hand_game({{Turn::Agent, false, true, {1, 1}}, {Turn::Env, false, true, {0}}});
    in.states[0].actions[0].label = "y";
    in.states[0].actions[1].label = kIdle;
    in.states[1].actions[0].label = kPass;
    in.states[0].twin = 1;
    in.states[1].twin = 0;
    GameModel p = compose_environments(ext, in);
    REQUIRE(p.size() == 2);
    const auto& a = p.states[p.initial];
    REQUIRE(a.actions.size() == 2);
    CHECK(a.actions[0].label == "x & y");
    CHECK(a.actions[1].label == "x");
    const auto& e = p.states[a.actions[0].target];
    CHECK(e.bad);
    CHECK_FALSE(e.target);
    REQUIRE(e.actions.size() == 1);
    CHECK(e.actions[0].label == "u");
    CHECK(e.actions[0].target == p.initial);
}

TEST_CASE("controller export and import")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        GameModel g = oracle::random_game(seed);
        for (const Controller& c : {solve_safety(g), solve_reach(g)}) {
            std::string text = export_controller(g, c);
            CHECK(import_controller(text, g) == c);
            CHECK(export_controller(g, import_controller(text, g)) == text);
        }
    }
    // empty winning set
    GameModel doomed = hand_game({{Turn::Agent, true, false, {1}}, {Turn::Env, true, false, {0}}});
    Controller none = solve_safety(doomed);
    CHECK(none.winning_count() == 0);
    CHECK(import_controller(export_controller(doomed, none), doomed) == none);
}

TEST_CASE("tampered controller is rejected")
{
    GameModel g = hand_game({{Turn::Agent, false, false, {1, 3}},
                             {Turn::Env, false, false, {0, 2}},
                             {Turn::Agent, true, false, {2}},
                             {Turn::Env, false, false, {0}}});
    Controller c = solve_safety(g);
    std::string text = export_controller(g, c);
    std::string key0 = hex64(g.states[0].key);
    std::string tampered = text + key0 + "\ta0\t-\n";
    try {
        import_controller(tampered, g);
        FAIL("expected InvariantViolation");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvariantViolation);
        CHECK(std::string(e.what()).find(key0) != std::string::npos);
    }
    CHECK_THROWS_AS(import_controller("# controller safety\nzz\t-\t-\n", g), Error);
    CHECK_THROWS_AS(import_controller("garbage\n", g), Error);
}

TEST_CASE("horizon planning picks the safe action")
{
    Configuration cfg = testing::config_of(R"(
type unit agent { var x: int[0, 3]; }
motif M {
    map line(1);
    rule up(a: unit) when a.x < 3 do a.x := a.x + 1;
    rule down(a: unit) when a.x > 0 do a.x := a.x - 1;
}
component me: unit {x = 2} in M;
)");
    Plan p = plan_horizon(cfg, "me", {avoid("me.x == 3")}, 1);
    CHECK(p.first.label == "M/down(a=me)");
    CHECK(p.root.children.size() == 1);
    CHECK_THROWS_AS(plan_horizon(cfg, "me", {avoid("me.x == 3")}, 0), Error);
}

TEST_CASE("no safe plan when the environment forces a violation")
{
    Configuration cfg = testing::config_of(R"(
type unit agent { var x: int[0, 3]; }
type clock object { var v: int[0, 5]; dynamics tick when self.v < 5 do self.v := self.v + 1; }
motif M { map line(1); rule up(a: unit) when a.x < 3 do a.x := a.x + 1; }
component me: unit in M;
component c: clock;
)");
    try {
        plan_horizon(cfg, "me", {avoid("c.v >= 1")}, 1);
        FAIL("expected NoSafePlan");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSafePlan);
    }
}

TEST_CASE("thermostat at Tmin plans to switch on")
{
    Configuration cfg = instantiate(load_model(testing::scenario_path("thermostat")));
    cfg.set_var("lounge", "temp", Value::milli(18000));
    Plan p = plan_horizon(cfg, "stat", {avoid("lounge.temp < 17.5")}, 1);
    CHECK(p.first.label == "House/switch_on(t=stat,r=lounge)");
}

TEST_CASE("best-effort goals break ties among safe actions")
{
    Configuration cfg = testing::config_of(R"(
type unit agent { var x: int[0, 3]; }
motif M {
    map line(1);
    rule up(a: unit) when a.x < 3 do a.x := a.x + 1;
    rule down(a: unit) when a.x > 0 do a.x := a.x - 1;
}
component me: unit {x = 1} in M;
)");
    auto r = parse("type unit agent { var x: int[0, 3]; }\ncomponent me: unit;\n"
                   "goal top best_effort reach me.x == 3;\ngoal low best_effort utility 0 - me.x;\n");
    REQUIRE(r.ok());
    Plan p = plan_horizon(cfg, "me", r.model->goals, 2);
    CHECK(p.first.label == "M/up(a=me)");
    CHECK(p.score.at(0) == 1);
    Plan q = plan_horizon(cfg, "me", {r.model->goals.at(1)}, 1);
    CHECK(q.first.label == "M/down(a=me)");
}

TEST_CASE("agent_move picks the first wanted move of agent_moves")
{
    auto r = parse(R"(
type rover agent { var pos: int[0, 5]; }
type battery object { var level: int[0, 3]; }
motif Field {
    map line(1);
    rule wave(r: rover) when r.pos >= 0 do r.pos := r.pos;
    rule hop(r: rover) when r.pos < 5 do r.pos := r.pos + 1;
}
motif Power {
    map line(1);
    rule drive(r: rover, b: battery) when b.level > 0 and r.pos < 5 do r.pos := r.pos + 1, b.level := b.level - 1;
    rule charge(r: rover, b: battery) when b.level < 3 do b.level := b.level + 1;
}
component me: rover in Field in Power;
component cell: battery {level = 1} in Power;
)");
    REQUIRE(r.ok());
    Configuration cfg = instantiate(*r.model);
    for (const Explorer& ex : {Explorer("me"), Explorer("me", {"Power"})}) {
        auto all = ex.agent_moves(cfg);
        REQUIRE(all.size() > 2);
        for (std::size_t i = 0; i < all.size(); ++i) {
            std::vector<std::string> wanted{"nothing", all[i].label};
            if (i + 1 < all.size())
                wanted.push_back(all.back().label);
            auto mv = ex.agent_move(cfg, wanted);
            REQUIRE(mv);
            CHECK(mv->label == all[i].label);
            CHECK(mv->parts == all[i].parts);
            CHECK(mv->next == all[i].next);
        }
        CHECK_FALSE(ex.agent_move(cfg, {"nothing"}));
    }
}
