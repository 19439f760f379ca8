#pragma once

#include "motif/agent.hpp"
#include "motif/lang.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace motif {

struct TraceEvent {
    long step = 0;
    Turn turn = Turn::Agent;
    std::string label;   // idle / pass when nothing fired
    std::string issuer;  // agent id, or "env"
    std::vector<Candidate> firings;
    std::vector<std::string> effects;
    std::uint64_t state = 0;  // truth hash after the event
    std::map<std::string, std::uint64_t> beliefs;  // agent -> believed-model hash

    bool operator==(const TraceEvent&) const = default;
};

struct Trace {
    std::uint64_t model = 0;
    std::uint64_t seed = 0;
    PolicyKind policy = PolicyKind::Random;
    long budget = 0;
    std::uint64_t initial = 0;
    std::vector<TraceEvent> events;
    std::string stop = "budget";  // budget | quiescent | script-end | script-blocked
    std::uint64_t final = 0;

    /// One JSON object per line: header, events, end.
    std::string to_jsonl() const;
    /// Throws ParseError on malformed input.
    static Trace parse(const std::string& text);
};

struct CheckResult {
    std::string name;
    bool passed = true;
    long first_failure = -1;  // step index of the state that failed
    std::string note;
};

/// Evaluates scenario checks on the truth, state by state (step 0 is the initial state).
class CheckMonitor {
public:
    explicit CheckMonitor(std::vector<CheckDecl> checks);

    void observe(long step, const Configuration& now, const Configuration* prev);
    /// Closes pending windows and final checks on the last observed state.
    std::vector<CheckResult> finish();

private:
    struct Pending {
        long deadline;
        long raised;
    };
    struct State {
        CheckResult result;
        std::optional<Value> last_trigger;
        std::vector<Pending> pending;
        bool final_holds = true;
    };
    void fail(State& st, long step, const std::string& note);

    std::vector<CheckDecl> checks_;
    std::vector<State> states_;
    long last_step_ = -1;
};

struct RunOptions {
    long steps = 100;
    std::uint64_t seed = 0;
    PolicyKind policy = PolicyKind::Random;
    std::vector<std::string> script;
    /// Library controllers per agent; such agents also stop using explicit controllers.
    std::map<std::string, ControllerTable> controllers;
    bool record_beliefs = true;
    /// Called with the truth after each state is reached (step 0 = initial) and the agents.
    std::function<void(long, const Configuration&, const std::vector<Agent>&)> on_state;
};

struct RunResult {
    Trace trace;
    Configuration final;
    std::vector<CheckResult> checks;

    bool checks_passed() const;
};

/// Alternates agent turns (one agent command fires) and environment turns (one
/// uncontrollable candidate fires); stops at the budget or when nothing is enabled.
RunResult run(const ModelFile& model, const RunOptions& options);

/// Re-applies recorded firings; throws ReplayDivergence naming the first bad step.
Configuration replay(const ModelFile& model, const Trace& trace);

struct Synthesis {
    GameModel game;
    Controller safety;
    std::optional<Controller> reach;

    const Controller& result() const { return reach ? *reach : safety; }
    bool initial_wins() const { return result().wins(game.initial); }
};

/// Grounds the model from the agent's point of view and solves safety against the
/// agent's critical avoid goals (plus `goal` if it is an avoid), then reach when
/// `goal` has a target. Throws UnknownComponent / InvariantViolation on bad names or
/// utility goals, and StateBudgetExceeded past the bound.
Synthesis synthesize(const ModelFile& model, const std::string& agent, const std::string& goal,
                     const Bounds& bounds = {});

/// Bundled scenario models.
ModelFile scenario_thermostat();
ModelFile scenario_platoon();
ModelFile scenario_soccer();
ModelFile scenario_shuttle();

}  // namespace motif
