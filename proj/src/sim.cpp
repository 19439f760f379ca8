#include "motif/sim.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace motif {

namespace {

struct Option {
    std::string label;
    std::string issuer;
    std::vector<Candidate> parts;
};

bool skippable(const Error& e)
{
    return e.code() == ErrorCode::EffectError || e.code() == ErrorCode::NotEnabled ||
           e.code() == ErrorCode::EvalError || e.code() == ErrorCode::UnknownComponent;
}

// Applies parts in order; nullopt when the truth does not admit them.
std::optional<std::pair<Configuration, std::vector<Event>>> fire(const Configuration& cfg,
                                                                 const std::vector<Candidate>& parts)
{
    Configuration next = cfg;
    std::vector<Event> events;
    try {
        for (const auto& c : parts) {
            auto [after, ev] = apply(next, c);
            next = std::move(after);
            events.push_back(std::move(ev));
        }
    }
    catch (const Error& e) {
        if (!skippable(e))
            throw;
        return std::nullopt;
    }
    return std::make_pair(std::move(next), std::move(events));
}

class Scheduler {
public:
    Scheduler(const RunOptions& opt) : opt_(opt), rng_(opt.seed) {}

    bool script_done() const { return pos_ >= opt_.script.size(); }

    // Index into pool, or nullopt for an empty move. Sets blocked when a script entry has no match.
    std::optional<std::size_t> choose(const std::vector<Option>& pool, Turn turn, bool& blocked)
    {
        blocked = false;
        switch (opt_.policy) {
        case PolicyKind::Random:
            if (pool.empty())
                return std::nullopt;
            return static_cast<std::size_t>(rng_() % pool.size());
        case PolicyKind::RoundRobin: {
            if (pool.empty())
                return std::nullopt;
            const std::string& last = last_[turn == Turn::Agent ? 0 : 1];
            std::optional<std::size_t> next, first;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                const std::string& l = pool[i].label;
                if (!first || l < pool[*first].label)
                    first = i;
                if (l > last && (!next || l < pool[*next].label))
                    next = i;
            }
            std::size_t pick = next ? *next : *first;
            last_[turn == Turn::Agent ? 0 : 1] = pool[pick].label;
            return pick;
        }
        case PolicyKind::Script: {
            const std::string& want = opt_.script[pos_++];
            if (want == kIdle || want == kPass)
                return std::nullopt;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (pool[i].label == want)
                    return i;
            blocked = true;
            return std::nullopt;
        }
        }
        return std::nullopt;
    }

private:
    const RunOptions& opt_;
    std::mt19937_64 rng_;
    std::string last_[2];
    std::size_t pos_ = 0;
};

}  // namespace

bool RunResult::checks_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

RunResult run(const ModelFile& model, const RunOptions& opt)
{
    Configuration truth = instantiate(model);
    std::vector<Agent> agents;
    std::set<std::string> agent_ids;
    for (AgentSpec spec : model.agents) {
        KnowledgeRepository repo = make_repository(model, spec);
        if (auto it = opt.controllers.find(spec.id); it != opt.controllers.end()) {
            repo.controller = it->second;
            spec.explicit_controller = false;
        }
        agent_ids.insert(spec.id);
        agents.emplace_back(spec, std::move(repo), truth, opt.seed);
    }

    RunResult res;
    Trace& tr = res.trace;
    tr.model = model_hash(model);
    tr.seed = opt.seed;
    tr.policy = opt.policy;
    tr.budget = opt.steps;
    tr.initial = truth.hash();

    CheckMonitor monitor(model.checks);
    monitor.observe(0, truth, nullptr);
    Scheduler sched(opt);
    const bool scripted = opt.policy == PolicyKind::Script;
    double last_uncontrollable = 0;

    auto observe_all = [&](long t) {
        for (auto& ag : agents)
            ag.observe(truth, t, last_uncontrollable);
        if (opt.on_state)
            opt.on_state(t, truth, agents);
    };

    long t = 0;
    for (; t < opt.steps; ++t) {
        observe_all(t);
        auto cands = step_candidates(truth);
        if (cands.empty()) {
            tr.stop = "quiescent";
            break;
        }
        if (scripted && sched.script_done()) {
            tr.stop = "script-end";
            break;
        }
        const Turn turn = t % 2 == 0 ? Turn::Agent : Turn::Env;
        std::vector<Option> pool;
        if (scripted || turn == Turn::Agent) {
            for (auto& ag : agents) {
                Command c = ag.deliberate(t);
                if (!c.idle() && fire(truth, c.parts))
                    pool.push_back({c.label, ag.id(), std::move(c.parts)});
            }
        }
        if (scripted || turn == Turn::Env) {
            for (auto& c : cands)
                if (c.dynamics || !agent_ids.count(c.initiator()))
                    pool.push_back({c.label(), "env", {c}});
        }

        bool blocked = false;
        auto pick = sched.choose(pool, turn, blocked);
        if (blocked) {
            tr.stop = "script-blocked";
            break;
        }
        TraceEvent ev;
        ev.step = t;
        ev.turn = turn;
        ev.issuer = "none";
        ev.label = turn == Turn::Agent ? kIdle : kPass;
        const Configuration before = truth;
        last_uncontrollable = 0;
        if (pick) {
            Option& o = pool[*pick];
            auto fired = fire(truth, o.parts);
            if (!fired)
                throw Error(ErrorCode::InvariantViolation, "chosen event '" + o.label + "' cannot fire");
            truth = std::move(fired->first);
            for (const auto& e : fired->second)
                ev.effects.insert(ev.effects.end(), e.effects.begin(), e.effects.end());
            ev.label = o.label;
            ev.issuer = o.issuer;
            ev.firings = std::move(o.parts);
            if (scripted)
                ev.turn = o.issuer == "env" ? Turn::Env : Turn::Agent;
            last_uncontrollable = o.issuer == "env" ? 1 : 0;
        }
        ev.state = truth.hash();
        if (opt.record_beliefs)
            for (const auto& ag : agents)
                ev.beliefs[ag.id()] = ag.model().believed.hash();
        tr.events.push_back(std::move(ev));
        monitor.observe(t + 1, truth, &before);
    }
    if (t == opt.steps)
        observe_all(t);

    tr.final = truth.hash();
    res.final = std::move(truth);
    res.checks = monitor.finish();
    return res;
}

Configuration replay(const ModelFile& model, const Trace& trace)
{
    if (trace.model != model_hash(model))
        throw Error(ErrorCode::ReplayDivergence, "trace was recorded for a different model");
    Configuration cfg = instantiate(model);
    if (cfg.hash() != trace.initial)
        throw Error(ErrorCode::ReplayDivergence, "initial state differs");
    long expected = 0;
    for (const auto& ev : trace.events) {
        const std::string where = "step " + std::to_string(ev.step);
        if (ev.step != expected)
            throw Error(ErrorCode::ReplayDivergence, where + ": expected step " + std::to_string(expected));
        ++expected;
        for (const auto& c : ev.firings) {
            try {
                cfg = apply(cfg, c).first;
            }
            catch (const Error& e) {
                throw Error(ErrorCode::ReplayDivergence, where + ": '" + c.label() + "' cannot fire: " + e.what());
            }
        }
        if (cfg.hash() != ev.state)
            throw Error(ErrorCode::ReplayDivergence, where + ": state " + hex64(cfg.hash()) + " differs from recorded " +
                                                         hex64(ev.state));
    }
    if (cfg.hash() != trace.final)
        throw Error(ErrorCode::ReplayDivergence, "final state differs after step " + std::to_string(expected));
    return cfg;
}

ModelFile scenario_thermostat() { return load_model(std::string(MOTIF_SCENARIO_DIR) + "/thermostat.motif"); }
ModelFile scenario_platoon() { return load_model(std::string(MOTIF_SCENARIO_DIR) + "/platoon.motif"); }
ModelFile scenario_soccer() { return load_model(std::string(MOTIF_SCENARIO_DIR) + "/soccer.motif"); }
ModelFile scenario_shuttle() { return load_model(std::string(MOTIF_SCENARIO_DIR) + "/shuttle.motif"); }

}  // namespace motif
