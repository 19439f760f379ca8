#include "motif/synth.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace motif {

namespace {

bool skippable(const Error& e)
{
    switch (e.code()) {
    case ErrorCode::EffectError:
    case ErrorCode::NotEnabled:
    case ErrorCode::EvalError: return true;
    default: return false;
    }
}

// Applies parts in order; nullopt when some part cannot fire.
std::optional<Move> fire(const Configuration& cfg, std::vector<Candidate> parts)
{
    Move m;
    m.next = cfg;
    try {
        for (const auto& c : parts) {
            auto [next, ev] = apply(m.next, c);
            m.next = std::move(next);
            m.events.push_back(std::move(ev));
        }
    }
    catch (const Error& e) {
        if (!skippable(e))
            throw;
        return std::nullopt;
    }
    for (const auto& c : parts)
        m.label += (m.label.empty() ? "" : " & ") + c.label();
    m.parts = std::move(parts);
    return m;
}

Move idle(const Configuration& cfg, const char* label)
{
    Move m;
    m.label = label;
    m.next = cfg;
    return m;
}

bool eval_pred(const Expr& pred, const Configuration& cfg, const std::string& ego)
{
    Binding self{{"self", ego}};
    EvalContext ctx;
    ctx.cfg = &cfg;
    ctx.binding = &self;
    try {
        return holds(pred, ctx);
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::EvalError)
            throw;
        return false;
    }
}

}  // namespace

std::optional<std::size_t> GameModel::find(std::uint64_t key) const
{
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i].key == key)
            return i;
    return std::nullopt;
}

bool Explorer::internal(const std::string& motif) const
{
    return std::find(internal_.begin(), internal_.end(), motif) != internal_.end();
}

std::vector<Move> Explorer::agent_moves(const Configuration& cfg) const
{
    std::vector<Candidate> ext, intl;
    for (auto& c : step_candidates(cfg, ego_)) {
        if (c.dynamics || c.initiator() != ego_)
            continue;
        (internal(c.motif) ? intl : ext).push_back(std::move(c));
    }
    std::vector<Move> out;
    if (internal_.empty()) {
        for (auto& c : ext)
            if (auto m = fire(cfg, {c}))
                out.push_back(std::move(*m));
    }
    else {
        std::vector<std::optional<Candidate>> xs(ext.begin(), ext.end()), is(intl.begin(), intl.end());
        xs.emplace_back();
        is.emplace_back();
        for (const auto& x : xs) {
            for (const auto& i : is) {
                if (!x && !i)
                    continue;
                std::vector<Candidate> parts;
                if (x)
                    parts.push_back(*x);
                if (i)
                    parts.push_back(*i);
                if (auto m = fire(cfg, std::move(parts)))
                    out.push_back(std::move(*m));
            }
        }
    }
    out.push_back(idle(cfg, kIdle));
    return out;
}

std::optional<Move> Explorer::agent_move(const Configuration& cfg, const std::vector<std::string>& wanted) const
{
    auto want = [&](const std::string& l) { return std::find(wanted.begin(), wanted.end(), l) != wanted.end(); };
    std::vector<Candidate> ext, intl;
    for (auto& c : step_candidates(cfg, ego_)) {
        if (c.dynamics || c.initiator() != ego_)
            continue;
        (internal(c.motif) ? intl : ext).push_back(std::move(c));
    }
    if (internal_.empty()) {
        for (auto& c : ext)
            if (want(c.label()))
                if (auto m = fire(cfg, {c}))
                    return m;
    }
    else {
        std::vector<std::optional<Candidate>> xs(ext.begin(), ext.end()), is(intl.begin(), intl.end());
        xs.emplace_back();
        is.emplace_back();
        for (const auto& x : xs)
            for (const auto& i : is) {
                if (!x && !i)
                    continue;
                std::string label = x ? x->label() : "";
                if (i)
                    label += (label.empty() ? "" : " & ") + i->label();
                if (!want(label))
                    continue;
                std::vector<Candidate> parts;
                if (x)
                    parts.push_back(*x);
                if (i)
                    parts.push_back(*i);
                if (auto m = fire(cfg, std::move(parts)))
                    return m;
            }
    }
    if (want(kIdle))
        return idle(cfg, kIdle);
    return std::nullopt;
}

std::vector<Move> Explorer::env_moves(const Configuration& cfg) const
{
    std::vector<Move> out;
    for (auto& c : step_candidates(cfg, ego_)) {
        if (!c.dynamics && c.initiator() == ego_)
            continue;
        if (auto m = fire(cfg, {c}))
            out.push_back(std::move(*m));
    }
    if (out.empty())
        out.push_back(idle(cfg, kPass));
    return out;
}

std::uint64_t state_key(std::uint64_t world_hash, Turn turn)
{
    return stable_hash(hex64(world_hash) + (turn == Turn::Agent ? "/agent" : "/env"));
}

GameModel ground(const Configuration& cfg, const Explorer& ex, const Bounds& bounds)
{
    GameModel g;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;
    std::vector<long> depth;
    std::deque<std::size_t> queue;

    auto discover = [&](const Configuration& w, long d) -> std::size_t {
        const std::uint64_t h = w.hash();
        auto& bucket = by_hash[h];
        for (std::size_t i : bucket)
            if (g.worlds[i] == w)
                return i;
        if (2 * (g.worlds.size() + 1) > bounds.max_states)
            throw BudgetExceeded(queue.size() + 1, "state budget of " + std::to_string(bounds.max_states) +
                                                       " exceeded with frontier " + std::to_string(queue.size() + 1));
        if (d > bounds.max_depth)
            throw BudgetExceeded(queue.size() + 1, "depth bound of " + std::to_string(bounds.max_depth) +
                                                       " exceeded with frontier " + std::to_string(queue.size() + 1));
        const std::size_t w_idx = g.worlds.size();
        bucket.push_back(w_idx);
        g.worlds.push_back(w);
        depth.push_back(d);
        GameState a, e;
        a.turn = Turn::Agent;
        e.turn = Turn::Env;
        a.key = state_key(h, Turn::Agent);
        e.key = state_key(h, Turn::Env);
        a.world = e.world = static_cast<long>(w_idx);
        a.twin = 2 * w_idx + 1;
        e.twin = 2 * w_idx;
        g.states.push_back(std::move(a));
        g.states.push_back(std::move(e));
        queue.push_back(w_idx);
        return w_idx;
    };

    discover(cfg, 0);
    g.initial = 0;
    while (!queue.empty()) {
        const std::size_t w = queue.front();
        queue.pop_front();
        const Configuration world = g.worlds[w];
        const long d = depth[w];
        for (auto& m : ex.agent_moves(world)) {
            std::size_t t = discover(m.next, d + 1);
            g.states[2 * w].actions.push_back({m.label, true, 2 * t + 1});
        }
        for (auto& m : ex.env_moves(world)) {
            std::size_t t = discover(m.next, d + 1);
            g.states[2 * w + 1].actions.push_back({m.label, false, 2 * t});
        }
    }
    return g;
}

GameModel ground(const Configuration& cfg, const std::string& ego, const Bounds& bounds)
{
    if (!cfg.find_component(ego))
        throw Error(ErrorCode::UnknownComponent, "ego '" + ego + "'");
    return ground(cfg, Explorer(ego), bounds);
}

void mark_bad(GameModel& g, const Expr& pred, const std::string& ego)
{
    for (auto& s : g.states)
        if (s.world >= 0 && eval_pred(pred, g.worlds[static_cast<std::size_t>(s.world)], ego))
            s.bad = true;
}

void mark_target(GameModel& g, const Expr& pred, const std::string& ego)
{
    for (auto& s : g.states)
        if (s.world >= 0 && eval_pred(pred, g.worlds[static_cast<std::size_t>(s.world)], ego))
            s.target = true;
}

GameModel compose_environments(const GameModel& external, const GameModel& internal, std::size_t max_states)
{
    const auto& s1 = external.states;
    const auto& s2 = internal.states;
    if (s1.at(external.initial).turn != s2.at(internal.initial).turn)
        throw Error(ErrorCode::InvariantViolation, "initial states disagree on the turn");

    GameModel g;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::deque<std::size_t> queue;

    auto visit = [&](std::size_t a, std::size_t b) -> std::size_t {
        auto [it, fresh] = index.emplace(std::make_pair(a, b), g.states.size());
        if (!fresh)
            return it->second;
        if (g.states.size() + 1 > max_states)
            throw BudgetExceeded(queue.size() + 1, "product exceeds " + std::to_string(max_states) + " states");
        GameState st;
        st.turn = s1[a].turn;
        st.key = stable_hash(hex64(s1[a].key) + "*" + hex64(s2[b].key));
        st.bad = s1[a].bad || s2[b].bad;
        st.target = s1[a].target && s2[b].target;
        g.states.push_back(std::move(st));
        pairs.emplace_back(a, b);
        queue.push_back(it->second);
        return it->second;
    };

    g.initial = visit(external.initial, internal.initial);
    while (!queue.empty()) {
        const std::size_t p = queue.front();
        queue.pop_front();
        const auto [a, b] = pairs[p];
        std::vector<GameAction> acts;
        if (s1[a].turn == Turn::Agent) {
            for (const auto& x : s1[a].actions)
                for (const auto& y : s2[b].actions) {
                    std::string label = x.label == kIdle ? y.label
                                        : y.label == kIdle ? x.label
                                                           : x.label + " & " + y.label;
                    acts.push_back({label, true, visit(x.target, y.target)});
                }
        }
        else {
            auto real = [](const GameAction& act) { return act.label != kPass; };
            bool any = false;
            for (const auto& x : s1[a].actions)
                if (real(x)) {
                    any = true;
                    acts.push_back({x.label, false, visit(x.target, s2[b].twin)});
                }
            for (const auto& y : s2[b].actions)
                if (real(y)) {
                    any = true;
                    acts.push_back({y.label, false, visit(s1[a].twin, y.target)});
                }
            if (!any)
                acts.push_back({kPass, false, visit(s1[a].twin, s2[b].twin)});
        }
        g.states[p].actions = std::move(acts);
    }
    for (std::size_t p = 0; p < g.states.size(); ++p) {
        const auto [a, b] = pairs[p];
        auto it = index.find({s1[a].twin, s2[b].twin});
        g.states[p].twin = it == index.end() ? p : it->second;
    }
    return g;
}

}  // namespace motif
