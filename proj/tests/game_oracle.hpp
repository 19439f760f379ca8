#pragma once

// Independent reference solvers: brute force over positional strategies.

#include "motif/synth.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using motif::GameModel;
using motif::Turn;

// With alternating set, states 0, 2, 4.. are agent turns and edges always switch turns.
inline GameModel random_game(std::uint64_t seed, int max_states = 8, int max_actions = 3, bool alternating = false)
{
    std::mt19937_64 rng(seed);
    GameModel g;
    const int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_states - 1));
    g.states.resize(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        auto& st = g.states[static_cast<std::size_t>(s)];
        st.turn = rng() % 2 ? Turn::Agent : Turn::Env;
        if (alternating)
            st.turn = s % 2 == 0 ? Turn::Agent : Turn::Env;
        st.key = motif::stable_hash(std::to_string(seed) + ":" + std::to_string(s));
        st.bad = rng() % 5 == 0;
        st.target = rng() % 5 == 0;
        st.twin = static_cast<std::size_t>(s);
        const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_actions));
        for (int a = 0; a < k; ++a) {
            motif::GameAction act;
            act.label = std::string(st.turn == Turn::Agent ? "c" : "u") + std::to_string(a);
            act.controllable = st.turn == Turn::Agent;
            act.target = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
            if (alternating) {
                const std::size_t half = static_cast<std::size_t>(n) / 2;  // n >= 2: both turns exist
                std::size_t k2 = act.target % (st.turn == Turn::Agent ? half : (static_cast<std::size_t>(n) + 1) / 2);
                act.target = st.turn == Turn::Agent ? 2 * k2 + 1 : 2 * k2;
            }
            st.actions.push_back(act);
        }
    }
    g.initial = 0;
    return g;
}

// Calls f(choice) for every positional strategy; choice[s] is an action index at agent states.
inline void for_each_strategy(const GameModel& g, const std::function<void(const std::vector<std::size_t>&)>& f)
{
    std::vector<std::size_t> choice(g.size(), 0);
    for (;;) {
        f(choice);
        std::size_t s = 0;
        for (; s < g.size(); ++s) {
            if (g.states[s].turn != Turn::Agent)
                continue;
            if (++choice[s] < g.states[s].actions.size())
                break;
            choice[s] = 0;
        }
        if (s == g.size())
            return;
    }
}

inline std::vector<std::size_t> successors(const GameModel& g, const std::vector<std::size_t>& choice, std::size_t s)
{
    std::vector<std::size_t> out;
    const auto& st = g.states[s];
    if (st.turn == Turn::Agent) {
        if (!st.actions.empty())
            out.push_back(st.actions[choice[s]].target);
    }
    else {
        for (const auto& a : st.actions)
            out.push_back(a.target);
    }
    return out;
}

// s wins safety iff some positional strategy keeps every play from s out of bad.
inline std::vector<bool> safety_winning(const GameModel& g)
{
    std::vector<bool> win(g.size(), false);
    for_each_strategy(g, [&](const std::vector<std::size_t>& choice) {
        for (std::size_t s0 = 0; s0 < g.size(); ++s0) {
            if (win[s0])
                continue;
            std::vector<bool> seen(g.size(), false);
            std::vector<std::size_t> stack{s0};
            seen[s0] = true;
            bool safe = true;
            while (!stack.empty() && safe) {
                std::size_t s = stack.back();
                stack.pop_back();
                if (g.states[s].bad || (g.states[s].turn == Turn::Agent && g.states[s].actions.empty())) {
                    safe = false;
                    break;
                }
                for (std::size_t t : successors(g, choice, s))
                    if (!seen[t]) {
                        seen[t] = true;
                        stack.push_back(t);
                    }
            }
            if (safe)
                win[s0] = true;
        }
    });
    return win;
}

// s wins reachability iff some positional strategy forces target within 2|S| steps.
inline std::vector<bool> reach_winning(const GameModel& g)
{
    const std::size_t n = g.size();
    const std::size_t bound = 2 * n;
    std::vector<bool> win(n, false);
    for_each_strategy(g, [&](const std::vector<std::size_t>& choice) {
        // avoid[k][s]: some play of length k from s misses target
        std::vector<bool> avoid(n);
        for (std::size_t s = 0; s < n; ++s)
            avoid[s] = !g.states[s].target;
        for (std::size_t k = 1; k <= bound; ++k) {
            std::vector<bool> next(n);
            for (std::size_t s = 0; s < n; ++s) {
                if (g.states[s].target) {
                    next[s] = false;
                    continue;
                }
                auto succ = successors(g, choice, s);
                bool any = succ.empty();  // a dead end never reaches target
                for (std::size_t t : succ)
                    any = any || avoid[t];
                next[s] = any;
            }
            avoid = std::move(next);
        }
        for (std::size_t s = 0; s < n; ++s)
            if (!avoid[s])
                win[s] = true;
    });
    return win;
}

inline std::vector<bool> winning_of(const motif::Controller& c)
{
    return c.winning;
}

// Every kept action stays winning; every pruned controllable action at a winning agent state loses.
inline bool maximally_permissive(const GameModel& g, const motif::Controller& c)
{
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (!c.wins(s) || g.states[s].turn != Turn::Agent)
            continue;
        auto it = c.kept.find(s);
        std::vector<std::size_t> kept = it == c.kept.end() ? std::vector<std::size_t>{} : it->second;
        for (std::size_t i = 0; i < g.states[s].actions.size(); ++i) {
            bool is_kept = std::find(kept.begin(), kept.end(), i) != kept.end();
            bool into = c.wins(g.states[s].actions[i].target);
            if (is_kept != into)
                return false;
        }
    }
    return true;
}

// No uncontrollable edge leaves the winning set.
inline std::size_t closure_violations(const GameModel& g, const motif::Controller& c)
{
    std::size_t bad = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (!c.wins(s) || g.states[s].turn != Turn::Env)
            continue;
        for (const auto& a : g.states[s].actions)
            if (!c.wins(a.target))
                ++bad;
    }
    return bad;
}

// Following kept actions from s, every env branch reaches target within rank(s) agent turns.
inline bool reach_progress(const GameModel& g, const motif::Controller& c, std::size_t s0)
{
    const long budget = c.rank.at(s0);
    std::function<bool(std::size_t, long)> ok = [&](std::size_t s, long turns) {
        if (g.states[s].target && c.rank[s] == 0)
            return true;
        if (turns > budget)
            return false;
        if (g.states[s].turn == Turn::Agent) {
            auto it = c.kept.find(s);
            if (it == c.kept.end() || it->second.empty())
                return false;
            for (std::size_t i : it->second)
                if (!ok(g.states[s].actions[i].target, turns + 1))
                    return false;
            return true;
        }
        if (g.states[s].actions.empty())
            return false;
        for (const auto& a : g.states[s].actions)
            if (!ok(a.target, turns))
                return false;
        return true;
    };
    return ok(s0, 0);
}

}  // namespace oracle
