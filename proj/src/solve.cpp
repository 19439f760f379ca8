#include "motif/synth.hpp"

#include <deque>
#include <sstream>

namespace motif {

namespace {

using Preds = std::vector<std::vector<std::size_t>>;  // target -> source per action (with multiplicity)

Preds predecessors(const GameModel& g)
{
    Preds p(g.size());
    for (std::size_t s = 0; s < g.size(); ++s)
        for (const auto& a : g.states[s].actions)
            p[a.target].push_back(s);
    return p;
}

std::string where(const GameModel& g, std::size_t s)
{
    return "state " + hex64(g.states[s].key) + (g.states[s].turn == Turn::Agent ? " (agent)" : " (env)");
}

[[noreturn]] void violation(const std::string& msg)
{
    throw Error(ErrorCode::InvariantViolation, msg);
}

}  // namespace

std::size_t Controller::winning_count() const
{
    return static_cast<std::size_t>(std::count(winning.begin(), winning.end(), true));
}

Controller solve_safety(const GameModel& g)
{
    const std::size_t n = g.size();
    Controller c;
    c.kind = Controller::Kind::Safety;
    c.winning.assign(n, true);
    const Preds preds = predecessors(g);
    std::vector<std::size_t> live(n);
    std::deque<std::size_t> removed;
    auto lose = [&](std::size_t s) {
        if (!c.winning[s])
            return;
        c.winning[s] = false;
        removed.push_back(s);
    };
    for (std::size_t s = 0; s < n; ++s) {
        live[s] = g.states[s].actions.size();
        if (g.states[s].bad || (g.states[s].turn == Turn::Agent && live[s] == 0))
            lose(s);
    }
    while (!removed.empty()) {
        const std::size_t t = removed.front();
        removed.pop_front();
        for (std::size_t s : preds[t]) {
            if (!c.winning[s])
                continue;
            if (g.states[s].turn == Turn::Env)
                lose(s);
            else if (--live[s] == 0)
                lose(s);
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!c.winning[s] || g.states[s].turn != Turn::Agent)
            continue;
        auto& kept = c.kept[s];
        for (std::size_t i = 0; i < g.states[s].actions.size(); ++i)
            if (c.winning[g.states[s].actions[i].target])
                kept.push_back(i);
    }
    return c;
}

Controller solve_reach(const GameModel& g, const Controller* within)
{
    const std::size_t n = g.size();
    auto inside = [&](std::size_t s) { return !within || within->wins(s); };
    auto allowed = [&](std::size_t s, std::size_t i) {
        if (!within || g.states[s].turn != Turn::Agent)
            return true;
        auto it = within->kept.find(s);
        return it != within->kept.end() && std::find(it->second.begin(), it->second.end(), i) != it->second.end();
    };

    Controller c;
    c.kind = Controller::Kind::Reach;
    c.rank.assign(n, -1);
    // predecessor edges restricted to allowed actions
    Preds preds(n);
    std::vector<std::size_t> pending(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (!inside(s))
            continue;
        const auto& acts = g.states[s].actions;
        for (std::size_t i = 0; i < acts.size(); ++i)
            if (allowed(s, i))
                preds[acts[i].target].push_back(s);
        pending[s] = acts.size();
    }
    std::vector<std::size_t> layer;
    for (std::size_t s = 0; s < n; ++s)
        if (inside(s) && g.states[s].target) {
            c.rank[s] = 0;
            layer.push_back(s);
        }
    long k = 0;
    while (!layer.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t t : layer) {
            for (std::size_t s : preds[t]) {
                if (c.rank[s] >= 0)
                    continue;
                if (g.states[s].turn == Turn::Agent) {
                    c.rank[s] = k + 1;
                    next.push_back(s);
                }
                else if (--pending[s] == 0) {
                    c.rank[s] = k + 1;
                    next.push_back(s);
                }
            }
        }
        layer = std::move(next);
        ++k;
    }
    c.winning.assign(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        c.winning[s] = c.rank[s] >= 0;
        if (!c.winning[s] || g.states[s].turn != Turn::Agent)
            continue;
        auto& kept = c.kept[s];
        const auto& acts = g.states[s].actions;
        for (std::size_t i = 0; i < acts.size(); ++i) {
            long r = c.rank[acts[i].target];
            if (allowed(s, i) && r >= 0 && r < c.rank[s])
                kept.push_back(i);
        }
    }
    return c;
}

std::vector<std::string> controller_violations(const GameModel& g, const Controller& c)
{
    std::vector<std::string> out;
    const std::size_t n = g.size();
    if (c.winning.size() != n) {
        out.push_back("controller covers " + std::to_string(c.winning.size()) + " states, game has " +
                      std::to_string(n));
        return out;
    }
    const bool reach = c.kind == Controller::Kind::Reach;
    if (reach && c.rank.size() != n) {
        out.push_back("rank table size mismatch");
        return out;
    }
    for (const auto& [s, kept] : c.kept) {
        if (s >= n) {
            out.push_back("kept actions for a state outside the game");
            continue;
        }
        if (!c.winning[s] && !kept.empty())
            out.push_back(where(g, s) + ": kept actions outside the winning set");
        if (g.states[s].turn != Turn::Agent && !kept.empty())
            out.push_back(where(g, s) + ": kept actions at an env state");
        for (std::size_t i : kept) {
            if (i >= g.states[s].actions.size()) {
                out.push_back(where(g, s) + ": kept action index out of range");
                continue;
            }
            const auto& a = g.states[s].actions[i];
            if (!c.winning[a.target])
                out.push_back(where(g, s) + ": kept action '" + a.label + "' leaves the winning set");
            else if (reach && c.rank[a.target] >= c.rank[s])
                out.push_back(where(g, s) + ": kept action '" + a.label + "' does not decrease the rank");
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!c.winning[s])
            continue;
        const auto& st = g.states[s];
        if (st.bad && !reach)
            out.push_back(where(g, s) + ": bad state is winning");
        if (st.turn == Turn::Env) {
            // a reached target needs no closure
            for (const auto& a : st.actions)
                if (!c.winning[a.target] && !(reach && c.rank[s] == 0))
                    out.push_back(where(g, s) + ": uncontrollable action '" + a.label + "' leaves the winning set");
        }
        else {
            auto it = c.kept.find(s);
            bool empty = it == c.kept.end() || it->second.empty();
            if (empty && !(reach && c.rank[s] == 0))
                out.push_back(where(g, s) + ": winning agent state without kept actions");
        }
        if (reach) {
            if (c.rank[s] < 0)
                out.push_back(where(g, s) + ": winning state without a rank");
            if (c.rank[s] == 0 && !st.target)
                out.push_back(where(g, s) + ": rank 0 off target");
        }
    }
    return out;
}

std::string export_controller(const GameModel& g, const Controller& c)
{
    std::ostringstream o;
    const bool reach = c.kind == Controller::Kind::Reach;
    o << "# controller " << (reach ? "reach" : "safety") << "\n";
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (!c.wins(s))
            continue;
        const std::string key = hex64(g.states[s].key);
        const std::string rank = reach ? std::to_string(c.rank[s]) : "-";
        auto it = c.kept.find(s);
        if (it == c.kept.end() || it->second.empty()) {
            o << key << "\t-\t" << rank << "\n";
            continue;
        }
        for (std::size_t i : it->second)
            o << key << "\t" << g.states[s].actions[i].label << "\t" << rank << "\n";
    }
    return o.str();
}

namespace {

struct Row {
    std::string key;
    std::string label;
    std::string rank;
};

Controller::Kind parse_rows(const std::string& text, std::vector<Row>& rows)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        violation("empty controller file");
    Controller::Kind kind;
    if (line == "# controller safety")
        kind = Controller::Kind::Safety;
    else if (line == "# controller reach")
        kind = Controller::Kind::Reach;
    else
        violation("bad controller header '" + line + "'");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos)
            violation("line " + std::to_string(lineno) + ": expected three tab-separated fields");
        rows.push_back({line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)});
    }
    return kind;
}

long parse_rank(const std::string& s, bool reach, const std::string& key)
{
    if (!reach) {
        if (s != "-")
            violation("state " + key + ": rank in a safety controller");
        return -1;
    }
    try {
        std::size_t used = 0;
        long r = std::stol(s, &used);
        if (used != s.size() || r < 0)
            throw std::invalid_argument(s);
        return r;
    }
    catch (const std::exception&) {
        violation("state " + key + ": bad rank '" + s + "'");
    }
}

}  // namespace

Controller import_controller(const std::string& text, const GameModel& g)
{
    std::vector<Row> rows;
    Controller c;
    c.kind = parse_rows(text, rows);
    const bool reach = c.kind == Controller::Kind::Reach;
    std::map<std::string, std::size_t> by_key;
    for (std::size_t s = 0; s < g.size(); ++s)
        by_key.emplace(hex64(g.states[s].key), s);
    c.winning.assign(g.size(), false);
    if (reach)
        c.rank.assign(g.size(), -1);
    for (const auto& row : rows) {
        auto it = by_key.find(row.key);
        if (it == by_key.end())
            violation("state " + row.key + ": not in the game");
        const std::size_t s = it->second;
        const long rank = parse_rank(row.rank, reach, row.key);
        if (reach) {
            if (c.winning[s] && c.rank[s] != rank)
                violation(where(g, s) + ": conflicting ranks");
            c.rank[s] = rank;
        }
        c.winning[s] = true;
        if (g.states[s].turn == Turn::Agent)
            c.kept[s];
        if (row.label == "-")
            continue;
        const auto& acts = g.states[s].actions;
        auto a = std::find_if(acts.begin(), acts.end(), [&](const GameAction& x) { return x.label == row.label; });
        if (a == acts.end())
            violation(where(g, s) + ": no action '" + row.label + "'");
        c.kept[s].push_back(static_cast<std::size_t>(a - acts.begin()));
    }
    auto problems = controller_violations(g, c);
    if (!problems.empty())
        violation(problems.front());
    return c;
}

ControllerTable ControllerTable::from(const GameModel& g, const Controller& c)
{
    ControllerTable t;
    t.kind = c.kind;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (!c.wins(s) || g.states[s].turn != Turn::Agent)
            continue;
        Entry e;
        if (auto it = c.kept.find(s); it != c.kept.end())
            for (std::size_t i : it->second)
                e.kept.push_back(g.states[s].actions[i].label);
        if (c.kind == Controller::Kind::Reach)
            e.rank = c.rank[s];
        t.entries[g.states[s].key] = std::move(e);
    }
    return t;
}

ControllerTable ControllerTable::parse(const std::string& text)
{
    std::vector<Row> rows;
    ControllerTable t;
    t.kind = parse_rows(text, rows);
    const bool reach = t.kind == Controller::Kind::Reach;
    for (const auto& row : rows) {
        std::uint64_t key = 0;
        try {
            std::size_t used = 0;
            key = std::stoull(row.key, &used, 16);
            if (used != row.key.size())
                throw std::invalid_argument(row.key);
        }
        catch (const std::exception&) {
            violation("bad state hash '" + row.key + "'");
        }
        Entry& e = t.entries[key];
        e.rank = parse_rank(row.rank, reach, row.key);
        if (row.label != "-")
            e.kept.push_back(row.label);
    }
    return t;
}

const ControllerTable::Entry* ControllerTable::find(std::uint64_t world_hash) const
{
    auto it = entries.find(state_key(world_hash, Turn::Agent));
    return it == entries.end() ? nullptr : &it->second;
}

}  // namespace motif
