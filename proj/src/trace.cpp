#include "motif/sim.hpp"

#include "json.hpp"

#include <sstream>

namespace motif {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t parse_hex(const std::string& s)
{
    std::size_t used = 0;
    std::uint64_t v = std::stoull(s, &used, 16);
    if (used != s.size())
        throw std::invalid_argument("bad hex");
    return v;
}

json candidate_json(const Candidate& c)
{
    json b = json::array();
    for (const auto& [p, id] : c.binding)
        b.push_back(json::array({p, id}));
    json j;
    j["motif"] = c.motif;
    j["rule"] = c.rule;
    j["binding"] = std::move(b);
    j["dynamics"] = c.dynamics;
    j["controllable"] = c.controllable;
    return j;
}

Candidate candidate_from(const json& j)
{
    Candidate c;
    c.motif = j.at("motif").get<std::string>();
    c.rule = j.at("rule").get<std::string>();
    for (const auto& pair : j.at("binding"))
        c.binding.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    c.dynamics = j.at("dynamics").get<bool>();
    c.controllable = j.at("controllable").get<bool>();
    return c;
}

}  // namespace

std::string Trace::to_jsonl() const
{
    std::ostringstream out;
    json h;
    h["type"] = "header";
    h["format"] = "motif-trace/1";
    h["model"] = hex64(model);
    h["seed"] = seed;
    h["policy"] = std::string(to_string(policy));
    h["steps"] = budget;
    h["initial"] = hex64(initial);
    out << h.dump() << '\n';
    for (const auto& ev : events) {
        json e;
        e["type"] = "event";
        e["step"] = ev.step;
        e["turn"] = ev.turn == Turn::Agent ? "agent" : "env";
        e["issuer"] = ev.issuer;
        e["label"] = ev.label;
        json firings = json::array();
        for (const auto& c : ev.firings)
            firings.push_back(candidate_json(c));
        e["firings"] = std::move(firings);
        e["effects"] = ev.effects;
        e["state"] = hex64(ev.state);
        json beliefs = json::object();
        for (const auto& [id, h] : ev.beliefs)
            beliefs[id] = hex64(h);
        e["beliefs"] = std::move(beliefs);
        out << e.dump() << '\n';
    }
    json end;
    end["type"] = "end";
    end["events"] = events.size();
    end["stop"] = stop;
    end["final"] = hex64(final);
    out << end.dump() << '\n';
    return out.str();
}

Trace Trace::parse(const std::string& text)
{
    Trace tr;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    bool header = false, ended = false;
    try {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty())
                continue;
            if (ended)
                throw std::invalid_argument("content after the end record");
            json j = json::parse(line);
            const std::string type = j.at("type").get<std::string>();
            if (!header) {
                if (type != "header")
                    throw std::invalid_argument("first record must be the header");
                header = true;
                tr.model = parse_hex(j.at("model").get<std::string>());
                tr.seed = j.at("seed").get<std::uint64_t>();
                auto p = parse_policy(j.at("policy").get<std::string>());
                if (!p)
                    throw std::invalid_argument("unknown policy");
                tr.policy = *p;
                tr.budget = j.at("steps").get<long>();
                tr.initial = parse_hex(j.at("initial").get<std::string>());
            }
            else if (type == "event") {
                TraceEvent ev;
                ev.step = j.at("step").get<long>();
                const std::string turn = j.at("turn").get<std::string>();
                if (turn != "agent" && turn != "env")
                    throw std::invalid_argument("bad turn");
                ev.turn = turn == "agent" ? Turn::Agent : Turn::Env;
                ev.issuer = j.at("issuer").get<std::string>();
                ev.label = j.at("label").get<std::string>();
                for (const auto& c : j.at("firings"))
                    ev.firings.push_back(candidate_from(c));
                ev.effects = j.at("effects").get<std::vector<std::string>>();
                ev.state = parse_hex(j.at("state").get<std::string>());
                for (const auto& [id, h] : j.at("beliefs").items())
                    ev.beliefs[id] = parse_hex(h.get<std::string>());
                tr.events.push_back(std::move(ev));
            }
            else if (type == "end") {
                ended = true;
                tr.stop = j.at("stop").get<std::string>();
                tr.final = parse_hex(j.at("final").get<std::string>());
            }
            else {
                throw std::invalid_argument("unknown record type '" + type + "'");
            }
        }
        if (!ended)
            throw std::invalid_argument("missing end record");
    }
    catch (const Error&) {
        throw;
    }
    catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, "trace line " + std::to_string(lineno) + ": " + e.what());
    }
    return tr;
}

}  // namespace motif
