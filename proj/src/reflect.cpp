#include "motif/agent.hpp"

#include <algorithm>
#include <climits>
#include <set>

namespace motif {

namespace {

void upsert(Configuration& b, const Detection& d, const std::string& id, const std::vector<std::string>& scope)
{
    if (!b.find_component(id)) {
        b.add_component({id, d.type, d.state});
    }
    else {
        const auto& cur = b.component(id).state;
        for (const auto& [var, val] : d.state) {
            auto it = cur.find(var);
            if (it == cur.end() || it->second != val)
                b.set_var(id, var, val);
        }
    }
    for (const auto& m : scope) {
        if (!b.find_motif(m))
            continue;
        auto it = d.placements.find(m);
        if (it == d.placements.end()) {
            if (b.is_member(id, m))
                b.leave(id, m);
            continue;
        }
        if (!b.is_member(id, m))
            b.join(id, m);
        if (b.address(id, m) == it->second)
            continue;
        if (it->second) {
            if (!b.motif(m).map->has_node(*it->second))
                continue;
            b.place(id, m, *it->second);
        }
        else {
            b.unplace(id, m);
        }
    }
}

std::optional<long> hops(const Configuration& b, const std::string& motif, const NodeId& x, const NodeId& y)
{
    auto d1 = b.distance(motif, x, y);
    auto d2 = b.distance(motif, y, x);
    if (d1 && d2)
        return std::min(*d1, *d2);
    return d1 ? d1 : d2;
}

std::string gating_motif(const SensorSpec& sensor, const Detection& d)
{
    if (!sensor.motif.empty())
        return sensor.motif;
    for (const auto& [m, n] : d.placements)
        if (n)
            return m;
    return d.placements.empty() ? std::string() : d.placements.begin()->first;
}

bool inside_radius(const Configuration& b, const std::string& ego, const std::string& id, const SensorSpec& sensor)
{
    if (sensor.unbounded())
        return true;
    if (!b.find_motif(sensor.motif))
        return false;
    auto e = b.address(ego, sensor.motif);
    auto a = b.address(id, sensor.motif);
    if (!e || !a)
        return !a;
    auto d = b.distance(sensor.motif, *e, *a);
    return d && *d <= sensor.radius;
}

void rebuild_patterns(Configuration& b, const std::vector<MotifPattern>& patterns)
{
    std::vector<std::string> old;
    for (const auto& [id, m] : b.motifs())
        if (m.derived)
            old.push_back(id);
    for (const auto& id : old)
        b.remove_motif(id);

    for (const auto& pat : patterns) {
        const Motif* base = b.find_motif(pat.base);
        if (!base)
            continue;
        Rule r;
        r.name = pat.name;
        r.params = pat.params;
        r.guard = pat.guard;
        std::map<std::string, std::set<std::string>> groups;
        for (const auto& binding : enabled_bindings(b, pat.base, r, true)) {
            const std::string* leader = lookup(binding, pat.leader);
            if (!leader)
                continue;
            for (const auto& [_, id] : binding)
                groups[*leader].insert(id);
        }
        for (const auto& [leader, members] : groups) {
            Motif m;
            m.id = pat.name + ":" + leader;
            m.map = b.motif(pat.base).map;
            m.members = members;
            m.derived = true;
            if (b.find_motif(m.id))
                continue;
            b.add_motif(m);
            for (const auto& id : members)
                if (auto n = b.address(id, pat.base))
                    b.place(id, m.id, *n);
        }
    }
}

}  // namespace

EnvModel initial_model(const Configuration& truth)
{
    EnvModel model;
    model.believed = without_derived(truth);
    std::vector<std::string> ids;
    for (const auto& [id, _] : truth.components())
        ids.push_back(id);
    for (const auto& id : ids)
        model.believed.remove_component(id);
    return model;
}

Configuration without_derived(const Configuration& cfg)
{
    Configuration out = cfg;
    for (const auto& [id, m] : cfg.motifs())
        if (m.derived)
            out.remove_motif(id);
    return out;
}

Configuration restrict_to(const Configuration& truth, const std::vector<std::string>& types, const std::string& ego)
{
    Configuration out = without_derived(truth);
    if (types.empty())
        return out;
    for (const auto& [id, c] : truth.components())
        if (id != ego && std::find(types.begin(), types.end(), c.type) == types.end())
            out.remove_component(id);
    return out;
}

EnvModel reflect(EnvModel model, const Percept& p, const std::string& ego, const SensorSpec& sensor,
                 const KnowledgeRepository& repo, const Thresholds& th)
{
    Configuration& b = model.believed;
    for (const auto& [m, map] : p.maps)
        if (const Motif* bm = b.find_motif(m); bm && !(*bm->map == map))
            b.set_map(m, std::make_shared<const Map>(map));

    std::vector<std::string> scope;
    for (const auto& [m, _] : p.maps)
        scope.push_back(m);
    std::vector<std::string> every;
    for (const auto& [id, m] : b.motifs())
        if (!m.derived)
            every.push_back(id);

    std::set<std::string> seen{ego};
    upsert(b, p.ego, ego, every);
    for (const auto& d : p.detections)
        if (d.id) {
            upsert(b, d, *d.id, scope);
            seen.insert(*d.id);
        }

    for (const auto& d : p.detections) {
        if (d.id)
            continue;
        const std::string gm = gating_motif(sensor, d);
        std::optional<NodeId> at;
        if (auto it = d.placements.find(gm); it != d.placements.end())
            at = it->second;
        std::string best;
        long best_d = LONG_MAX;
        for (const auto& [id, c] : b.components()) {
            if (c.type != d.type || seen.count(id))
                continue;
            auto a = gm.empty() ? std::nullopt : b.address(id, gm);
            long dist = 0;
            if (at) {
                if (!a)
                    continue;
                auto h = hops(b, gm, *a, *at);
                if (!h || *h > 1)
                    continue;
                dist = *h;
            }
            else if (a) {
                continue;
            }
            if (dist < best_d) {
                best_d = dist;
                best = id;
            }
        }
        if (best.empty())
            best = b.fresh_id(d.type);
        upsert(b, d, best, scope);
        seen.insert(best);
    }

    std::vector<std::string> missing;
    for (const auto& [id, _] : b.components())
        if (!seen.count(id))
            missing.push_back(id);
    for (const auto& id : missing) {
        if (sensor.faithful()) {
            b.remove_component(id);
            model.unseen.erase(id);
            continue;
        }
        if (!inside_radius(b, ego, id, sensor))
            continue;
        if (++model.unseen[id] >= th.k_stale) {
            b.remove_component(id);
            model.unseen.erase(id);
        }
    }
    for (const auto& id : seen)
        model.unseen.erase(id);

    rebuild_patterns(b, repo.patterns);
    return model;
}

}  // namespace motif
