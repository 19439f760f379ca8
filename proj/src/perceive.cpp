#include "motif/agent.hpp"

#include <algorithm>
#include <random>

namespace motif {

namespace {

bool visible(const SensorSpec& spec, const std::string& type)
{
    return spec.visible_types.empty() ||
           std::find(spec.visible_types.begin(), spec.visible_types.end(), type) != spec.visible_types.end();
}

bool attr_visible(const SensorSpec& spec, const std::string& type, const std::string& var)
{
    auto it = spec.attrs.find(type);
    return it == spec.attrs.end() || std::find(it->second.begin(), it->second.end(), var) != it->second.end();
}

std::vector<std::string> sensed_motifs(const Configuration& truth, const SensorSpec& spec)
{
    if (!spec.motif.empty())
        return {spec.motif};
    std::vector<std::string> out;
    for (const auto& [id, m] : truth.motifs())
        if (!m.derived)
            out.push_back(id);
    return out;
}

Detection full(const Configuration& truth, const ComponentInstance& c, const std::vector<std::string>& motifs)
{
    Detection d;
    d.type = c.type;
    d.id = c.id;
    d.state = c.state;
    for (const auto& m : motifs)
        if (truth.is_member(c.id, m))
            d.placements[m] = truth.address(c.id, m);
    return d;
}

}  // namespace

Percept perceive(const Configuration& truth, const std::string& ego, const SensorSpec& spec, std::uint64_t rng_seed,
                 long step)
{
    const ComponentInstance& self = truth.component(ego);
    Percept p;
    p.step = step;
    const auto motifs = sensed_motifs(truth, spec);
    for (const auto& m : motifs)
        p.maps.emplace(m, *truth.motif(m).map);

    std::vector<std::string> all;
    for (const auto& [id, m] : truth.motifs())
        if (!m.derived)
            all.push_back(id);
    p.ego = full(truth, self, all);

    std::optional<NodeId> origin;
    if (!spec.unbounded()) {
        origin = truth.address(ego, spec.motif);
        if (!origin)
            throw Error(ErrorCode::EgoUnplaced, "'" + ego + "' has no address in sensed motif '" + spec.motif + "'");
    }

    std::mt19937_64 rng(stable_hash(std::to_string(rng_seed) + "/" + ego + "/" + std::to_string(step)));
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    for (const auto& [id, c] : truth.components()) {
        if (id == ego || !visible(spec, c.type))
            continue;
        std::optional<NodeId> at;
        if (origin) {
            if (!truth.is_member(id, spec.motif))
                continue;
            at = truth.address(id, spec.motif);
            if (!at)
                continue;
            auto d = truth.distance(spec.motif, *origin, *at);
            if (!d || *d > spec.radius)
                continue;
        }
        else if (!spec.motif.empty() && !truth.is_member(id, spec.motif)) {
            continue;
        }
        if (spec.detect_prob < 1.0 && !(coin(rng) < spec.detect_prob))
            continue;

        Detection d = full(truth, c, motifs);
        if (!spec.identity)
            d.id.reset();
        const ComponentType& t = truth.types().at(c.type);
        for (auto it = d.state.begin(); it != d.state.end();) {
            if (!attr_visible(spec, c.type, it->first)) {
                it = d.state.erase(it);
                continue;
            }
            auto n = spec.noise.find(c.type + "." + it->first);
            const VarDecl* v = t.var(it->first);
            if (n != spec.noise.end() && n->second > 0 && v && v->domain.kind != Domain::Kind::Bool &&
                v->domain.kind != Domain::Kind::Enum) {
                std::normal_distribution<double> gauss(it->second.as_double(), n->second);
                it->second = v->domain.snap(gauss(rng));
            }
            ++it;
        }
        p.detections.push_back(std::move(d));
    }
    return p;
}

}  // namespace motif
