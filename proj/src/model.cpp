#include "motif/model.hpp"

#include <algorithm>
#include <sstream>

namespace motif {

const VarDecl* ComponentType::var(const std::string& name) const
{
    for (const auto& v : vars)
        if (v.name == name)
            return &v;
    return nullptr;
}

const ComponentType& TypeCatalog::at(const std::string& name) const
{
    if (const auto* t = find(name))
        return *t;
    throw Error(ErrorCode::UnknownType, "type '" + name + "'");
}

const ComponentType* TypeCatalog::find(const std::string& name) const
{
    auto it = types.find(name);
    return it == types.end() ? nullptr : &it->second;
}

const Rule* Motif::rule(const std::string& name) const
{
    for (const auto& r : *rules)
        if (r.name == name)
            return &r;
    return nullptr;
}

bool operator==(const Motif& a, const Motif& b)
{
    return a.id == b.id && *a.map == *b.map && a.members == b.members &&
           (a.rules == b.rules || *a.rules == *b.rules) && a.derived == b.derived;
}

bool operator==(const Configuration& a, const Configuration& b)
{
    return a.components_ == b.components_ && a.motifs_ == b.motifs_ &&
           a.addresses_ == b.addresses_ && a.next_id_ == b.next_id_;
}

const ComponentInstance& Configuration::component(const std::string& id) const
{
    if (const auto* c = find_component(id))
        return *c;
    throw Error(ErrorCode::UnknownComponent, "component '" + id + "'");
}

const ComponentInstance* Configuration::find_component(const std::string& id) const
{
    auto it = components_.find(id);
    return it == components_.end() ? nullptr : &it->second;
}

const Motif& Configuration::motif(const std::string& id) const
{
    if (const auto* m = find_motif(id))
        return *m;
    throw Error(ErrorCode::UnknownMotif, "motif '" + id + "'");
}

const Motif* Configuration::find_motif(const std::string& id) const
{
    auto it = motifs_.find(id);
    return it == motifs_.end() ? nullptr : &it->second;
}

Motif& Configuration::motif_mut(const std::string& id)
{
    auto it = motifs_.find(id);
    if (it == motifs_.end())
        throw Error(ErrorCode::UnknownMotif, "motif '" + id + "'");
    return it->second;
}

Map& Configuration::map_mut(const std::string& motif)
{
    Motif& m = motif_mut(motif);
    // copy-on-write: maps are shared between configurations
    auto fresh = std::make_shared<Map>(*m.map);
    Map& ref = *fresh;
    m.map = std::move(fresh);
    return ref;
}

const ComponentType& Configuration::type_of(const std::string& id) const
{
    return types_->at(component(id).type);
}

bool Configuration::is_member(const std::string& component, const std::string& motif) const
{
    const auto* m = find_motif(motif);
    return m && m->members.count(component) != 0;
}

std::optional<NodeId> Configuration::address(const std::string& component, const std::string& motif) const
{
    auto it = addresses_.find({component, motif});
    if (it == addresses_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::string> Configuration::occupied(const std::string& motif, const NodeId& n) const
{
    const Motif& m = this->motif(motif);
    if (!m.map->has_node(n))
        throw Error(ErrorCode::UnknownNode, "node '" + n + "' in motif '" + motif + "'");
    std::vector<std::string> out;
    for (const auto& id : m.members) {
        auto it = addresses_.find({id, motif});
        if (it != addresses_.end() && it->second == n)
            out.push_back(id);
    }
    return out;
}

std::optional<long> Configuration::distance(const std::string& motif, const NodeId& a, const NodeId& b) const
{
    return this->motif(motif).map->distance(a, b);
}

void Configuration::add_motif(Motif m)
{
    if (motifs_.count(m.id))
        throw Error(ErrorCode::EffectError, "duplicate motif '" + m.id + "'");
    for (const auto& id : m.members)
        if (!components_.count(id))
            throw Error(ErrorCode::UnknownComponent, "member '" + id + "' of motif '" + m.id + "'");
    motifs_.emplace(m.id, std::move(m));
}

void Configuration::remove_motif(const std::string& id)
{
    motif(id);
    for (auto it = addresses_.begin(); it != addresses_.end();) {
        if (it->first.second == id)
            it = addresses_.erase(it);
        else
            ++it;
    }
    motifs_.erase(id);
}

void Configuration::add_component(ComponentInstance c)
{
    if (components_.count(c.id))
        throw Error(ErrorCode::EffectError, "duplicate component '" + c.id + "'");
    const ComponentType& t = types_->at(c.type);
    for (const auto& v : t.vars) {
        auto it = c.state.find(v.name);
        if (it == c.state.end())
            c.state[v.name] = v.domain.default_value();
        else if (!v.domain.contains(it->second))
            throw Error(ErrorCode::EffectError, "value " + to_string(it->second) + " outside the domain of " +
                                                    c.type + "." + v.name);
    }
    for (const auto& [name, _] : c.state)
        if (!t.var(name))
            throw Error(ErrorCode::EffectError, "type '" + c.type + "' has no variable '" + name + "'");
    components_.emplace(c.id, std::move(c));
}

void Configuration::remove_component(const std::string& id)
{
    component(id);
    for (auto& [_, m] : motifs_)
        m.members.erase(id);
    for (auto it = addresses_.begin(); it != addresses_.end();) {
        if (it->first.first == id)
            it = addresses_.erase(it);
        else
            ++it;
    }
    components_.erase(id);
}

void Configuration::set_var(const std::string& id, const std::string& var, const Value& v)
{
    auto it = components_.find(id);
    if (it == components_.end())
        throw Error(ErrorCode::UnknownComponent, "component '" + id + "'");
    const VarDecl* decl = types_->at(it->second.type).var(var);
    if (!decl)
        throw Error(ErrorCode::EffectError, "type '" + it->second.type + "' has no variable '" + var + "'");
    if (!decl->domain.contains(v))
        throw Error(ErrorCode::EffectError, "value " + to_string(v) + " outside the domain of " + id + "." + var);
    it->second.state[var] = v;
}

void Configuration::join(const std::string& component, const std::string& motif)
{
    this->component(component);
    motif_mut(motif).members.insert(component);
}

void Configuration::leave(const std::string& component, const std::string& motif)
{
    Motif& m = motif_mut(motif);
    if (!m.members.count(component))
        throw Error(ErrorCode::NotAMember, "'" + component + "' is not a member of '" + motif + "'");
    m.members.erase(component);
    addresses_.erase({component, motif});
}

void Configuration::place(const std::string& component, const std::string& motif, const NodeId& n)
{
    const Motif& m = this->motif(motif);
    if (!m.members.count(component))
        throw Error(ErrorCode::NotAMember, "'" + component + "' is not a member of '" + motif + "'");
    if (!m.map->has_node(n))
        throw Error(ErrorCode::UnknownNode, "node '" + n + "' in motif '" + motif + "'");
    addresses_[{component, motif}] = n;
}

void Configuration::unplace(const std::string& component, const std::string& motif)
{
    addresses_.erase({component, motif});
}

void Configuration::add_node(const std::string& motif, const NodeId& n)
{
    map_mut(motif).add_node(n);
}

void Configuration::remove_node(const std::string& motif, const NodeId& n)
{
    const Motif& m = this->motif(motif);
    if (!m.map->has_node(n))
        throw Error(ErrorCode::UnknownNode, "node '" + n + "' in motif '" + motif + "'");
    if (!occupied(motif, n).empty())
        throw Error(ErrorCode::NodeOccupied, "node '" + n + "' in motif '" + motif + "'");
    map_mut(motif).remove_node(n);
}

void Configuration::set_map(const std::string& motif, std::shared_ptr<const Map> map)
{
    Motif& m = motif_mut(motif);
    for (auto it = addresses_.begin(); it != addresses_.end();) {
        if (it->first.second == motif && !map->has_node(it->second))
            it = addresses_.erase(it);
        else
            ++it;
    }
    m.map = std::move(map);
}

void Configuration::add_edge(const std::string& motif, const NodeId& from, const NodeId& to, long weight)
{
    const Map& cur = *this->motif(motif).map;
    if (!cur.has_node(from))
        throw Error(ErrorCode::UnknownNode, "node '" + from + "' in motif '" + motif + "'");
    if (!cur.has_node(to))
        throw Error(ErrorCode::UnknownNode, "node '" + to + "' in motif '" + motif + "'");
    map_mut(motif).add_edge(from, to, weight);
}

void Configuration::remove_edge(const std::string& motif, const NodeId& from, const NodeId& to)
{
    if (!this->motif(motif).map->has_edge(from, to))
        throw Error(ErrorCode::UnknownEdge, "edge '" + from + "' -> '" + to + "' in motif '" + motif + "'");
    map_mut(motif).remove_edge(from, to);
}

std::string Configuration::fresh_id(const std::string& type)
{
    long& next = next_id_[type];
    if (next < 1)
        next = 1;
    std::string id;
    do {
        id = type + "#" + std::to_string(next++);
    } while (components_.count(id));
    return id;
}

std::string Configuration::canonical() const
{
    std::string os;
    os.reserve(256);
    for (const auto& [id, c] : components_) {
        os += "c ";
        os += id;
        os += ':';
        os += c.type;
        for (const auto& [var, v] : c.state) {
            os += ' ';
            os += var;
            os += '=';
            os += to_string(v);
        }
        os += '\n';
    }
    for (const auto& [id, m] : motifs_) {
        if (m.derived)
            continue;
        os += "m ";
        os += id;
        os += " [";
        for (const auto& n : m.map->nodes()) {
            os += n;
            os += ',';
        }
        os += "] [";
        for (const auto& [e, w] : m.map->edges()) {
            os += e.first;
            os += '>';
            os += e.second;
            os += ':';
            os += std::to_string(w);
            os += ',';
        }
        os += "] {";
        for (const auto& member : m.members) {
            os += member;
            os += ',';
        }
        os += "}\n";
    }
    for (const auto& [key, n] : addresses_) {
        const auto* m = find_motif(key.second);
        if (m && m->derived)
            continue;
        os += "@ ";
        os += key.first;
        os += ' ';
        os += key.second;
        os += ' ';
        os += n;
        os += '\n';
    }
    return os;
}

std::vector<std::string> Configuration::check_invariants() const
{
    std::vector<std::string> problems;
    for (const auto& [key, n] : addresses_) {
        const auto* m = find_motif(key.second);
        if (!m) {
            problems.push_back("address of '" + key.first + "' in unknown motif '" + key.second + "'");
            continue;
        }
        if (!m->map->has_node(n))
            problems.push_back("address of '" + key.first + "' names undeclared node '" + n + "'");
        if (!m->members.count(key.first))
            problems.push_back("'" + key.first + "' is addressed in '" + key.second + "' without membership");
    }
    for (const auto& [id, m] : motifs_)
        for (const auto& member : m.members)
            if (!components_.count(member))
                problems.push_back("motif '" + id + "' lists missing component '" + member + "'");
    for (const auto& [id, c] : components_) {
        const auto* t = types_->find(c.type);
        if (!t) {
            problems.push_back("component '" + id + "' has unknown type");
            continue;
        }
        for (const auto& v : t->vars) {
            auto it = c.state.find(v.name);
            if (it == c.state.end() || !v.domain.contains(it->second))
                problems.push_back("component '" + id + "' variable '" + v.name + "' outside its domain");
        }
    }
    return problems;
}

std::optional<long> distance(const Map& map, const NodeId& a, const NodeId& b)
{
    return map.distance(a, b);
}

std::vector<std::string> occupied(const Configuration& cfg, const std::string& motif, const NodeId& n)
{
    return cfg.occupied(motif, n);
}

Configuration place(Configuration cfg, const std::string& component, const std::string& motif, const NodeId& n)
{
    cfg.place(component, motif, n);
    return cfg;
}

}  // namespace motif
