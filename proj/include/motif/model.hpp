#pragma once

#include "motif/expr.hpp"
#include "motif/map.hpp"
#include "motif/value.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace motif {

enum class ComponentKind : std::uint8_t { Agent, Object };

/// One entry of an agent's explicit controller: fire `rule` (with the agent as
/// first participant) when `guard` holds for that binding.
struct ControllerEntry {
    std::string rule;
    Expr guard = true_expr();
    Span span;

    bool operator==(const ControllerEntry&) const = default;
};

struct ComponentType {
    std::string name;
    ComponentKind kind = ComponentKind::Object;
    std::vector<VarDecl> vars;
    std::vector<Rule> dynamics;  // objects only: uncontrollable self-updates
    std::optional<std::vector<ControllerEntry>> controller;  // agents only
    Span span;

    const VarDecl* var(const std::string& name) const;

    bool operator==(const ComponentType&) const = default;
};

struct TypeCatalog {
    std::map<std::string, ComponentType> types;

    const ComponentType& at(const std::string& name) const;
    const ComponentType* find(const std::string& name) const;
};

struct ComponentInstance {
    std::string id;
    std::string type;
    std::map<std::string, Value> state;

    bool operator==(const ComponentInstance&) const = default;
};

using RuleSet = std::vector<Rule>;

struct Motif {
    std::string id;
    std::shared_ptr<const Map> map = std::make_shared<const Map>();
    std::set<std::string> members;
    std::shared_ptr<const RuleSet> rules = std::make_shared<const RuleSet>();
    /// Believed motifs built by an agent's pattern matching, not present in the world.
    bool derived = false;

    const Rule* rule(const std::string& name) const;

    friend bool operator==(const Motif& a, const Motif& b);
};

/// Component states plus per-motif addresses and memberships: the global system state.
class Configuration {
public:
    using AddressKey = std::pair<std::string, std::string>;  // (component, motif)

    Configuration() : types_(std::make_shared<const TypeCatalog>()) {}
    explicit Configuration(std::shared_ptr<const TypeCatalog> types) : types_(std::move(types)) {}

    const TypeCatalog& types() const { return *types_; }
    const std::shared_ptr<const TypeCatalog>& types_ptr() const { return types_; }

    const std::map<std::string, ComponentInstance>& components() const { return components_; }
    const std::map<std::string, Motif>& motifs() const { return motifs_; }
    const std::map<AddressKey, NodeId>& addresses() const { return addresses_; }
    const std::map<std::string, long>& id_counters() const { return next_id_; }

    const ComponentInstance& component(const std::string& id) const;
    const ComponentInstance* find_component(const std::string& id) const;
    const Motif& motif(const std::string& id) const;
    const Motif* find_motif(const std::string& id) const;
    const ComponentType& type_of(const std::string& id) const;

    bool is_member(const std::string& component, const std::string& motif) const;
    std::optional<NodeId> address(const std::string& component, const std::string& motif) const;
    std::vector<std::string> occupied(const std::string& motif, const NodeId& n) const;
    std::optional<long> distance(const std::string& motif, const NodeId& a, const NodeId& b) const;

    // Structural edits. All throw motif::Error and leave *this unchanged on failure.
    void add_motif(Motif m);
    void remove_motif(const std::string& id);
    void add_component(ComponentInstance c);
    void remove_component(const std::string& id);
    void set_var(const std::string& id, const std::string& var, const Value& v);
    void join(const std::string& component, const std::string& motif);
    void leave(const std::string& component, const std::string& motif);
    void place(const std::string& component, const std::string& motif, const NodeId& n);
    void unplace(const std::string& component, const std::string& motif);
    void add_node(const std::string& motif, const NodeId& n);
    void remove_node(const std::string& motif, const NodeId& n);
    void add_edge(const std::string& motif, const NodeId& from, const NodeId& to, long weight = 1);
    void remove_edge(const std::string& motif, const NodeId& from, const NodeId& to);
    /// Swaps in another map; addresses on nodes it lacks are dropped.
    void set_map(const std::string& motif, std::shared_ptr<const Map> map);

    /// Fresh id `type#k` from a per-type monotone counter; never reused within a run.
    std::string fresh_id(const std::string& type);
    void set_counter(const std::string& type, long next) { next_id_[type] = next; }

    /// Canonical text: sorted components, memberships, addresses, maps. Derived motifs
    /// and id counters are excluded so that believed and true states hash alike.
    std::string canonical() const;
    std::uint64_t hash() const { return stable_hash(canonical()); }

    /// Address validity and membership closure; empty when consistent.
    std::vector<std::string> check_invariants() const;

    friend bool operator==(const Configuration& a, const Configuration& b);

private:
    Motif& motif_mut(const std::string& id);
    Map& map_mut(const std::string& motif);

    std::shared_ptr<const TypeCatalog> types_;
    std::map<std::string, ComponentInstance> components_;
    std::map<std::string, Motif> motifs_;
    std::map<AddressKey, NodeId> addresses_;
    std::map<std::string, long> next_id_;
};

/// Free-function forms of the core queries.
std::optional<long> distance(const Map& map, const NodeId& a, const NodeId& b);
std::vector<std::string> occupied(const Configuration& cfg, const std::string& motif, const NodeId& n);
Configuration place(Configuration cfg, const std::string& component, const std::string& motif,
                    const NodeId& n);

}  // namespace motif
