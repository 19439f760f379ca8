#pragma once

#include "motif/model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace motif {

/// Rule parameter -> component id, in parameter order. Absent optional
/// participants are simply not listed.
using Binding = std::vector<std::pair<std::string, std::string>>;

std::string to_string(const Binding& b);
const std::string* lookup(const Binding& b, const std::string& param);

struct EvalContext {
    const Configuration* cfg = nullptr;
    std::string motif;                 // default motif for @, empty, distance
    const Binding* binding = nullptr;
    Binding locals;                    // quantifier variables, self
    const Configuration* prev = nullptr;
};

/// Undefined addresses compare unequal to every node; any arithmetic on them is an
/// EvalError. Ordering comparisons with an undefined side are false.
Value evaluate(const Expr& e, const EvalContext& ctx);
bool holds(const Expr& e, const EvalContext& ctx);

/// Converts a node-valued (or integer) value into a node id.
NodeId as_node(const Value& v);

/// A rule instance that may fire in the current configuration.
struct Candidate {
    std::string motif;  // empty for object dynamics
    std::string rule;
    Binding binding;
    bool dynamics = false;
    bool controllable = false;

    /// The first bound participant; the component that triggers this instance.
    const std::string& initiator() const { return binding.front().second; }
    std::string label() const;

    bool operator==(const Candidate& o) const
    {
        return motif == o.motif && rule == o.rule && binding == o.binding && dynamics == o.dynamics;
    }
};

struct Event {
    long step = 0;
    std::string motif;
    std::string rule;
    Binding binding;
    std::vector<std::string> effects;  // "old -> new" summaries, reconfiguration ops
};

/// All bindings of pairwise-distinct member components whose guard holds, in
/// lexicographic order per parameter position. Optional parameters are bound
/// to the first fitting member when one exists. Lenient mode treats guards that
/// raise EvalError as false instead of propagating.
std::vector<Binding> enabled_bindings(const Configuration& cfg, const std::string& motif, const Rule& rule,
                                      bool lenient = false);

/// Fires one rule instance. All effects succeed or the call throws and cfg is untouched.
std::pair<Configuration, Event> apply(const Configuration& cfg, const std::string& motif, const Rule& rule,
                                      const Binding& binding);
std::pair<Configuration, Event> apply(const Configuration& cfg, const Candidate& c);

std::pair<Configuration, std::string> create_component(const Configuration& cfg, const std::string& type,
                                                       const std::string& motif,
                                                       const std::optional<NodeId>& node,
                                                       const std::map<std::string, Value>& init = {});
Configuration delete_component(const Configuration& cfg, const std::string& id);
Configuration migrate(const Configuration& cfg, const std::string& component, const std::string& from,
                      const std::string& to, const std::optional<NodeId>& node = std::nullopt);

/// Every enabled rule instance over all motifs, then object dynamics, in
/// deterministic order. With an ego, instances it initiates are tagged controllable.
std::vector<Candidate> step_candidates(const Configuration& cfg, const std::optional<std::string>& ego = std::nullopt);

/// Move chosen by an agent type's explicit controller, if any entry applies.
std::optional<Candidate> controller_choice(const Configuration& cfg, const std::string& agent);

const Rule& rule_of(const Configuration& cfg, const Candidate& c);

}  // namespace motif
