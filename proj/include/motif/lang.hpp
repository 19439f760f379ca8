#pragma once

#include "motif/agent_types.hpp"
#include "motif/model.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace motif {

struct MapSpec {
    enum class Kind : std::uint8_t { Line, Ring, Grid, Explicit };
    struct EdgeSpec {
        NodeId from;
        NodeId to;
        long weight = 1;
        bool both = false;
        bool operator==(const EdgeSpec&) const = default;
    };

    Kind kind = Kind::Explicit;
    long a = 0;
    long b = 0;
    std::vector<NodeId> nodes;
    std::vector<EdgeSpec> edges;

    Map build() const;
    bool operator==(const MapSpec&) const = default;
};

struct MotifDecl {
    std::string id;
    MapSpec map;
    std::vector<Rule> rules;
    Span span;

    bool operator==(const MotifDecl&) const = default;
};

struct Placement {
    std::string motif;
    std::optional<NodeId> node;
    Span span;

    bool operator==(const Placement&) const = default;
};

struct ComponentDecl {
    std::string id;
    std::string type;
    std::vector<std::pair<std::string, Value>> init;
    std::vector<Placement> placements;
    Span span;

    bool operator==(const ComponentDecl&) const = default;
};

struct CheckDecl {
    enum class Kind : std::uint8_t { Always, Final, AfterRise, AfterChange };

    std::string name;
    Kind kind = Kind::Always;
    int within = 0;
    std::optional<Expr> trigger;
    Expr expr;
    Span span;

    bool operator==(const CheckDecl&) const = default;
};

enum class PolicyKind : std::uint8_t { Random, RoundRobin, Script };

std::string_view to_string(PolicyKind p);
std::optional<PolicyKind> parse_policy(std::string_view s);

struct ScenarioDecl {
    std::string name;
    long steps = 100;
    std::vector<std::uint64_t> seeds;
    PolicyKind policy = PolicyKind::Random;
    std::vector<std::string> script;  // candidate labels, for PolicyKind::Script
    Span span;

    bool operator==(const ScenarioDecl&) const = default;
};

/// One `.motif` file. Items keep their declaration order within each kind.
struct ModelFile {
    std::vector<ComponentType> types;
    std::vector<MotifDecl> motifs;
    std::vector<ComponentDecl> components;
    std::vector<Goal> goals;
    std::vector<AgentSpec> agents;
    std::vector<CheckDecl> checks;
    std::optional<ScenarioDecl> scenario;

    const ComponentType* type(const std::string& name) const;
    const MotifDecl* motif(const std::string& id) const;
    const ComponentDecl* component(const std::string& id) const;
    const Goal* goal(const std::string& name) const;
    const AgentSpec* agent(const std::string& id) const;

    bool operator==(const ModelFile&) const = default;
};

struct Diagnostic {
    enum class Severity : std::uint8_t { Error, Warning };

    Severity severity = Severity::Error;
    Span span;
    std::string message;

    std::string format(std::string_view file = "") const;
};

struct ParseResult {
    std::optional<ModelFile> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Syntax, name resolution and type checking. No model is returned on any error.
ParseResult parse(std::string_view text);

/// Canonical text; parse(print(m)) == m.
std::string print(const ModelFile& model);
std::string print(const Expr& e);

/// Checks beyond syntax: placements, goal schema, agent references, dynamics scope.
std::vector<Diagnostic> validate(const ModelFile& model);

std::shared_ptr<const TypeCatalog> make_catalog(const ModelFile& model);

/// Initial configuration of a validated model.
Configuration instantiate(const ModelFile& model);

std::uint64_t model_hash(const ModelFile& model);

/// Reads, parses and validates; throws Error(ParseError) carrying formatted diagnostics.
ModelFile load_model(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

}  // namespace motif
