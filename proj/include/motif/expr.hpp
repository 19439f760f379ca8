#pragma once

#include "motif/value.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace motif {

/// Source location. Spans never take part in structural equality.
struct Span {
    int line = 0;
    int col = 0;
    int len = 0;

    bool valid() const { return line > 0; }
    friend bool operator==(const Span&, const Span&) { return true; }
};

enum class Op : std::uint8_t {
    None,
    Add, Sub, Mul, Mod, Neg,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or, Not, Implies,
};

std::string_view to_string(Op op);

/// Guard / predicate / value expression tree.
struct Expr {
    enum class Kind : std::uint8_t {
        Lit,       // lit
        Name,      // name; role decides what it denotes
        Field,     // name.field
        Addr,      // @(args[0] [, motif])
        Empty,     // empty(args[0] [, motif])
        Distance,  // distance(args[0], args[1] [, motif])
        In,        // in(args[0], motif)
        Unary,     // op args[0]
        Binary,    // args[0] op args[1]
        Forall,    // forall name: type . args[0]
        Exists,    // exists name: type . args[0]
        Prev,      // prev(args[0]) -- value on the previous step (checks only)
    };
    enum class Role : std::uint8_t { Unresolved, Var, Component, Symbol };

    Kind kind = Kind::Lit;
    Op op = Op::None;
    Role role = Role::Unresolved;
    Value lit;
    std::string name;
    std::string field;
    std::string motif;
    std::string type;
    std::vector<Expr> args;
    Span span;

    static Expr literal(Value v, Span s = {});
    static Expr var(std::string name, Span s = {});
    static Expr field_of(std::string name, std::string field, Span s = {});
    static Expr unary(Op op, Expr a, Span s = {});
    static Expr binary(Op op, Expr a, Expr b, Span s = {});

    bool operator==(const Expr&) const = default;
};

/// True literal; used for omitted guards.
Expr true_expr();
bool is_true_literal(const Expr& e);

struct Effect {
    enum class Kind : std::uint8_t {
        Assign,      // target := value
        Exchange,    // exchange(target, other)
        Move,        // @(subject [, motif]) := value
        Create,      // create type [as subject] [at value] [{init}]
        Delete,      // delete subject
        AddNode,     // add_node value
        RemoveNode,  // remove_node value
        AddEdge,     // add_edge value -> value2 [weight]
        RemoveEdge,  // remove_edge value -> value2
        Join,        // join subject motif [at value]
        Leave,       // leave subject motif
        Migrate,     // migrate subject motif -> motif2 [at value]
    };

    Kind kind = Kind::Assign;
    Expr target;  // Field for Assign / Exchange
    Expr other;   // Field for Exchange
    std::string subject;
    std::string type;
    std::string motif;
    std::string motif2;
    std::optional<Expr> value;
    std::optional<Expr> value2;
    std::optional<Expr> weight;
    std::vector<std::pair<std::string, Expr>> init;
    Span span;

    bool operator==(const Effect&) const = default;

    /// True for effects that change structure rather than state variables.
    bool reconfigures() const { return kind != Kind::Assign && kind != Kind::Exchange; }
};

struct Param {
    std::string name;
    std::string type;
    bool optional = false;
    /// Extra condition for an optional participant (evaluated with it bound).
    std::optional<Expr> filter;

    bool operator==(const Param&) const = default;
};

enum class RuleKind : std::uint8_t { Interaction, Configuration, Dynamics };

struct Rule {
    std::string name;
    RuleKind kind = RuleKind::Interaction;
    std::vector<Param> params;
    Expr guard = true_expr();
    std::vector<Effect> effects;
    Span span;

    bool operator==(const Rule&) const = default;
};

}  // namespace motif
