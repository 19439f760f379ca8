#include "motif/expr.hpp"

namespace motif {

std::string_view to_string(Op op)
{
    switch (op) {
    case Op::None: return "";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Mod: return "%";
    case Op::Neg: return "-";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Not: return "not";
    case Op::Implies: return "implies";
    }
    return "?";
}

Expr Expr::literal(Value v, Span s)
{
    Expr e;
    e.kind = Kind::Lit;
    e.lit = std::move(v);
    e.span = s;
    return e;
}

Expr Expr::var(std::string name, Span s)
{
    Expr e;
    e.kind = Kind::Name;
    e.name = std::move(name);
    e.span = s;
    return e;
}

Expr Expr::field_of(std::string name, std::string field, Span s)
{
    Expr e;
    e.kind = Kind::Field;
    e.name = std::move(name);
    e.field = std::move(field);
    e.span = s;
    return e;
}

Expr Expr::unary(Op op, Expr a, Span s)
{
    Expr e;
    e.kind = Kind::Unary;
    e.op = op;
    e.args.push_back(std::move(a));
    e.span = s;
    return e;
}

Expr Expr::binary(Op op, Expr a, Expr b, Span s)
{
    Expr e;
    e.kind = Kind::Binary;
    e.op = op;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    e.span = s;
    return e;
}

Expr true_expr()
{
    return Expr::literal(Value::boolean(true));
}

bool is_true_literal(const Expr& e)
{
    return e.kind == Expr::Kind::Lit && e.lit == Value::boolean(true);
}

}  // namespace motif
