#include "motif/coordination.hpp"

#include <charconv>

namespace motif {

namespace {

[[noreturn]] void eval_error(const Expr& e, const std::string& msg)
{
    std::string where;
    if (e.span.valid())
        where = " at " + std::to_string(e.span.line) + ":" + std::to_string(e.span.col);
    throw Error(ErrorCode::EvalError, msg + where);
}

std::optional<std::int64_t> node_number(const std::string& id)
{
    std::int64_t n = 0;
    const char* first = id.data();
    const char* last = id.data() + id.size();
    if (id.empty())
        return std::nullopt;
    auto [p, ec] = std::from_chars(first, last, n);
    if (ec != std::errc{} || p != last)
        return std::nullopt;
    return n;
}

/// Numeric view of a value: numbers as-is, integer-named nodes as their index.
std::optional<std::int64_t> numeric(const Value& v)
{
    if (v.kind == Value::Kind::Num)
        return v.num;
    if (v.kind == Value::Kind::Node)
        if (auto n = node_number(v.text))
            return *n * kScale;
    return std::nullopt;
}

std::optional<std::string> resolve_name(const Expr& e, const EvalContext& ctx, bool& absent)
{
    absent = false;
    if (e.role == Expr::Role::Symbol)
        return std::nullopt;
    for (auto it = ctx.locals.rbegin(); it != ctx.locals.rend(); ++it)
        if (it->first == e.name)
            return it->second;
    if (e.role != Expr::Role::Component && ctx.binding) {
        if (const auto* id = lookup(*ctx.binding, e.name))
            return *id;
    }
    if (e.role == Expr::Role::Var) {
        absent = true;  // unbound optional participant
        return std::nullopt;
    }
    if (e.role == Expr::Role::Component || ctx.cfg->find_component(e.name))
        return e.name;
    return std::nullopt;
}

const std::string& motif_for(const Expr& e, const EvalContext& ctx)
{
    const std::string& m = e.motif.empty() ? ctx.motif : e.motif;
    if (m.empty())
        eval_error(e, "no motif in scope for " + std::string(e.kind == Expr::Kind::Addr ? "@" : "map query"));
    return m;
}

Value compare(const Expr& e, Op op, const Value& a, const Value& b)
{
    if (op == Op::Eq || op == Op::Ne) {
        bool eq;
        if (a.is_undef() || b.is_undef())
            eq = a.is_undef() && b.is_undef();
        else if (a.kind == b.kind)
            eq = a == b;
        else if (auto x = numeric(a), y = numeric(b); x && y)
            eq = *x == *y;
        else if ((a.kind == Value::Kind::Node || a.kind == Value::Kind::Sym) &&
                 (b.kind == Value::Kind::Node || b.kind == Value::Kind::Sym))
            eq = a.text == b.text;
        else
            eval_error(e, "cannot compare " + std::string(to_string(a.kind)) + " with " +
                              std::string(to_string(b.kind)));
        return Value::boolean(op == Op::Eq ? eq : !eq);
    }
    if (a.is_undef() || b.is_undef())
        return Value::boolean(false);
    auto x = numeric(a);
    auto y = numeric(b);
    if (!x || !y)
        eval_error(e, "ordering needs numbers, got " + std::string(to_string(a.kind)) + " and " +
                          std::string(to_string(b.kind)));
    switch (op) {
    case Op::Lt: return Value::boolean(*x < *y);
    case Op::Le: return Value::boolean(*x <= *y);
    case Op::Gt: return Value::boolean(*x > *y);
    case Op::Ge: return Value::boolean(*x >= *y);
    default: break;
    }
    eval_error(e, "bad comparison");
}

Value arithmetic(const Expr& e, Op op, const Value& a, const Value& b)
{
    if (a.is_undef() || b.is_undef())
        eval_error(e, "arithmetic on an undefined value");
    auto x = numeric(a);
    auto y = numeric(b);
    if (!x || !y)
        eval_error(e, "arithmetic needs numbers, got " + std::string(to_string(a.kind)) + " and " +
                          std::string(to_string(b.kind)));
    std::int64_t r = 0;
    switch (op) {
    case Op::Add: r = *x + *y; break;
    case Op::Sub: r = *x - *y; break;
    case Op::Mul: r = (*x * *y) / kScale; break;
    case Op::Mod:
        if (*y == 0)
            eval_error(e, "modulo by zero");
        r = *x % *y;
        if (r < 0)
            r += (*y < 0 ? -*y : *y);
        break;
    default: eval_error(e, "bad arithmetic operator");
    }
    if (a.kind == Value::Kind::Node && op != Op::Mul) {
        if (r % kScale != 0)
            eval_error(e, "node arithmetic produced a fractional node");
        return Value::node(std::to_string(r / kScale));
    }
    return Value::milli(r);
}

}  // namespace

std::string to_string(const Binding& b)
{
    std::string s;
    for (const auto& [p, id] : b) {
        if (!s.empty())
            s += ',';
        s += p + "=" + id;
    }
    return s;
}

const std::string* lookup(const Binding& b, const std::string& param)
{
    for (const auto& [p, id] : b)
        if (p == param)
            return &id;
    return nullptr;
}

NodeId as_node(const Value& v)
{
    switch (v.kind) {
    case Value::Kind::Node:
    case Value::Kind::Sym: return v.text;
    case Value::Kind::Num:
        if (v.num % kScale == 0)
            return std::to_string(v.num / kScale);
        break;
    default: break;
    }
    throw Error(ErrorCode::EvalError, "value " + to_string(v) + " is not a node");
}

Value evaluate(const Expr& e, const EvalContext& ctx)
{
    switch (e.kind) {
    case Expr::Kind::Lit: return e.lit;

    case Expr::Kind::Name: {
        bool absent = false;
        if (auto id = resolve_name(e, ctx, absent))
            return Value::ref(*id);
        if (absent)
            return Value::undef();
        return Value::symbol(e.name);
    }

    case Expr::Kind::Field: {
        bool absent = false;
        Expr base = Expr::var(e.name);
        base.role = e.role;
        auto id = resolve_name(base, ctx, absent);
        if (!id) {
            if (absent)
                return Value::undef();
            eval_error(e, "unknown component '" + e.name + "'");
        }
        const auto* c = ctx.cfg->find_component(*id);
        if (!c)
            eval_error(e, "component '" + *id + "' does not exist");
        auto it = c->state.find(e.field);
        if (it == c->state.end())
            eval_error(e, "component '" + *id + "' has no variable '" + e.field + "'");
        return it->second;
    }

    case Expr::Kind::Addr: {
        Value who = evaluate(e.args.at(0), ctx);
        if (who.is_undef())
            return Value::undef();
        if (who.kind != Value::Kind::Ref)
            eval_error(e, "@ expects a component");
        const std::string& m = motif_for(e, ctx);
        if (!ctx.cfg->find_motif(m))
            eval_error(e, "unknown motif '" + m + "'");
        if (auto n = ctx.cfg->address(who.text, m))
            return Value::node(*n);
        return Value::undef();
    }

    case Expr::Kind::Empty: {
        Value where = evaluate(e.args.at(0), ctx);
        if (where.is_undef())
            eval_error(e, "empty() of an undefined address");
        const std::string& m = motif_for(e, ctx);
        const Motif* motif = ctx.cfg->find_motif(m);
        if (!motif)
            eval_error(e, "unknown motif '" + m + "'");
        NodeId n = as_node(where);
        if (!motif->map->has_node(n))
            return Value::boolean(false);
        return Value::boolean(ctx.cfg->occupied(m, n).empty());
    }

    case Expr::Kind::Distance: {
        Value a = evaluate(e.args.at(0), ctx);
        Value b = evaluate(e.args.at(1), ctx);
        if (a.is_undef() || b.is_undef())
            eval_error(e, "distance() of an undefined address");
        const std::string& m = motif_for(e, ctx);
        const Motif* motif = ctx.cfg->find_motif(m);
        if (!motif)
            eval_error(e, "unknown motif '" + m + "'");
        NodeId na = as_node(a);
        NodeId nb = as_node(b);
        if (!motif->map->has_node(na) || !motif->map->has_node(nb))
            eval_error(e, "distance() between nodes not on the map of '" + m + "'");
        auto d = motif->map->distance(na, nb);
        if (!d)
            return Value::undef();
        return Value::integer(*d);
    }

    case Expr::Kind::In: {
        Value who = evaluate(e.args.at(0), ctx);
        if (who.is_undef())
            return Value::boolean(false);
        if (who.kind != Value::Kind::Ref)
            eval_error(e, "in() expects a component");
        return Value::boolean(ctx.cfg->is_member(who.text, e.motif));
    }

    case Expr::Kind::Unary: {
        Value a = evaluate(e.args.at(0), ctx);
        if (e.op == Op::Not)
            return Value::boolean(!a.as_bool());
        if (e.op == Op::Neg) {
            auto x = numeric(a);
            if (!x)
                eval_error(e, "negation needs a number");
            return Value::milli(-*x);
        }
        eval_error(e, "bad unary operator");
    }

    case Expr::Kind::Binary: {
        switch (e.op) {
        case Op::And: {
            if (!evaluate(e.args[0], ctx).as_bool())
                return Value::boolean(false);
            return Value::boolean(evaluate(e.args[1], ctx).as_bool());
        }
        case Op::Or: {
            if (evaluate(e.args[0], ctx).as_bool())
                return Value::boolean(true);
            return Value::boolean(evaluate(e.args[1], ctx).as_bool());
        }
        case Op::Implies: {
            if (!evaluate(e.args[0], ctx).as_bool())
                return Value::boolean(true);
            return Value::boolean(evaluate(e.args[1], ctx).as_bool());
        }
        default: break;
        }
        Value a = evaluate(e.args[0], ctx);
        Value b = evaluate(e.args[1], ctx);
        switch (e.op) {
        case Op::Eq:
        case Op::Ne:
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge: return compare(e, e.op, a, b);
        default: return arithmetic(e, e.op, a, b);
        }
    }

    case Expr::Kind::Forall:
    case Expr::Kind::Exists: {
        const bool forall = e.kind == Expr::Kind::Forall;
        EvalContext inner = ctx;
        inner.locals.emplace_back(e.name, std::string{});
        for (const auto& [id, c] : ctx.cfg->components()) {
            if (c.type != e.type)
                continue;
            inner.locals.back().second = id;
            const bool v = evaluate(e.args.at(0), inner).as_bool();
            if (forall && !v)
                return Value::boolean(false);
            if (!forall && v)
                return Value::boolean(true);
        }
        return Value::boolean(forall);
    }

    case Expr::Kind::Prev: {
        if (!ctx.prev)
            return evaluate(e.args.at(0), ctx);
        EvalContext inner = ctx;
        inner.cfg = ctx.prev;
        inner.prev = nullptr;
        return evaluate(e.args.at(0), inner);
    }
    }
    eval_error(e, "bad expression");
}

bool holds(const Expr& e, const EvalContext& ctx)
{
    return evaluate(e, ctx).as_bool();
}

}  // namespace motif
