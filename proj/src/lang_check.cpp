// Name resolution and type checking for parsed models.
#include "motif/lang.hpp"

#include <map>
#include <set>

namespace motif {

namespace {

enum class Ty : std::uint8_t { Any, Bool, Num, Sym, Node, Ref };

std::string_view ty_name(Ty t)
{
    switch (t) {
    case Ty::Any: return "any";
    case Ty::Bool: return "bool";
    case Ty::Num: return "number";
    case Ty::Sym: return "symbol";
    case Ty::Node: return "node";
    case Ty::Ref: return "component";
    }
    return "?";
}

Ty ty_of(const Domain& d)
{
    switch (d.kind) {
    case Domain::Kind::Bool: return Ty::Bool;
    case Domain::Kind::Int:
    case Domain::Kind::Real: return Ty::Num;
    case Domain::Kind::Enum: return Ty::Sym;
    }
    return Ty::Any;
}

bool numeric_like(Ty t) { return t == Ty::Any || t == Ty::Num || t == Ty::Node; }

struct Scope {
    std::map<std::string, std::string> vars;  // name -> type ("" when unknown)
    std::set<std::string> loose;              // names that resolve at evaluation time (controller guards)
};

class Checker {
public:
    explicit Checker(ModelFile& m) : m_(m)
    {
        for (const auto& t : m_.types) {
            for (const auto& v : t.vars)
                for (const auto& s : v.domain.symbols)
                    symbols_.insert(s);
        }
        for (const auto& c : m_.components)
            component_types_[c.id] = c.type;
        for (const auto& md : m_.motifs)
            motifs_.insert(md.id);
    }

    std::vector<Diagnostic> run()
    {
        for (auto& t : m_.types) {
            Scope self;
            self.vars["self"] = t.name;
            for (auto& r : t.dynamics)
                rule(r, self);
            if (t.controller) {
                for (auto& entry : *t.controller) {
                    Scope s;
                    s.vars["self"] = t.name;
                    bool found = false;
                    for (const auto& md : m_.motifs)
                        for (const auto& r : md.rules)
                            if (r.name == entry.rule) {
                                found = true;
                                for (const auto& p : r.params)
                                    s.loose.insert(p.name);
                            }
                    if (!found)
                        error(entry.span, "controller of '" + t.name + "' names unknown rule '" + entry.rule + "'");
                    guard(entry.guard, s);
                }
            }
        }
        for (auto& md : m_.motifs) {
            for (auto& r : md.rules)
                rule(r, Scope{});
        }
        for (auto& c : m_.components) {
            if (!type_known(c.type, c.span))
                continue;
            for (const auto& p : c.placements)
                motif_known(p.motif, p.span);
        }
        Scope with_self;
        with_self.vars["self"] = "";
        for (auto& g : m_.goals) {
            Ty t = expr(g.expr, with_self);
            if (g.kind == GoalKind::Utility) {
                if (!numeric_like(t) || t == Ty::Node)
                    error(g.expr.span, "utility goal '" + g.name + "' needs a numeric expression, got " +
                                           std::string(ty_name(t)));
            }
            else if (t != Ty::Bool && t != Ty::Any) {
                error(g.expr.span, "goal '" + g.name + "' needs a boolean expression, got " + std::string(ty_name(t)));
            }
        }
        for (auto& a : m_.agents) {
            Scope s;
            s.vars["self"] = component_types_.count(a.id) ? component_types_[a.id] : "";
            for (auto& h : a.hooks)
                guard(h.when, s);
            for (auto& p : a.patterns) {
                motif_known(p.base, p.span);
                Scope ps = s;
                params(p.params, ps, p.span);
                guard(p.guard, ps);
                if (!ps.vars.count(p.leader))
                    error(p.span, "pattern '" + p.name + "' leader '" + p.leader + "' is not a parameter");
            }
        }
        for (auto& c : m_.checks) {
            if (c.trigger) {
                Ty t = expr(*c.trigger, Scope{});
                if (c.kind == CheckDecl::Kind::AfterRise && t != Ty::Bool && t != Ty::Any)
                    error(c.trigger->span, "rise trigger must be boolean");
            }
            guard(c.expr, Scope{});
        }
        return std::move(diags_);
    }

private:
    void error(Span s, std::string msg) { diags_.push_back({Diagnostic::Severity::Error, s, std::move(msg)}); }

    bool type_known(const std::string& name, Span s)
    {
        if (m_.type(name))
            return true;
        error(s, "unknown type '" + name + "'");
        return false;
    }

    bool motif_known(const std::string& id, Span s)
    {
        if (motifs_.count(id))
            return true;
        error(s, "unknown motif '" + id + "'");
        return false;
    }

    void params(std::vector<Param>& ps, Scope& scope, Span s)
    {
        for (auto& p : ps) {
            type_known(p.type, s);
            if (scope.vars.count(p.name) && p.name != "self")
                error(s, "duplicate parameter '" + p.name + "'");
            scope.vars[p.name] = p.type;
        }
        for (auto& p : ps)
            if (p.filter)
                guard(*p.filter, scope);
    }

    void rule(Rule& r, Scope scope)
    {
        if (r.kind != RuleKind::Dynamics)
            params(r.params, scope, r.span);
        guard(r.guard, scope);
        for (auto& fx : r.effects)
            effect(fx, scope);
    }

    void guard(Expr& e, const Scope& s)
    {
        Ty t = expr(e, s);
        if (t != Ty::Bool && t != Ty::Any)
            error(e.span, "expected a boolean condition, got " + std::string(ty_name(t)));
    }

    const VarDecl* field_decl(const std::string& type, const std::string& field, Span s)
    {
        const ComponentType* t = m_.type(type);
        if (!t)
            return nullptr;
        const VarDecl* v = t->var(field);
        if (!v)
            error(s, "type '" + type + "' has no variable '" + field + "'");
        return v;
    }

    // Type of the component a name denotes; "" if unknown or not a component.
    std::string resolve_base(Expr& e, const Scope& s, const std::string& name)
    {
        if (auto it = s.vars.find(name); it != s.vars.end()) {
            e.role = Expr::Role::Var;
            return it->second;
        }
        if (s.loose.count(name)) {
            e.role = Expr::Role::Unresolved;
            return "";
        }
        if (auto it = component_types_.find(name); it != component_types_.end()) {
            e.role = Expr::Role::Component;
            return it->second;
        }
        error(e.span, "unknown name '" + name + "'");
        return "";
    }

    void check_assign(const VarDecl* v, const Expr& value, Ty t)
    {
        if (!v || t == Ty::Any)
            return;
        Ty want = ty_of(v->domain);
        bool ok = t == want || (want == Ty::Num && t == Ty::Node);
        if (!ok) {
            error(value.span, "cannot assign " + std::string(ty_name(t)) + " to " + std::string(ty_name(want)) +
                                  " variable '" + v->name + "'");
            return;
        }
        if (want == Ty::Sym && value.kind == Expr::Kind::Name && value.role == Expr::Role::Symbol) {
            const auto& syms = v->domain.symbols;
            if (std::find(syms.begin(), syms.end(), value.name) == syms.end())
                error(value.span, "'" + value.name + "' is not a value of '" + v->name + "'");
        }
    }

    void effect(Effect& fx, Scope& s)
    {
        auto subject = [&](const std::string& name) -> std::string {
            if (auto it = s.vars.find(name); it != s.vars.end())
                return it->second;
            error(fx.span, "effect subject '" + name + "' is not a parameter");
            return "";
        };
        auto opt_motif = [&](const std::string& id) {
            if (!id.empty())
                motif_known(id, fx.span);
        };
        auto node_expr = [&](std::optional<Expr>& e) {
            if (!e)
                return;
            Ty t = expr(*e, s);
            if (t != Ty::Any && t != Ty::Node && t != Ty::Num)
                error(e->span, "expected a node, got " + std::string(ty_name(t)));
        };
        switch (fx.kind) {
        case Effect::Kind::Assign: {
            std::string type = resolve_base(fx.target, s, fx.target.name);
            const VarDecl* v = type.empty() ? nullptr : field_decl(type, fx.target.field, fx.target.span);
            Ty t = expr(*fx.value, s);
            check_assign(v, *fx.value, t);
            return;
        }
        case Effect::Kind::Exchange: {
            std::string ta = resolve_base(fx.target, s, fx.target.name);
            std::string tb = resolve_base(fx.other, s, fx.other.name);
            const VarDecl* a = ta.empty() ? nullptr : field_decl(ta, fx.target.field, fx.target.span);
            const VarDecl* b = tb.empty() ? nullptr : field_decl(tb, fx.other.field, fx.other.span);
            if (a && b && !(a->domain == b->domain))
                error(fx.span, "exchange between variables of different domains");
            return;
        }
        case Effect::Kind::Move:
            subject(fx.subject);
            opt_motif(fx.motif);
            node_expr(fx.value);
            return;
        case Effect::Kind::Create: {
            if (!type_known(fx.type, fx.span))
                return;
            node_expr(fx.value);
            for (auto& [var, e] : fx.init) {
                const VarDecl* v = field_decl(fx.type, var, e.span);
                check_assign(v, e, expr(e, s));
            }
            if (!fx.subject.empty())
                s.vars[fx.subject] = fx.type;
            return;
        }
        case Effect::Kind::Delete:
            subject(fx.subject);
            return;
        case Effect::Kind::AddNode:
        case Effect::Kind::RemoveNode:
            node_expr(fx.value);
            return;
        case Effect::Kind::AddEdge:
        case Effect::Kind::RemoveEdge:
            node_expr(fx.value);
            node_expr(fx.value2);
            if (fx.weight) {
                Ty t = expr(*fx.weight, s);
                if (t != Ty::Any && t != Ty::Num)
                    error(fx.weight->span, "edge weight must be a number");
            }
            return;
        case Effect::Kind::Join:
            subject(fx.subject);
            motif_known(fx.motif, fx.span);
            node_expr(fx.value);
            return;
        case Effect::Kind::Leave:
            subject(fx.subject);
            motif_known(fx.motif, fx.span);
            return;
        case Effect::Kind::Migrate:
            subject(fx.subject);
            motif_known(fx.motif, fx.span);
            motif_known(fx.motif2, fx.span);
            node_expr(fx.value);
            return;
        }
    }

    Ty expr(Expr& e, const Scope& s)
    {
        switch (e.kind) {
        case Expr::Kind::Lit:
            switch (e.lit.kind) {
            case Value::Kind::Bool: return Ty::Bool;
            case Value::Kind::Num: return Ty::Num;
            case Value::Kind::Node: return Ty::Node;
            case Value::Kind::Sym: return Ty::Sym;
            default: return Ty::Any;
            }
        case Expr::Kind::Name: {
            if (s.vars.count(e.name)) {
                e.role = Expr::Role::Var;
                return Ty::Ref;
            }
            if (s.loose.count(e.name)) {
                e.role = Expr::Role::Unresolved;
                return Ty::Ref;
            }
            if (component_types_.count(e.name)) {
                e.role = Expr::Role::Component;
                return Ty::Ref;
            }
            if (symbols_.count(e.name)) {
                e.role = Expr::Role::Symbol;
                return Ty::Sym;
            }
            error(e.span, "unknown name '" + e.name + "'");
            return Ty::Any;
        }
        case Expr::Kind::Field: {
            std::string type = resolve_base(e, s, e.name);
            if (type.empty())
                return Ty::Any;
            if (const VarDecl* v = field_decl(type, e.field, e.span))
                return ty_of(v->domain);
            return Ty::Any;
        }
        case Expr::Kind::Addr: {
            if (!e.motif.empty())
                motif_known(e.motif, e.span);
            Ty t = expr(e.args[0], s);
            if (t != Ty::Ref && t != Ty::Any)
                error(e.args[0].span, "@ expects a component");
            return Ty::Node;
        }
        case Expr::Kind::Empty: {
            if (!e.motif.empty())
                motif_known(e.motif, e.span);
            Ty t = expr(e.args[0], s);
            if (t != Ty::Node && t != Ty::Num && t != Ty::Any)
                error(e.args[0].span, "empty expects a node");
            return Ty::Bool;
        }
        case Expr::Kind::Distance: {
            if (!e.motif.empty())
                motif_known(e.motif, e.span);
            for (auto& a : e.args) {
                Ty t = expr(a, s);
                if (t != Ty::Node && t != Ty::Num && t != Ty::Any)
                    error(a.span, "distance expects nodes");
            }
            return Ty::Num;
        }
        case Expr::Kind::In: {
            motif_known(e.motif, e.span);
            Ty t = expr(e.args[0], s);
            if (t != Ty::Ref && t != Ty::Any)
                error(e.args[0].span, "in expects a component");
            return Ty::Bool;
        }
        case Expr::Kind::Prev:
            return expr(e.args[0], s);
        case Expr::Kind::Forall:
        case Expr::Kind::Exists: {
            type_known(e.type, e.span);
            Scope inner = s;
            inner.vars[e.name] = e.type;
            inner.loose.erase(e.name);
            Ty t = expr(e.args[0], inner);
            if (t != Ty::Bool && t != Ty::Any)
                error(e.args[0].span, "quantifier body must be boolean");
            return Ty::Bool;
        }
        case Expr::Kind::Unary: {
            Ty t = expr(e.args[0], s);
            if (e.op == Op::Not) {
                if (t != Ty::Bool && t != Ty::Any)
                    error(e.span, "'not' expects a boolean");
                return Ty::Bool;
            }
            if (t != Ty::Num && t != Ty::Any)
                error(e.span, "unary '-' expects a number");
            return Ty::Num;
        }
        case Expr::Kind::Binary: {
            Ty a = expr(e.args[0], s);
            Ty b = expr(e.args[1], s);
            const std::string op(to_string(e.op));
            switch (e.op) {
            case Op::And:
            case Op::Or:
            case Op::Implies:
                if ((a != Ty::Bool && a != Ty::Any) || (b != Ty::Bool && b != Ty::Any))
                    error(e.span, "'" + op + "' expects booleans");
                return Ty::Bool;
            case Op::Eq:
            case Op::Ne:
                if (a != Ty::Any && b != Ty::Any && a != b && !(numeric_like(a) && numeric_like(b)))
                    error(e.span, "cannot compare " + std::string(ty_name(a)) + " with " + std::string(ty_name(b)));
                return Ty::Bool;
            case Op::Lt:
            case Op::Le:
            case Op::Gt:
            case Op::Ge:
                if (!numeric_like(a) || !numeric_like(b))
                    error(e.span, "'" + op + "' expects numbers");
                return Ty::Bool;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Mod:
                if (!numeric_like(a) || !numeric_like(b))
                    error(e.span, "'" + op + "' expects numbers");
                if (e.op != Op::Mul && a == Ty::Node && b != Ty::Node)
                    return Ty::Node;
                return Ty::Num;
            default:
                return Ty::Any;
            }
        }
        }
        return Ty::Any;
    }

    ModelFile& m_;
    std::set<std::string> symbols_;
    std::set<std::string> motifs_;
    std::map<std::string, std::string> component_types_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> resolve(ModelFile& model)
{
    return Checker(model).run();
}

}  // namespace motif
