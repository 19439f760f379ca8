#include "motif/lang.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace motif {

namespace {

constexpr int kImplies = 1, kOr = 2, kAnd = 3, kNot = 4, kCmp = 5, kAdd = 6, kMul = 7, kNeg = 8, kAtom = 9;

int precedence(const Expr& e)
{
    if (e.kind == Expr::Kind::Unary)
        return e.op == Op::Not ? kNot : kNeg;
    if (e.kind != Expr::Kind::Binary)
        return kAtom;
    switch (e.op) {
    case Op::Implies: return kImplies;
    case Op::Or: return kOr;
    case Op::And: return kAnd;
    case Op::Add:
    case Op::Sub: return kAdd;
    case Op::Mul:
    case Op::Mod: return kMul;
    default: return kCmp;
    }
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string node_text(const NodeId& n)
{
    bool digits = !n.empty() && std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c); });
    return digits ? n : quote(n);
}

std::string decimal(double x)
{
    return format_milli(std::llround(x * kScale));
}

std::string literal(const Value& v, int decimals = -1)
{
    switch (v.kind) {
    case Value::Kind::Undef: return "undef";
    case Value::Kind::Bool: return v.num ? "true" : "false";
    case Value::Kind::Num: return format_milli(v.num, decimals);
    case Value::Kind::Sym: return v.text;
    case Value::Kind::Node: return quote(v.text);
    case Value::Kind::Ref: return v.text;
    }
    return "?";
}

void print_expr(std::ostringstream& o, const Expr& e, int min_prec);

void print_call(std::ostringstream& o, const char* fn, const Expr& e)
{
    o << fn << "(";
    for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i)
            o << ", ";
        print_expr(o, e.args[i], kImplies);
    }
    if (!e.motif.empty())
        o << ", " << e.motif;
    o << ")";
}

void print_expr(std::ostringstream& o, const Expr& e, int min_prec)
{
    const int p = precedence(e);
    const bool parens = p < min_prec;
    if (parens)
        o << "(";
    switch (e.kind) {
    case Expr::Kind::Lit: o << literal(e.lit); break;
    case Expr::Kind::Name: o << e.name; break;
    case Expr::Kind::Field: o << e.name << "." << e.field; break;
    case Expr::Kind::Addr: print_call(o, "@", e); break;
    case Expr::Kind::Empty: print_call(o, "empty", e); break;
    case Expr::Kind::Distance: print_call(o, "distance", e); break;
    case Expr::Kind::In: print_call(o, "in", e); break;
    case Expr::Kind::Prev: print_call(o, "prev", e); break;
    case Expr::Kind::Forall:
    case Expr::Kind::Exists:
        o << "(" << (e.kind == Expr::Kind::Forall ? "forall " : "exists ") << e.name << ": " << e.type << " . ";
        print_expr(o, e.args[0], kImplies);
        o << ")";
        break;
    case Expr::Kind::Unary:
        if (e.op == Op::Not) {
            o << "not ";
            print_expr(o, e.args[0], kNot);
        }
        else {
            o << "-";
            const Expr& a = e.args[0];
            // "-5" would read back as a literal
            if (a.kind == Expr::Kind::Lit && a.lit.kind == Value::Kind::Num) {
                o << "(";
                print_expr(o, a, kImplies);
                o << ")";
            }
            else {
                print_expr(o, a, kNeg);
            }
        }
        break;
    case Expr::Kind::Binary: {
        int lp = p, rp = p + 1;
        if (p == kImplies)
            lp = p + 1, rp = p;
        else if (p == kCmp)
            lp = p + 1;
        print_expr(o, e.args[0], lp);
        o << " " << to_string(e.op) << " ";
        print_expr(o, e.args[1], rp);
        break;
    }
    }
    if (parens)
        o << ")";
}

std::string expr_text(const Expr& e)
{
    std::ostringstream o;
    print_expr(o, e, kImplies);
    return o.str();
}

std::string domain_text(const Domain& d)
{
    switch (d.kind) {
    case Domain::Kind::Bool: return "bool";
    case Domain::Kind::Int: return "int[" + format_milli(d.lo) + ", " + format_milli(d.hi) + "]";
    case Domain::Kind::Real: {
        int dec = d.decimals();
        return "real[" + format_milli(d.lo, dec) + ", " + format_milli(d.hi, dec) + "] step " + format_milli(d.step);
    }
    case Domain::Kind::Enum: {
        std::string s = "{";
        for (std::size_t i = 0; i < d.symbols.size(); ++i)
            s += (i ? ", " : "") + d.symbols[i];
        return s + "}";
    }
    }
    return "?";
}

std::string params_text(const std::vector<Param>& ps)
{
    std::string s = "(";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i)
            s += ", ";
        if (ps[i].optional)
            s += "?";
        s += ps[i].name + ": " + ps[i].type;
        if (ps[i].filter)
            s += " if " + expr_text(*ps[i].filter);
    }
    return s + ")";
}

std::string effect_text(const Effect& fx)
{
    auto at = [&](const std::optional<Expr>& e) { return e ? " at " + expr_text(*e) : std::string(); };
    switch (fx.kind) {
    case Effect::Kind::Assign:
        return fx.target.name + "." + fx.target.field + " := " + expr_text(*fx.value);
    case Effect::Kind::Exchange:
        return "exchange(" + fx.target.name + "." + fx.target.field + ", " + fx.other.name + "." + fx.other.field + ")";
    case Effect::Kind::Move:
        return "@(" + fx.subject + (fx.motif.empty() ? "" : ", " + fx.motif) + ") := " + expr_text(*fx.value);
    case Effect::Kind::Create: {
        std::string s = "create " + fx.type;
        if (!fx.subject.empty())
            s += " as " + fx.subject;
        s += at(fx.value);
        if (!fx.init.empty()) {
            s += " {";
            for (std::size_t i = 0; i < fx.init.size(); ++i)
                s += (i ? ", " : "") + fx.init[i].first + " = " + expr_text(fx.init[i].second);
            s += "}";
        }
        return s;
    }
    case Effect::Kind::Delete: return "delete " + fx.subject;
    case Effect::Kind::AddNode: return "add_node " + expr_text(*fx.value);
    case Effect::Kind::RemoveNode: return "remove_node " + expr_text(*fx.value);
    case Effect::Kind::AddEdge:
    case Effect::Kind::RemoveEdge: {
        std::string s = (fx.kind == Effect::Kind::AddEdge ? "add_edge " : "remove_edge ") + expr_text(*fx.value) +
                        " -> " + expr_text(*fx.value2);
        if (fx.weight)
            s += " weight " + expr_text(*fx.weight);
        return s;
    }
    case Effect::Kind::Join: return "join " + fx.subject + " " + fx.motif + at(fx.value);
    case Effect::Kind::Leave: return "leave " + fx.subject + " " + fx.motif;
    case Effect::Kind::Migrate:
        return "migrate " + fx.subject + " " + fx.motif + " -> " + fx.motif2 + at(fx.value);
    }
    return "?";
}

std::string effects_text(const std::vector<Effect>& fxs)
{
    std::string s;
    for (std::size_t i = 0; i < fxs.size(); ++i)
        s += (i ? ", " : "") + effect_text(fxs[i]);
    return s;
}

std::string guard_text(const Expr& g)
{
    return is_true_literal(g) ? "" : " when " + expr_text(g);
}

void print_type(std::ostringstream& o, const ComponentType& t)
{
    o << "type " << t.name << (t.kind == ComponentKind::Agent ? " agent" : " object") << " {\n";
    for (const auto& v : t.vars)
        o << "    var " << v.name << ": " << domain_text(v.domain) << ";\n";
    for (const auto& r : t.dynamics)
        o << "    dynamics " << r.name << guard_text(r.guard) << " do " << effects_text(r.effects) << ";\n";
    if (t.controller) {
        o << "    controller {\n";
        for (const auto& c : *t.controller)
            o << "        " << c.rule << guard_text(c.guard) << ";\n";
        o << "    }\n";
    }
    o << "}\n";
}

void print_map(std::ostringstream& o, const MapSpec& m)
{
    switch (m.kind) {
    case MapSpec::Kind::Line: o << "line(" << m.a << ")"; return;
    case MapSpec::Kind::Ring: o << "ring(" << m.a << ")"; return;
    case MapSpec::Kind::Grid: o << "grid(" << m.a << ", " << m.b << ")"; return;
    case MapSpec::Kind::Explicit:
        o << "{\n";
        if (!m.nodes.empty()) {
            o << "        nodes ";
            for (std::size_t i = 0; i < m.nodes.size(); ++i)
                o << (i ? ", " : "") << node_text(m.nodes[i]);
            o << ";\n";
        }
        for (const auto& e : m.edges) {
            o << "        edge " << node_text(e.from) << (e.both ? " <-> " : " -> ") << node_text(e.to);
            if (e.weight != 1)
                o << " weight " << e.weight;
            o << ";\n";
        }
        o << "    }";
        return;
    }
}

void print_motif(std::ostringstream& o, const MotifDecl& m)
{
    o << "motif " << m.id << " {\n    map ";
    print_map(o, m.map);
    o << ";\n";
    for (const auto& r : m.rules) {
        o << "    " << (r.kind == RuleKind::Configuration ? "reconfigure " : "rule ") << r.name << params_text(r.params)
          << guard_text(r.guard) << "\n        do " << effects_text(r.effects) << ";\n";
    }
    o << "}\n";
}

void print_component(std::ostringstream& o, const ModelFile& m, const ComponentDecl& c)
{
    o << "component " << c.id << ": " << c.type;
    if (!c.init.empty()) {
        const ComponentType* t = m.type(c.type);
        o << " {";
        for (std::size_t i = 0; i < c.init.size(); ++i) {
            const auto& [var, val] = c.init[i];
            int dec = -1;
            if (t)
                if (const VarDecl* v = t->var(var); v && v->domain.kind == Domain::Kind::Real)
                    dec = v->domain.decimals();
            o << (i ? ", " : "") << var << " = " << literal(val, dec);
        }
        o << "}";
    }
    for (const auto& p : c.placements) {
        o << " in " << p.motif;
        if (p.node)
            o << " at " << node_text(*p.node);
    }
    o << ";\n";
}

void print_goal(std::ostringstream& o, const Goal& g)
{
    o << "goal " << g.name << (g.critical() ? " critical" : " best_effort");
    if (g.priority != 0)
        o << " priority " << g.priority;
    switch (g.kind) {
    case GoalKind::Avoid: o << " avoid "; break;
    case GoalKind::Reach: o << " reach "; break;
    case GoalKind::Utility: o << " utility "; break;
    }
    o << expr_text(g.expr);
    if (g.horizon != 0)
        o << " horizon " << g.horizon;
    if (!g.recover.empty())
        o << " recover " << g.recover;
    o << ";\n";
}

std::string list_text(const std::vector<std::string>& xs)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (i ? ", " : "") + xs[i];
    return s;
}

void print_agent(std::ostringstream& o, const AgentSpec& a)
{
    o << "agent " << a.id << " {\n";
    const SensorSpec& s = a.sensor;
    if (!(s == SensorSpec{})) {
        o << "    sensor {\n";
        if (!s.motif.empty())
            o << "        motif " << s.motif << ";\n";
        o << "        radius " << (s.unbounded() ? std::string("inf") : std::to_string(s.radius)) << ";\n";
        if (!s.visible_types.empty())
            o << "        types " << list_text(s.visible_types) << ";\n";
        for (const auto& [t, vars] : s.attrs)
            o << "        attrs " << t << ": " << list_text(vars) << ";\n";
        if (!s.identity)
            o << "        identity off;\n";
        for (const auto& [tv, sd] : s.noise)
            o << "        noise " << tv << " " << decimal(sd) << ";\n";
        if (s.detect_prob != 1.0)
            o << "        detect " << decimal(s.detect_prob) << ";\n";
        o << "    }\n";
    }
    if (!a.goals.empty())
        o << "    goals " << list_text(a.goals) << ";\n";
    const AgentSpec defaults;
    if (a.horizon != defaults.horizon)
        o << "    horizon " << a.horizon << ";\n";
    const Thresholds& t = a.thresholds;
    const Thresholds& d = defaults.thresholds;
    if (t.k_stale != d.k_stale)
        o << "    stale " << t.k_stale << ";\n";
    if (t.alpha != d.alpha)
        o << "    alpha " << decimal(t.alpha) << ";\n";
    if (t.theta_hi != d.theta_hi)
        o << "    theta_hi " << decimal(t.theta_hi) << ";\n";
    if (t.theta_lo != d.theta_lo)
        o << "    theta_lo " << decimal(t.theta_lo) << ";\n";
    if (t.horizon_cap != d.horizon_cap)
        o << "    horizon_cap " << t.horizon_cap << ";\n";
    if (!a.internal.empty())
        o << "    internal " << list_text(a.internal) << ";\n";
    for (const auto& p : a.patterns)
        o << "    pattern " << p.name << params_text(p.params) << " in " << p.base << guard_text(p.guard) << " leader "
          << p.leader << ";\n";
    for (const auto& h : a.hooks)
        o << "    on " << expr_text(h.when) << (h.add ? " add" : " remove") << " goal " << h.goal << ";\n";
    if (!a.explicit_controller)
        o << "    explicit off;\n";
    o << "}\n";
}

void print_check(std::ostringstream& o, const CheckDecl& c)
{
    o << "check " << c.name;
    switch (c.kind) {
    case CheckDecl::Kind::Always: o << " always "; break;
    case CheckDecl::Kind::Final: o << " final "; break;
    case CheckDecl::Kind::AfterRise:
    case CheckDecl::Kind::AfterChange:
        o << " within " << c.within << " after " << (c.kind == CheckDecl::Kind::AfterRise ? "rise " : "change ")
          << expr_text(*c.trigger) << " : ";
        break;
    }
    o << expr_text(c.expr) << ";\n";
}

void print_scenario(std::ostringstream& o, const ScenarioDecl& s)
{
    o << "scenario " << s.name << " {\n    steps " << s.steps << ";\n";
    if (!s.seeds.empty()) {
        o << "    seeds ";
        for (std::size_t i = 0; i < s.seeds.size(); ++i)
            o << (i ? ", " : "") << s.seeds[i];
        o << ";\n";
    }
    o << "    policy " << to_string(s.policy) << ";\n";
    if (!s.script.empty()) {
        o << "    script ";
        for (std::size_t i = 0; i < s.script.size(); ++i)
            o << (i ? ",\n        " : "") << quote(s.script[i]);
        o << ";\n";
    }
    o << "}\n";
}

}  // namespace

std::string print(const Expr& e)
{
    return expr_text(e);
}

std::string print(const ModelFile& m)
{
    std::ostringstream o;
    auto section = [&](bool any) {
        if (any && o.tellp() > 0)
            o << "\n";
    };
    for (const auto& t : m.types) {
        section(true);
        print_type(o, t);
    }
    for (const auto& md : m.motifs) {
        section(true);
        print_motif(o, md);
    }
    section(!m.components.empty());
    for (const auto& c : m.components)
        print_component(o, m, c);
    section(!m.goals.empty());
    for (const auto& g : m.goals)
        print_goal(o, g);
    for (const auto& a : m.agents) {
        section(true);
        print_agent(o, a);
    }
    section(!m.checks.empty());
    for (const auto& c : m.checks)
        print_check(o, c);
    if (m.scenario) {
        section(true);
        print_scenario(o, *m.scenario);
    }
    return o.str();
}

}  // namespace motif
