#include "motif/lang.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace motif {

namespace {

template <class T, class Key>
const T* find_by(const std::vector<T>& xs, const std::string& key, Key key_of)
{
    for (const auto& x : xs)
        if (key_of(x) == key)
            return &x;
    return nullptr;
}

class Validator {
public:
    explicit Validator(const ModelFile& m) : m_(m) {}

    std::vector<Diagnostic> run()
    {
        unique(m_.types, "type", [](const auto& t) { return t.name; });
        unique(m_.motifs, "motif", [](const auto& x) { return x.id; });
        unique(m_.components, "component", [](const auto& x) { return x.id; });
        unique(m_.goals, "goal", [](const auto& x) { return x.name; });
        unique(m_.agents, "agent", [](const auto& x) { return x.id; });
        unique(m_.checks, "check", [](const auto& x) { return x.name; });

        for (const auto& t : m_.types)
            type(t);
        for (const auto& md : m_.motifs)
            motif(md);
        components();
        for (const auto& g : m_.goals)
            goal(g);
        for (const auto& a : m_.agents)
            agent(a);
        for (const auto& c : m_.checks)
            if (c.within < 0)
                error(c.span, "check '" + c.name + "' has a negative window");
        if (m_.scenario) {
            const auto& s = *m_.scenario;
            if (s.steps < 0)
                error(s.span, "scenario steps must be nonnegative");
            if (s.policy == PolicyKind::Script && s.script.empty())
                error(s.span, "script policy without a script");
        }
        return std::move(diags_);
    }

private:
    void error(Span s, std::string msg) { diags_.push_back({Diagnostic::Severity::Error, s, std::move(msg)}); }

    template <class T, class Key>
    void unique(const std::vector<T>& xs, const char* what, Key key_of)
    {
        std::set<std::string> seen;
        for (const auto& x : xs)
            if (!seen.insert(key_of(x)).second)
                error(x.span, std::string("duplicate ") + what + " '" + key_of(x) + "'");
    }

    void type(const ComponentType& t)
    {
        std::set<std::string> vars;
        for (const auto& v : t.vars) {
            if (!vars.insert(v.name).second)
                error(t.span, "duplicate variable '" + v.name + "' in type '" + t.name + "'");
            if (v.domain.kind == Domain::Kind::Real && (v.domain.hi - v.domain.lo) % v.domain.step != 0)
                error(t.span, "range of '" + t.name + "." + v.name + "' is not a multiple of its step");
            if (v.domain.kind == Domain::Kind::Enum) {
                std::set<std::string> syms(v.domain.symbols.begin(), v.domain.symbols.end());
                if (syms.size() != v.domain.symbols.size())
                    error(t.span, "duplicate value in enumeration '" + t.name + "." + v.name + "'");
            }
        }
        std::set<std::string> names;
        for (const auto& r : t.dynamics) {
            if (!names.insert(r.name).second)
                error(r.span, "duplicate dynamics '" + r.name + "'");
            if (t.kind != ComponentKind::Object)
                error(r.span, "dynamics are only allowed on object types");
            for (const auto& fx : r.effects) {
                if (fx.kind == Effect::Kind::Assign) {
                    if (fx.target.name != "self")
                        error(fx.span, "dynamics '" + r.name + "' writes '" + fx.target.name + "." + fx.target.field +
                                           "', not a variable of self");
                }
                else if (fx.kind == Effect::Kind::Exchange) {
                    if (fx.target.name != "self" || fx.other.name != "self")
                        error(fx.span, "dynamics '" + r.name + "' exchanges with another component");
                }
                else {
                    error(fx.span, "dynamics '" + r.name + "' may only update variables of self");
                }
            }
        }
        if (t.controller) {
            if (t.kind != ComponentKind::Agent)
                error(t.span, "controller on object type '" + t.name + "'");
            for (const auto& e : *t.controller) {
                bool initiates = false;
                for (const auto& md : m_.motifs)
                    for (const auto& r : md.rules)
                        if (r.name == e.rule && !r.params.empty() && r.params.front().type == t.name)
                            initiates = true;
                if (!initiates)
                    error(e.span, "controller entry '" + e.rule + "' is not a rule whose first participant is a '" +
                                      t.name + "'");
            }
        }
    }

    void motif(const MotifDecl& md)
    {
        std::set<std::string> names;
        for (const auto& r : md.rules) {
            if (!names.insert(r.name).second)
                error(r.span, "duplicate rule '" + r.name + "' in motif '" + md.id + "'");
            if (r.kind == RuleKind::Interaction)
                for (const auto& fx : r.effects)
                    if (fx.reconfigures())
                        error(fx.span, "interaction rule '" + r.name +
                                           "' may only assign or exchange; declare it with 'reconfigure'");
            if (r.params.empty() || r.params.front().optional)
                error(r.span, "rule '" + r.name + "' needs a required first participant");
            bool seen_optional = false;
            for (const auto& p : r.params) {
                if (p.optional)
                    seen_optional = true;
                else if (seen_optional)
                    error(r.span, "required parameter '" + p.name + "' after an optional one");
            }
            for (const auto& p : r.params)
                if (p.optional && mentions(r.guard, p.name))
                    error(r.guard.span.valid() ? r.guard.span : r.span,
                          "guard of '" + r.name + "' mentions optional parameter '" + p.name + "'; use its filter");
        }
        std::set<NodeId> nodes(md.map.nodes.begin(), md.map.nodes.end());
        if (md.map.kind == MapSpec::Kind::Explicit) {
            if (nodes.size() != md.map.nodes.size())
                error(md.span, "duplicate node in the map of '" + md.id + "'");
            for (const auto& e : md.map.edges) {
                if (!nodes.count(e.from) || !nodes.count(e.to))
                    error(md.span, "edge " + e.from + " -> " + e.to + " uses an undeclared node");
                if (e.weight < 0)
                    error(md.span, "negative edge weight");
            }
        }
    }

    static bool mentions(const Expr& e, const std::string& name)
    {
        if ((e.kind == Expr::Kind::Name || e.kind == Expr::Kind::Field) && e.name == name)
            return true;
        if ((e.kind == Expr::Kind::Forall || e.kind == Expr::Kind::Exists) && e.name == name)
            return false;
        for (const auto& a : e.args)
            if (mentions(a, name))
                return true;
        return false;
    }

    void components()
    {
        std::map<std::string, Map> maps;
        for (const auto& md : m_.motifs) {
            try {
                maps.emplace(md.id, md.map.build());
            }
            catch (const Error&) {
                // reported by motif()
            }
        }
        std::map<std::pair<std::string, NodeId>, std::string> occupant;
        for (const auto& c : m_.components) {
            const ComponentType* t = m_.type(c.type);
            if (!t)
                continue;
            std::set<std::string> inited;
            for (const auto& [var, v] : c.init) {
                const VarDecl* d = t->var(var);
                if (!d) {
                    error(c.span, "type '" + t->name + "' has no variable '" + var + "'");
                    continue;
                }
                if (!inited.insert(var).second)
                    error(c.span, "variable '" + var + "' initialized twice");
                if (!d->domain.contains(v))
                    error(c.span, "initial value " + to_string(v) + " of '" + c.id + "." + var + "' is outside its domain");
            }
            std::set<std::string> joined;
            for (const auto& p : c.placements) {
                if (!joined.insert(p.motif).second)
                    error(p.span, "'" + c.id + "' placed twice in motif '" + p.motif + "'");
                auto it = maps.find(p.motif);
                if (it == maps.end() || !p.node)
                    continue;
                if (!it->second.has_node(*p.node)) {
                    error(p.span, "node '" + *p.node + "' is not on the map of '" + p.motif + "'");
                    continue;
                }
                auto [slot, fresh] = occupant.emplace(std::make_pair(p.motif, *p.node), c.id);
                if (!fresh)
                    error(p.span, "node '" + *p.node + "' of '" + p.motif + "' is already occupied by '" +
                                      slot->second + "'");
            }
        }
    }

    void goal(const Goal& g)
    {
        if (g.critical() && g.kind == GoalKind::Utility)
            error(g.span, "critical goal '" + g.name + "' needs an avoid or reach predicate");
        if (g.horizon < 0)
            error(g.span, "negative horizon");
        if (g.kind != GoalKind::Utility && g.horizon != 0)
            error(g.span, "only utility goals take a horizon");
        if (!g.recover.empty()) {
            if (!m_.goal(g.recover))
                error(g.span, "recovery goal '" + g.recover + "' is not declared");
            if (g.kind != GoalKind::Avoid || !g.critical())
                error(g.span, "only critical avoid goals take a recovery goal");
        }
    }

    void agent(const AgentSpec& a)
    {
        const ComponentDecl* c = m_.component(a.id);
        if (!c) {
            error(a.span, "agent block for undeclared component '" + a.id + "'");
        }
        else if (const ComponentType* t = m_.type(c->type); t && t->kind != ComponentKind::Agent) {
            error(a.span, "'" + a.id + "' is an object, not an agent");
        }
        for (const auto& g : a.goals)
            if (!m_.goal(g))
                error(a.span, "agent '" + a.id + "' lists undeclared goal '" + g + "'");
        for (const auto& h : a.hooks)
            if (!m_.goal(h.goal))
                error(h.span, "hook names undeclared goal '" + h.goal + "'");
        for (const auto& mid : a.internal)
            if (!m_.motif(mid))
                error(a.span, "internal motif '" + mid + "' is not declared");
        const SensorSpec& s = a.sensor;
        if (!s.motif.empty() && !m_.motif(s.motif))
            error(a.span, "sensor motif '" + s.motif + "' is not declared");
        if (!s.unbounded() && s.motif.empty())
            error(a.span, "a bounded sensor radius needs a sensor motif");
        for (const auto& t : s.visible_types)
            if (!m_.type(t))
                error(a.span, "sensor lists unknown type '" + t + "'");
        for (const auto& [t, vars] : s.attrs) {
            const ComponentType* ct = m_.type(t);
            if (!ct) {
                error(a.span, "sensor lists unknown type '" + t + "'");
                continue;
            }
            for (const auto& v : vars)
                if (!ct->var(v))
                    error(a.span, "sensor lists unknown variable '" + t + "." + v + "'");
        }
        for (const auto& [tv, sd] : s.noise) {
            auto dot = tv.find('.');
            const ComponentType* ct = m_.type(tv.substr(0, dot));
            if (!ct || !ct->var(tv.substr(dot + 1)))
                error(a.span, "noise on unknown variable '" + tv + "'");
            else if (ct->var(tv.substr(dot + 1))->domain.kind == Domain::Kind::Enum)
                error(a.span, "noise on a non-numeric variable '" + tv + "'");
            if (sd < 0)
                error(a.span, "negative noise");
        }
        if (s.detect_prob < 0 || s.detect_prob > 1)
            error(a.span, "detection probability outside [0, 1]");
        if (a.horizon < 0 || a.thresholds.horizon_cap < a.horizon)
            error(a.span, "horizon must lie in [0, horizon_cap]");
        if (a.thresholds.k_stale < 0)
            error(a.span, "negative staleness bound");
        if (a.thresholds.alpha <= 0 || a.thresholds.alpha > 1)
            error(a.span, "alpha outside (0, 1]");
        if (a.thresholds.theta_lo > 1 || a.thresholds.theta_hi < 1)
            error(a.span, "thresholds need theta_lo <= 1 <= theta_hi");
        for (const auto& p : a.patterns) {
            const MotifDecl* base = m_.motif(p.base);
            if (!base)
                continue;
            if (p.params.empty())
                error(p.span, "pattern '" + p.name + "' has no parameters");
        }
    }

    const ModelFile& m_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

const ComponentType* ModelFile::type(const std::string& name) const
{
    return find_by(types, name, [](const ComponentType& t) { return t.name; });
}

const MotifDecl* ModelFile::motif(const std::string& id) const
{
    return find_by(motifs, id, [](const MotifDecl& m) { return m.id; });
}

const ComponentDecl* ModelFile::component(const std::string& id) const
{
    return find_by(components, id, [](const ComponentDecl& c) { return c.id; });
}

const Goal* ModelFile::goal(const std::string& name) const
{
    return find_by(goals, name, [](const Goal& g) { return g.name; });
}

const AgentSpec* ModelFile::agent(const std::string& id) const
{
    return find_by(agents, id, [](const AgentSpec& a) { return a.id; });
}

Map MapSpec::build() const
{
    switch (kind) {
    case Kind::Line: return Map::line(a);
    case Kind::Ring: return Map::ring(a);
    case Kind::Grid: return Map::grid(a, b);
    case Kind::Explicit: break;
    }
    Map m;
    for (const auto& n : nodes)
        if (!m.has_node(n))
            m.add_node(n);
    for (const auto& e : edges) {
        m.add_edge(e.from, e.to, e.weight);
        if (e.both)
            m.add_edge(e.to, e.from, e.weight);
    }
    return m;
}

std::vector<Diagnostic> validate(const ModelFile& model)
{
    return Validator(model).run();
}

std::shared_ptr<const TypeCatalog> make_catalog(const ModelFile& model)
{
    auto cat = std::make_shared<TypeCatalog>();
    for (const auto& t : model.types)
        cat->types.emplace(t.name, t);
    return cat;
}

Configuration instantiate(const ModelFile& model)
{
    Configuration cfg(make_catalog(model));
    for (const auto& md : model.motifs) {
        Motif m;
        m.id = md.id;
        m.map = std::make_shared<const Map>(md.map.build());
        m.rules = std::make_shared<const RuleSet>(md.rules);
        cfg.add_motif(std::move(m));
    }
    for (const auto& c : model.components) {
        ComponentInstance inst;
        inst.id = c.id;
        inst.type = c.type;
        for (const auto& [var, v] : c.init)
            inst.state[var] = v;
        cfg.add_component(std::move(inst));
        for (const auto& p : c.placements) {
            cfg.join(c.id, p.motif);
            if (p.node)
                cfg.place(c.id, p.motif, *p.node);
        }
    }
    return cfg;
}

std::uint64_t model_hash(const ModelFile& model)
{
    return stable_hash(print(model));
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ModelFile load_model(const std::filesystem::path& path)
{
    ParseResult r = parse(read_file(path));
    std::vector<Diagnostic> diags = r.diagnostics;
    if (r.ok()) {
        auto more = validate(*r.model);
        diags.insert(diags.end(), more.begin(), more.end());
    }
    std::string msg;
    for (const auto& d : diags)
        if (d.severity == Diagnostic::Severity::Error)
            msg += d.format(path.string()) + "\n";
    if (!msg.empty())
        throw Error(ErrorCode::ParseError, msg);
    return std::move(*r.model);
}

}  // namespace motif
