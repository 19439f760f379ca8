#include "motif/coordination.hpp"

#include <algorithm>

namespace motif {

namespace {

std::vector<std::string> members_of_type(const Configuration& cfg, const Motif& m, const std::string& type)
{
    std::vector<std::string> out;
    for (const auto& id : m.members) {
        const auto* c = cfg.find_component(id);
        if (c && c->type == type)
            out.push_back(id);
    }
    return out;
}

bool bound(const Binding& b, const std::string& id)
{
    return std::any_of(b.begin(), b.end(), [&](const auto& p) { return p.second == id; });
}

Binding ordered(const Rule& rule, const Binding& b)
{
    Binding out;
    for (const auto& p : rule.params)
        if (const auto* id = lookup(b, p.name))
            out.emplace_back(p.name, *id);
    return out;
}

/// Component id a parameter-or-fresh name denotes; nullptr when an optional is absent.
const std::string* subject_id(const Binding& b, const std::string& name)
{
    return lookup(b, name);
}

std::string field_id(const Expr& f, const Binding& b)
{
    if (const auto* id = lookup(b, f.name))
        return *id;
    return {};
}

struct Executor {
    Configuration work;
    std::string motif;
    Binding binding;
    Event event;

    EvalContext ctx() const
    {
        EvalContext c;
        c.cfg = &work;
        c.motif = motif;
        c.binding = &binding;
        return c;
    }

    Value eval(const Expr& e) const { return evaluate(e, ctx()); }

    NodeId node(const Expr& e) const
    {
        Value v = eval(e);
        if (v.is_undef())
            throw Error(ErrorCode::EffectError, "target node is undefined");
        return as_node(v);
    }

    void run(const Effect& fx)
    {
        const std::string& m = fx.motif.empty() ? motif : fx.motif;
        switch (fx.kind) {
        case Effect::Kind::Assign: {
            std::string id = field_id(fx.target, binding);
            if (id.empty())
                return;
            Value v = eval(*fx.value);
            Value old = work.component(id).state.at(fx.target.field);
            work.set_var(id, fx.target.field, v);
            event.effects.push_back(id + "." + fx.target.field + ": " + to_string(old) + " -> " + to_string(v));
            return;
        }
        case Effect::Kind::Exchange: {
            std::string a = field_id(fx.target, binding);
            std::string b = field_id(fx.other, binding);
            if (a.empty() || b.empty())
                return;
            Value va = work.component(a).state.at(fx.target.field);
            Value vb = work.component(b).state.at(fx.other.field);
            work.set_var(a, fx.target.field, vb);
            work.set_var(b, fx.other.field, va);
            event.effects.push_back("exchange " + a + "." + fx.target.field + " " + b + "." + fx.other.field +
                                    ": " + to_string(va) + "," + to_string(vb) + " -> " + to_string(vb) + "," +
                                    to_string(va));
            return;
        }
        case Effect::Kind::Move: {
            const auto* id = subject_id(binding, fx.subject);
            if (!id)
                return;
            NodeId to = node(*fx.value);
            auto old = work.address(*id, m);
            work.place(*id, m, to);
            event.effects.push_back("@(" + *id + "," + m + "): " + old.value_or("undef") + " -> " + to);
            return;
        }
        case Effect::Kind::Create: {
            std::map<std::string, Value> init;
            for (const auto& [var, e] : fx.init)
                init[var] = eval(e);
            std::optional<NodeId> at;
            if (fx.value)
                at = node(*fx.value);
            auto [next, id] = create_component(work, fx.type, m, at, init);
            work = std::move(next);
            if (!fx.subject.empty())
                binding.emplace_back(fx.subject, id);
            event.effects.push_back("create " + id + ":" + fx.type + " in " + m + (at ? " at " + *at : ""));
            return;
        }
        case Effect::Kind::Delete: {
            const auto* id = subject_id(binding, fx.subject);
            if (!id)
                return;
            std::string victim = *id;
            work.remove_component(victim);
            event.effects.push_back("delete " + victim);
            return;
        }
        case Effect::Kind::AddNode: {
            NodeId n = node(*fx.value);
            if (work.motif(m).map->has_node(n))
                throw Error(ErrorCode::EffectError, "node '" + n + "' already on the map of '" + m + "'");
            work.add_node(m, n);
            event.effects.push_back("add_node " + m + " " + n);
            return;
        }
        case Effect::Kind::RemoveNode: {
            NodeId n = node(*fx.value);
            work.remove_node(m, n);
            event.effects.push_back("remove_node " + m + " " + n);
            return;
        }
        case Effect::Kind::AddEdge: {
            NodeId a = node(*fx.value);
            NodeId b = node(*fx.value2);
            long w = 1;
            if (fx.weight) {
                Value wv = eval(*fx.weight);
                w = static_cast<long>(wv.num / kScale);
            }
            work.add_edge(m, a, b, w);
            event.effects.push_back("add_edge " + m + " " + a + "->" + b);
            return;
        }
        case Effect::Kind::RemoveEdge: {
            NodeId a = node(*fx.value);
            NodeId b = node(*fx.value2);
            work.remove_edge(m, a, b);
            event.effects.push_back("remove_edge " + m + " " + a + "->" + b);
            return;
        }
        case Effect::Kind::Join: {
            const auto* id = subject_id(binding, fx.subject);
            if (!id)
                return;
            work.join(*id, fx.motif);
            if (fx.value)
                work.place(*id, fx.motif, node(*fx.value));
            event.effects.push_back("join " + *id + " " + fx.motif);
            return;
        }
        case Effect::Kind::Leave: {
            const auto* id = subject_id(binding, fx.subject);
            if (!id)
                return;
            work.leave(*id, fx.motif);
            event.effects.push_back("leave " + *id + " " + fx.motif);
            return;
        }
        case Effect::Kind::Migrate: {
            const auto* id = subject_id(binding, fx.subject);
            if (!id)
                return;
            std::optional<NodeId> at;
            if (fx.value)
                at = node(*fx.value);
            work = migrate(work, *id, fx.motif, fx.motif2, at);
            event.effects.push_back("migrate " + *id + " " + fx.motif + " -> " + fx.motif2);
            return;
        }
        }
    }
};

}  // namespace

std::string Candidate::label() const
{
    if (dynamics)
        return "~" + initiator() + "/" + rule;
    return motif + "/" + rule + "(" + to_string(binding) + ")";
}

std::vector<Binding> enabled_bindings(const Configuration& cfg, const std::string& motif, const Rule& rule,
                                      bool lenient)
{
    const Motif& m = cfg.motif(motif);
    std::vector<std::vector<std::string>> pools;
    std::vector<const Param*> required;
    std::vector<const Param*> optional;
    for (const auto& p : rule.params) {
        if (!cfg.types().find(p.type))
            throw Error(ErrorCode::UnknownType, "type '" + p.type + "' in rule '" + rule.name + "'");
        (p.optional ? optional : required).push_back(&p);
    }
    for (const auto* p : required)
        pools.push_back(members_of_type(cfg, m, p->type));

    std::vector<Binding> out;
    if (required.empty())
        return out;

    Binding current;
    EvalContext ctx;
    ctx.cfg = &cfg;
    ctx.motif = motif;

    // lenient: a guard that cannot be evaluated counts as false
    auto test = [&](const Expr& e) {
        if (!lenient)
            return holds(e, ctx);
        try {
            return holds(e, ctx);
        }
        catch (const Error& err) {
            if (err.code() != ErrorCode::EvalError)
                throw;
            return false;
        }
    };

    auto extend = [&](Binding b) {
        for (const auto* p : optional) {
            for (const auto& id : members_of_type(cfg, m, p->type)) {
                if (bound(b, id))
                    continue;
                b.emplace_back(p->name, id);
                ctx.binding = &b;
                if (!p->filter || test(*p->filter))
                    break;
                b.pop_back();
            }
        }
        out.push_back(ordered(rule, b));
    };

    auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (k == required.size()) {
            ctx.binding = &current;
            if (test(rule.guard))
                extend(current);
            return;
        }
        for (const auto& id : pools[k]) {
            if (bound(current, id))
                continue;
            current.emplace_back(required[k]->name, id);
            self(self, k + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

std::pair<Configuration, Event> apply(const Configuration& cfg, const std::string& motif, const Rule& rule,
                                      const Binding& binding)
{
    const auto enabled = enabled_bindings(cfg, motif, rule, true);
    if (std::find(enabled.begin(), enabled.end(), binding) == enabled.end())
        throw Error(ErrorCode::NotEnabled, motif + "/" + rule.name + "(" + to_string(binding) + ")");
    Executor ex{cfg, motif, binding, {}};
    ex.event.motif = motif;
    ex.event.rule = rule.name;
    ex.event.binding = binding;
    try {
        for (const auto& fx : rule.effects)
            ex.run(fx);
    }
    catch (const Error& e) {
        if (e.code() == ErrorCode::EffectError)
            throw;
        throw Error(ErrorCode::EffectError, motif + "/" + rule.name + ": " + e.what());
    }
    return {std::move(ex.work), std::move(ex.event)};
}

std::pair<Configuration, Event> apply(const Configuration& cfg, const Candidate& c)
{
    if (!c.dynamics)
        return apply(cfg, c.motif, rule_of(cfg, c), c.binding);
    const Rule& r = rule_of(cfg, c);
    EvalContext ctx;
    ctx.cfg = &cfg;
    ctx.binding = &c.binding;
    if (!holds(r.guard, ctx))
        throw Error(ErrorCode::NotEnabled, c.label());
    Executor ex{cfg, {}, c.binding, {}};
    ex.event.rule = r.name;
    ex.event.binding = c.binding;
    try {
        for (const auto& fx : r.effects)
            ex.run(fx);
    }
    catch (const Error& e) {
        if (e.code() == ErrorCode::EffectError)
            throw;
        throw Error(ErrorCode::EffectError, c.label() + ": " + e.what());
    }
    return {std::move(ex.work), std::move(ex.event)};
}

const Rule& rule_of(const Configuration& cfg, const Candidate& c)
{
    if (c.dynamics) {
        const ComponentType& t = cfg.type_of(c.initiator());
        for (const auto& r : t.dynamics)
            if (r.name == c.rule)
                return r;
        throw Error(ErrorCode::UnknownRule, "dynamics '" + c.rule + "' of type '" + t.name + "'");
    }
    const Rule* r = cfg.motif(c.motif).rule(c.rule);
    if (!r)
        throw Error(ErrorCode::UnknownRule, "rule '" + c.rule + "' in motif '" + c.motif + "'");
    return *r;
}

std::pair<Configuration, std::string> create_component(const Configuration& cfg, const std::string& type,
                                                       const std::string& motif,
                                                       const std::optional<NodeId>& node,
                                                       const std::map<std::string, Value>& init)
{
    cfg.types().at(type);
    const Motif& m = cfg.motif(motif);
    if (node && !m.map->has_node(*node))
        throw Error(ErrorCode::UnknownNode, "node '" + *node + "' in motif '" + motif + "'");
    Configuration next = cfg;
    std::string id = next.fresh_id(type);
    next.add_component({id, type, init});
    next.join(id, motif);
    if (node)
        next.place(id, motif, *node);
    return {std::move(next), id};
}

Configuration delete_component(const Configuration& cfg, const std::string& id)
{
    Configuration next = cfg;
    next.remove_component(id);
    return next;
}

Configuration migrate(const Configuration& cfg, const std::string& component, const std::string& from,
                      const std::string& to, const std::optional<NodeId>& node)
{
    if (!cfg.is_member(component, from))
        throw Error(ErrorCode::NotAMember, "'" + component + "' is not a member of '" + from + "'");
    const Motif& target = cfg.motif(to);
    if (node && !target.map->has_node(*node))
        throw Error(ErrorCode::UnknownNode, "node '" + *node + "' in motif '" + to + "'");
    Configuration next = cfg;
    if (from != to) {
        next.leave(component, from);
        next.join(component, to);
    }
    if (node)
        next.place(component, to, *node);
    return next;
}

std::vector<Candidate> step_candidates(const Configuration& cfg, const std::optional<std::string>& ego)
{
    std::vector<Candidate> out;
    for (const auto& [id, m] : cfg.motifs()) {
        if (m.derived)
            continue;
        for (const auto& rule : *m.rules) {
            for (auto& b : enabled_bindings(cfg, id, rule, true)) {
                Candidate c;
                c.motif = id;
                c.rule = rule.name;
                c.binding = std::move(b);
                c.controllable = ego && c.initiator() == *ego;
                out.push_back(std::move(c));
            }
        }
    }
    for (const auto& [id, comp] : cfg.components()) {
        const ComponentType& t = cfg.types().at(comp.type);
        if (t.kind != ComponentKind::Object)
            continue;
        for (const auto& rule : t.dynamics) {
            Binding b{{rule.params.empty() ? std::string("self") : rule.params.front().name, id}};
            EvalContext ctx;
            ctx.cfg = &cfg;
            ctx.binding = &b;
            bool on = false;
            try {
                on = holds(rule.guard, ctx);
            }
            catch (const Error& err) {
                if (err.code() != ErrorCode::EvalError)
                    throw;
            }
            if (!on)
                continue;
            Candidate c;
            c.rule = rule.name;
            c.binding = std::move(b);
            c.dynamics = true;
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::optional<Candidate> controller_choice(const Configuration& cfg, const std::string& agent)
{
    const ComponentType& t = cfg.type_of(agent);
    if (!t.controller)
        return std::nullopt;
    const auto candidates = step_candidates(cfg, agent);
    for (const auto& entry : *t.controller) {
        for (const auto& c : candidates) {
            if (c.dynamics || c.rule != entry.rule || c.initiator() != agent)
                continue;
            EvalContext ctx;
            ctx.cfg = &cfg;
            ctx.motif = c.motif;
            ctx.binding = &c.binding;
            if (holds(entry.guard, ctx)) {
                Candidate chosen = c;
                chosen.controllable = true;
                return chosen;
            }
        }
    }
    return std::nullopt;
}

}  // namespace motif
