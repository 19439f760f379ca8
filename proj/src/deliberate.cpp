#include "motif/agent.hpp"

#include <algorithm>

namespace motif {

namespace {

bool holds_for(const Expr& e, const Configuration& cfg, const std::string& ego)
{
    Binding self{{"self", ego}};
    EvalContext ctx;
    ctx.cfg = &cfg;
    ctx.binding = &self;
    try {
        return holds(e, ctx);
    }
    catch (const Error& err) {
        if (err.code() != ErrorCode::EvalError)
            throw;
        return false;
    }
}

std::size_t catalog_index(const KnowledgeRepository& repo, const std::string& name)
{
    for (std::size_t i = 0; i < repo.goals.size(); ++i)
        if (repo.goals[i].name == name)
            return i;
    return repo.goals.size();
}

// plan_horizon through the agent's memo; failures are replayed as the same error.
std::shared_ptr<const Plan> plan_cached(const Configuration& b, const std::vector<Goal>& goals,
                                        const PlanningContext& ctx)
{
    const int h = std::max(1, ctx.horizon);
    if (!ctx.memo)
        return std::make_shared<const Plan>(plan_horizon(b, Explorer(ctx.ego, ctx.internal), goals, h));
    std::string key = hex64(b.hash()) + "/" + std::to_string(h);
    for (const auto& g : goals)
        key += "/" + g.name;
    if (const auto* e = ctx.memo->find(key)) {
        if (!e->ok)
            throw Error(e->error, e->message);
        return e->plan;
    }
    PlanMemo::Entry entry;
    try {
        Plan p = plan_horizon(b, Explorer(ctx.ego, ctx.internal), goals, h);
        p.root = {};
        entry.plan = std::make_shared<const Plan>(std::move(p));
        entry.ok = true;
    }
    catch (const Error& e) {
        if (e.code() == ErrorCode::StateBudgetExceeded)
            throw;
        entry.error = e.code();
        std::string w = e.what();
        auto colon = w.find(": ");
        entry.message = colon == std::string::npos ? w : w.substr(colon + 2);
    }
    auto out = entry.plan;
    ctx.memo->put(key, std::move(entry));
    if (!out)
        return plan_cached(b, goals, ctx);  // rethrows from the memo
    return out;
}

std::shared_ptr<const Plan> try_plan(const EnvModel& model, const std::vector<Goal>& goals, const PlanningContext& ctx)
{
    if (!model.believed.find_component(ctx.ego))
        return nullptr;
    try {
        return plan_cached(model.believed, goals, ctx);
    }
    catch (const Error&) {
        return nullptr;
    }
}

}  // namespace

const PlanMemo::Entry* PlanMemo::find(const std::string& key) const
{
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void PlanMemo::put(const std::string& key, Entry e)
{
    if (entries_.size() >= 4096)
        entries_.clear();
    entries_[key] = std::move(e);
}

const Goal* KnowledgeRepository::goal(const std::string& name) const
{
    for (const auto& g : goals)
        if (g.name == name)
            return &g;
    return nullptr;
}

void KnowledgeRepository::record(long step, const std::string& goal, const std::string& note)
{
    records.push_back({step, goal, note});
}

std::string to_string(const Directive& d)
{
    switch (d.kind) {
    case Directive::Kind::SetHorizon: return "SetHorizon(" + std::to_string(d.value) + ")";
    case Directive::Kind::AddGoal: return "AddGoal(" + d.goal + ")";
    case Directive::Kind::RemoveGoal: return "RemoveGoal(" + d.goal + ")";
    case Directive::Kind::SetPriority: return "SetPriority(" + d.goal + ", " + std::to_string(d.value) + ")";
    case Directive::Kind::TriggerReplan: return "TriggerReplan";
    case Directive::Kind::EnterRecovery: return "EnterRecovery(" + d.goal + ")";
    }
    return "?";
}

std::string_view to_string(Command::Source s)
{
    switch (s) {
    case Command::Source::Idle: return "idle";
    case Command::Source::Explicit: return "explicit";
    case Command::Source::Library: return "library";
    case Command::Source::Plan: return "plan";
    }
    return "?";
}

GoalSelection manage_goals(KnowledgeRepository& repo, const EnvModel& model, const std::vector<Directive>& directives,
                           std::vector<std::string>& active, std::map<std::string, int>& priorities,
                           const PlanningContext& ctx)
{
    std::vector<std::string> recovery;
    for (const auto& d : directives) {
        if (!d.goal.empty() && !repo.goal(d.goal))
            continue;
        switch (d.kind) {
        case Directive::Kind::AddGoal:
            if (std::find(active.begin(), active.end(), d.goal) == active.end())
                active.push_back(d.goal);
            break;
        case Directive::Kind::RemoveGoal: std::erase(active, d.goal); break;
        case Directive::Kind::SetPriority: priorities[d.goal] = d.value; break;
        case Directive::Kind::EnterRecovery:
            if (std::find(recovery.begin(), recovery.end(), d.goal) == recovery.end())
                recovery.push_back(d.goal);
            break;
        default: break;
        }
    }

    std::vector<const Goal*> order;
    for (const auto& name : active)
        if (const Goal* g = repo.goal(name);
            g && std::find(recovery.begin(), recovery.end(), name) == recovery.end())
            order.push_back(g);
    auto prio = [&](const Goal* g) {
        auto it = priorities.find(g->name);
        return it == priorities.end() ? g->priority : it->second;
    };
    std::stable_sort(order.begin(), order.end(), [&](const Goal* a, const Goal* b) {
        return std::make_tuple(!a->critical(), prio(a), catalog_index(repo, a->name)) <
               std::make_tuple(!b->critical(), prio(b), catalog_index(repo, b->name));
    });
    std::vector<const Goal*> ranked;
    for (const auto& name : recovery)
        ranked.push_back(repo.goal(name));
    ranked.insert(ranked.end(), order.begin(), order.end());

    GoalSelection sel;
    for (const Goal* g : ranked) {
        std::vector<Goal> trial = sel.kept;
        trial.push_back(*g);
        bool ok = false;
        if (auto joint = try_plan(model, trial, ctx)) {
            ok = true;
            if (g->kind == GoalKind::Utility) {
                auto alone = try_plan(model, {*g}, ctx);
                ok = alone && joint->score.back() >= alone->score.back();
            }
        }
        if (ok) {
            sel.kept.push_back(*g);
        }
        else {
            sel.dropped.push_back(g->name);
            repo.record(ctx.step, g->name, "dropped: not jointly feasible");
        }
    }
    if (sel.kept.empty() && !ranked.empty())
        repo.record(ctx.step, "", "empty goal selection");
    return sel;
}

Command decide(const EnvModel& model, const std::vector<Goal>& goals, KnowledgeRepository& repo,
               const PlanningContext& ctx, bool explicit_controller)
{
    const Configuration& b = model.believed;
    Command idle;
    const ComponentInstance* self = b.find_component(ctx.ego);
    if (!self)
        return idle;

    if (explicit_controller && b.types().at(self->type).controller) {
        idle.source = Command::Source::Explicit;
        if (auto c = controller_choice(b, ctx.ego))
            return {Command::Source::Explicit, c->label(), {*c}};
        return idle;
    }
    if (goals.empty())
        return idle;

    const Explorer ex(ctx.ego, ctx.internal);
    if (repo.controller) {
        if (const auto* entry = repo.controller->find(b.hash()); entry && !entry->kept.empty())
            if (auto mv = ex.agent_move(b, entry->kept))
                return {Command::Source::Library, mv->label, std::move(mv->parts)};
    }

    try {
        auto p = plan_cached(b, goals, ctx);
        return {Command::Source::Plan, p->first.label, p->first.parts};
    }
    catch (const Error& e) {
        if (e.code() == ErrorCode::StateBudgetExceeded)
            throw;
        repo.record(ctx.step, goals.front().name, e.what());
        return idle;
    }
}

void observe_rate(AdaptState& st, KnowledgeRepository& repo, double events, double alpha, long step)
{
    if (!st.primed) {
        st.ewma = events;
        st.primed = true;
    }
    else {
        st.ewma = alpha * events + (1 - alpha) * st.ewma;
    }
    st.history.push_back(st.ewma);
    while (st.history.size() > 11)
        st.history.pop_front();
    repo.estimates["event_rate"] = {st.ewma, step};
}

std::vector<Directive> adapt(KnowledgeRepository& repo, const EnvModel& model, AdaptState& st,
                             const std::vector<std::string>& active, const std::string& ego, int horizon,
                             const Thresholds& th, long step)
{
    std::vector<Directive> out;
    const Configuration& b = model.believed;

    for (const auto& name : active) {
        const Goal* g = repo.goal(name);
        if (!g || !g->critical() || g->kind != GoalKind::Avoid || !holds_for(g->expr, b, ego))
            continue;
        repo.record(step, name, "violated in the believed model");
        ++repo.violations[name];
        out.push_back({Directive::Kind::EnterRecovery, g->recover.empty() ? name : g->recover, 0});
    }

    if (st.history.size() >= 11) {
        const double old = st.history.front();
        const bool high = st.ewma > th.theta_hi * old;
        const bool low = st.ewma < th.theta_lo * old;
        if (high && !st.high) {
            out.push_back({Directive::Kind::SetHorizon, "", std::max(1, horizon - 1)});
            out.push_back({Directive::Kind::TriggerReplan, "", 0});
        }
        if (low && !st.low && horizon < th.horizon_cap)
            out.push_back({Directive::Kind::SetHorizon, "", horizon + 1});
        st.high = high;
        st.low = low;
    }

    st.hook_prev.resize(repo.hooks.size(), false);
    for (std::size_t i = 0; i < repo.hooks.size(); ++i) {
        const GoalHook& h = repo.hooks[i];
        const bool now = holds_for(h.when, b, ego);
        if (now && !st.hook_prev[i])
            out.push_back({h.add ? Directive::Kind::AddGoal : Directive::Kind::RemoveGoal, h.goal, 0});
        st.hook_prev[i] = now;
    }
    return out;
}

}  // namespace motif
