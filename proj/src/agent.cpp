#include "motif/agent.hpp"
#include "motif/lang.hpp"

#include <algorithm>

namespace motif {

KnowledgeRepository make_repository(const ModelFile& m, const AgentSpec& spec)
{
    KnowledgeRepository repo;
    repo.goals = m.goals;
    repo.patterns = spec.patterns;
    repo.hooks = spec.hooks;
    return repo;
}

Agent::Agent(AgentSpec spec, KnowledgeRepository repo, const Configuration& truth, std::uint64_t seed)
    : spec_(std::move(spec)), repo_(std::move(repo)), model_(initial_model(truth)),
      active_(spec_.goals), horizon_(std::max(1, spec_.horizon)), seed_(seed)
{
}

void Agent::observe(const Configuration& truth, long step, double uncontrollable_events)
{
    Percept p = perceive(truth, spec_.id, spec_.sensor, seed_, step);
    model_ = reflect(std::move(model_), p, spec_.id, spec_.sensor, repo_, spec_.thresholds);
    observe_rate(adapt_, repo_, uncontrollable_events, spec_.thresholds.alpha, step);
}

Command Agent::deliberate(long step)
{
    directives_ = adapt(repo_, model_, adapt_, active_, spec_.id, horizon_, spec_.thresholds, step);
    for (const auto& d : directives_)
        if (d.kind == Directive::Kind::SetHorizon)
            horizon_ = std::clamp(d.value, 1, std::max(1, spec_.thresholds.horizon_cap));
    PlanningContext ctx{spec_.id, spec_.internal, horizon_, step, &memo_};
    GoalSelection sel = manage_goals(repo_, model_, directives_, active_, priorities_, ctx);
    selected_ = std::move(sel.kept);
    return decide(model_, selected_, repo_, ctx, spec_.explicit_controller);
}

Command Agent::step(const Configuration& truth, long step, double uncontrollable_events)
{
    observe(truth, step, uncontrollable_events);
    return deliberate(step);
}

}  // namespace motif
