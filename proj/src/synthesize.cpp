#include "motif/sim.hpp"

namespace motif {

Synthesis synthesize(const ModelFile& model, const std::string& agent, const std::string& goal, const Bounds& bounds)
{
    const AgentSpec* spec = model.agent(agent);
    if (!spec)
        throw Error(ErrorCode::UnknownComponent, "no agent '" + agent + "'");
    const Goal* g = model.goal(goal);
    if (!g)
        throw Error(ErrorCode::InvariantViolation, "no goal '" + goal + "'");
    if (g->kind == GoalKind::Utility)
        throw Error(ErrorCode::InvariantViolation, "utility goal '" + goal + "' is planned online, not synthesized");

    Synthesis out;
    out.game = ground(instantiate(model), Explorer(agent, spec->internal), bounds);
    for (const auto& name : spec->goals) {
        const Goal* other = model.goal(name);
        if (other && other != g && other->kind == GoalKind::Avoid && other->critical())
            mark_bad(out.game, other->expr, agent);
    }
    if (g->kind == GoalKind::Avoid)
        mark_bad(out.game, g->expr, agent);
    out.safety = solve_safety(out.game);
    if (g->kind == GoalKind::Reach) {
        mark_target(out.game, g->expr, agent);
        out.reach = solve_reach(out.game, &out.safety);
    }
    return out;
}

}  // namespace motif
