#include "motif/synth.hpp"

#include <limits>
#include <map>
#include <tuple>

namespace motif {

namespace {

using Score = std::vector<std::int64_t>;
constexpr std::int64_t kWorst = std::numeric_limits<std::int64_t>::min() / 2;

class Search {
public:
    Search(const Explorer& ex, const std::vector<Goal>& goals, int horizon)
        : ex_(ex), goals_(goals), horizon_(horizon)
    {
        for (std::size_t i = 0; i < goals_.size(); ++i) {
            const Goal& g = goals_[i];
            if (g.critical() && g.kind == GoalKind::Avoid)
                critical_.push_back(i);
            else
                scored_.push_back(i);
        }
    }

    struct Masks {
        std::uint64_t reached = 0;
        std::uint64_t violated = 0;
        auto operator<=>(const Masks&) const = default;
    };

    Masks observe(const Configuration& w, Masks m) const
    {
        for (std::size_t j = 0; j < scored_.size() && j < 64; ++j) {
            const Goal& g = goals_[scored_[j]];
            if (g.kind == GoalKind::Reach && holds_on(g.expr, w))
                m.reached |= 1ULL << j;
            else if (g.kind == GoalKind::Avoid && holds_on(g.expr, w))
                m.violated |= 1ULL << j;
        }
        return m;
    }

    bool critical_bad(const Configuration& w) const
    {
        for (std::size_t i : critical_)
            if (holds_on(goals_[i].expr, w))
                return true;
        return false;
    }

    Score leaf(const Configuration& w, Masks m) const
    {
        Score s;
        for (std::size_t j = 0; j < scored_.size(); ++j) {
            const Goal& g = goals_[scored_[j]];
            switch (g.kind) {
            case GoalKind::Avoid: s.push_back(j < 64 && (m.violated >> j & 1) ? 0 : 1); break;
            case GoalKind::Reach: s.push_back(j < 64 && (m.reached >> j & 1) ? 1 : 0); break;
            case GoalKind::Utility: s.push_back(utility(g.expr, w)); break;
            }
        }
        return s;
    }

    // Best pessimistic score from an agent-turn world; nullopt when every choice is unsafe.
    std::optional<Score> agent_value(const Configuration& w, int depth, Masks m)
    {
        if (depth == horizon_)
            return leaf(w, m);
        auto key = std::make_tuple(w.hash(), depth, m);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        std::optional<Score> best;
        for (const auto& mv : ex_.agent_moves(w)) {
            auto sc = after_agent(mv.next, depth, m);
            if (sc && (!best || *sc > *best))
                best = sc;
        }
        memo_[key] = best;
        return best;
    }

    std::optional<Score> after_agent(const Configuration& w, int depth, Masks m)
    {
        if (critical_bad(w))
            return std::nullopt;
        m = observe(w, m);
        std::optional<Score> worst;
        for (const auto& e : ex_.env_moves(w)) {
            if (critical_bad(e.next))
                return std::nullopt;
            auto sc = agent_value(e.next, depth + 1, observe(e.next, m));
            if (!sc)
                return std::nullopt;
            if (!worst || *sc < *worst)
                worst = sc;
        }
        return worst;
    }

    PlanNode tree(const Configuration& w, int depth, Masks m, const std::string& label)
    {
        PlanNode node;
        node.turn = Turn::Agent;
        node.label = label;
        auto v = agent_value(w, depth, m);
        if (!v || depth == horizon_) {
            if (v)
                node.score = *v;
            return node;
        }
        node.score = *v;
        for (auto& mv : ex_.agent_moves(w)) {
            auto sc = after_agent(mv.next, depth, m);
            if (sc && *sc == *v) {
                node.children.push_back(env_tree(mv, depth, m));
                break;
            }
        }
        return node;
    }

    PlanNode env_tree(const Move& mv, int depth, Masks m)
    {
        PlanNode node;
        node.turn = Turn::Env;
        node.label = mv.label;
        if (auto sc = after_agent(mv.next, depth, m))
            node.score = *sc;
        Masks after = observe(mv.next, m);
        for (const auto& e : ex_.env_moves(mv.next))
            node.children.push_back(tree(e.next, depth + 1, observe(e.next, after), e.label));
        return node;
    }

private:
    bool holds_on(const Expr& e, const Configuration& w) const
    {
        Binding self{{"self", ex_.ego()}};
        EvalContext ctx;
        ctx.cfg = &w;
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

    std::int64_t utility(const Expr& e, const Configuration& w) const
    {
        Binding self{{"self", ex_.ego()}};
        EvalContext ctx;
        ctx.cfg = &w;
        ctx.binding = &self;
        try {
            Value v = evaluate(e, ctx);
            if (v.kind == Value::Kind::Num)
                return v.num;
            if (v.kind == Value::Kind::Bool)
                return v.num * kScale;
        }
        catch (const Error& err) {
            if (err.code() != ErrorCode::EvalError)
                throw;
        }
        return kWorst;
    }

    const Explorer& ex_;
    const std::vector<Goal>& goals_;
    int horizon_;
    std::vector<std::size_t> critical_;
    std::vector<std::size_t> scored_;
    std::map<std::tuple<std::uint64_t, int, Masks>, std::optional<Score>> memo_;
};

}  // namespace

Plan plan_horizon(const Configuration& cfg, const Explorer& ex, const std::vector<Goal>& goals, int horizon)
{
    if (horizon < 1)
        throw Error(ErrorCode::EvalError, "planning horizon must be positive");
    Search search(ex, goals, horizon);
    const Search::Masks root = search.observe(cfg, {});
    std::optional<Plan> best;
    for (auto& mv : ex.agent_moves(cfg)) {
        auto sc = search.after_agent(mv.next, 0, root);
        if (!sc || (best && !(*sc > best->score)))
            continue;
        Plan p;
        p.score = *sc;
        p.first = std::move(mv);
        best = std::move(p);
    }
    if (!best)
        throw Error(ErrorCode::NoSafePlan, "every action of '" + ex.ego() + "' risks a critical goal within " +
                                               std::to_string(horizon) + " step(s)");
    best->root.turn = Turn::Agent;
    best->root.score = best->score;
    best->root.children.push_back(search.env_tree(best->first, 0, root));
    return std::move(*best);
}

Plan plan_horizon(const Configuration& cfg, const std::string& ego, const std::vector<Goal>& goals, int horizon)
{
    return plan_horizon(cfg, Explorer(ego), goals, horizon);
}

}  // namespace motif
