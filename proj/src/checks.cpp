#include "motif/sim.hpp"

#include <algorithm>

namespace motif {

namespace {

Value value_at(const Expr& e, const Configuration& now, const Configuration* prev)
{
    EvalContext ctx;
    ctx.cfg = &now;
    ctx.prev = prev ? prev : &now;
    try {
        return evaluate(e, ctx);
    }
    catch (const Error& err) {
        if (err.code() != ErrorCode::EvalError)
            throw;
        return Value::undef();
    }
}

bool true_at(const Expr& e, const Configuration& now, const Configuration* prev)
{
    Value v = value_at(e, now, prev);
    return v.kind == Value::Kind::Bool && v.num != 0;
}

}  // namespace

CheckMonitor::CheckMonitor(std::vector<CheckDecl> checks) : checks_(std::move(checks)), states_(checks_.size())
{
    for (std::size_t i = 0; i < checks_.size(); ++i)
        states_[i].result.name = checks_[i].name;
}

void CheckMonitor::fail(State& st, long step, const std::string& note)
{
    if (!st.result.passed)
        return;
    st.result.passed = false;
    st.result.first_failure = step;
    st.result.note = note;
}

void CheckMonitor::observe(long step, const Configuration& now, const Configuration* prev)
{
    last_step_ = step;
    for (std::size_t i = 0; i < checks_.size(); ++i) {
        const CheckDecl& c = checks_[i];
        State& st = states_[i];
        switch (c.kind) {
        case CheckDecl::Kind::Always:
            if (!true_at(c.expr, now, prev))
                fail(st, step, "violated");
            break;
        case CheckDecl::Kind::Final: st.final_holds = true_at(c.expr, now, prev); break;
        case CheckDecl::Kind::AfterRise:
        case CheckDecl::Kind::AfterChange: {
            Value trig = value_at(*c.trigger, now, prev);
            if (st.last_trigger) {
                bool fired = c.kind == CheckDecl::Kind::AfterChange
                                 ? trig != *st.last_trigger
                                 : trig == Value::boolean(true) && *st.last_trigger != Value::boolean(true);
                if (fired)
                    st.pending.push_back({step + c.within, step});
            }
            st.last_trigger = trig;
            if (st.pending.empty())
                break;
            if (true_at(c.expr, now, prev)) {
                st.pending.clear();
                break;
            }
            for (const auto& p : st.pending)
                if (p.deadline <= step) {
                    fail(st, step, "no response within " + std::to_string(c.within) + " step(s) of step " +
                                       std::to_string(p.raised));
                    break;
                }
            std::erase_if(st.pending, [&](const Pending& p) { return p.deadline <= step; });
            break;
        }
        }
    }
}

std::vector<CheckResult> CheckMonitor::finish()
{
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < checks_.size(); ++i) {
        State& st = states_[i];
        if (checks_[i].kind == CheckDecl::Kind::Final && !st.final_holds)
            fail(st, last_step_, "false in the final state");
        out.push_back(st.result);
    }
    return out;
}

}  // namespace motif
