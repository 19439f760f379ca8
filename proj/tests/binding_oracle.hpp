#pragma once

#include "motif/coordination.hpp"

#include <functional>
#include <string>
#include <vector>

namespace oracle {

using namespace motif;

// Brute force: every tuple of components, filtered by distinctness, type,
// membership and guard. Optional parameters take the first fitting member.
inline std::vector<Binding> bindings(const Configuration& cfg, const std::string& motif, const Rule& rule)
{
    std::vector<std::string> ids;
    for (const auto& [id, c] : cfg.components())
        ids.push_back(id);
    std::vector<Param> req, opt;
    for (const auto& p : rule.params)
        (p.optional ? opt : req).push_back(p);
    std::vector<Binding> out;
    std::function<void(Binding&)> rec = [&](Binding& b) {
        if (b.size() == req.size()) {
            EvalContext ctx;
            ctx.cfg = &cfg;
            ctx.motif = motif;
            ctx.binding = &b;
            if (!holds(rule.guard, ctx))
                return;
            Binding full = b;
            for (const auto& p : opt) {
                for (const auto& id : ids) {
                    if (cfg.component(id).type != p.type || !cfg.is_member(id, motif))
                        continue;
                    bool used = false;
                    for (const auto& kv : full)
                        used = used || kv.second == id;
                    if (used)
                        continue;
                    Binding trial = full;
                    trial.emplace_back(p.name, id);
                    ctx.binding = &trial;
                    if (!p.filter || holds(*p.filter, ctx)) {
                        full = trial;
                        break;
                    }
                }
            }
            out.push_back(full);
            return;
        }
        const Param& p = req[b.size()];
        for (const auto& id : ids) {
            bool used = false;
            for (const auto& kv : b)
                used = used || kv.second == id;
            if (used || cfg.component(id).type != p.type || !cfg.is_member(id, motif))
                continue;
            b.emplace_back(p.name, id);
            rec(b);
            b.pop_back();
        }
    };
    Binding b;
    rec(b);
    return out;
}

}  // namespace oracle
