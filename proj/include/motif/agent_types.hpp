#pragma once

#include "motif/expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace motif {

enum class GoalKind : std::uint8_t { Avoid, Reach, Utility };
enum class Criticality : std::uint8_t { Critical, BestEffort };

struct Goal {
    std::string name;
    GoalKind kind = GoalKind::Avoid;
    Criticality criticality = Criticality::Critical;
    int priority = 0;  // lower is more important
    Expr expr;
    int horizon = 0;  // utility goals only
    std::string recover;  // recovery goal inserted when a critical avoid is violated
    Span span;

    bool critical() const { return criticality == Criticality::Critical; }
    bool operator==(const Goal&) const = default;
};

struct SensorSpec {
    std::string motif;   // empty: every motif (requires an unbounded radius)
    long radius = -1;    // hops; -1 is unbounded
    std::vector<std::string> visible_types;  // empty: all types
    std::map<std::string, std::vector<std::string>> attrs;  // per type; absent type: all vars
    bool identity = true;
    std::map<std::string, double> noise;  // "type.var" -> stdev
    double detect_prob = 1.0;

    bool unbounded() const { return radius < 0; }
    bool faithful() const { return unbounded() && noise.empty() && detect_prob >= 1.0 && identity; }
    bool operator==(const SensorSpec&) const = default;
};

/// Design-time coordination pattern: believed motif `name:<leader>` is created
/// for every leader with at least one matching binding in `base`.
struct MotifPattern {
    std::string name;
    std::vector<Param> params;
    std::string base;
    Expr guard = true_expr();
    std::string leader;
    Span span;

    bool operator==(const MotifPattern&) const = default;
};

/// Exceptional event: when `when` becomes true, add or remove a goal.
struct GoalHook {
    Expr when;
    bool add = true;
    std::string goal;
    Span span;

    bool operator==(const GoalHook&) const = default;
};

struct Thresholds {
    int k_stale = 5;
    double alpha = 0.2;
    double theta_hi = 1.5;
    double theta_lo = 0.67;
    int horizon_cap = 6;

    bool operator==(const Thresholds&) const = default;
};

struct AgentSpec {
    std::string id;
    SensorSpec sensor;
    std::vector<std::string> goals;
    int horizon = 2;
    Thresholds thresholds;
    std::vector<std::string> internal;  // motifs forming the internal environment
    std::vector<MotifPattern> patterns;
    std::vector<GoalHook> hooks;
    bool explicit_controller = true;
    Span span;

    bool operator==(const AgentSpec&) const = default;
};

}  // namespace motif
