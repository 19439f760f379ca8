#pragma once

#include "motif/agent_types.hpp"
#include "motif/coordination.hpp"
#include "motif/synth.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <unordered_map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace motif {

struct ModelFile;

struct Detection {
    std::string type;
    std::optional<std::string> id;  // absent when identity is not visible
    std::map<std::string, Value> state;  // visible vars only
    std::map<std::string, std::optional<NodeId>> placements;  // sensed motif -> address
};

struct Percept {
    long step = 0;
    Detection ego;
    std::vector<Detection> detections;
    std::map<std::string, Map> maps;  // sensed motifs
};

/// Throws EgoUnplaced when a bounded sensor's ego has no address in the sensed motif.
Percept perceive(const Configuration& truth, const std::string& ego, const SensorSpec& spec,
                 std::uint64_t rng_seed, long step = 0);

struct MonitorRecord {
    long step = 0;
    std::string goal;
    std::string note;
};

struct Estimate {
    double value = 0;
    long step = 0;
};

struct KnowledgeRepository {
    // design time
    std::vector<Goal> goals;  // catalog, declaration order
    std::vector<MotifPattern> patterns;
    std::vector<GoalHook> hooks;
    std::optional<ControllerTable> controller;
    // run time
    std::map<std::string, Estimate> estimates;
    std::vector<MonitorRecord> records;
    std::map<std::string, long> violations;  // per goal

    const Goal* goal(const std::string& name) const;
    void record(long step, const std::string& goal, const std::string& note);
};

struct EnvModel {
    Configuration believed;
    std::map<std::string, int> unseen;  // tracked id -> consecutive missed steps
};

/// Beliefs before any percept: the world's motifs and maps, no components.
EnvModel initial_model(const Configuration& truth);

struct Directive {
    enum class Kind : std::uint8_t { SetHorizon, AddGoal, RemoveGoal, SetPriority, TriggerReplan, EnterRecovery };
    Kind kind = Kind::TriggerReplan;
    std::string goal;
    int value = 0;  // horizon or priority

    bool operator==(const Directive&) const = default;
};

std::string to_string(const Directive& d);

EnvModel reflect(EnvModel model, const Percept& p, const std::string& ego, const SensorSpec& sensor,
                 const KnowledgeRepository& repo, const Thresholds& th = {});

/// Believed model without derived motifs, for comparison with the truth.
Configuration without_derived(const Configuration& cfg);
/// Truth limited to the given types (empty: all); the ego is always kept.
Configuration restrict_to(const Configuration& truth, const std::vector<std::string>& types,
                          const std::string& ego);

struct GoalSelection {
    std::vector<Goal> kept;
    std::vector<std::string> dropped;
};

/// Plans keyed by believed-state hash, horizon and goal names; planning is a pure function of these.
class PlanMemo {
public:
    struct Entry {
        bool ok = false;
        ErrorCode error = ErrorCode::NoSafePlan;
        std::string message;
        std::shared_ptr<const Plan> plan;  // root tree dropped
    };
    const Entry* find(const std::string& key) const;
    void put(const std::string& key, Entry e);

private:
    std::unordered_map<std::string, Entry> entries_;
};

struct PlanningContext {
    std::string ego;
    std::vector<std::string> internal;
    int horizon = 2;
    long step = 0;
    PlanMemo* memo = nullptr;
};

/// Orders active goals (recovery first, then critical, priority, declaration order)
/// and keeps the greedy jointly feasible prefix-closed subset.
GoalSelection manage_goals(KnowledgeRepository& repo, const EnvModel& model, const std::vector<Directive>& directives,
                           std::vector<std::string>& active, std::map<std::string, int>& priorities,
                           const PlanningContext& ctx);

struct Command {
    enum class Source : std::uint8_t { Idle, Explicit, Library, Plan };
    Source source = Source::Idle;
    std::string label = kIdle;
    std::vector<Candidate> parts;  // empty for idle

    bool idle() const { return parts.empty(); }
};

std::string_view to_string(Command::Source s);

Command decide(const EnvModel& model, const std::vector<Goal>& goals, KnowledgeRepository& repo,
               const PlanningContext& ctx, bool explicit_controller = true);

struct AdaptState {
    double ewma = 0;
    bool primed = false;
    std::deque<double> history;  // past estimates, newest last
    bool high = false;
    bool low = false;
    std::vector<bool> hook_prev;
};

/// Feeds one step's count of uncontrollable events into the rate estimate.
void observe_rate(AdaptState& st, KnowledgeRepository& repo, double events, double alpha, long step);

std::vector<Directive> adapt(KnowledgeRepository& repo, const EnvModel& model, AdaptState& st,
                             const std::vector<std::string>& active, const std::string& ego, int horizon,
                             const Thresholds& th, long step);

class Agent {
public:
    Agent(AgentSpec spec, KnowledgeRepository repo, const Configuration& truth, std::uint64_t seed);

    /// Perception and reflection; runs every step.
    void observe(const Configuration& truth, long step, double uncontrollable_events = 0);
    /// Adaptation, goal management and decision on the current beliefs.
    Command deliberate(long step);
    /// The full cycle: observe, then deliberate.
    Command step(const Configuration& truth, long step, double uncontrollable_events = 0);

    const std::string& id() const { return spec_.id; }
    const AgentSpec& spec() const { return spec_; }
    const EnvModel& model() const { return model_; }
    const KnowledgeRepository& repo() const { return repo_; }
    KnowledgeRepository& repo() { return repo_; }
    int horizon() const { return horizon_; }
    const std::vector<Goal>& selected() const { return selected_; }
    const std::vector<Directive>& last_directives() const { return directives_; }

private:
    AgentSpec spec_;
    KnowledgeRepository repo_;
    EnvModel model_;
    AdaptState adapt_;
    std::vector<std::string> active_;
    std::map<std::string, int> priorities_;
    std::vector<Goal> selected_;
    std::vector<Directive> directives_;
    int horizon_;
    std::uint64_t seed_;
    PlanMemo memo_;
};

/// Repository from a model file: goal catalog, the agent's patterns and hooks.
KnowledgeRepository make_repository(const ModelFile& m, const AgentSpec& spec);

}  // namespace motif
