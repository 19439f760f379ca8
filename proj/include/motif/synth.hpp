#pragma once

#include "motif/agent_types.hpp"
#include "motif/coordination.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace motif {

enum class Turn : std::uint8_t { Agent, Env };

inline constexpr const char* kIdle = "idle";
inline constexpr const char* kPass = "pass";

struct GameAction {
    std::string label;
    bool controllable = false;
    std::size_t target = 0;
};

struct GameState {
    Turn turn = Turn::Agent;
    std::uint64_t key = 0;  // stable across runs; distinct per turn
    bool bad = false;
    bool target = false;
    std::vector<GameAction> actions;
    std::size_t twin = 0;   // same world, other turn (self when none)
    long world = -1;        // index into GameModel::worlds for grounded games
};

struct GameModel {
    std::vector<GameState> states;
    std::size_t initial = 0;
    std::vector<Configuration> worlds;

    std::size_t size() const { return states.size(); }
    std::optional<std::size_t> find(std::uint64_t key) const;
};

/// Thrown by ground() and compose_environments() when a bound is hit.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::size_t frontier, const std::string& message)
        : Error(ErrorCode::StateBudgetExceeded, message), frontier_(frontier) {}
    std::size_t frontier() const { return frontier_; }

private:
    std::size_t frontier_;
};

struct Bounds {
    std::size_t max_states = 100000;
    long max_depth = 100000;  // world-level BFS depth
};

/// One agent or environment move: zero or more rule firings applied atomically.
struct Move {
    std::string label;
    std::vector<Candidate> parts;  // empty for idle / pass
    Configuration next;
    std::vector<Event> events;
};

/// Successor generator shared by grounding and online planning.
class Explorer {
public:
    Explorer(std::string ego, std::vector<std::string> internal = {})
        : ego_(std::move(ego)), internal_(std::move(internal)) {}

    /// Ego moves; with internal motifs, pairs (external or idle, internal or idle). Idle last.
    std::vector<Move> agent_moves(const Configuration& cfg) const;
    /// First of agent_moves(cfg) whose label is in `wanted`, firing only candidates that match.
    std::optional<Move> agent_move(const Configuration& cfg, const std::vector<std::string>& wanted) const;
    /// Uncontrollable moves; a single pass move when none can fire.
    std::vector<Move> env_moves(const Configuration& cfg) const;

    const std::string& ego() const { return ego_; }

private:
    bool internal(const std::string& motif) const;

    std::string ego_;
    std::vector<std::string> internal_;
};

std::uint64_t state_key(std::uint64_t world_hash, Turn turn);

GameModel ground(const Configuration& cfg, const Explorer& ex, const Bounds& bounds = {});
GameModel ground(const Configuration& cfg, const std::string& ego, const Bounds& bounds = {});

/// Marks grounded states from goal predicates evaluated on their worlds (self = ego).
void mark_bad(GameModel& g, const Expr& pred, const std::string& ego);
void mark_target(GameModel& g, const Expr& pred, const std::string& ego);

struct Controller {
    enum class Kind : std::uint8_t { Safety, Reach };
    Kind kind = Kind::Safety;
    std::vector<bool> winning;
    std::map<std::size_t, std::vector<std::size_t>> kept;  // agent state -> action indices
    std::vector<long> rank;  // reach only; -1 outside winning

    bool wins(std::size_t s) const { return s < winning.size() && winning[s]; }
    std::size_t winning_count() const;
    bool operator==(const Controller&) const = default;
};

Controller solve_safety(const GameModel& g);
Controller solve_reach(const GameModel& g, const Controller* within = nullptr);

GameModel compose_environments(const GameModel& external, const GameModel& internal,
                               std::size_t max_states = 1000000);

/// Empty when the controller satisfies its invariants on g; otherwise messages.
std::vector<std::string> controller_violations(const GameModel& g, const Controller& c);

std::string export_controller(const GameModel& g, const Controller& c);
/// Throws InvariantViolation naming the offending state.
Controller import_controller(const std::string& text, const GameModel& g);

/// Controller as run-time knowledge: agent-turn state key -> kept labels.
struct ControllerTable {
    Controller::Kind kind = Controller::Kind::Safety;
    struct Entry {
        std::vector<std::string> kept;
        long rank = -1;
    };
    std::map<std::uint64_t, Entry> entries;

    static ControllerTable from(const GameModel& g, const Controller& c);
    static ControllerTable parse(const std::string& text);
    const Entry* find(std::uint64_t world_hash) const;
};

struct PlanNode {
    Turn turn = Turn::Agent;
    std::string label;  // move leading into this node; empty at the root
    std::vector<std::int64_t> score;
    std::vector<PlanNode> children;
};

struct Plan {
    Move first;
    std::vector<std::int64_t> score;  // one entry per non-critical-avoid goal, in goal order
    PlanNode root;
};

/// Depth-limited AND-OR search. Critical avoid goals are hard constraints; the
/// remaining goals are compared lexicographically on pessimistic outcomes.
Plan plan_horizon(const Configuration& cfg, const Explorer& ex, const std::vector<Goal>& goals, int horizon);
Plan plan_horizon(const Configuration& cfg, const std::string& ego, const std::vector<Goal>& goals, int horizon);

}  // namespace motif
