#include "CLI11.hpp"
#include "motif/lang.hpp"
#include "motif/sim.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <unistd.h>

using namespace motif;
namespace fs = std::filesystem;

namespace {

enum Status { kOk = 0, kFailed = 1, kUsage = 2, kInternal = 3 };

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// temp file in the same directory, then rename over the target
void write_atomic(const fs::path& path, const std::string& data)
{
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
        out << data;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot rename onto '" + path.string() + "'");
    }
}

ModelFile load(const std::string& path)
{
    if (!fs::is_regular_file(path))
        throw Usage("no such file: " + path);
    return load_model(path);
}

const AgentSpec& pick_agent(const ModelFile& m, const std::string& id)
{
    if (!id.empty()) {
        if (const AgentSpec* a = m.agent(id))
            return *a;
        throw Usage("no agent '" + id + "' in the model");
    }
    if (m.agents.size() != 1)
        throw Usage("--agent is required when the model declares " + std::to_string(m.agents.size()) + " agents");
    return m.agents.front();
}

int cmd_check(const std::string& path)
{
    if (!fs::is_regular_file(path))
        throw Usage("no such file: " + path);
    ParseResult r = parse(read_file(path));
    std::vector<Diagnostic> diags = r.diagnostics;
    if (r.ok()) {
        auto more = validate(*r.model);
        diags.insert(diags.end(), more.begin(), more.end());
    }
    bool errors = !r.ok();
    for (const auto& d : diags) {
        std::cerr << d.format(path) << '\n';
        errors = errors || d.severity == Diagnostic::Severity::Error;
    }
    if (errors)
        return kFailed;
    std::cout << path << ": ok\n";
    return kOk;
}

struct SimArgs {
    std::string model;
    std::optional<long> steps;
    std::optional<std::uint64_t> seed;
    std::string policy;
    std::string trace;
};

int cmd_simulate(const SimArgs& a)
{
    ModelFile m = load(a.model);
    RunOptions opt;
    if (m.scenario) {
        opt.steps = m.scenario->steps;
        if (!m.scenario->seeds.empty())
            opt.seed = m.scenario->seeds.front();
        opt.policy = m.scenario->policy;
        opt.script = m.scenario->script;
    }
    if (a.steps)
        opt.steps = *a.steps;
    if (a.seed)
        opt.seed = *a.seed;
    if (!a.policy.empty()) {
        auto p = parse_policy(a.policy);
        if (!p)
            throw Usage("unknown policy '" + a.policy + "'");
        opt.policy = *p;
    }
    if (opt.steps < 0)
        throw Usage("--steps must be >= 0");
    if (opt.policy == PolicyKind::Script && opt.script.empty())
        throw Usage("policy script needs a scenario script in the model");

    RunResult r = run(m, opt);
    if (!a.trace.empty())
        write_atomic(a.trace, r.trace.to_jsonl());

    std::cout << "events " << r.trace.events.size() << ", stop " << r.trace.stop << ", final " << hex64(r.trace.final)
              << '\n';
    std::size_t w = 5;
    for (const auto& c : r.checks)
        w = std::max(w, c.name.size());
    std::cout << std::left << std::setw(static_cast<int>(w)) << "check" << "  result  first failure\n";
    for (const auto& c : r.checks) {
        std::cout << std::left << std::setw(static_cast<int>(w)) << c.name << "  " << (c.passed ? "pass  " : "FAIL  ")
                  << "  ";
        if (c.passed)
            std::cout << "-";
        else
            std::cout << "step " << c.first_failure << " (" << c.note << ")";
        std::cout << '\n';
    }
    return r.checks_passed() ? kOk : kFailed;
}

struct SynthArgs {
    std::string model;
    std::string agent;
    std::string goal;
    std::size_t bound = 100000;
    std::string out;
};

int cmd_synth(const SynthArgs& a)
{
    ModelFile m = load(a.model);
    const AgentSpec& spec = pick_agent(m, a.agent);
    if (!m.goal(a.goal))
        throw Usage("no goal '" + a.goal + "' in the model");
    if (a.bound < 1)
        throw Usage("--bound must be >= 1");
    Bounds b;
    b.max_states = a.bound;
    Synthesis s;
    try {
        s = synthesize(m, spec.id, a.goal, b);
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::StateBudgetExceeded)
            throw;
        std::cerr << e.what() << "\nthe game does not fit in " << a.bound
                  << " states; try online planning instead: motif plan " << a.model << " --agent " << spec.id
                  << " --horizon 3\n";
        return kInternal;
    }
    const Controller& c = s.result();
    std::cout << "game states " << s.game.size() << ", winning " << c.winning_count() << ", initial state "
              << (s.initial_wins() ? "winning" : "losing");
    if (s.reach)
        std::cout << ", rank " << c.rank.at(s.game.initial);
    std::cout << '\n';
    if (!a.out.empty())
        write_atomic(a.out, export_controller(s.game, c));
    return s.initial_wins() ? kOk : kFailed;
}

void print_node(const PlanNode& n, int depth)
{
    std::cout << std::string(static_cast<std::size_t>(depth) * 2, ' ') << (n.label.empty() ? "(root)" : n.label) << " ["
              << (n.turn == Turn::Agent ? "agent" : "env") << "]";
    if (!n.score.empty()) {
        std::cout << " score";
        for (auto v : n.score)
            std::cout << ' ' << v;
    }
    std::cout << '\n';
    for (const auto& ch : n.children)
        print_node(ch, depth + 1);
}

int cmd_plan(const std::string& path, const std::string& agent, int horizon)
{
    if (horizon < 1)
        throw Usage("--horizon must be >= 1");
    ModelFile m = load(path);
    const AgentSpec& spec = pick_agent(m, agent);
    std::vector<Goal> goals;
    for (const auto& name : spec.goals)
        if (const Goal* g = m.goal(name))
            goals.push_back(*g);
    try {
        Plan p = plan_horizon(instantiate(m), Explorer(spec.id, spec.internal), goals, horizon);
        print_node(p.root, 0);
        std::cout << "first action: " << p.first.label << '\n';
        return kOk;
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::NoSafePlan)
            throw;
        std::cerr << e.what() << '\n';
        return kFailed;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"motif: coordination models, simulation and controller synthesis"};
    app.require_subcommand(1);

    std::string check_path;
    auto* check = app.add_subcommand("check", "parse and validate a model");
    check->add_option("model", check_path, "model file")->required();

    SimArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run a seeded simulation and evaluate scenario checks");
    simulate->add_option("model", sim.model, "model file")->required();
    simulate->add_option("--steps", sim.steps, "step budget (default: scenario, else 100)");
    simulate->add_option("--seed", sim.seed, "seed (default: first scenario seed, else 0)");
    simulate->add_option("--policy", sim.policy, "random | round_robin | script");
    simulate->add_option("--trace", sim.trace, "write the JSONL trace here");

    SynthArgs syn;
    auto* synth = app.add_subcommand("synth", "synthesize a controller for one agent goal");
    synth->add_option("model", syn.model, "model file")->required();
    synth->add_option("--agent", syn.agent, "agent id (default: the only agent)");
    synth->add_option("--goal", syn.goal, "goal name")->required();
    synth->add_option("--bound", syn.bound, "maximum game states")->capture_default_str();
    synth->add_option("--out", syn.out, "write the controller table here");

    std::string plan_path, plan_agent;
    int horizon = 2;
    auto* plan = app.add_subcommand("plan", "compute a finite-horizon plan from the initial state");
    plan->add_option("model", plan_path, "model file")->required();
    plan->add_option("--agent", plan_agent, "agent id (default: the only agent)");
    plan->add_option("--horizon", horizon, "agent turns to look ahead")->capture_default_str();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*check)
            return cmd_check(check_path);
        if (*simulate)
            return cmd_simulate(sim);
        if (*synth)
            return cmd_synth(syn);
        if (*plan)
            return cmd_plan(plan_path, plan_agent, horizon);
    }
    catch (const Usage& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const Error& e) {
        std::cerr << e.what() << '\n';
        if (e.code() == ErrorCode::ParseError)
            return kFailed;
        return kInternal;
    }
    catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
