#include "motif/lang.hpp"

#include <cctype>
#include <set>

namespace motif {

namespace {

constexpr int kMaxDepth = 200;

struct Token {
    enum class Kind : std::uint8_t { Ident, Number, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    Span span;
};

struct SyntaxError {
    Span span;
    std::string message;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip();
            Token t;
            t.span = {line_, col_, 1};
            if (pos_ >= src_.size()) {
                t.kind = Token::Kind::End;
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            const std::size_t start = pos_;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                while (pos_ < src_.size() && src_[pos_] == '\'')
                    advance();
                t.kind = Token::Kind::Ident;
            }
            else if (std::isdigit(static_cast<unsigned char>(c))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
                if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                    advance();
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        advance();
                }
                t.kind = Token::Kind::Number;
            }
            else if (c == '"') {
                advance();
                std::string s;
                while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
                    if (src_[pos_] == '\\' && pos_ + 1 < src_.size())
                        advance();
                    s += src_[pos_];
                    advance();
                }
                if (pos_ >= src_.size() || src_[pos_] != '"')
                    throw SyntaxError{t.span, "unterminated string"};
                advance();
                t.kind = Token::Kind::String;
                t.text = s;
                t.span.len = static_cast<int>(pos_ - start);
                out.push_back(t);
                continue;
            }
            else {
                static const char* const puncts[] = {"<->", ":=", "->", "==", "!=", "<=", ">=", "{", "}", "(", ")",
                                                     "[", "]", ",", ";", ":", ".", "@", "?", "<", ">", "+", "-",
                                                     "*", "%", "="};
                bool matched = false;
                for (const char* p : puncts) {
                    std::string_view pv(p);
                    if (src_.substr(pos_, pv.size()) == pv) {
                        for (std::size_t i = 0; i < pv.size(); ++i)
                            advance();
                        matched = true;
                        break;
                    }
                }
                if (!matched)
                    throw SyntaxError{t.span, std::string("unexpected character '") + c + "'"};
                t.kind = Token::Kind::Punct;
            }
            t.text = std::string(src_.substr(start, pos_ - start));
            t.span.len = static_cast<int>(pos_ - start);
            out.push_back(t);
        }
    }

private:
    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        }
        else {
            ++col_;
        }
        ++pos_;
    }

    void skip()
    {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            }
            else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            }
            else {
                return;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::set<std::string>& reserved()
{
    static const std::set<std::string> words = {"and", "or", "not", "implies", "true", "false", "undef",
                                                "forall", "exists", "empty", "distance", "in", "prev"};
    return words;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ModelFile file()
    {
        ModelFile m;
        while (!at_end()) {
            if (accept_word("type"))
                m.types.push_back(type_decl());
            else if (accept_word("motif"))
                m.motifs.push_back(motif_decl());
            else if (accept_word("component"))
                m.components.push_back(component_decl());
            else if (accept_word("goal"))
                m.goals.push_back(goal_decl());
            else if (accept_word("agent"))
                m.agents.push_back(agent_decl());
            else if (accept_word("check"))
                m.checks.push_back(check_decl());
            else if (accept_word("scenario")) {
                if (m.scenario)
                    fail(prev().span, "more than one scenario block");
                m.scenario = scenario_decl();
            }
            else
                fail(peek().span, "expected a declaration (type, motif, component, goal, agent, check, scenario), got '" +
                                      peek().text + "'");
        }
        return m;
    }

private:
    // -- token helpers ------------------------------------------------------

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(Span s, std::string msg) { throw SyntaxError{s, std::move(msg)}; }

    bool is_punct(std::string_view p, std::size_t k = 0) const
    {
        return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
    }
    bool is_word(std::string_view w, std::size_t k = 0) const
    {
        return peek(k).kind == Token::Kind::Ident && peek(k).text == w;
    }
    bool accept(std::string_view p)
    {
        if (!is_punct(p))
            return false;
        next();
        return true;
    }
    bool accept_word(std::string_view w)
    {
        if (!is_word(w))
            return false;
        next();
        return true;
    }
    const Token& expect(std::string_view p)
    {
        if (!is_punct(p))
            fail(peek().span, "expected '" + std::string(p) + "', got '" + describe(peek()) + "'");
        return next();
    }
    void expect_word(std::string_view w)
    {
        if (!accept_word(w))
            fail(peek().span, "expected '" + std::string(w) + "', got '" + describe(peek()) + "'");
    }
    static std::string describe(const Token& t) { return t.kind == Token::Kind::End ? "end of file" : t.text; }

    std::string ident(const char* what = "identifier")
    {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident)
            fail(t.span, std::string("expected ") + what + ", got '" + describe(t) + "'");
        next();
        return t.text;
    }

    long integer()
    {
        bool neg = accept("-");
        const Token& t = peek();
        if (t.kind != Token::Kind::Number || t.text.find('.') != std::string::npos)
            fail(t.span, "expected an integer, got '" + describe(t) + "'");
        next();
        if (t.text.size() > 12)
            fail(t.span, "integer out of range");
        long v = std::stol(t.text);
        return neg ? -v : v;
    }

    std::int64_t number_milli()
    {
        bool neg = accept("-");
        const Token& t = peek();
        if (t.kind != Token::Kind::Number)
            fail(t.span, "expected a number, got '" + describe(t) + "'");
        next();
        try {
            std::int64_t v = parse_milli(t.text);
            return neg ? -v : v;
        }
        catch (const Error& e) {
            fail(t.span, e.what());
        }
    }

    NodeId node_literal()
    {
        const Token& t = peek();
        if (t.kind == Token::Kind::String || t.kind == Token::Kind::Ident) {
            next();
            return t.text;
        }
        if (t.kind == Token::Kind::Number && t.text.find('.') == std::string::npos) {
            next();
            return t.text;
        }
        fail(t.span, "expected a node id, got '" + describe(t) + "'");
    }

    Span here() const { return peek().span; }

    // -- declarations -------------------------------------------------------

    ComponentType type_decl()
    {
        ComponentType t;
        t.span = here();
        t.name = ident("type name");
        if (accept_word("agent"))
            t.kind = ComponentKind::Agent;
        else if (accept_word("object"))
            t.kind = ComponentKind::Object;
        else
            fail(here(), "expected 'agent' or 'object'");
        expect("{");
        while (!accept("}")) {
            if (accept_word("var")) {
                VarDecl v;
                v.name = ident("variable name");
                expect(":");
                v.domain = domain();
                expect(";");
                t.vars.push_back(std::move(v));
            }
            else if (accept_word("dynamics")) {
                Rule r;
                r.kind = RuleKind::Dynamics;
                r.span = here();
                r.name = ident("dynamics name");
                r.params.push_back({"self", t.name, false, std::nullopt});
                if (accept_word("when"))
                    r.guard = expr();
                expect_word("do");
                r.effects = effects();
                expect(";");
                t.dynamics.push_back(std::move(r));
            }
            else if (accept_word("controller")) {
                if (t.controller)
                    fail(prev().span, "duplicate controller block");
                t.controller.emplace();
                expect("{");
                while (!accept("}")) {
                    ControllerEntry e;
                    e.span = here();
                    e.rule = ident("rule name");
                    if (accept_word("when"))
                        e.guard = expr();
                    expect(";");
                    t.controller->push_back(std::move(e));
                }
            }
            else {
                fail(here(), "expected 'var', 'dynamics' or 'controller', got '" + describe(peek()) + "'");
            }
        }
        return t;
    }

    Domain domain()
    {
        if (accept_word("bool"))
            return Domain::boolean();
        if (accept_word("int")) {
            expect("[");
            long lo = integer();
            expect(",");
            long hi = integer();
            expect("]");
            if (lo > hi)
                fail(prev().span, "empty range");
            return Domain::integer(lo, hi);
        }
        if (accept_word("real")) {
            expect("[");
            auto lo = number_milli();
            expect(",");
            auto hi = number_milli();
            expect("]");
            std::int64_t step = 100;
            if (accept_word("step"))
                step = number_milli();
            if (lo > hi)
                fail(prev().span, "empty interval");
            if (step <= 0)
                fail(prev().span, "step must be positive");
            return Domain::real(lo, hi, step);
        }
        if (accept("{")) {
            std::vector<std::string> syms;
            do {
                syms.push_back(ident("enumeration value"));
            } while (accept(","));
            expect("}");
            return Domain::enumeration(std::move(syms));
        }
        fail(here(), "expected a domain (bool, int[..], real[..], {..}), got '" + describe(peek()) + "'");
    }

    MotifDecl motif_decl()
    {
        MotifDecl m;
        m.span = here();
        m.id = ident("motif name");
        expect("{");
        expect_word("map");
        m.map = map_spec();
        expect(";");
        while (!accept("}")) {
            Rule r;
            r.span = here();
            if (accept_word("rule"))
                r.kind = RuleKind::Interaction;
            else if (accept_word("reconfigure"))
                r.kind = RuleKind::Configuration;
            else
                fail(here(), "expected 'rule' or 'reconfigure', got '" + describe(peek()) + "'");
            r.name = ident("rule name");
            r.params = params();
            if (accept_word("when"))
                r.guard = expr();
            expect_word("do");
            r.effects = effects();
            expect(";");
            m.rules.push_back(std::move(r));
        }
        return m;
    }

    MapSpec map_spec()
    {
        MapSpec s;
        auto gen = [&](MapSpec::Kind k, int arity) {
            s.kind = k;
            expect("(");
            s.a = integer();
            if (arity == 2) {
                expect(",");
                s.b = integer();
            }
            expect(")");
            if (s.a < 0 || s.b < 0 || s.a > 100000 || s.b > 100000)
                fail(prev().span, "map size out of range");
            if (k == MapSpec::Kind::Grid && s.a * s.b > 100000)
                fail(prev().span, "map size out of range");
        };
        if (accept_word("line"))
            gen(MapSpec::Kind::Line, 1);
        else if (accept_word("ring"))
            gen(MapSpec::Kind::Ring, 1);
        else if (accept_word("grid"))
            gen(MapSpec::Kind::Grid, 2);
        else if (accept("{")) {
            s.kind = MapSpec::Kind::Explicit;
            while (!accept("}")) {
                if (accept_word("nodes")) {
                    do {
                        s.nodes.push_back(node_literal());
                    } while (accept(","));
                    expect(";");
                }
                else if (accept_word("edge")) {
                    MapSpec::EdgeSpec e;
                    e.from = node_literal();
                    if (accept("<->"))
                        e.both = true;
                    else
                        expect("->");
                    e.to = node_literal();
                    if (accept_word("weight"))
                        e.weight = integer();
                    expect(";");
                    s.edges.push_back(std::move(e));
                }
                else {
                    fail(here(), "expected 'nodes' or 'edge', got '" + describe(peek()) + "'");
                }
            }
        }
        else
            fail(here(), "expected a map (line(k), ring(k), grid(w,h) or { ... }), got '" + describe(peek()) + "'");
        return s;
    }

    std::vector<Param> params()
    {
        std::vector<Param> ps;
        expect("(");
        if (accept(")"))
            return ps;
        do {
            Param p;
            p.optional = accept("?");
            p.name = ident("parameter name");
            expect(":");
            p.type = ident("type name");
            if (accept_word("if")) {
                if (!p.optional)
                    fail(prev().span, "only optional parameters take an 'if' filter");
                p.filter = expr();
            }
            ps.push_back(std::move(p));
        } while (accept(","));
        expect(")");
        return ps;
    }

    std::vector<Effect> effects()
    {
        std::vector<Effect> out;
        do {
            out.push_back(effect());
        } while (accept(","));
        return out;
    }

    Expr field_ref()
    {
        Span s = here();
        std::string base = ident("component or parameter");
        expect(".");
        std::string field = ident("variable name");
        s.len = prev().span.col + prev().span.len - s.col;
        return Expr::field_of(base, field, s);
    }

    Effect effect()
    {
        Effect fx;
        fx.span = here();
        if (accept("@")) {
            fx.kind = Effect::Kind::Move;
            expect("(");
            fx.subject = ident("parameter");
            if (accept(","))
                fx.motif = ident("motif name");
            expect(")");
            expect(":=");
            fx.value = expr();
            return fx;
        }
        if (is_word("exchange") && is_punct("(", 1)) {
            next();
            fx.kind = Effect::Kind::Exchange;
            expect("(");
            fx.target = field_ref();
            expect(",");
            fx.other = field_ref();
            expect(")");
            return fx;
        }
        if (peek().kind == Token::Kind::Ident && is_punct(".", 1)) {
            fx.kind = Effect::Kind::Assign;
            fx.target = field_ref();
            expect(":=");
            fx.value = expr();
            return fx;
        }
        if (accept_word("create")) {
            fx.kind = Effect::Kind::Create;
            fx.type = ident("type name");
            if (accept_word("as"))
                fx.subject = ident("name");
            if (accept_word("at"))
                fx.value = expr();
            if (accept("{")) {
                if (!accept("}")) {
                    do {
                        std::string var = ident("variable name");
                        expect("=");
                        fx.init.emplace_back(var, expr());
                    } while (accept(","));
                    expect("}");
                }
            }
            return fx;
        }
        if (accept_word("delete")) {
            fx.kind = Effect::Kind::Delete;
            fx.subject = ident("parameter");
            return fx;
        }
        if (accept_word("add_node") || accept_word("remove_node")) {
            fx.kind = prev().text == "add_node" ? Effect::Kind::AddNode : Effect::Kind::RemoveNode;
            fx.value = expr();
            return fx;
        }
        if (accept_word("add_edge") || accept_word("remove_edge")) {
            fx.kind = prev().text == "add_edge" ? Effect::Kind::AddEdge : Effect::Kind::RemoveEdge;
            fx.value = expr();
            expect("->");
            fx.value2 = expr();
            if (fx.kind == Effect::Kind::AddEdge && accept_word("weight"))
                fx.weight = expr();
            return fx;
        }
        if (accept_word("join")) {
            fx.kind = Effect::Kind::Join;
            fx.subject = ident("parameter");
            fx.motif = ident("motif name");
            if (accept_word("at"))
                fx.value = expr();
            return fx;
        }
        if (accept_word("leave")) {
            fx.kind = Effect::Kind::Leave;
            fx.subject = ident("parameter");
            fx.motif = ident("motif name");
            return fx;
        }
        if (accept_word("migrate")) {
            fx.kind = Effect::Kind::Migrate;
            fx.subject = ident("parameter");
            fx.motif = ident("motif name");
            expect("->");
            fx.motif2 = ident("motif name");
            if (accept_word("at"))
                fx.value = expr();
            return fx;
        }
        fail(here(), "expected an effect, got '" + describe(peek()) + "'");
    }

    Value literal_value()
    {
        const Token& t = peek();
        if (is_punct("-") || t.kind == Token::Kind::Number)
            return Value::milli(number_milli());
        if (accept_word("true"))
            return Value::boolean(true);
        if (accept_word("false"))
            return Value::boolean(false);
        if (t.kind == Token::Kind::Ident) {
            next();
            return Value::symbol(t.text);
        }
        fail(t.span, "expected a literal value, got '" + describe(t) + "'");
    }

    ComponentDecl component_decl()
    {
        ComponentDecl c;
        c.span = here();
        c.id = ident("component id");
        expect(":");
        c.type = ident("type name");
        if (accept("{")) {
            if (!accept("}")) {
                do {
                    std::string var = ident("variable name");
                    expect("=");
                    c.init.emplace_back(var, literal_value());
                } while (accept(","));
                expect("}");
            }
        }
        while (accept_word("in")) {
            Placement p;
            p.span = prev().span;
            p.motif = ident("motif name");
            if (accept_word("at"))
                p.node = node_literal();
            c.placements.push_back(std::move(p));
        }
        expect(";");
        return c;
    }

    Goal goal_decl()
    {
        Goal g;
        g.span = here();
        g.name = ident("goal name");
        if (accept_word("critical"))
            g.criticality = Criticality::Critical;
        else if (accept_word("best_effort"))
            g.criticality = Criticality::BestEffort;
        else
            fail(here(), "expected 'critical' or 'best_effort'");
        if (accept_word("priority"))
            g.priority = static_cast<int>(integer());
        if (accept_word("avoid"))
            g.kind = GoalKind::Avoid;
        else if (accept_word("reach"))
            g.kind = GoalKind::Reach;
        else if (accept_word("utility"))
            g.kind = GoalKind::Utility;
        else
            fail(here(), "expected 'avoid', 'reach' or 'utility'");
        g.expr = expr();
        if (accept_word("horizon"))
            g.horizon = static_cast<int>(integer());
        if (accept_word("recover"))
            g.recover = ident("goal name");
        expect(";");
        return g;
    }

    std::vector<std::string> ident_list(const char* what)
    {
        std::vector<std::string> out;
        do {
            out.push_back(ident(what));
        } while (accept(","));
        return out;
    }

    double decimal()
    {
        return static_cast<double>(number_milli()) / kScale;
    }

    bool on_off()
    {
        if (accept_word("on"))
            return true;
        if (accept_word("off"))
            return false;
        fail(here(), "expected 'on' or 'off'");
    }

    AgentSpec agent_decl()
    {
        AgentSpec a;
        a.span = here();
        a.id = ident("agent id");
        expect("{");
        while (!accept("}")) {
            if (accept_word("sensor")) {
                expect("{");
                while (!accept("}")) {
                    if (accept_word("motif"))
                        a.sensor.motif = ident("motif name");
                    else if (accept_word("radius")) {
                        if (accept_word("inf"))
                            a.sensor.radius = -1;
                        else
                            a.sensor.radius = integer();
                    }
                    else if (accept_word("types"))
                        a.sensor.visible_types = ident_list("type name");
                    else if (accept_word("attrs")) {
                        std::string t = ident("type name");
                        expect(":");
                        a.sensor.attrs[t] = ident_list("variable name");
                    }
                    else if (accept_word("identity"))
                        a.sensor.identity = on_off();
                    else if (accept_word("noise")) {
                        std::string t = ident("type name");
                        expect(".");
                        std::string v = ident("variable name");
                        a.sensor.noise[t + "." + v] = decimal();
                    }
                    else if (accept_word("detect"))
                        a.sensor.detect_prob = decimal();
                    else
                        fail(here(), "unknown sensor setting '" + describe(peek()) + "'");
                    expect(";");
                }
            }
            else if (accept_word("goals")) {
                a.goals = ident_list("goal name");
                expect(";");
            }
            else if (accept_word("horizon_cap")) {
                a.thresholds.horizon_cap = static_cast<int>(integer());
                expect(";");
            }
            else if (accept_word("horizon")) {
                a.horizon = static_cast<int>(integer());
                expect(";");
            }
            else if (accept_word("stale")) {
                a.thresholds.k_stale = static_cast<int>(integer());
                expect(";");
            }
            else if (accept_word("alpha")) {
                a.thresholds.alpha = decimal();
                expect(";");
            }
            else if (accept_word("theta_hi")) {
                a.thresholds.theta_hi = decimal();
                expect(";");
            }
            else if (accept_word("theta_lo")) {
                a.thresholds.theta_lo = decimal();
                expect(";");
            }
            else if (accept_word("internal")) {
                a.internal = ident_list("motif name");
                expect(";");
            }
            else if (accept_word("explicit")) {
                a.explicit_controller = on_off();
                expect(";");
            }
            else if (accept_word("pattern")) {
                MotifPattern p;
                p.span = prev().span;
                p.name = ident("pattern name");
                p.params = params();
                expect_word("in");
                p.base = ident("motif name");
                if (accept_word("when"))
                    p.guard = expr();
                expect_word("leader");
                p.leader = ident("parameter");
                expect(";");
                a.patterns.push_back(std::move(p));
            }
            else if (accept_word("on")) {
                GoalHook h;
                h.span = prev().span;
                h.when = expr();
                if (accept_word("add"))
                    h.add = true;
                else if (accept_word("remove"))
                    h.add = false;
                else
                    fail(here(), "expected 'add' or 'remove'");
                expect_word("goal");
                h.goal = ident("goal name");
                expect(";");
                a.hooks.push_back(std::move(h));
            }
            else {
                fail(here(), "unknown agent setting '" + describe(peek()) + "'");
            }
        }
        return a;
    }

    CheckDecl check_decl()
    {
        CheckDecl c;
        c.span = here();
        c.name = ident("check name");
        if (accept_word("always")) {
            c.kind = CheckDecl::Kind::Always;
            c.expr = expr();
        }
        else if (accept_word("final")) {
            c.kind = CheckDecl::Kind::Final;
            c.expr = expr();
        }
        else if (accept_word("within")) {
            c.within = static_cast<int>(integer());
            expect_word("after");
            if (accept_word("rise"))
                c.kind = CheckDecl::Kind::AfterRise;
            else if (accept_word("change"))
                c.kind = CheckDecl::Kind::AfterChange;
            else
                fail(here(), "expected 'rise' or 'change'");
            c.trigger = expr();
            expect(":");
            c.expr = expr();
        }
        else {
            fail(here(), "expected 'always', 'final' or 'within'");
        }
        expect(";");
        return c;
    }

    ScenarioDecl scenario_decl()
    {
        ScenarioDecl s;
        s.span = here();
        s.name = ident("scenario name");
        expect("{");
        while (!accept("}")) {
            if (accept_word("steps"))
                s.steps = integer();
            else if (accept_word("seeds")) {
                do {
                    long v = integer();
                    if (v < 0)
                        fail(prev().span, "seeds are nonnegative");
                    s.seeds.push_back(static_cast<std::uint64_t>(v));
                } while (accept(","));
            }
            else if (accept_word("policy")) {
                std::string p = ident("policy");
                auto k = parse_policy(p);
                if (!k)
                    fail(prev().span, "unknown policy '" + p + "'");
                s.policy = *k;
            }
            else if (accept_word("script")) {
                do {
                    if (peek().kind != Token::Kind::String)
                        fail(here(), "expected a quoted event label");
                    s.script.push_back(next().text);
                } while (accept(","));
            }
            else
                fail(here(), "unknown scenario setting '" + describe(peek()) + "'");
            expect(";");
        }
        return s;
    }

    // -- expressions --------------------------------------------------------

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser)
        {
            if (++p.depth_ > kMaxDepth)
                p.fail(p.here(), "expression nested too deeply");
        }
        ~DepthGuard() { --p.depth_; }
    };

    Expr expr()
    {
        DepthGuard g(*this);
        return implies();
    }

    Expr implies()
    {
        Expr lhs = disjunction();
        if (is_word("implies")) {
            Span s = next().span;
            Expr rhs = implies();
            return Expr::binary(Op::Implies, std::move(lhs), std::move(rhs), s);
        }
        return lhs;
    }

    Expr disjunction()
    {
        Expr lhs = conjunction();
        while (is_word("or")) {
            Span s = next().span;
            lhs = Expr::binary(Op::Or, std::move(lhs), conjunction(), s);
        }
        return lhs;
    }

    Expr conjunction()
    {
        Expr lhs = negation();
        while (is_word("and")) {
            Span s = next().span;
            lhs = Expr::binary(Op::And, std::move(lhs), negation(), s);
        }
        return lhs;
    }

    Expr negation()
    {
        if (is_word("not")) {
            DepthGuard g(*this);
            Span s = next().span;
            return Expr::unary(Op::Not, negation(), s);
        }
        return comparison();
    }

    Expr comparison()
    {
        Expr lhs = additive();
        static const std::pair<const char*, Op> ops[] = {{"==", Op::Eq}, {"!=", Op::Ne}, {"<=", Op::Le},
                                                         {">=", Op::Ge}, {"<", Op::Lt},  {">", Op::Gt}};
        for (auto [text, op] : ops) {
            if (is_punct(text)) {
                Span s = next().span;
                return Expr::binary(op, std::move(lhs), additive(), s);
            }
        }
        return lhs;
    }

    Expr additive()
    {
        Expr lhs = multiplicative();
        while (is_punct("+") || is_punct("-")) {
            const Token& t = next();
            Op op = t.text == "+" ? Op::Add : Op::Sub;
            lhs = Expr::binary(op, std::move(lhs), multiplicative(), t.span);
        }
        return lhs;
    }

    Expr multiplicative()
    {
        Expr lhs = unary();
        while (is_punct("*") || is_punct("%")) {
            const Token& t = next();
            Op op = t.text == "*" ? Op::Mul : Op::Mod;
            lhs = Expr::binary(op, std::move(lhs), unary(), t.span);
        }
        return lhs;
    }

    Expr unary()
    {
        if (is_punct("-")) {
            DepthGuard g(*this);
            Span s = next().span;
            if (peek().kind == Token::Kind::Number) {
                Expr lit = primary();
                lit.lit.num = -lit.lit.num;
                lit.span = s;
                return lit;
            }
            return Expr::unary(Op::Neg, unary(), s);
        }
        return primary();
    }

    std::vector<Expr> call_args(std::string& motif_arg, std::size_t exprs_min, std::size_t exprs_max,
                                bool motif_required, const std::string& fname, Span s)
    {
        expect("(");
        std::vector<Expr> args;
        if (!is_punct(")")) {
            do {
                args.push_back(expr());
            } while (accept(","));
        }
        expect(")");
        // a trailing bare identifier beyond the minimum is the motif argument
        if (args.size() > exprs_min && args.back().kind == Expr::Kind::Name) {
            motif_arg = args.back().name;
            args.pop_back();
        }
        if (args.size() < exprs_min || args.size() > exprs_max || (motif_required && motif_arg.empty())) {
            std::string expect_text = std::to_string(exprs_min) + (motif_required ? " expression(s) and a motif"
                                                                                  : " expression(s) and an optional motif");
            fail(s, "arity mismatch: " + fname + " expects " + expect_text);
        }
        return args;
    }

    Expr primary()
    {
        DepthGuard g(*this);
        const Token t = peek();
        Span s = t.span;
        if (t.kind == Token::Kind::Number) {
            next();
            try {
                return Expr::literal(Value::milli(parse_milli(t.text)), s);
            }
            catch (const Error& e) {
                fail(s, e.what());
            }
        }
        if (t.kind == Token::Kind::String) {
            next();
            return Expr::literal(Value::node(t.text), s);
        }
        if (accept("(")) {
            Expr e = expr();
            expect(")");
            return e;
        }
        if (accept("@")) {
            Expr e;
            e.kind = Expr::Kind::Addr;
            e.span = s;
            e.args = call_args(e.motif, 1, 1, false, "@", s);
            return e;
        }
        if (t.kind != Token::Kind::Ident)
            fail(s, "expected an expression, got '" + describe(t) + "'");

        if (t.text == "true" || t.text == "false") {
            next();
            return Expr::literal(Value::boolean(t.text == "true"), s);
        }
        if (t.text == "undef") {
            next();
            return Expr::literal(Value::undef(), s);
        }
        if (is_punct("(", 1)) {
            Expr e;
            e.span = s;
            if (t.text == "empty") {
                next();
                e.kind = Expr::Kind::Empty;
                e.args = call_args(e.motif, 1, 1, false, "empty", s);
                return e;
            }
            if (t.text == "distance") {
                next();
                e.kind = Expr::Kind::Distance;
                e.args = call_args(e.motif, 2, 2, false, "distance", s);
                return e;
            }
            if (t.text == "in") {
                next();
                e.kind = Expr::Kind::In;
                e.args = call_args(e.motif, 1, 1, true, "in", s);
                return e;
            }
            if (t.text == "prev") {
                next();
                e.kind = Expr::Kind::Prev;
                expect("(");
                e.args.push_back(expr());
                expect(")");
                return e;
            }
            fail(s, "unknown function '" + t.text + "'");
        }
        if (t.text == "forall" || t.text == "exists") {
            next();
            Expr e;
            e.kind = t.text == "forall" ? Expr::Kind::Forall : Expr::Kind::Exists;
            e.span = s;
            e.name = ident("variable");
            expect(":");
            e.type = ident("type name");
            expect(".");
            e.args.push_back(expr());
            return e;
        }
        if (reserved().count(t.text))
            fail(s, "unexpected keyword '" + t.text + "'");
        next();
        if (is_punct(".") && peek(1).kind == Token::Kind::Ident) {
            next();
            const Token& f = next();
            s.len = f.span.col + f.span.len - s.col;
            return Expr::field_of(t.text, f.text, s);
        }
        return Expr::var(t.text, s);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace

std::vector<Diagnostic> resolve(ModelFile& model);  // lang_check.cpp

ParseResult parse(std::string_view text)
{
    ParseResult result;
    try {
        Parser p(Lexer(text).run());
        ModelFile m = p.file();
        result.diagnostics = resolve(m);
        if (result.diagnostics.empty())
            result.model = std::move(m);
    }
    catch (const SyntaxError& e) {
        result.diagnostics.push_back({Diagnostic::Severity::Error, e.span, "syntax error: " + e.message});
    }
    catch (const std::exception& e) {
        result.diagnostics.push_back({Diagnostic::Severity::Error, Span{1, 1, 1}, std::string("syntax error: ") + e.what()});
    }
    return result;
}

std::string_view to_string(PolicyKind p)
{
    switch (p) {
    case PolicyKind::Random: return "random";
    case PolicyKind::RoundRobin: return "round_robin";
    case PolicyKind::Script: return "script";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view s)
{
    if (s == "random")
        return PolicyKind::Random;
    if (s == "round_robin")
        return PolicyKind::RoundRobin;
    if (s == "script")
        return PolicyKind::Script;
    return std::nullopt;
}

std::string Diagnostic::format(std::string_view file) const
{
    std::string out;
    if (!file.empty())
        out += std::string(file) + ":";
    out += std::to_string(span.line) + ":" + std::to_string(span.col) + ": ";
    out += severity == Severity::Error ? "error: " : "warning: ";
    out += message;
    return out;
}

}  // namespace motif
