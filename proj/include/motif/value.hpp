#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace motif {

enum class ErrorCode {
    UnknownNode,
    UnknownEdge,
    UnknownMotif,
    UnknownComponent,
    UnknownType,
    UnknownRule,
    NotAMember,
    NodeOccupied,
    NotEnabled,
    EvalError,
    EffectError,
    StateBudgetExceeded,
    NoSafePlan,
    InvariantViolation,
    ReplayDivergence,
    EgoUnplaced,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Numbers are fixed point with three decimals so that traces replay bit-exactly.
inline constexpr std::int64_t kScale = 1000;

struct Value {
    enum class Kind : std::uint8_t { Undef, Bool, Num, Sym, Node, Ref };

    Kind kind = Kind::Undef;
    std::int64_t num = 0;  // Bool: 0/1, Num: thousandths
    std::string text;      // Sym, Node, Ref

    static Value undef() { return {}; }
    static Value boolean(bool b) { return {Kind::Bool, b ? 1 : 0, {}}; }
    static Value milli(std::int64_t m) { return {Kind::Num, m, {}}; }
    static Value integer(std::int64_t i) { return {Kind::Num, i * kScale, {}}; }
    static Value symbol(std::string s) { return {Kind::Sym, 0, std::move(s)}; }
    static Value node(std::string s) { return {Kind::Node, 0, std::move(s)}; }
    static Value ref(std::string s) { return {Kind::Ref, 0, std::move(s)}; }

    bool is_undef() const { return kind == Kind::Undef; }
    bool as_bool() const;
    double as_double() const { return static_cast<double>(num) / kScale; }

    friend bool operator==(const Value&, const Value&) = default;
    friend std::strong_ordering operator<=>(const Value&, const Value&) = default;
};

std::string_view to_string(Value::Kind kind);

/// Formats thousandths as a decimal. With decimals < 0 trailing zeros are dropped.
std::string format_milli(std::int64_t milli, int decimals = -1);

/// Parses "12", "-3.25" into thousandths; throws on more than three decimals.
std::int64_t parse_milli(std::string_view text);

/// Human/trace representation: numbers as decimals, symbols bare, nodes and refs quoted-free.
std::string to_string(const Value& v, int decimals = -1);

struct Domain {
    enum class Kind : std::uint8_t { Bool, Int, Real, Enum };

    Kind kind = Kind::Bool;
    std::int64_t lo = 0;    // thousandths
    std::int64_t hi = 0;
    std::int64_t step = kScale;
    std::vector<std::string> symbols;

    static Domain boolean() { return {}; }
    static Domain integer(std::int64_t lo, std::int64_t hi);
    static Domain real(std::int64_t lo_milli, std::int64_t hi_milli, std::int64_t step_milli = 100);
    static Domain enumeration(std::vector<std::string> symbols);

    bool contains(const Value& v) const;
    Value default_value() const;

    /// Number of decimals needed to print values on this domain's grid.
    int decimals() const;

    /// Nearest grid point to x, clamped to [lo, hi]. Numeric domains only.
    Value snap(double x) const;

    friend bool operator==(const Domain&, const Domain&) = default;
};

struct VarDecl {
    std::string name;
    Domain domain;

    friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

/// 64-bit FNV-1a, stable across platforms and runs.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t h);

}  // namespace motif
