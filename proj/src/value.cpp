#include "motif/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace motif {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::UnknownMotif: return "UnknownMotif";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::NotAMember: return "NotAMember";
    case ErrorCode::NodeOccupied: return "NodeOccupied";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::EffectError: return "EffectError";
    case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorCode::NoSafePlan: return "NoSafePlan";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ReplayDivergence: return "ReplayDivergence";
    case ErrorCode::EgoUnplaced: return "EgoUnplaced";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

bool Value::as_bool() const
{
    if (kind != Kind::Bool)
        throw Error(ErrorCode::EvalError, "expected a boolean, got " + std::string(to_string(kind)));
    return num != 0;
}

std::string_view to_string(Value::Kind kind)
{
    switch (kind) {
    case Value::Kind::Undef: return "undef";
    case Value::Kind::Bool: return "bool";
    case Value::Kind::Num: return "number";
    case Value::Kind::Sym: return "symbol";
    case Value::Kind::Node: return "node";
    case Value::Kind::Ref: return "component";
    }
    return "?";
}

std::string format_milli(std::int64_t milli, int decimals)
{
    const bool negative = milli < 0;
    const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(milli + 1)) + 1
                                       : static_cast<std::uint64_t>(milli);
    std::string out = negative ? "-" : "";
    out += std::to_string(mag / kScale);
    std::string frac = std::to_string(mag % kScale);
    frac.insert(0, 3 - frac.size(), '0');
    if (decimals < 0) {
        while (!frac.empty() && frac.back() == '0')
            frac.pop_back();
    }
    else {
        frac.resize(static_cast<std::size_t>(std::min(decimals, 3)));
    }
    if (!frac.empty())
        out += "." + frac;
    return out;
}

std::int64_t parse_milli(std::string_view text)
{
    if (text.empty())
        throw Error(ErrorCode::ParseError, "empty number");
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-') {
        negative = true;
        ++i;
    }
    std::int64_t whole = 0;
    bool digits = false;
    for (; i < text.size() && text[i] != '.'; ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw Error(ErrorCode::ParseError, "bad number '" + std::string(text) + "'");
        whole = whole * 10 + (text[i] - '0');
        if (whole > 9'000'000'000'000LL)
            throw Error(ErrorCode::ParseError, "number out of range '" + std::string(text) + "'");
        digits = true;
    }
    std::int64_t frac = 0;
    int places = 0;
    if (i < text.size()) {
        ++i;
        for (; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9')
                throw Error(ErrorCode::ParseError, "bad number '" + std::string(text) + "'");
            if (++places > 3)
                throw Error(ErrorCode::ParseError, "more than three decimals in '" + std::string(text) + "'");
            frac = frac * 10 + (text[i] - '0');
            digits = true;
        }
    }
    if (!digits)
        throw Error(ErrorCode::ParseError, "bad number '" + std::string(text) + "'");
    for (; places < 3; ++places)
        frac *= 10;
    const std::int64_t m = whole * kScale + frac;
    return negative ? -m : m;
}

std::string to_string(const Value& v, int decimals)
{
    switch (v.kind) {
    case Value::Kind::Undef: return "undef";
    case Value::Kind::Bool: return v.num ? "true" : "false";
    case Value::Kind::Num: return format_milli(v.num, decimals);
    case Value::Kind::Sym:
    case Value::Kind::Node:
    case Value::Kind::Ref: return v.text;
    }
    return "?";
}

Domain Domain::integer(std::int64_t lo, std::int64_t hi)
{
    Domain d;
    d.kind = Kind::Int;
    d.lo = lo * kScale;
    d.hi = hi * kScale;
    d.step = kScale;
    return d;
}

Domain Domain::real(std::int64_t lo_milli, std::int64_t hi_milli, std::int64_t step_milli)
{
    Domain d;
    d.kind = Kind::Real;
    d.lo = lo_milli;
    d.hi = hi_milli;
    d.step = step_milli;
    return d;
}

Domain Domain::enumeration(std::vector<std::string> symbols)
{
    Domain d;
    d.kind = Kind::Enum;
    d.symbols = std::move(symbols);
    return d;
}

bool Domain::contains(const Value& v) const
{
    switch (kind) {
    case Kind::Bool: return v.kind == Value::Kind::Bool;
    case Kind::Int:
    case Kind::Real:
        return v.kind == Value::Kind::Num && v.num >= lo && v.num <= hi && step > 0 &&
               (v.num - lo) % step == 0;
    case Kind::Enum:
        return v.kind == Value::Kind::Sym &&
               std::find(symbols.begin(), symbols.end(), v.text) != symbols.end();
    }
    return false;
}

Value Domain::default_value() const
{
    switch (kind) {
    case Kind::Bool: return Value::boolean(false);
    case Kind::Int:
    case Kind::Real: return Value::milli(lo);
    case Kind::Enum: return symbols.empty() ? Value::undef() : Value::symbol(symbols.front());
    }
    return {};
}

int Domain::decimals() const
{
    if (kind != Kind::Real)
        return 0;
    int places = 0;
    for (std::int64_t probe : {step, lo}) {
        std::int64_t rem = probe % kScale;
        if (rem < 0)
            rem = -rem;
        int p = 0;
        if (rem % 10 != 0)
            p = 3;
        else if (rem % 100 != 0)
            p = 2;
        else if (rem != 0)
            p = 1;
        places = std::max(places, p);
    }
    return std::max(places, 1);
}

Value Domain::snap(double x) const
{
    if (kind != Kind::Int && kind != Kind::Real)
        throw Error(ErrorCode::EvalError, "snap on a non-numeric domain");
    const double k = std::round((x * kScale - static_cast<double>(lo)) / static_cast<double>(step));
    const std::int64_t max_k = (hi - lo) / step;
    const std::int64_t kk = std::clamp(static_cast<std::int64_t>(k), std::int64_t{0}, max_k);
    return Value::milli(lo + kk * step);
}

std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed)
{
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace motif
