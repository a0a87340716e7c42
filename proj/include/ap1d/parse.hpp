#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "weight.hpp"

namespace ap1d {

// Weight strings:
//   weight   := piece (";" piece)* [";" "period" num]
//   piece    := expr "on" interval
//   expr     := term ("+" term)*
//   term     := [coeff "*"] atom
//   atom     := "1" | "x^" num | "|x-" num "|^" num | "exp(" num "x)"
//   interval := "(" num "," num ")"
// x^a means |x|^a. The period clause only appears on periodic weights and
// must equal the piece span; format_weight emits it, hand-written weights
// normally omit it.

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (position " + std::to_string(pos) + ")"), position(pos) {}
};

namespace detail {

struct Cursor {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool try_consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    void expect(char c, const char* what) {
        if (!try_consume(c)) throw ParseError(std::string("expected ") + what, pos);
    }
    bool try_keyword(std::string_view kw) {
        skip_ws();
        if (s.substr(pos, kw.size()) == kw) { pos += kw.size(); return true; }
        return false;
    }
    double number() {
        skip_ws();
        double v = 0.0;
        auto res = std::from_chars(s.data() + pos, s.data() + s.size(), v);
        if (res.ec != std::errc{}) throw ParseError("expected a number", pos);
        if (!std::isfinite(v)) throw ParseError("number out of range", pos);
        pos = static_cast<size_t>(res.ptr - s.data());
        return v;
    }
};

inline PrimitiveTerm parse_atom(Cursor& c) {
    if (c.try_keyword("exp(")) {
        double beta = c.number();
        c.expect('x', "'x' in exp(bx)");
        c.expect(')', "')' in exp(bx)");
        return {TermKind::exponential, 1.0, 0.0, beta};
    }
    if (c.try_keyword("|x-")) {
        double m = c.number();
        c.expect('|', "closing '|'");
        c.expect('^', "'^' after |x-c|");
        double a = c.number();
        return {TermKind::power, 1.0, m, a};
    }
    if (c.try_keyword("x^")) {
        double a = c.number();
        return {TermKind::power, 1.0, 0.0, a};
    }
    if (c.try_consume('1')) return {TermKind::constant, 1.0, 0.0, 0.0};
    throw ParseError("expected an atom: 1, x^a, |x-c|^a, or exp(bx)", c.pos);
}

inline PrimitiveTerm parse_term(Cursor& c) {
    char ch = c.peek();
    if (ch == '-' || ch == '.' || (ch >= '0' && ch <= '9')) {
        size_t save = c.pos;
        double v = c.number();
        if (c.try_consume('*')) {
            if (!(v > 0.0)) throw ParseError("coefficient must be positive", save);
            PrimitiveTerm t = parse_atom(c);
            t.coefficient = v;
            return t;
        }
        if (v == 1.0) return {TermKind::constant, 1.0, 0.0, 0.0};
        throw ParseError("bare numbers other than 1 need '*' and an atom", save);
    }
    return parse_atom(c);
}

inline Piece parse_piece(Cursor& c) {
    Piece p;
    p.terms.push_back(parse_term(c));
    while (c.try_consume('+')) p.terms.push_back(parse_term(c));
    if (!c.try_keyword("on")) throw ParseError("expected 'on' before the piece interval", c.pos);
    size_t at = c.pos;
    c.expect('(', "'('");
    double a = c.number();
    c.expect(',', "','");
    double b = c.number();
    c.expect(')', "')'");
    if (!(a < b)) throw ParseError("interval needs a < b", at);
    p.iv = {a, b};
    return p;
}

inline std::string num_str(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace detail

inline Weight parse_weight(std::string_view s) {
    detail::Cursor c{s};
    std::vector<Piece> pieces;
    bool periodic = false;
    double period_value = 0.0;
    size_t period_at = 0;
    pieces.push_back(detail::parse_piece(c));
    while (c.try_consume(';')) {
        if (c.try_keyword("period")) {
            period_at = c.pos;
            period_value = c.number();
            periodic = true;
            break;
        }
        pieces.push_back(detail::parse_piece(c));
    }
    if (!c.eof()) throw ParseError("unexpected trailing input", c.pos);
    Weight w{std::move(pieces), periodic};
    try {
        validate(w);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
    if (periodic) {
        double L = w.period();
        if (!(std::abs(period_value - L) <= 1e-9 * std::max(1.0, std::abs(L))))
            throw ParseError("period must equal the piece span", period_at);
    }
    return w;
}

inline std::string format_term(const PrimitiveTerm& t) {
    std::string atom;
    switch (t.kind) {
        case TermKind::constant: atom = "1"; break;
        case TermKind::power:
            atom = (t.center == 0.0) ? "x^" + detail::num_str(t.exponent)
                                     : "|x-" + detail::num_str(t.center) + "|^" + detail::num_str(t.exponent);
            break;
        case TermKind::exponential: atom = "exp(" + detail::num_str(t.exponent) + "x)"; break;
    }
    if (t.coefficient == 1.0) return atom;
    return detail::num_str(t.coefficient) + "*" + atom;
}

// Canonical form; parse_weight(format_weight(w)) reproduces w exactly
// (numbers print with shortest round-trip precision).
inline std::string format_weight(const Weight& w) {
    std::string s;
    for (size_t i = 0; i < w.pieces.size(); ++i) {
        if (i) s += "; ";
        const Piece& p = w.pieces[i];
        for (size_t j = 0; j < p.terms.size(); ++j) {
            if (j) s += " + ";
            s += format_term(p.terms[j]);
        }
        s += " on (" + detail::num_str(p.iv.a) + "," + detail::num_str(p.iv.b) + ")";
    }
    if (w.periodic) s += "; period " + detail::num_str(w.period());
    return s;
}

// "a,b" for CLI windows.
inline Interval parse_interval_arg(std::string_view s) {
    detail::Cursor c{s};
    double a = c.number();
    c.expect(',', "','");
    double b = c.number();
    if (!c.eof()) throw ParseError("unexpected trailing input", c.pos);
    if (!(a < b)) throw ParseError("window needs a < b", 0);
    return {a, b};
}

// "a:b:step" inclusive of both ends (within a small tolerance on the top).
inline std::vector<double> parse_centers_arg(std::string_view s) {
    detail::Cursor c{s};
    double a = c.number();
    c.expect(':', "':'");
    double b = c.number();
    c.expect(':', "':'");
    double step = c.number();
    if (!c.eof()) throw ParseError("unexpected trailing input", c.pos);
    if (!(step > 0.0) || b < a) throw ParseError("centers need a <= b and step > 0", 0);
    std::vector<double> out;
    long long n = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
}

inline bool operator==(const Piece& x, const Piece& y) {
    return x.iv == y.iv && detail::same_terms(x.terms, y.terms);
}

inline bool operator==(const Weight& x, const Weight& y) {
    return x.periodic == y.periodic && x.pieces.size() == y.pieces.size() &&
           std::equal(x.pieces.begin(), x.pieces.end(), y.pieces.begin());
}

} // namespace ap1d
