// Text format for polynomial systems.
//
// One polynomial per line:   name: term + term - term ...
// A term is a '*'-separated product of numeric factors and powers var^exp;
// exponents are (possibly negative) integers.  Numeric factors may be
// integers, fractions p/q, or decimals with optional exponent (all stored as
// exact rationals).  Variables are either declared up front with a line
//     vars: x y z
// or follow the x1..xn convention, in which case n is the largest index used.
// '#' starts a comment; blank lines are ignored.

#ifndef SPARSOLVE_SYSTEM_IO_HPP
#define SPARSOLVE_SYSTEM_IO_HPP

#include "sparsolve/polynomial.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsolve {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t col, const std::string& msg)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + msg),
          line_(line),
          col_(col) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }

private:
    std::size_t line_, col_;
};

namespace io_detail {

struct RawTerm {
    Rat coeff;
    std::map<std::string, std::int32_t> powers;
};

struct RawPoly {
    std::string name;
    std::vector<RawTerm> terms;
    std::size_t line;
};

class LineScanner {
public:
    LineScanner(const std::string& s, std::size_t line) : s_(s), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    char get() {
        skip_ws();
        return s_[pos_++];
    }
    std::size_t column() const { return pos_ + 1; }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, column(), msg); }

    bool at_ident() { return std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'; }
    bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected identifier");
        return s_.substr(start, pos_ - start);
    }

    std::int64_t integer() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        if (!at_digit()) fail("expected integer");
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        return neg ? -v : v;
    }

    // Number: integer, p/q, or decimal with optional exponent, as exact Rat.
    Rat number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected number");
        Rat value(BigInt(s_.substr(start, pos_ - start)));
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            std::size_t dstart = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == dstart) fail("expected denominator");
            BigInt den(s_.substr(dstart, pos_ - dstart));
            if (den == 0) fail("zero denominator");
            return value / Rat(den);
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            std::size_t fstart = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::size_t k = pos_ - fstart;
            if (k) {
                BigInt scale = 1;
                for (std::size_t i = 0; i < k; ++i) scale *= 10;
                value += Rat(BigInt(s_.substr(fstart, k)), scale);
            }
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            ++pos_;
            std::int64_t ex = integer();
            BigInt p10 = 1;
            for (std::int64_t i = 0; i < (ex < 0 ? -ex : ex); ++i) p10 *= 10;
            if (ex >= 0)
                value *= Rat(p10);
            else
                value /= Rat(p10);
        }
        return value;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

inline RawTerm parse_term(LineScanner& sc, int sign) {
    RawTerm t;
    t.coeff = sign;
    bool first = true;
    while (true) {
        if (sc.at_digit()) {
            t.coeff *= sc.number();
        } else if (sc.at_ident()) {
            std::string v = sc.ident();
            std::int32_t p = 1;
            if (sc.peek() == '^') {
                sc.get();
                p = static_cast<std::int32_t>(sc.integer());
            }
            t.powers[v] += p;
        } else if (first) {
            sc.fail("expected term");
        } else {
            sc.fail("expected factor after '*'");
        }
        first = false;
        if (sc.peek() == '*') {
            sc.get();
            continue;
        }
        break;
    }
    return t;
}

}  // namespace io_detail

inline PolySystem parse_system(const std::string& text) {
    using namespace io_detail;
    std::vector<std::string> declared_vars;
    bool have_decl = false;
    std::vector<RawPoly> raw;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;

        LineScanner sc(line, lineno);
        if (!sc.at_ident()) sc.fail("expected 'name:' at start of polynomial line");
        std::string name = sc.ident();
        if (sc.peek() != ':') sc.fail("expected ':' after name '" + name + "'");
        sc.get();

        if (name == "vars") {
            if (have_decl) sc.fail("duplicate vars declaration");
            if (!raw.empty()) sc.fail("vars declaration must precede polynomials");
            while (!sc.done()) declared_vars.push_back(sc.ident());
            if (declared_vars.empty()) sc.fail("empty vars declaration");
            have_decl = true;
            continue;
        }

        RawPoly p;
        p.name = name;
        p.line = lineno;
        int sign = 1;
        if (sc.peek() == '+' || sc.peek() == '-') sign = sc.get() == '-' ? -1 : 1;
        if (sc.done()) sc.fail("empty polynomial");
        while (true) {
            p.terms.push_back(parse_term(sc, sign));
            if (sc.done()) break;
            char op = sc.get();
            if (op != '+' && op != '-') sc.fail("expected '+' or '-' between terms");
            sign = op == '-' ? -1 : 1;
        }
        raw.push_back(std::move(p));
    }
    if (raw.empty()) throw ParseError(lineno ? lineno : 1, 1, "no polynomials in input");

    // Resolve variable names.  Without a declaration, names must be x1..xn
    // and n is the largest index mentioned.
    std::map<std::string, std::size_t> var_index;
    if (have_decl) {
        for (std::size_t i = 0; i < declared_vars.size(); ++i) {
            if (var_index.count(declared_vars[i]))
                throw ParseError(1, 1, "duplicate variable '" + declared_vars[i] + "'");
            var_index[declared_vars[i]] = i;
        }
    } else {
        std::size_t n = 0;
        for (const auto& p : raw)
            for (const auto& t : p.terms)
                for (const auto& [v, e] : t.powers) {
                    if (v.size() < 2 || v[0] != 'x')
                        throw ParseError(p.line, 1,
                                         "undeclared variable '" + v +
                                             "' (declare names with 'vars:' or use x1..xn)");
                    for (std::size_t i = 1; i < v.size(); ++i)
                        if (!std::isdigit(static_cast<unsigned char>(v[i])))
                            throw ParseError(p.line, 1, "undeclared variable '" + v + "'");
                    std::size_t idx = std::stoul(v.substr(1));
                    if (idx == 0) throw ParseError(p.line, 1, "variable indices start at x1");
                    n = std::max(n, idx);
                }
        declared_vars.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            declared_vars[i] = "x" + std::to_string(i + 1);
            var_index[declared_vars[i]] = i;
        }
    }

    PolySystem sys;
    sys.var_names = declared_vars;
    for (const auto& p : raw) {
        LaurentPoly f(sys.nvars());
        for (const auto& t : p.terms) {
            ExponentVec e(sys.nvars());
            for (const auto& [v, pw] : t.powers) {
                auto it = var_index.find(v);
                if (it == var_index.end())
                    throw ParseError(p.line, 1, "undeclared variable '" + v + "'");
                e[it->second] += pw;
            }
            f.add_term(e, Coefficient(t.coeff));
        }
        sys.polys.push_back(std::move(f));
        sys.poly_names.push_back(p.name);
    }
    return sys;
}

inline std::string serialize_coeff(const Coefficient& c) {
    if (c.is_exact()) return c.rational().str();
    std::ostringstream os;
    os.precision(17);
    os << c.value().real();
    return os.str();
}

// Canonical text form: declared variables first, then one line per
// polynomial with terms in descending lexicographic order.  parse_system of
// the output reproduces the system exactly (for exact coefficients).
inline std::string serialize_system(const PolySystem& sys) {
    std::ostringstream os;
    os << "vars:";
    for (const auto& v : sys.var_names) os << " " << v;
    os << "\n";
    for (std::size_t i = 0; i < sys.polys.size(); ++i) {
        os << (i < sys.poly_names.size() ? sys.poly_names[i] : "f" + std::to_string(i + 1))
           << ":";
        const auto& f = sys.polys[i];
        if (f.is_zero()) {
            os << " 0\n";
            continue;
        }
        bool first = true;
        for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
            const auto& [e, c] = *it;
            bool neg = c.is_exact() && c.rational() < 0;
            Coefficient mag = neg ? -c : c;
            os << (first ? (neg ? " -" : " ") : (neg ? " - " : " + "));
            first = false;
            bool unit = mag.is_exact() && mag.rational() == 1 && !e.is_zero();
            if (!unit) os << serialize_coeff(mag);
            bool printed = !unit;
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (e[j] == 0) continue;
                if (printed) os << "*";
                printed = true;
                os << sys.var_names[j];
                if (e[j] != 1) os << "^" << e[j];
            }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace sparsolve

#endif  // SPARSOLVE_SYSTEM_IO_HPP
