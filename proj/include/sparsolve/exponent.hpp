// Integer exponent vectors of Laurent monomials.

#ifndef SPARSOLVE_EXPONENT_HPP
#define SPARSOLVE_EXPONENT_HPP

#include "sparsolve/rational.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace sparsolve {

// Fixed length across a system; entries may be negative (Laurent).  The
// default comparison is lexicographic, which is the term order used for maps,
// lattice point lists and matrix row/column indexing throughout.
struct ExponentVec {
    std::vector<std::int32_t> e;

    ExponentVec() = default;
    explicit ExponentVec(std::size_t n) : e(n, 0) {}
    ExponentVec(std::initializer_list<std::int32_t> init) : e(init) {}

    std::size_t size() const { return e.size(); }
    std::int32_t operator[](std::size_t i) const { return e[i]; }
    std::int32_t& operator[](std::size_t i) { return e[i]; }

    auto operator<=>(const ExponentVec&) const = default;

    ExponentVec operator+(const ExponentVec& o) const {
        ExponentVec r(*this);
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }
    ExponentVec operator-(const ExponentVec& o) const {
        ExponentVec r(*this);
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
        return r;
    }

    bool is_zero() const {
        for (auto v : e)
            if (v != 0) return false;
        return true;
    }

    // Total degree of the positive part; the value reported by Bezout-style
    // bounds after negative exponents have been cleared.
    std::int64_t positive_degree() const {
        std::int64_t s = 0;
        for (auto v : e)
            if (v > 0) s += v;
        return s;
    }

    RatVec to_rat() const {
        RatVec r(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) r[i] = e[i];
        return r;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(e[i]);
        }
        return s + ")";
    }
};

}  // namespace sparsolve

#endif  // SPARSOLVE_EXPONENT_HPP
