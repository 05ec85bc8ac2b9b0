// Laurent polynomials, polynomial systems, and the two augmentations that
// produce the overconstrained inputs of the resultant construction: hiding a
// variable in the coefficient ring and adjoining a generic linear form.

#ifndef SPARSOLVE_POLYNOMIAL_HPP
#define SPARSOLVE_POLYNOMIAL_HPP

#include "sparsolve/coefficient.hpp"
#include "sparsolve/exponent.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsolve {

// Laurent polynomial over coefficient ring C, in a fixed number of variables.
// Terms are kept in a lexicographically ordered map and never store a zero
// coefficient, so the support is exactly the key set.
template <class C>
struct LaurentPolyT {
    std::size_t nvars = 0;
    std::map<ExponentVec, C> terms;

    LaurentPolyT() = default;
    explicit LaurentPolyT(std::size_t n) : nvars(n) {}

    bool is_zero() const { return terms.empty(); }

    void add_term(const ExponentVec& e, const C& c) {
        assert(e.size() == nvars);
        if (c.is_zero()) return;
        auto it = terms.find(e);
        if (it == terms.end()) {
            terms.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    std::vector<ExponentVec> support() const {
        std::vector<ExponentVec> s;
        s.reserve(terms.size());
        for (const auto& [e, c] : terms) s.push_back(e);
        return s;
    }

    // Total degree after clearing negative exponents variable by variable;
    // the factor this polynomial contributes to the Bezout bound.
    std::int64_t cleared_degree() const {
        if (terms.empty()) return 0;
        std::vector<std::int32_t> mins(nvars, std::numeric_limits<std::int32_t>::max());
        for (const auto& [e, c] : terms)
            for (std::size_t i = 0; i < nvars; ++i) mins[i] = std::min(mins[i], e[i]);
        std::int64_t deg = 0;
        for (const auto& [e, c] : terms) {
            std::int64_t d = 0;
            for (std::size_t i = 0; i < nvars; ++i) d += e[i] - mins[i];
            deg = std::max(deg, d);
        }
        return deg;
    }
};

using LaurentPoly = LaurentPolyT<Coefficient>;     // plain scalar coefficients
using HiddenPoly = LaurentPolyT<CoeffPoly>;        // coefficients univariate in a hidden variable

// Evaluation at a complex point.  Negative exponents require the matching
// coordinate to be nonzero.
inline Cplx eval_poly(const LaurentPoly& f, const std::vector<Cplx>& x) {
    assert(x.size() == f.nvars);
    Cplx v = 0.0;
    for (const auto& [e, c] : f.terms) {
        Cplx m = 1.0;
        for (std::size_t i = 0; i < f.nvars; ++i) {
            if (e[i] == 0) continue;
            m *= std::pow(x[i], static_cast<double>(e[i]));
        }
        v += c.value() * m;
    }
    return v;
}

// Exact evaluation; every coefficient must be exact and coordinates with
// negative exponents nonzero.
inline Rat eval_poly_exact(const LaurentPoly& f, const RatVec& x) {
    Rat v = 0;
    for (const auto& [e, c] : f.terms) {
        Rat m = 1;
        for (std::size_t i = 0; i < f.nvars; ++i) {
            if (e[i] == 0) continue;
            Rat base = x[i];
            int k = e[i];
            if (k < 0) {
                base = Rat(1) / base;
                k = -k;
            }
            for (int j = 0; j < k; ++j) m *= base;
        }
        v += c.rational() * m;
    }
    return v;
}

struct PolySystem {
    std::vector<LaurentPoly> polys;
    std::vector<std::string> poly_names;
    std::vector<std::string> var_names;

    std::size_t nvars() const { return var_names.size(); }
    bool well_constrained() const { return polys.size() == nvars(); }

    void require_solvable() const {
        if (!well_constrained())
            throw std::invalid_argument("system must have as many polynomials as variables");
        for (const auto& f : polys)
            if (f.is_zero())
                throw std::invalid_argument("zero polynomial is not accepted by solver entry points");
    }
};

// Overconstrained view used by the matrix construction: n+1 polynomials in n
// visible variables whose coefficients live in K[hidden].  Produced by
// hide_variable, add_u_polynomial, or directly from an n+1-line input file.
struct AugmentedSystem {
    enum class Kind { plain, hidden_variable, u_form };

    std::vector<HiddenPoly> polys;
    std::vector<std::string> poly_names;
    std::vector<std::string> var_names;   // visible variables only
    std::string hidden_name;              // "" for Kind::plain
    Kind kind = Kind::plain;

    int hidden_source_index = -1;         // index of the hidden variable in the source system
    std::vector<int> clearing_powers;     // hidden-variable power multiplied into each poly
    std::vector<Rat> u_coeffs;            // c_{0j} of the adjoined linear form
    std::int64_t u_range = 0;             // coefficients drawn uniformly from {1..u_range}

    std::size_t nvars() const { return var_names.size(); }

    int max_hidden_degree() const {
        int d = 0;
        for (const auto& f : polys)
            for (const auto& [e, c] : f.terms) d = std::max(d, c.degree());
        return d;
    }
};

// Moves variable k of a well-constrained system into the coefficient field.
// Each polynomial is first multiplied by the smallest power of x_k clearing
// negative exponents of x_k, which changes roots only by that monomial factor.
inline AugmentedSystem hide_variable(const PolySystem& sys, std::size_t k) {
    sys.require_solvable();
    if (k >= sys.nvars()) throw std::invalid_argument("hidden variable index out of range");
    AugmentedSystem out;
    out.kind = AugmentedSystem::Kind::hidden_variable;
    out.hidden_source_index = static_cast<int>(k);
    out.hidden_name = sys.var_names[k];
    for (std::size_t i = 0; i < sys.var_names.size(); ++i)
        if (i != k) out.var_names.push_back(sys.var_names[i]);
    out.poly_names = sys.poly_names;

    for (const auto& f : sys.polys) {
        std::int32_t min_k = 0;
        for (const auto& [e, c] : f.terms) min_k = std::min(min_k, e[k]);
        out.clearing_powers.push_back(-min_k);
        HiddenPoly g(sys.nvars() - 1);
        for (const auto& [e, c] : f.terms) {
            ExponentVec rest(sys.nvars() - 1);
            std::size_t j = 0;
            for (std::size_t i = 0; i < sys.nvars(); ++i)
                if (i != k) rest[j++] = e[i];
            std::size_t power = static_cast<std::size_t>(e[k] - min_k);
            auto it = g.terms.find(rest);
            if (it == g.terms.end()) it = g.terms.emplace(rest, CoeffPoly()).first;
            it->second += CoeffPoly::monomial(c, power);
        }
        for (auto it = g.terms.begin(); it != g.terms.end();)
            it = it->second.is_zero() ? g.terms.erase(it) : std::next(it);
        out.polys.push_back(std::move(g));
    }
    return out;
}

// Wraps an overconstrained plain system (n+1 polynomials, n variables) as an
// AugmentedSystem with constant coefficient polynomials.
inline AugmentedSystem wrap_plain(const PolySystem& sys) {
    if (sys.polys.size() != sys.nvars() + 1)
        throw std::invalid_argument("plain resultant input needs n+1 polynomials in n variables");
    AugmentedSystem out;
    out.kind = AugmentedSystem::Kind::plain;
    out.var_names = sys.var_names;
    out.poly_names = sys.poly_names;
    for (const auto& f : sys.polys) {
        if (f.is_zero()) throw std::invalid_argument("zero polynomial in resultant input");
        HiddenPoly g(sys.nvars());
        for (const auto& [e, c] : f.terms) g.terms.emplace(e, CoeffPoly(c));
        out.polys.push_back(std::move(g));
    }
    return out;
}

// Adjoins f_0 = u + c_1 x_1 + ... + c_n x_n with c_j drawn uniformly from
// {1..range}.  The symbolic u is represented as the hidden variable of a
// degree-1 coefficient polynomial so the matrix pipeline is shared with the
// hidden-variable path.  f_0 is placed at index 0; the row-content rule picks
// the largest polynomial index, so index 0 rows appear only when forced.
inline AugmentedSystem add_u_polynomial(const PolySystem& sys, Rng& rng,
                                        std::int64_t range = (1LL << 20)) {
    sys.require_solvable();
    AugmentedSystem out;
    out.kind = AugmentedSystem::Kind::u_form;
    out.hidden_name = "u";
    out.var_names = sys.var_names;
    out.u_range = range;

    HiddenPoly f0(sys.nvars());
    f0.terms.emplace(ExponentVec(sys.nvars()),
                     CoeffPoly::monomial(Coefficient(Rat(1)), 1));  // the u term
    for (std::size_t j = 0; j < sys.nvars(); ++j) {
        Rat c = rng.uniform_int(1, range);
        out.u_coeffs.push_back(c);
        ExponentVec e(sys.nvars());
        e[j] = 1;
        f0.terms.emplace(e, CoeffPoly(c));
    }
    out.polys.push_back(std::move(f0));
    out.poly_names.push_back("f0");
    for (std::size_t i = 0; i < sys.polys.size(); ++i) {
        const auto& f = sys.polys[i];
        HiddenPoly g(sys.nvars());
        for (const auto& [e, c] : f.terms) g.terms.emplace(e, CoeffPoly(c));
        out.polys.push_back(std::move(g));
        out.poly_names.push_back(i < sys.poly_names.size() ? sys.poly_names[i]
                                                           : "f" + std::to_string(i + 1));
    }
    return out;
}

// Probability bound on the linear form failing to separate the m toric roots:
// at most C(m,2)/range.
inline Rat u_failure_bound(std::int64_t m, std::int64_t range) {
    return Rat(m * (m - 1), 2 * range);
}

}  // namespace sparsolve

#endif  // SPARSOLVE_POLYNOMIAL_HPP
