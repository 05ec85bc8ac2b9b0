// Independent exact-elimination oracle for the three-variable molecule
// systems.  Eliminates two variables by Sylvester resultants over exact
// rationals, reduces to a squarefree univariate polynomial, and isolates its
// real roots with Sturm sequences plus bisection.  Shares only the rational
// number type with the library under test; none of the solver machinery is
// used here.

#ifndef SPARSOLVE_TESTS_ORACLE_ELIMINATION_HPP
#define SPARSOLVE_TESTS_ORACLE_ELIMINATION_HPP

#include "sparsolve/fixtures.hpp"
#include "sparsolve/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace sparsolve {
namespace oracle {

inline bool elem_zero(const Rat& x) { return x == 0; }

// Dense univariate polynomial over a commutative ring K.
template <class K>
struct Poly1 {
    std::vector<K> c;  // c[i] multiplies x^i

    bool zero() const {
        for (const K& v : c)
            if (!elem_zero(v)) return false;
        return true;
    }
    int deg() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (!elem_zero(c[static_cast<std::size_t>(i)])) return i;
        return -1;
    }
    void trim() {
        while (!c.empty() && elem_zero(c.back())) c.pop_back();
    }
};

template <class K>
inline bool elem_zero(const Poly1<K>& p) {
    return p.zero();
}

template <class K>
inline Poly1<K> operator+(const Poly1<K>& a, const Poly1<K>& b) {
    Poly1<K> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), K{});
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = r.c[i] + a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
    r.trim();
    return r;
}

template <class K>
inline Poly1<K> operator-(const Poly1<K>& a, const Poly1<K>& b) {
    Poly1<K> nb = b;
    for (K& v : nb.c) v = K{} - v;
    return a + nb;
}

template <class K>
inline Poly1<K> operator*(const Poly1<K>& a, const Poly1<K>& b) {
    Poly1<K> r;
    if (a.zero() || b.zero()) return r;
    r.c.resize(a.c.size() + b.c.size() - 1, K{});
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (elem_zero(a.c[i])) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

// Determinant by cofactor expansion along the first remaining row; fine for
// the 4x4 and 6x6 Sylvester matrices this oracle builds.
template <class K>
inline K cofactor_det(const std::vector<std::vector<K>>& m, std::vector<std::size_t> cols,
                      std::size_t row) {
    if (cols.size() == 1) return m[row][cols[0]];
    K acc{};
    bool neg = false;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const K& pivot = m[row][cols[j]];
        if (!elem_zero(pivot)) {
            std::vector<std::size_t> rest;
            rest.reserve(cols.size() - 1);
            for (std::size_t t = 0; t < cols.size(); ++t)
                if (t != j) rest.push_back(cols[t]);
            K sub = pivot * cofactor_det(m, rest, row + 1);
            acc = neg ? acc - sub : acc + sub;
        }
        neg = !neg;
    }
    return acc;
}

template <class K>
inline K det(const std::vector<std::vector<K>>& m) {
    std::vector<std::size_t> cols(m.size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    return cofactor_det(m, cols, 0);
}

// Resultant of p and q with respect to their shared main variable; the
// coefficients (ring K) are polynomials in the surviving variables.
template <class K>
inline K sylvester_resultant(const Poly1<K>& p, const Poly1<K>& q) {
    const int dp = p.deg(), dq = q.deg();
    if (dp < 1 || dq < 1) throw std::invalid_argument("sylvester_resultant: degree < 1");
    const std::size_t n = static_cast<std::size_t>(dp + dq);
    std::vector<std::vector<K>> s(n, std::vector<K>(n, K{}));
    for (int t = 0; t < dq; ++t)
        for (int k = 0; k <= dp; ++k)
            s[static_cast<std::size_t>(t)][static_cast<std::size_t>(t + k)] =
                p.c[static_cast<std::size_t>(dp - k)];
    for (int t = 0; t < dp; ++t)
        for (int k = 0; k <= dq; ++k)
            s[static_cast<std::size_t>(dq + t)][static_cast<std::size_t>(t + k)] =
                q.c[static_cast<std::size_t>(dq - k)];
    return det(s);
}

using QPoly = Poly1<Rat>;        // univariate over Q
using QPoly2 = Poly1<QPoly>;     // main variable with coefficients in Q[secondary]

inline QPoly qmono(const Rat& v, std::size_t power) {
    QPoly p;
    p.c.resize(power + 1, Rat(0));
    p.c[power] = v;
    return p;
}

// f_i of the molecule family as a polynomial in `main` with coefficients in
// Q[other]: f_i = b0 + b1 tj^2 + b2 tk^2 + b3 tj^2 tk^2 + b4 tj tk where
// j = i+1, k = i+2 cyclically; `main` must be tj or tk.
inline QPoly2 molecule_poly_in(const MoleculeInstance& inst, std::size_t i, std::size_t main) {
    const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    const auto& b = inst.beta[i];
    if (main != j && main != k)
        throw std::invalid_argument("molecule_poly_in: variable absent from polynomial");
    // with main = tj: coeff of tj^0 is b0 + b2 tk^2, of tj^1 is b4 tk, of
    // tj^2 is b1 + b3 tk^2; main = tk swaps the roles of b1 and b2
    const Rat& sq_main = (main == j) ? b[1] : b[2];
    const Rat& sq_other = (main == j) ? b[2] : b[1];
    QPoly2 f;
    f.c.resize(3);
    f.c[0] = qmono(b[0], 0) + qmono(sq_other, 2);
    f.c[1] = qmono(b[4], 1);
    f.c[2] = qmono(sq_main, 0) + qmono(b[3], 2);
    return f;
}

// Rescale to a primitive integer polynomial.  The factor is positive, so sign
// sequences (and hence Sturm counts) are unchanged while coefficient bit
// sizes stay bounded through the remainder chain.
inline void make_primitive(QPoly& p) {
    p.trim();
    if (p.c.empty()) return;
    BigInt den(1);
    for (const Rat& v : p.c) den = lcm(den, BigInt(denominator(v)));
    BigInt g(0);
    for (const Rat& v : p.c) g = gcd(g, BigInt(numerator(Rat(v * den))));
    if (g == 0) return;
    const Rat scale = Rat(den) / Rat(g);
    for (Rat& v : p.c) v = v * scale;
}

// Univariate polynomial whose real roots contain every t_m coordinate of a
// solution: eliminate t_a from (f_m, f_b), then t_b from the result and f_a,
// with a = m+1, b = m+2 cyclically.
inline QPoly coordinate_eliminant(const MoleculeInstance& inst, std::size_t m) {
    const std::size_t a = (m + 1) % 3, b = (m + 2) % 3;
    // f_m has variables (t_a, t_b); f_b has (t_m, t_a); f_a has (t_b, t_m).
    // Main variable t_a, secondary t_b / t_m respectively:
    const QPoly2 fm = molecule_poly_in(inst, m, a);   // coeffs in Q[t_b]
    const QPoly2 fb = molecule_poly_in(inst, b, a);   // coeffs in Q[t_m]
    // mixed secondary variables: move both to Q[t_b][t_m] by treating the
    // resultant in t_a entrywise over bivariate coefficients Q[t_b, t_m].
    using K2 = Poly1<QPoly>;  // polynomial in t_m with coefficients in Q[t_b]
    auto embed_b = [](const QPoly2& p) {  // coeffs in Q[t_b] -> Q[t_b][t_m]
        Poly1<K2> r;
        r.c.reserve(p.c.size());
        for (const QPoly& q : p.c) {
            K2 cc;
            cc.c.push_back(q);
            r.c.push_back(std::move(cc));
        }
        return r;
    };
    auto embed_m = [](const QPoly2& p) {  // coeffs in Q[t_m] -> Q[t_b][t_m]
        Poly1<K2> r;
        r.c.reserve(p.c.size());
        for (const QPoly& q : p.c) {
            K2 cc;
            cc.c.reserve(q.c.size());
            for (const Rat& v : q.c) cc.c.push_back(qmono(v, 0));
            r.c.push_back(std::move(cc));
        }
        return r;
    };
    const K2 g = sylvester_resultant(embed_b(fm), embed_m(fb));  // in Q[t_b][t_m]

    // eliminate t_b from g and f_a: rewrite g as main t_b, coeffs Q[t_m]
    QPoly2 g_main_b;
    for (std::size_t dm = 0; dm < g.c.size(); ++dm)
        for (std::size_t db = 0; db < g.c[dm].c.size(); ++db) {
            if (g.c[dm].c[db] == 0) continue;
            if (g_main_b.c.size() <= db) g_main_b.c.resize(db + 1);
            if (g_main_b.c[db].c.size() <= dm) g_main_b.c[db].c.resize(dm + 1, Rat(0));
            g_main_b.c[db].c[dm] = g.c[dm].c[db];
        }
    const QPoly2 fa = molecule_poly_in(inst, a, b);  // main t_b, coeffs Q[t_m]
    QPoly h = sylvester_resultant(g_main_b, fa);
    h.trim();
    if (h.zero()) throw std::runtime_error("coordinate_eliminant: resultant vanished");
    make_primitive(h);
    return h;
}

inline QPoly derivative(const QPoly& p) {
    QPoly d;
    if (p.c.size() <= 1) return d;
    d.c.resize(p.c.size() - 1);
    for (std::size_t i = 1; i < p.c.size(); ++i) d.c[i - 1] = p.c[i] * Rat(static_cast<int>(i));
    return d;
}

// Remainder of a by b over Q (field division, exact).
inline QPoly poly_rem(QPoly a, const QPoly& b) {
    const int db = b.deg();
    if (db < 0) throw std::invalid_argument("poly_rem: zero divisor");
    a.trim();
    while (a.deg() >= db) {
        const int da = a.deg();
        const Rat f = a.c[static_cast<std::size_t>(da)] / b.c[static_cast<std::size_t>(db)];
        for (int i = 0; i <= db; ++i)
            a.c[static_cast<std::size_t>(da - db + i)] =
                a.c[static_cast<std::size_t>(da - db + i)] - f * b.c[static_cast<std::size_t>(i)];
        a.c.resize(static_cast<std::size_t>(da));  // leading term cancels exactly
        a.trim();
        if (a.c.empty()) break;
    }
    return a;
}

inline QPoly poly_div_exact(QPoly a, const QPoly& b) {
    const int db = b.deg();
    QPoly q;
    a.trim();
    if (a.deg() < db) return q;
    q.c.resize(static_cast<std::size_t>(a.deg() - db) + 1, Rat(0));
    while (a.deg() >= db && !a.c.empty()) {
        const int da = a.deg();
        const Rat f = a.c[static_cast<std::size_t>(da)] / b.c[static_cast<std::size_t>(db)];
        q.c[static_cast<std::size_t>(da - db)] = f;
        for (int i = 0; i <= db; ++i)
            a.c[static_cast<std::size_t>(da - db + i)] =
                a.c[static_cast<std::size_t>(da - db + i)] - f * b.c[static_cast<std::size_t>(i)];
        a.c.resize(static_cast<std::size_t>(da));
        a.trim();
    }
    return q;
}

inline QPoly poly_gcd(QPoly a, QPoly b) {
    a.trim();
    b.trim();
    while (!b.c.empty()) {
        QPoly r = poly_rem(a, b);
        make_primitive(r);
        a = std::move(b);
        b = std::move(r);
        b.trim();
    }
    // normalize monic
    if (!a.c.empty()) {
        const Rat lead = a.c.back();
        for (Rat& v : a.c) v = v / lead;
    }
    return a;
}

inline QPoly squarefree_part(const QPoly& p) {
    const QPoly g = poly_gcd(p, derivative(p));
    if (g.deg() <= 0) return p;
    return poly_div_exact(p, g);
}

inline Rat eval_q(const QPoly& p, const Rat& x) {
    Rat acc(0);
    for (std::size_t i = p.c.size(); i-- > 0;) acc = acc * x + p.c[i];
    return acc;
}

inline int sign_of(const Rat& x) { return x == 0 ? 0 : (x > 0 ? 1 : -1); }

// Sturm chain of a squarefree polynomial.
inline std::vector<QPoly> sturm_chain(const QPoly& p) {
    std::vector<QPoly> chain{p, derivative(p)};
    while (chain.back().deg() > 0) {
        QPoly r = poly_rem(chain[chain.size() - 2], chain.back());
        r.trim();
        if (r.c.empty()) break;  // squarefree input should end at a constant
        for (Rat& v : r.c) v = -v;
        make_primitive(r);
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_variations(const std::vector<QPoly>& chain, const Rat& x) {
    int count = 0, prev = 0;
    for (const QPoly& p : chain) {
        if (p.c.empty()) continue;
        const int s = sign_of(eval_q(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// All real roots of p, isolated with Sturm counts and refined by bisection to
// absolute width `width`; returned as midpoints in increasing order.
inline std::vector<double> real_roots(const QPoly& poly, const Rat& width = Rat(1, 1000000000000LL)) {
    QPoly p = squarefree_part(poly);
    p.trim();
    if (p.deg() <= 0) return {};
    make_primitive(p);
    const std::vector<QPoly> chain = sturm_chain(p);

    Rat bound(1);
    const Rat lead = p.c.back();
    for (const Rat& v : p.c) {
        Rat m = v / lead;
        if (m < 0) m = -m;
        if (m > bound) bound = m;
    }
    bound = bound + 1;

    struct Span {
        Rat lo, hi;
        int nlo, nhi;
    };
    std::vector<double> out;
    std::vector<Span> work{{-bound, bound, sign_variations(chain, -bound),
                            sign_variations(chain, bound)}};
    while (!work.empty()) {
        Span s = work.back();
        work.pop_back();
        const int roots = s.nlo - s.nhi;
        if (roots <= 0) continue;
        if (roots == 1 && s.hi - s.lo < width) {
            out.push_back(to_double(Rat((s.lo + s.hi) / 2)));
            continue;
        }
        const Rat mid = (s.lo + s.hi) / 2;
        // a root exactly at the midpoint stays inside one half: nudge via the
        // Sturm count itself (variations at a root count it on the left side)
        const int nmid = sign_variations(chain, mid);
        if (eval_q(p, mid) == 0) {
            out.push_back(to_double(mid));
            // exclude a tiny ball around the exact root from both halves
            const Rat eps = width / 4;
            work.push_back({s.lo, mid - eps, s.nlo, sign_variations(chain, Rat(mid - eps))});
            work.push_back({mid + eps, s.hi, sign_variations(chain, Rat(mid + eps)), s.nhi});
            continue;
        }
        work.push_back({s.lo, mid, s.nlo, nmid});
        work.push_back({mid, s.hi, nmid, s.nhi});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Real roots of the eliminant for coordinate m of the molecule family; every
// real solution's t_m coordinate appears in this list (the list may contain
// extra values from the elimination's extraneous factor).
inline std::vector<double> molecule_coordinate_roots(const MoleculeInstance& inst, std::size_t m) {
    return real_roots(coordinate_eliminant(inst, m));
}

}  // namespace oracle
}  // namespace sparsolve

#endif  // SPARSOLVE_TESTS_ORACLE_ELIMINATION_HPP
