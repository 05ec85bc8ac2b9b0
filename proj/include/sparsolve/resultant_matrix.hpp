// Subdivision-based sparse resultant matrix for an overconstrained system of
// n+1 supports in n variables.  Rows and columns are both indexed by the
// lattice points E of the generically shifted Minkowski sum; the row at p
// holds the coefficients of x^{p-a} f_i, where (i, a) is read off the fine
// mixed cell whose shifted closure contains p.  All combinatorics are exact.

#ifndef SPARSOLVE_RESULTANT_MATRIX_HPP
#define SPARSOLVE_RESULTANT_MATRIX_HPP

#include "sparsolve/exact_linalg.hpp"
#include "sparsolve/polynomial.hpp"
#include "sparsolve/polytope.hpp"
#include "sparsolve/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparsolve {

// Row p holds the coefficients of x^{p-vertex} * f_{poly_index}.
struct RowLabel {
    ExponentVec point;
    std::size_t poly_index = 0;
    ExponentVec vertex;
};

// Square sparse matrix over univariate coefficient polynomials in the hidden
// variable (constant polynomials for a plain overconstrained input).  Row k
// and column k both correspond to columns[k], so the diagonal entry of row k
// is the chosen vertex coefficient and is never zero.
struct ResultantMatrix {
    std::size_t nvars = 0;
    std::vector<ExponentVec> columns;  // E, lexicographically sorted
    std::vector<RowLabel> rows;        // rows[k].point == columns[k]
    // Per row: (column, coefficient), sorted by column.  Exactly one entry
    // per support point of the labeling polynomial.
    std::vector<std::vector<std::pair<std::size_t, CoeffPoly>>> entries;

    std::vector<std::vector<ExponentVec>> supports;  // A_0..A_n, sorted/unique
    std::string hidden_name;   // "" when every entry is constant
    std::uint64_t seed = 0;    // seed of the whole construction
    std::uint64_t lift_seed = 0;  // lifting the retry loop settled on
    RatVec delta;                 // shift the retry loop settled on
    std::string algorithm = "subdivision";

    std::size_t size() const { return columns.size(); }

    std::size_t column_of(const ExponentVec& q) const {
        auto it = std::lower_bound(columns.begin(), columns.end(), q);
        if (it == columns.end() || *it != q)
            throw std::out_of_range("lattice point is not a matrix column");
        return static_cast<std::size_t>(it - columns.begin());
    }

    // Dense accessor; returns the zero polynomial off the sparse support.
    CoeffPoly entry(std::size_t r, std::size_t c) const {
        for (const auto& [col, coeff] : entries[r])
            if (col == c) return coeff;
        return CoeffPoly();
    }

    int max_entry_degree() const {
        int d = 0;
        for (const auto& row : entries)
            for (const auto& [c, coeff] : row) d = std::max(d, coeff.degree());
        return d;
    }

    // Columns where at least one entry actually depends on the hidden
    // variable; everything else specializes to a constant column.
    std::size_t hidden_bearing_columns() const {
        std::vector<char> hit(size(), 0);
        for (const auto& row : entries)
            for (const auto& [c, coeff] : row)
                if (coeff.degree() >= 1) hit[c] = 1;
        return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    }

    std::vector<std::size_t> rows_per_poly() const {
        std::vector<std::size_t> cnt(supports.size(), 0);
        for (const auto& r : rows) ++cnt[r.poly_index];
        return cnt;
    }
};

// Shift keeping every lattice point strictly off the facets of the sum.  The
// denominator 2^24 * 1000003 never divides the (much smaller) denominators of
// facet normals at desk scale, and the numerators are random, so exact facet
// hits are rare; lattice_points verifies exactly and the caller redraws.  All
// components are positive: the supports live in the nonnegative orthant with
// the sum's sharpest corner at the origin, and a shift pointing into that
// corner consistently picks up the fewest boundary lattice points.
inline RatVec draw_delta(std::size_t n, Rng& rng) {
    static const BigInt kDen = BigInt(1000003) << 24;
    RatVec d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = Rat(BigInt(rng.uniform_int(1, 1 << 14)), kDen);
    return d;
}

// Content of the row at an already-shifted point x: locates the fine cell of
// the lifted subdivision containing x and, among its vertex summands, picks
// the one with the largest polynomial index.  Index 0 (an adjoined linear
// form sits there) is chosen only when it is the sole vertex summand, which
// keeps its row count near the mixed-volume minimum.
inline std::pair<std::size_t, ExponentVec> row_content(const LiftedSupports& ls,
                                                       const RatVec& x) {
    auto ef = locate_envelope(ls, x);
    if (!ef)
        throw std::invalid_argument("row content queried outside the Minkowski sum");
    if (!ef->fine)
        throw DegenerateDeltaError("query point is not interior to a fine cell");
    for (std::size_t i = ls.count(); i-- > 0;)
        if (ef->face_ids[i].size() == 1)
            return {i, ls.supports[i][ef->face_ids[i][0]]};
    throw std::logic_error("fine cell with no vertex summand");
}

namespace resmat_detail {

// Builds columns, row labels and sparse rows for one (lifting, delta) pair.
// Throws DegenerateDeltaError whenever this particular shift fails: a lattice
// point on a facet of the sum, a shifted point not interior to a fine cell,
// or a hidden-column collision between index-0 rows of a u-form system.
inline void fill_rows(ResultantMatrix& m, const AugmentedSystem& sys,
                      const LiftedSupports& ls, const Polytope& q,
                      const RatVec& delta) {
    const std::size_t n = m.nvars;
    std::vector<ExponentVec> cols = lattice_points(q, delta);
    std::map<ExponentVec, std::size_t> index;
    for (std::size_t k = 0; k < cols.size(); ++k) index.emplace(cols[k], k);

    std::vector<RowLabel> rows;
    std::vector<std::vector<std::pair<std::size_t, CoeffPoly>>> entries;
    rows.reserve(cols.size());
    entries.reserve(cols.size());

    for (const ExponentVec& p : cols) {
        RatVec x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = Rat(p[j]) - delta[j];
        const auto [chosen, a] = row_content(ls, x);

        std::vector<std::pair<std::size_t, CoeffPoly>> row;
        row.reserve(sys.polys[chosen].terms.size());
        for (const auto& [e, c] : sys.polys[chosen].terms) {
            const ExponentVec target = p - a + e;
            auto it = index.find(target);
            if (it == index.end())
                throw std::logic_error("row support escapes the column set at " +
                                       target.str());
            row.emplace_back(it->second, c);
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& u, const auto& v) { return u.first < v.first; });
        rows.push_back(RowLabel{p, chosen, a});
        entries.push_back(std::move(row));
    }

    // u-form systems later carve a square hidden block out of the matrix, so
    // each index-0 row must place its u entry (the constant monomial of f_0,
    // landing at column p - a) in a column no other index-0 row touches.
    if (sys.kind == AugmentedSystem::Kind::u_form) {
        std::set<std::size_t> ucols;
        for (const auto& r : rows) {
            if (r.poly_index != 0) continue;
            const std::size_t c = index.at(r.point - r.vertex);
            if (!ucols.insert(c).second)
                throw DegenerateDeltaError("two index-0 rows share a hidden column");
        }
    }

    m.columns = std::move(cols);
    m.rows = std::move(rows);
    m.entries = std::move(entries);
}

}  // namespace resmat_detail

// Deterministic for a fixed seed: the retry loop draws liftings and shifts
// from one stream, so identical inputs rebuild the identical matrix.  The
// algorithm tag reserves room for an incremental construction; only
// "subdivision" is implemented.
inline ResultantMatrix build_matrix(const AugmentedSystem& sys,
                                    std::uint64_t seed = kDefaultLiftSeed,
                                    const std::string& algorithm = "subdivision") {
    if (algorithm != "subdivision")
        throw std::invalid_argument("unknown matrix algorithm \"" + algorithm +
                                    "\"; only \"subdivision\" is implemented");
    const std::size_t n = sys.nvars();
    if (sys.polys.size() != n + 1)
        throw std::invalid_argument("matrix construction needs n+1 polynomials in n variables");
    for (const auto& f : sys.polys)
        if (f.is_zero())
            throw std::invalid_argument("zero polynomial in matrix input");

    ResultantMatrix m;
    m.nvars = n;
    m.seed = seed;
    m.hidden_name = sys.hidden_name;
    m.algorithm = algorithm;
    for (const auto& f : sys.polys) m.supports.push_back(f.support());

    if (n == 0) {
        const ExponentVec origin(0);
        m.columns.push_back(origin);
        m.rows.push_back(RowLabel{origin, 0, origin});
        m.entries.push_back({{0, sys.polys[0].terms.at(origin)}});
        return m;
    }

    const Polytope q = minkowski_sum_of_supports(m.supports);
    if (!q.full_dim())
        throw std::invalid_argument("supports do not jointly span the variable space");

    Rng rng(seed);
    std::string last_error = "no attempt made";
    for (int lift_round = 0; lift_round < 8; ++lift_round) {
        const LiftedSupports ls = LiftedSupports::random_lifting(m.supports, rng.raw());
        for (int delta_round = 0; delta_round < 8; ++delta_round) {
            const RatVec delta = draw_delta(n, rng);
            try {
                resmat_detail::fill_rows(m, sys, ls, q, delta);
                m.lift_seed = ls.seed;
                m.delta = delta;
                return m;
            } catch (const DegenerateDeltaError& e) {
                last_error = e.what();
            }
        }
    }
    throw NonGenericLiftingError("matrix construction failed after retries: " + last_error);
}

// Dense complex specialization at one hidden value, row-major.
inline std::vector<Cplx> specialize(const ResultantMatrix& m, const Cplx& x) {
    const std::size_t d = m.size();
    std::vector<Cplx> a(d * d, Cplx(0.0, 0.0));
    for (std::size_t r = 0; r < d; ++r)
        for (const auto& [c, coeff] : m.entries[r]) a[r * d + c] = coeff.eval(x);
    return a;
}

// Exact rational specialization; requires every coefficient exact.
inline RatMat specialize_exact(const ResultantMatrix& m, const Rat& x) {
    const std::size_t d = m.size();
    RatMat a = rat_mat(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (const auto& [c, coeff] : m.entries[r]) a[r][c] = coeff.eval_exact(x);
    return a;
}

namespace resmat_detail {

inline std::uint64_t mulmod_(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a * b % p;  // operands < 2^31, product fits in 64 bits
}

inline std::uint64_t powmod_(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod_(r, a, p);
        a = mulmod_(a, a, p);
        e >>= 1;
    }
    return r;
}

// Residue of an exact rational mod a prime p < 2^31; false when the
// denominator vanishes mod p (caller must switch primes).
inline bool rat_mod_(const Rat& x, std::uint64_t p, std::uint64_t& out) {
    const BigInt pp(p);
    BigInt num = numerator(x) % pp;
    if (num < 0) num += pp;
    BigInt den = denominator(x) % pp;
    if (den < 0) den += pp;
    const auto d = den.convert_to<std::uint64_t>();
    if (d == 0) return false;
    out = mulmod_(num.convert_to<std::uint64_t>(), powmod_(d, p - 2, p), p);
    return true;
}

// Determinant of an exact rational matrix reduced mod p, by word-size
// elimination: 0 means det vanishes mod p (possibly a spurious p | det).
// Returns false when some denominator vanishes mod p.
inline bool detmod_(const std::vector<std::vector<Rat>>& a, std::uint64_t p,
                    std::uint64_t& det) {
    const std::size_t d = a.size();
    std::vector<std::uint64_t> w(d * d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            if (!rat_mod_(a[r][c], p, w[r * d + c])) return false;
    det = 1;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        while (piv < d && w[piv * d + col] == 0) ++piv;
        if (piv == d) {
            det = 0;
            return true;
        }
        if (piv != col) {
            for (std::size_t c = col; c < d; ++c) std::swap(w[piv * d + c], w[col * d + c]);
            det = p - det;
        }
        const std::uint64_t pv = w[col * d + col];
        det = mulmod_(det, pv, p);
        const std::uint64_t inv = powmod_(pv, p - 2, p);
        for (std::size_t r = col + 1; r < d; ++r) {
            const std::uint64_t f = mulmod_(w[r * d + col], inv, p);
            if (f == 0) continue;
            for (std::size_t c = col; c < d; ++c) {
                const std::uint64_t sub = mulmod_(f, w[col * d + c], p);
                std::uint64_t& cell = w[r * d + c];
                cell = cell >= sub ? cell - sub : cell + p - sub;
            }
        }
    }
    return true;
}

}  // namespace resmat_detail

// True iff some trial substitution of the hidden variable yields an exactly
// nonzero determinant, certified by modular elimination (a nonzero residue of
// the rational determinant mod a word-size prime proves it is nonzero, which
// no floating threshold can once these matrices reach condition numbers near
// 1e12).  Each substitution is tried against several primes so a spurious
// p | det cannot force a false negative.  Plain matrices ignore the value.
inline bool check_generic_nonsingularity(const ResultantMatrix& m, int trials = 4,
                                         std::uint64_t seed = 0x51ac7e57ULL) {
    const std::size_t d = m.size();
    if (d == 0) return false;
    static constexpr std::uint64_t kPrimes[3] = {2147483647ULL, 2147483629ULL, 2147483587ULL};
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const Rat x(rng.uniform_int(2, 9999), 7);
        const std::vector<std::vector<Rat>> a = specialize_exact(m, x);
        for (std::uint64_t p : kPrimes) {
            std::uint64_t det = 0;
            if (!resmat_detail::detmod_(a, p, det)) continue;
            if (det != 0) return true;
        }
    }
    return false;
}

// Row counts per polynomial (the degree of det M in that polynomial's
// coefficients) against the matching n-fold mixed volumes.  The construction
// guarantees count >= MV_{-i}: cells whose only vertex summand is A_i cover
// lattice volume MV_{-i} and force the label i.
struct DegreeReport {
    std::vector<std::size_t> rows_per_poly;
    std::vector<std::int64_t> mv_minus;   // mixed volume of the supports without i
    std::int64_t total_degree = 0;        // sum, the degree of the sparse resultant
};

inline DegreeReport degree_report(const ResultantMatrix& m,
                                  std::uint64_t seed = kDefaultLiftSeed) {
    DegreeReport rep;
    rep.rows_per_poly = m.rows_per_poly();
    if (m.nvars == 0) {
        rep.mv_minus.assign(1, 1);
        rep.total_degree = 1;
        return rep;
    }
    for (std::size_t i = 0; i < m.supports.size(); ++i) {
        std::vector<std::vector<ExponentVec>> rest;
        for (std::size_t j = 0; j < m.supports.size(); ++j)
            if (j != i) rest.push_back(m.supports[j]);
        rep.mv_minus.push_back(mixed_volume(rest, seed));
        rep.total_degree += rep.mv_minus.back();
    }
    for (std::size_t i = 0; i < rep.rows_per_poly.size(); ++i)
        if (static_cast<std::int64_t>(rep.rows_per_poly[i]) < rep.mv_minus[i])
            throw std::logic_error("row count for polynomial " + std::to_string(i) +
                                   " fell below its mixed-volume lower bound");
    return rep;
}

// Text export: header, column point list, row labels, sparse entries.  Entry
// coefficients are listed lowest power first as exact rational strings (or
// floating strings when an input coefficient was floating).
inline void write_matrix_text(const ResultantMatrix& m, std::ostream& os) {
    os << "sparsolve-matrix 1\n";
    os << "nvars " << m.nvars << "\n";
    os << "size " << m.size() << "\n";
    os << "seed " << m.seed << "\n";
    os << "lift-seed " << m.lift_seed << "\n";
    os << "algorithm " << m.algorithm << "\n";
    os << "hidden " << (m.hidden_name.empty() ? "-" : m.hidden_name) << "\n";
    os << "delta";
    for (const Rat& dj : m.delta) os << " " << dj.str();
    os << "\n";
    os << "columns " << m.size() << "\n";
    for (const auto& p : m.columns) {
        for (std::size_t j = 0; j < m.nvars; ++j) os << (j ? " " : "") << p[j];
        os << "\n";
    }
    os << "rows " << m.rows.size() << "\n";
    for (const auto& r : m.rows) {
        os << r.poly_index;
        for (std::size_t j = 0; j < m.nvars; ++j) os << " " << r.vertex[j];
        os << "\n";
    }
    std::size_t count = 0;
    for (const auto& row : m.entries) count += row.size();
    os << "entries " << count << "\n";
    for (std::size_t r = 0; r < m.entries.size(); ++r) {
        for (const auto& [c, coeff] : m.entries[r]) {
            os << r << " " << c << " " << coeff.degree();
            for (int k = 0; k <= coeff.degree(); ++k)
                os << " " << coeff.coeff(static_cast<std::size_t>(k)).str();
            os << "\n";
        }
    }
    os << "end\n";
}

// Dense floating export at one hidden value, for debugging.
inline void write_matrix_dense(const ResultantMatrix& m, std::ostream& os,
                               const Cplx& hidden = Cplx(0.0, 0.0)) {
    const std::size_t d = m.size();
    const std::vector<Cplx> a = specialize(m, hidden);
    os << std::setprecision(17);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const Cplx& v = a[r * d + c];
            if (c) os << " ";
            if (v.imag() == 0.0)
                os << v.real();
            else
                os << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
        }
        os << "\n";
    }
}

}  // namespace sparsolve

#endif  // SPARSOLVE_RESULTANT_MATRIX_HPP
