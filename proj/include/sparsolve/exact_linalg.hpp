// Dense exact-rational linear algebra: elimination, rank, determinant,
// kernels.  Small matrices only; used for geometric predicates and oracles.

#ifndef SPARSOLVE_EXACT_LINALG_HPP
#define SPARSOLVE_EXACT_LINALG_HPP

#include "sparsolve/rational.hpp"

#include <cassert>
#include <optional>
#include <utility>
#include <vector>

namespace sparsolve {

using RatMat = std::vector<RatVec>;  // row-major, rectangular

inline RatMat rat_mat(std::size_t rows, std::size_t cols) {
    return RatMat(rows, RatVec(cols, Rat(0)));
}

// Reduces a copy of m to row echelon form.  Returns the echelon matrix, the
// pivot column per pivot row, and the determinant scale (product of pivots
// with row-swap signs) which equals det(m) when m is square and full rank.
struct Echelon {
    RatMat mat;
    std::vector<std::size_t> pivot_cols;
    Rat det_scale;   // valid determinant only for square full-rank input
    int swap_sign = 1;
};

inline Echelon echelon_form(RatMat m) {
    Echelon e;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    e.det_scale = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        if (piv != r) {
            std::swap(m[piv], m[r]);
            e.swap_sign = -e.swap_sign;
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        e.det_scale *= m[r][c];
        e.pivot_cols.push_back(c);
        ++r;
    }
    e.mat = std::move(m);
    return e;
}

inline std::size_t rank(const RatMat& m) { return echelon_form(m).pivot_cols.size(); }

inline Rat determinant(const RatMat& m) {
    assert(!m.empty() && m.size() == m[0].size());
    Echelon e = echelon_form(m);
    if (e.pivot_cols.size() < m.size()) return Rat(0);
    return e.det_scale * e.swap_sign;
}

// Solves A x = b exactly.  Returns nullopt when inconsistent; when the system
// is underdetermined an arbitrary solution (free variables zero) is returned.
inline std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    RatMat aug = a;
    for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    Echelon e = echelon_form(std::move(aug));
    for (std::size_t pc : e.pivot_cols)
        if (pc == cols) return std::nullopt;  // pivot in the rhs column
    RatVec x(cols, Rat(0));
    for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
        std::size_t c = e.pivot_cols[k];
        Rat s = e.mat[k][cols];
        for (std::size_t j = c + 1; j < cols; ++j) s -= e.mat[k][j] * x[j];
        x[c] = s / e.mat[k][c];
    }
    return x;
}

// Basis of the null space {x : A x = 0}.
inline std::vector<RatVec> kernel_basis(const RatMat& a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    Echelon e = echelon_form(a);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t pc : e.pivot_cols) is_pivot[pc] = true;
    std::vector<RatVec> basis;
    for (std::size_t free_c = 0; free_c < cols; ++free_c) {
        if (is_pivot[free_c]) continue;
        RatVec v(cols, Rat(0));
        v[free_c] = 1;
        for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
            std::size_t c = e.pivot_cols[k];
            Rat s = 0;
            for (std::size_t j = c + 1; j < cols; ++j) s -= e.mat[k][j] * v[j];
            v[c] = s / e.mat[k][c];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace sparsolve

#endif  // SPARSOLVE_EXACT_LINALG_HPP
