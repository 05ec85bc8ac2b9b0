// Exact rational linear programming: dense two-phase simplex with Bland's
// anti-cycling rule.  Problem sizes here are tiny (tens of rows, at most a
// few hundred columns), so a plain tableau over Rat is both robust and fast
// enough; exactness is what matters, since every lower-envelope and
// mixed-cell query reduces to one of these programs.

#ifndef SPARSOLVE_SIMPLEX_HPP
#define SPARSOLVE_SIMPLEX_HPP

#include "sparsolve/exact_linalg.hpp"
#include "sparsolve/rational.hpp"

#include <cassert>
#include <cstddef>
#include <vector>

namespace sparsolve {

enum class RowType { eq, ge, le };

struct LpProblem {
    RatMat a;                        // one row per constraint
    RatVec b;
    std::vector<RowType> row_type;
    RatVec c;                        // objective coefficients
    std::vector<bool> free_var;     // default: x >= 0
    bool maximize = false;

    std::size_t rows() const { return a.size(); }
    std::size_t cols() const { return a.empty() ? c.size() : a[0].size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    RatVec x;         // primal values of the original variables
    RatVec y;         // dual value per constraint row (optimal only)
    Rat objective;    // in the original orientation
};

namespace lp_detail {

class Tableau {
public:
    // Standardized data: min cost . z, rows . z = rhs, z >= 0.
    RatMat rows;
    RatVec rhs;
    RatVec cost;
    std::vector<std::size_t> basis;   // basic column per row
    std::size_t ncols = 0;

    void price_out_cost() {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Rat& cb = cost_full[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < ncols; ++j) cost[j] -= cb * rows[i][j];
            obj_shift += cb * rhs[i];
        }
    }

    void set_cost(const RatVec& full) {
        cost_full = full;
        cost = full;
        obj_shift = 0;
        price_out_cost();
    }

    Rat objective() const { return obj_shift; }

    void pivot(std::size_t r, std::size_t j) {
        Rat p = rows[r][j];
        for (std::size_t k = 0; k < ncols; ++k) rows[r][k] /= p;
        rhs[r] /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][j] == 0) continue;
            Rat f = rows[i][j];
            for (std::size_t k = 0; k < ncols; ++k) rows[i][k] -= f * rows[r][k];
            rhs[i] -= f * rhs[r];
        }
        if (cost[j] != 0) {
            Rat f = cost[j];
            for (std::size_t k = 0; k < ncols; ++k) cost[k] -= f * rows[r][k];
            obj_shift += f * rhs[r];
        }
        basis[r] = j;
    }

    // Bland: entering = smallest eligible column index, leaving = smallest
    // basic index among ratio-test ties.  Returns false when optimal,
    // throws(status) unbounded via flag.
    bool step(const std::vector<bool>& enterable, bool& unbounded) {
        unbounded = false;
        for (std::size_t j = 0; j < ncols; ++j) {
            if (!enterable[j] || cost[j] >= 0) continue;
            std::size_t best_row = rows.size();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][j] <= 0) continue;
                if (best_row == rows.size()) {
                    best_row = i;
                    continue;
                }
                Rat cur = rhs[i] * rows[best_row][j];
                Rat best = rhs[best_row] * rows[i][j];
                if (cur < best || (cur == best && basis[i] < basis[best_row])) best_row = i;
            }
            if (best_row == rows.size()) {
                unbounded = true;
                return false;
            }
            pivot(best_row, j);
            return true;
        }
        return false;
    }

private:
    RatVec cost_full;
    Rat obj_shift = 0;
};

}  // namespace lp_detail

inline LpSolution lp_solve(const LpProblem& prob) {
    using lp_detail::Tableau;
    const std::size_t m = prob.rows();
    const std::size_t n = prob.cols();
    assert(prob.b.size() == m && prob.row_type.size() == m && prob.c.size() == n);

    // Column layout: for each original variable one column (plus a negated
    // twin when free), then slack/surplus columns, then artificials.
    std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
    std::size_t nc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        pos_col[j] = nc++;
        if (j < prob.free_var.size() && prob.free_var[j]) neg_col[j] = nc++;
    }
    std::vector<std::size_t> slack_col(m, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i)
        if (prob.row_type[i] != RowType::eq) slack_col[i] = nc++;
    std::size_t art_begin = nc;
    nc += m;

    Tableau t;
    t.ncols = nc;
    t.rows = rat_mat(m, nc);
    t.rhs = prob.b;
    t.basis.resize(m);
    RatVec std_cost(nc, Rat(0));
    for (std::size_t j = 0; j < n; ++j) {
        Rat cj = prob.maximize ? Rat(-prob.c[j]) : prob.c[j];
        std_cost[pos_col[j]] = cj;
        if (neg_col[j] != SIZE_MAX) std_cost[neg_col[j]] = -cj;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Rat& v = prob.a[i][j];
            if (v == 0) continue;
            t.rows[i][pos_col[j]] = v;
            if (neg_col[j] != SIZE_MAX) t.rows[i][neg_col[j]] = -v;
        }
        if (slack_col[i] != SIZE_MAX)
            t.rows[i][slack_col[i]] = prob.row_type[i] == RowType::le ? 1 : -1;
        if (t.rhs[i] < 0) {
            for (std::size_t j = 0; j < nc; ++j) t.rows[i][j] = -t.rows[i][j];
            t.rhs[i] = -t.rhs[i];
        }
        t.rows[i][art_begin + i] = 1;
        t.basis[i] = art_begin + i;
    }

    LpSolution sol;

    // Phase 1: minimize the artificial sum.
    {
        RatVec phase1(nc, Rat(0));
        for (std::size_t i = 0; i < m; ++i) phase1[art_begin + i] = 1;
        t.set_cost(phase1);
        std::vector<bool> enterable(nc, true);
        bool unbounded = false;
        while (t.step(enterable, unbounded)) {}
        assert(!unbounded);
        if (t.objective() != 0) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
        // Pivot leftover artificials out of the basis when possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (t.basis[i] < art_begin) continue;
            for (std::size_t j = 0; j < art_begin; ++j)
                if (t.rows[i][j] != 0) {
                    t.pivot(i, j);
                    break;
                }
        }
    }

    // Phase 2 with the real objective; artificial columns are frozen.
    {
        t.set_cost(std_cost);
        std::vector<bool> enterable(nc, true);
        for (std::size_t j = art_begin; j < nc; ++j) enterable[j] = false;
        bool unbounded = false;
        while (t.step(enterable, unbounded)) {}
        if (unbounded) {
            sol.status = LpStatus::unbounded;
            return sol;
        }
    }

    sol.status = LpStatus::optimal;
    sol.x.assign(n, Rat(0));
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t bj = t.basis[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (bj == pos_col[j]) sol.x[j] += t.rhs[i];
            if (bj == neg_col[j]) sol.x[j] -= t.rhs[i];
        }
    }
    Rat obj = 0;
    for (std::size_t j = 0; j < n; ++j) obj += prob.c[j] * sol.x[j];
    sol.objective = obj;

    // Duals from the final basis: solve B^T y = c_B over the original
    // (pre-sign-flip) columns, so flip the rhs rows we negated back.
    {
        RatMat bt = rat_mat(m, m);
        RatVec cb(m, Rat(0));
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t bj = t.basis[i];
            cb[i] = std_cost[bj];
            for (std::size_t r = 0; r < m; ++r) {
                Rat v = 0;
                if (bj < art_begin) {
                    for (std::size_t j = 0; j < n; ++j) {
                        if (bj == pos_col[j]) v = prob.a[r][j];
                        if (bj == neg_col[j]) v = -prob.a[r][j];
                    }
                    if (bj == slack_col[r]) v = prob.row_type[r] == RowType::le ? 1 : -1;
                } else if (bj == art_begin + r) {
                    v = prob.b[r] < 0 ? -1 : 1;
                }
                bt[i][r] = v;
            }
        }
        auto y = solve_linear(bt, cb);
        assert(y.has_value());
        sol.y = *y;
        if (prob.maximize)
            for (auto& v : sol.y) v = -v;
    }
    return sol;
}

// Convenience: is the polyhedron {x : rows} nonempty?
inline bool lp_feasible(const LpProblem& prob) {
    LpProblem p = prob;
    p.c.assign(p.cols(), Rat(0));
    return lp_solve(p).status == LpStatus::optimal;
}

}  // namespace sparsolve

#endif  // SPARSOLVE_SIMPLEX_HPP
