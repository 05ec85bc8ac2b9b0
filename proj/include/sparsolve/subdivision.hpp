// Regular fine mixed subdivisions from random integer liftings, cell location
// by lower-envelope linear programs, and mixed volumes by enumerating the
// fully mixed cells.
//
// Everything that decides a result is exact rational: envelope duals, face
// tightness, cell volumes, and the per-leaf acceptance of mixed cells.  A
// floating-point relaxation is used only to steer the mixed-cell search; any
// verdict near zero falls back to the exact LP, so pruning errors would need
// a float error several orders of magnitude beyond the margin.

#ifndef SPARSOLVE_SUBDIVISION_HPP
#define SPARSOLVE_SUBDIVISION_HPP

#include "sparsolve/exact_linalg.hpp"
#include "sparsolve/polytope.hpp"
#include "sparsolve/simplex.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sparsolve {

// Lifting produced a tie (a cell of excess dimension or a zero certificate
// slack); the caller redraws the lifting with a fresh seed.
struct NonGenericLiftingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::int64_t kLiftRange = 1 << 16;

struct LiftedSupports {
    std::vector<std::vector<ExponentVec>> supports;  // deduped, sorted
    RatMat lifts;                                    // parallel to supports
    std::uint64_t seed = 0;
    std::size_t nvars = 0;

    std::size_t count() const { return supports.size(); }

    static LiftedSupports random_lifting(std::vector<std::vector<ExponentVec>> supports,
                                         std::uint64_t seed) {
        LiftedSupports ls;
        ls.seed = seed;
        ls.supports = normalize(std::move(supports));
        ls.nvars = ls.supports.empty() || ls.supports[0].empty() ? 0 : ls.supports[0][0].size();
        Rng rng(seed);
        for (const auto& a : ls.supports) {
            RatVec w(a.size());
            for (auto& v : w) v = Rat(rng.uniform_int(0, kLiftRange));
            ls.lifts.push_back(std::move(w));
        }
        return ls;
    }

    static LiftedSupports with_lifts(std::vector<std::vector<ExponentVec>> supports,
                                     RatMat lifts) {
        LiftedSupports ls;
        ls.supports = std::move(supports);  // caller controls order; no dedup
        ls.lifts = std::move(lifts);
        ls.nvars = ls.supports.empty() || ls.supports[0].empty() ? 0 : ls.supports[0][0].size();
        for (std::size_t i = 0; i < ls.supports.size(); ++i)
            if (ls.lifts.at(i).size() != ls.supports[i].size())
                throw std::invalid_argument("lift values do not match support size");
        return ls;
    }

    static std::vector<std::vector<ExponentVec>> normalize(
        std::vector<std::vector<ExponentVec>> supports) {
        for (auto& a : supports) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
            if (a.empty()) throw std::invalid_argument("empty support");
        }
        return supports;
    }
};

// Result of locating a point under the lifted lower envelope: the tight face
// of each support for the optimal dual functional gamma, with
//   F_i = argmin_a (w_i(a) - gamma . a),   beta_i = the minimum value.
struct EnvelopeFaces {
    std::vector<std::vector<std::size_t>> face_ids;  // indices into supports[i]
    RatVec gamma;
    RatVec beta;
    int type_sum = 0;   // sum of affine dimensions of the faces
    bool fine = false;  // type_sum == n and every face a simplex
};

namespace subdiv_detail {

inline int affine_dim(const std::vector<ExponentVec>& pts,
                      const std::vector<std::size_t>& ids) {
    if (ids.size() <= 1) return 0;
    RatMat diffs;
    for (std::size_t k = 1; k < ids.size(); ++k)
        diffs.push_back(pts[ids[k]].to_rat() - pts[ids[0]].to_rat());
    return static_cast<int>(rank(diffs));
}

}  // namespace subdiv_detail

// Locates x in the envelope subdivision of the Minkowski sum.  Returns
// nullopt when x is outside the sum.  For x interior to a cell the dual
// gamma is unique and the returned faces are that cell's summands; on a cell
// wall the face tuple is the (non-fine) union across the wall.
inline std::optional<EnvelopeFaces> locate_envelope(const LiftedSupports& ls, const RatVec& x) {
    const std::size_t m = ls.count();
    const std::size_t n = ls.nvars;
    std::size_t ncols = 0;
    for (const auto& a : ls.supports) ncols += a.size();

    LpProblem lp;
    lp.a = rat_mat(m + n, ncols);
    lp.b.assign(m + n, Rat(0));
    lp.row_type.assign(m + n, RowType::eq);
    lp.c.assign(ncols, Rat(0));
    std::size_t col = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < ls.supports[i].size(); ++k, ++col) {
            lp.a[i][col] = 1;
            for (std::size_t j = 0; j < n; ++j) lp.a[m + j][col] = Rat(ls.supports[i][k][j]);
            lp.c[col] = ls.lifts[i][k];
        }
        lp.b[i] = 1;
    }
    for (std::size_t j = 0; j < n; ++j) lp.b[m + j] = x[j];

    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::optimal) return std::nullopt;

    EnvelopeFaces out;
    out.beta.assign(sol.y.begin(), sol.y.begin() + m);
    out.gamma.assign(sol.y.begin() + m, sol.y.end());
    out.face_ids.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < ls.supports[i].size(); ++k) {
            Rat v = ls.lifts[i][k] - dot(out.gamma, ls.supports[i][k].to_rat());
            if (v == out.beta[i]) out.face_ids[i].push_back(k);
        }
        if (out.face_ids[i].empty())
            throw std::logic_error("envelope dual certifies no tight point");
    }
    out.type_sum = 0;
    bool simplicial = true;
    for (std::size_t i = 0; i < m; ++i) {
        int d = subdiv_detail::affine_dim(ls.supports[i], out.face_ids[i]);
        out.type_sum += d;
        if (d + 1 != static_cast<int>(out.face_ids[i].size())) simplicial = false;
    }
    out.fine = simplicial && out.type_sum == static_cast<int>(n);
    return out;
}

// A cell of the induced subdivision: one face per support whose Minkowski sum
// is the cell.
struct MixedCell {
    std::vector<std::vector<std::size_t>> face_ids;
    std::vector<std::vector<ExponentVec>> faces;
    std::vector<int> type;   // affine dimension per face summand
    RatVec gamma;
    Polytope poly;           // hull of the summed face points, full-dim in R^n
    Rat volume;

    bool fully_mixed() const {
        for (int d : type)
            if (d != 1) return false;
        return true;
    }

    std::vector<std::size_t> key() const {
        std::vector<std::size_t> k;
        for (const auto& ids : face_ids) {
            k.push_back(ids.size());
            k.insert(k.end(), ids.begin(), ids.end());
        }
        return k;
    }
};

class MixedSubdivision {
public:
    MixedSubdivision(std::vector<std::vector<ExponentVec>> supports, std::uint64_t seed)
        : ls_(LiftedSupports::random_lifting(std::move(supports), seed)) {}

    explicit MixedSubdivision(LiftedSupports ls) : ls_(std::move(ls)) {}

    const LiftedSupports& lifting() const { return ls_; }
    std::size_t nvars() const { return ls_.nvars; }

    const Polytope& sum_polytope() {
        if (sum_.dim < 0) sum_ = minkowski_sum_of_supports(ls_.supports);
        return sum_;
    }

    std::optional<EnvelopeFaces> locate(const RatVec& x) const { return locate_envelope(ls_, x); }

    // Builds the cell for a fine face tuple (hull of the summand points).
    MixedCell make_cell(const EnvelopeFaces& ef) const {
        if (!ef.fine)
            throw NonGenericLiftingError("cell of excess dimension (type sum " +
                                         std::to_string(ef.type_sum) + ")");
        MixedCell c;
        c.face_ids = ef.face_ids;
        c.gamma = ef.gamma;
        std::vector<RatVec> pts = {RatVec(ls_.nvars, Rat(0))};
        for (std::size_t i = 0; i < ls_.count(); ++i) {
            std::vector<ExponentVec> face;
            for (std::size_t k : ef.face_ids[i]) face.push_back(ls_.supports[i][k]);
            c.type.push_back(static_cast<int>(face.size()) - 1);
            std::vector<RatVec> next;
            next.reserve(pts.size() * face.size());
            for (const auto& p : pts)
                for (const auto& a : face) next.push_back(p + a.to_rat());
            pts = std::move(next);
            c.faces.push_back(std::move(face));
        }
        c.poly = convex_hull(std::move(pts));
        c.volume = c.poly.volume;
        if (!c.poly.full_dim()) throw std::logic_error("fine cell is not full-dimensional");
        return c;
    }

    // Full enumeration by crossing cell walls outward from an interior start
    // point.  Verifies fineness of every cell and that the volumes sum to the
    // volume of the Minkowski sum.  Intended for desk-scale instances; the
    // matrix construction itself only ever locates single points.
    const std::vector<MixedCell>& cells() {
        if (enumerated_) return cells_;
        const Polytope& q = sum_polytope();
        if (!q.full_dim())
            throw std::invalid_argument("supports do not jointly span R^n");

        Rng rng(ls_.seed ^ 0xc3a5c85c97cb3127ULL);
        std::map<std::vector<std::size_t>, bool> seen;
        std::deque<MixedCell> work;

        MixedCell first = make_cell(locate_interior(rng));
        seen[first.key()] = true;
        work.push_back(std::move(first));

        Rat total = 0;
        while (!work.empty()) {
            MixedCell cell = std::move(work.front());
            work.pop_front();
            total += cell.volume;

            for (const auto& facet : cell.poly.facets) {
                RatVec z(ls_.nvars, Rat(0));
                for (std::size_t id : facet.vertex_ids) z = z + cell.poly.vertices[id];
                for (auto& v : z) v /= Rat(facet.vertex_ids.size());

                std::optional<MixedCell> neighbor;
                Rat eps(1, 64);
                for (int shrink = 0; shrink < 16; ++shrink, eps /= 16) {
                    RatVec xs = z;
                    for (std::size_t j = 0; j < ls_.nvars; ++j)
                        xs[j] += eps * facet.normal[j];
                    if (q.side(xs) != 1) {
                        if (q.contains(xs)) continue;  // boundary graze, shrink
                        break;  // genuinely outside: boundary facet of Q
                    }
                    auto ef = locate(xs);
                    if (!ef) throw std::logic_error("interior point failed to locate");
                    if (!ef->fine) continue;  // still on a wall, shrink
                    MixedCell cand = make_cell(*ef);
                    if (cand.poly.side(xs) != 1) continue;
                    neighbor = std::move(cand);
                    break;
                }
                if (!neighbor) continue;
                auto k = neighbor->key();
                if (seen.emplace(std::move(k), true).second)
                    work.push_back(std::move(*neighbor));
            }
            cells_.push_back(std::move(cell));
        }

        if (total != q.volume)
            throw NonGenericLiftingError("subdivision volume mismatch: cells cover " +
                                         to_string(total) + " of " + to_string(q.volume));
        std::sort(cells_.begin(), cells_.end(),
                  [](const MixedCell& a, const MixedCell& b) { return a.key() < b.key(); });
        enumerated_ = true;
        return cells_;
    }

private:
    EnvelopeFaces locate_interior(Rng& rng) {
        for (int tries = 0; tries < 50; ++tries) {
            RatVec x(ls_.nvars, Rat(0));
            for (std::size_t i = 0; i < ls_.count(); ++i) {
                RatVec w(ls_.supports[i].size());
                Rat tot = 0;
                for (auto& v : w) {
                    v = Rat(rng.uniform_int(1, 1000));
                    tot += v;
                }
                for (std::size_t k = 0; k < w.size(); ++k) {
                    Rat lambda = w[k] / tot;
                    for (std::size_t j = 0; j < ls_.nvars; ++j)
                        x[j] += lambda * Rat(ls_.supports[i][k][j]);
                }
            }
            auto ef = locate(x);
            if (!ef) throw std::logic_error("interior sample outside the Minkowski sum");
            if (ef->fine) return *ef;
        }
        throw NonGenericLiftingError("no fine cell found from interior samples");
    }

    LiftedSupports ls_;
    Polytope sum_;
    std::vector<MixedCell> cells_;
    bool enumerated_ = false;
};

// Convenience entry matching the subdivision operation contract.
inline MixedSubdivision mixed_subdivision(std::vector<std::vector<ExponentVec>> supports,
                                          std::uint64_t seed) {
    return MixedSubdivision(std::move(supports), seed);
}

// ---------------------------------------------------------------------------
// Mixed cells of an n-support lifting, enumerated by depth-first search over
// edge tuples.  Each node fixes one lower edge per processed support; the
// node is viable iff some dual gamma makes all chosen edges tight while every
// other point of those supports stays strictly above (slack sigma > 0).

struct MixedCellLite {
    std::vector<std::array<std::size_t, 2>> edge_ids;  // per support, original order
    RatVec gamma;
    BigInt cell_volume;  // |det| of the edge direction matrix
};

namespace subdiv_detail {

// One reduced inequality: cons >= sigma + coef . t.
struct SlackRow {
    RatVec coef;
    Rat cons;
};

struct SearchStats {
    std::size_t nodes = 0;
    std::size_t float_lps = 0;
    std::size_t exact_lps = 0;
    std::size_t exact_leaves = 0;
};

#ifdef SPARSOLVE_SIGMA_CROSSCHECK
inline std::size_t g_sigma_mismatches = 0;
#endif

// Float value of sigma* = max sigma s.t. sigma + coef_r . t <= cons_r, via
// revised simplex on the dual (min cons.lambda, sum lambda = 1,
// sum lambda coef_r = 0, lambda >= 0), whose basis is only (q+1)-square.
// Returns 0 with *out = sigma*, 1 when sigma is unbounded above, 2 when the
// float arithmetic is inconclusive.
struct DualSigmaLp {
    // Column-major: col(j) = (coef_j[0..q), 1).
    std::vector<double> cols;
    std::size_t m = 0, q = 0;

    double col(std::size_t j, std::size_t i) const { return cols[j * (q + 1) + i]; }

    int solve(const std::vector<double>& cons, double* out) {
        const std::size_t d = q + 1;
        const double tol = 1e-9;
        std::vector<double> binv(d * d, 0.0);  // basis inverse, row-major
        std::vector<double> xb(d, 0.0);
        std::vector<std::size_t> basis(d);  // >= m: artificial (index - m)
        for (std::size_t i = 0; i < d; ++i) {
            binv[i * d + i] = 1.0;
            basis[i] = m + i;
        }
        xb[d - 1] = 1.0;  // rhs is e_last

        std::vector<double> y(d), dir(d);
        auto pivot_to = [&](std::size_t leave, std::size_t enter, double theta) {
            for (std::size_t i = 0; i < d; ++i) xb[i] -= theta * dir[i];
            xb[leave] = theta;
            double piv = dir[leave];
            for (std::size_t k = 0; k < d; ++k) binv[leave * d + k] /= piv;
            for (std::size_t i = 0; i < d; ++i) {
                if (i == leave || dir[i] == 0) continue;
                double f = dir[i];
                for (std::size_t k = 0; k < d; ++k) binv[i * d + k] -= f * binv[leave * d + k];
            }
            basis[leave] = enter;
        };
        for (int phase = 1; phase <= 2; ++phase) {
            for (int iter = 0;; ++iter) {
                if (iter > 400) return 2;
                // y = cB . Binv
                for (std::size_t k = 0; k < d; ++k) {
                    double s = 0;
                    for (std::size_t i = 0; i < d; ++i) {
                        double cb = phase == 1 ? (basis[i] >= m ? 1.0 : 0.0)
                                               : (basis[i] >= m ? 0.0 : cons[basis[i]]);
                        s += cb * binv[i * d + k];
                    }
                    y[k] = s;
                }
                // Price real columns; most negative reduced cost enters.
                std::size_t enter = m;
                double best = -tol;
                for (std::size_t j = 0; j < m; ++j) {
                    double cj = phase == 1 ? 0.0 : cons[j];
                    double red = cj;
                    for (std::size_t i = 0; i < d; ++i) red -= y[i] * col(j, i);
                    if (red < best) {
                        best = red;
                        enter = j;
                    }
                }
                if (enter == m) break;  // optimal for this phase
                for (std::size_t i = 0; i < d; ++i) {
                    double s = 0;
                    for (std::size_t k = 0; k < d; ++k) s += binv[i * d + k] * col(enter, k);
                    dir[i] = s;
                }
                std::size_t leave = d;
                double theta = 0;
                for (std::size_t i = 0; i < d; ++i) {
                    if (dir[i] <= tol) continue;
                    double ratio = xb[i] / dir[i];
                    if (leave == d || ratio < theta - 1e-12 ||
                        (ratio < theta + 1e-12 && basis[i] > basis[leave])) {
                        leave = i;  // prefer kicking artificials on ties
                        theta = ratio;
                    }
                }
                if (leave == d) return 2;  // dual unbounded: primal infeasible, distrust
                pivot_to(leave, enter, theta);
            }
            if (phase == 1) {
                double infeas = 0;
                for (std::size_t i = 0; i < d; ++i)
                    if (basis[i] >= m) infeas += xb[i];
                if (infeas > 1e-7) return 1;  // dual infeasible: sigma unbounded above
                // Drive leftover zero-level artificials out of the basis;
                // otherwise a phase-2 pivot can regrow them and leave the
                // feasible region.  A row with no usable real column is
                // redundant and its artificial stays pinned at zero.
                for (std::size_t i = 0; i < d; ++i) {
                    if (basis[i] < m) continue;
                    for (std::size_t j = 0; j < m; ++j) {
                        bool basic = false;
                        for (std::size_t k = 0; k < d; ++k) basic = basic || basis[k] == j;
                        if (basic) continue;
                        double s = 0;
                        for (std::size_t k = 0; k < d; ++k) s += binv[i * d + k] * col(j, k);
                        if (std::abs(s) < 1e-7) continue;
                        for (std::size_t r = 0; r < d; ++r) {
                            double t = 0;
                            for (std::size_t k = 0; k < d; ++k) t += binv[r * d + k] * col(j, k);
                            dir[r] = t;
                        }
                        pivot_to(i, j, xb[i] / dir[i]);
                        break;
                    }
                }
            }
        }
        double obj = 0;
        for (std::size_t i = 0; i < d; ++i) {
            if (basis[i] >= m) {
                if (std::abs(xb[i]) > 1e-7) return 2;  // artificial regrew: distrust
                continue;
            }
            obj += cons[basis[i]] * xb[i];
        }
        *out = obj;
        return 0;
    }
};

// Decides the sign of sigma* = max over (t, sigma) of sigma subject to the
// rows.  Returns +1 / -1 / 0 (exactly zero).  Exact when it matters: the
// float pass only returns a verdict outside a wide margin.
inline int sigma_sign(const std::vector<SlackRow>& rows, std::size_t tdim,
                      SearchStats* stats = nullptr) {
    if (rows.empty()) return 1;  // sigma unbounded above
    if (tdim == 0) {
        if (stats) ++stats->exact_leaves;
        Rat best = rows[0].cons;
        for (const auto& r : rows) best = std::min(best, r.cons);
        return best > 0 ? 1 : best < 0 ? -1 : 0;
    }
    if (stats) ++stats->float_lps;

    // Float steering pass.
    int float_verdict = 0;
    {
        const std::size_t m = rows.size();
        DualSigmaLp lp;
        lp.m = m;
        lp.q = tdim;
        lp.cols.resize(m * (tdim + 1));
        std::vector<double> cons(m);
        double scale = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < tdim; ++i)
                lp.cols[j * (tdim + 1) + i] = to_double(rows[j].coef[i]);
            lp.cols[j * (tdim + 1) + tdim] = 1.0;
            cons[j] = to_double(rows[j].cons);
            scale = std::max(scale, std::abs(cons[j]));
        }
        const double margin = 1e-7 * scale;
        double sigma = 0;
        int st = lp.solve(cons, &sigma);
        if (st == 1)
            float_verdict = 1;  // unbounded above
        else if (st == 0) {
            if (sigma > margin) float_verdict = 1;
            if (sigma < -margin) float_verdict = -1;
        }
    }
#ifndef SPARSOLVE_SIGMA_CROSSCHECK
    if (float_verdict != 0) return float_verdict;
#endif
    if (stats) ++stats->exact_lps;

    LpProblem lp;
    const std::size_t m = rows.size();
    lp.a = rat_mat(m, 1 + tdim);
    lp.b.resize(m);
    lp.row_type.assign(m, RowType::le);
    lp.c.assign(1 + tdim, Rat(0));
    lp.c[0] = 1;
    lp.free_var.assign(1 + tdim, true);
    lp.maximize = true;
    for (std::size_t i = 0; i < m; ++i) {
        lp.a[i][0] = 1;
        for (std::size_t j = 0; j < tdim; ++j) lp.a[i][1 + j] = rows[i].coef[j];
        lp.b[i] = rows[i].cons;
    }
    LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::unbounded) return 1;
    if (sol.status != LpStatus::optimal) throw std::logic_error("sigma LP cannot be infeasible");
    int exact_verdict = sol.objective > 0 ? 1 : sol.objective < 0 ? -1 : 0;
#ifdef SPARSOLVE_SIGMA_CROSSCHECK
    if (float_verdict != 0 && float_verdict != exact_verdict) ++g_sigma_mismatches;
#endif
    return exact_verdict;
}

// DFS state: gamma = gamma0 + N^T t parametrizes the duals satisfying all
// chosen edge equalities (N rows form the kernel frame).
struct MixedDfs {
    const LiftedSupports& ls;
    std::vector<std::size_t> order;                         // supports, smallest first
    std::vector<std::vector<std::array<std::size_t, 2>>> cand;  // viable edges per level
    std::vector<std::array<std::size_t, 2>> chosen;
    std::vector<MixedCellLite> out;
    SearchStats stats;

    explicit MixedDfs(const LiftedSupports& s) : ls(s) {}

    Rat lift(std::size_t i, std::size_t k) const { return ls.lifts[i][k]; }

    // Slack rows of support i relative to tight point a, in the frame
    // (gamma0, N):  w(c) - w(a) - gamma.(c - a) >= sigma.
    void add_rows(std::vector<SlackRow>& rows, std::size_t i, std::size_t a, std::size_t b,
                  const RatVec& gamma0, const RatMat& frame) const {
        for (std::size_t c = 0; c < ls.supports[i].size(); ++c) {
            if (c == a || c == b) continue;
            RatVec d = ls.supports[i][c].to_rat() - ls.supports[i][a].to_rat();
            SlackRow r;
            r.cons = lift(i, c) - lift(i, a) - dot(gamma0, d);
            r.coef.resize(frame.size());
            for (std::size_t j = 0; j < frame.size(); ++j) r.coef[j] = dot(frame[j], d);
            rows.push_back(std::move(r));
        }
    }

    // Substitution data for one tight-equality elimination in t-space.
    struct Elim {
        std::size_t pivot = SIZE_MAX;  // SIZE_MAX: no elimination happened
        RatVec ratio;                  // proj_j / proj_pivot, pivot slot unused
        Rat step;                      // target / proj_pivot
    };

    // Constrain the frame by the tight-equality of edge (a, b) of support i:
    // gamma . (b - a) = w(b) - w(a).  Returns nullopt when inconsistent.
    std::optional<Elim> constrain(std::size_t i, std::size_t a, std::size_t b, RatVec& gamma0,
                                  RatMat& frame) const {
        RatVec d = ls.supports[i][b].to_rat() - ls.supports[i][a].to_rat();
        Rat target = lift(i, b) - lift(i, a) - dot(gamma0, d);
        RatVec proj(frame.size());
        std::size_t pivot = frame.size();
        for (std::size_t j = 0; j < frame.size(); ++j) {
            proj[j] = dot(frame[j], d);
            if (pivot == frame.size() && proj[j] != 0) pivot = j;
        }
        if (pivot == frame.size()) {
            if (target != 0) return std::nullopt;  // inconsistent
            return Elim{};                         // direction already fixed
        }
        Elim e;
        e.pivot = pivot;
        e.step = target / proj[pivot];
        e.ratio.resize(frame.size());
        for (std::size_t j = 0; j < frame.size(); ++j)
            if (j != pivot) e.ratio[j] = proj[j] / proj[pivot];
        for (std::size_t j = 0; j < gamma0.size(); ++j) gamma0[j] += e.step * frame[pivot][j];
        RatMat next;
        for (std::size_t j = 0; j < frame.size(); ++j) {
            if (j == pivot) continue;
            RatVec v = frame[j];
            if (proj[j] != 0)
                for (std::size_t l = 0; l < v.size(); ++l) v[l] -= e.ratio[j] * frame[pivot][l];
            next.push_back(std::move(v));
        }
        frame = std::move(next);
        return e;
    }

    // Rewrites carried rows into the reduced frame after an elimination;
    // algebraically identical to rebuilding them against the new (gamma0,
    // frame) but O(q) per row instead of O(nq).
    static void substitute(std::vector<SlackRow>& rows, const Elim& e) {
        if (e.pivot == SIZE_MAX) return;
        for (auto& r : rows) {
            Rat cp = std::move(r.coef[e.pivot]);
            RatVec next;
            next.reserve(r.coef.size() - 1);
            for (std::size_t j = 0; j < r.coef.size(); ++j) {
                if (j == e.pivot) continue;
                if (cp != 0 && e.ratio[j] != 0)
                    next.push_back(r.coef[j] - cp * e.ratio[j]);
                else
                    next.push_back(std::move(r.coef[j]));
            }
            r.coef = std::move(next);
            if (cp != 0) r.cons -= cp * e.step;
        }
    }

    void run() {
        const std::size_t n = ls.nvars;
        order.resize(ls.count());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return ls.supports[a].size() < ls.supports[b].size();
        });

        // Per-support viable lower edges (the level-1 test applied alone).
        cand.resize(ls.count());
        RatVec zero(n, Rat(0));
        RatMat full;
        for (std::size_t j = 0; j < n; ++j) {
            RatVec e(n, Rat(0));
            e[j] = 1;
            full.push_back(std::move(e));
        }
        for (std::size_t lvl = 0; lvl < ls.count(); ++lvl) {
            std::size_t i = order[lvl];
            for (std::size_t a = 0; a < ls.supports[i].size(); ++a)
                for (std::size_t b = a + 1; b < ls.supports[i].size(); ++b) {
                    RatVec g0 = zero;
                    RatMat fr = full;
                    if (!constrain(i, a, b, g0, fr)) continue;
                    std::vector<SlackRow> rows;
                    add_rows(rows, i, a, b, g0, fr);
                    int s = sigma_sign(rows, fr.size(), &stats);
                    if (s == 0) throw NonGenericLiftingError("tie in single-support edge test");
                    if (s > 0) cand[lvl].push_back({a, b});
                }
        }

        chosen.assign(ls.count(), {0, 0});
        descend(0, zero, full, {});
    }

    void descend(std::size_t lvl, const RatVec& gamma0, const RatMat& frame,
                 const std::vector<SlackRow>& carried) {
        const std::size_t n = ls.nvars;
        std::size_t i = order[lvl];
        for (const auto& edge : cand[lvl]) {
            RatVec g0 = gamma0;
            RatMat fr = frame;
            auto elim = constrain(i, edge[0], edge[1], g0, fr);
            if (!elim) continue;
            if (lvl + 1 == ls.count() && !fr.empty()) continue;  // degenerate directions
            chosen[lvl] = edge;
            ++stats.nodes;

            std::vector<SlackRow> rows = carried;
            substitute(rows, *elim);
            add_rows(rows, i, edge[0], edge[1], g0, fr);
            int s = sigma_sign(rows, fr.size(), &stats);
            if (s == 0)
                throw NonGenericLiftingError("zero certificate slack in mixed-cell search");
            if (s < 0) continue;

            if (lvl + 1 < ls.count()) {
                descend(lvl + 1, g0, fr, rows);
                continue;
            }
            // Leaf: gamma fully determined and strictly selecting the edges.
            RatMat dirs = rat_mat(n, n);
            for (std::size_t l = 0; l < ls.count(); ++l) {
                std::size_t si = order[l];
                RatVec d = ls.supports[si][chosen[l][1]].to_rat() -
                           ls.supports[si][chosen[l][0]].to_rat();
                dirs[l] = std::move(d);
            }
            Rat det = determinant(dirs);
            if (det == 0) continue;  // volume-free face, not a mixed cell
            MixedCellLite cell;
            cell.edge_ids.resize(ls.count());
            for (std::size_t l = 0; l < ls.count(); ++l) cell.edge_ids[order[l]] = chosen[l];
            cell.gamma = g0;
            cell.cell_volume = numerator(det < 0 ? -det : det);
            if (denominator(det) != 1)
                throw std::logic_error("integer edge determinant is fractional");
            out.push_back(std::move(cell));
        }
    }
};

}  // namespace subdiv_detail

// All fully mixed (type (1,...,1)) cells of the induced subdivision.
inline std::vector<MixedCellLite> enumerate_mixed_cells(const LiftedSupports& ls) {
    if (ls.count() != ls.nvars)
        throw std::invalid_argument("mixed cells need exactly n supports in n variables");
    subdiv_detail::MixedDfs dfs(ls);
    dfs.run();
    std::sort(dfs.out.begin(), dfs.out.end(),
              [](const MixedCellLite& a, const MixedCellLite& b) {
                  return a.edge_ids < b.edge_ids;
              });
    return dfs.out;
}

constexpr std::uint64_t kDefaultLiftSeed = 0x5ee6d1feULL;

// Lattice mixed volume MV(Q_1,...,Q_n), normalized so that n identical
// bodies give n! Vol.  Two independent liftings are required to agree;
// degenerate liftings are redrawn, at most ten rounds.
inline std::int64_t mixed_volume(const std::vector<std::vector<ExponentVec>>& supports,
                                 std::uint64_t seed = kDefaultLiftSeed) {
    if (supports.empty()) throw std::invalid_argument("mixed volume of an empty system");
    auto norm = LiftedSupports::normalize(supports);
    const std::size_t n = norm[0][0].size();
    if (norm.size() != n)
        throw std::invalid_argument("mixed volume needs exactly n supports in n variables");

    Rng rng(seed);
    auto one = [&](std::uint64_t s) {
        BigInt mv = 0;
        for (const auto& cell : enumerate_mixed_cells(LiftedSupports::random_lifting(norm, s)))
            mv += cell.cell_volume;
        return static_cast<std::int64_t>(mv);
    };
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::uint64_t sa = rng.raw(), sb = rng.raw();
        try {
            std::int64_t va = one(sa);
            std::int64_t vb = one(sb);
            if (va == vb) return va;
        } catch (const NonGenericLiftingError&) {
            continue;  // redraw both liftings
        }
    }
    throw NonGenericLiftingError("mixed volume liftings failed to agree after 10 rounds");
}

// Independent oracle: inclusion-exclusion over Minkowski-sum volumes,
//   MV = sum over nonempty S of (-1)^(n-|S|) Vol(sum of Q_i, i in S).
// Plain Lebesgue volumes; the alternating sum is an exact integer.
inline std::int64_t mixed_volume_ie(const std::vector<std::vector<ExponentVec>>& supports) {
    const std::size_t n = supports.size();
    if (n == 0 || supports[0].empty() || supports[0][0].size() != n)
        throw std::invalid_argument("inclusion-exclusion needs n supports in n variables");
    // Repeated supports make many subsets share a volume; dedupe by class.
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        cls[i] = i;
        for (std::size_t j = 0; j < i; ++j)
            if (supports[j] == supports[i]) {
                cls[i] = j;
                break;
            }
    }
    std::map<std::vector<std::size_t>, Rat> memo;
    Rat total = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> key;
        std::vector<std::vector<ExponentVec>> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) {
                key.push_back(cls[i]);
                subset.push_back(supports[i]);
            }
        std::sort(key.begin(), key.end());
        auto it = memo.find(key);
        Rat vol = it != memo.end() ? it->second : minkowski_sum_of_supports(subset).volume;
        if (it == memo.end()) memo.emplace(std::move(key), vol);
        total += ((n - subset.size()) % 2 == 0) ? vol : -vol;
    }
    if (denominator(total) != 1)
        throw std::logic_error("inclusion-exclusion sum is not an integer");
    return static_cast<std::int64_t>(numerator(total));
}

// Root count bound over C^n (affine roots, with multiplicity): the mixed
// volume after adjoining the origin to every support.
inline std::int64_t stable_mixed_volume(const std::vector<std::vector<ExponentVec>>& supports,
                                        std::uint64_t seed = kDefaultLiftSeed) {
    std::vector<std::vector<ExponentVec>> aug = supports;
    for (auto& a : aug) {
        if (a.empty()) throw std::invalid_argument("empty support");
        a.push_back(ExponentVec(a[0].size()));
    }
    return mixed_volume(aug, seed);
}

}  // namespace sparsolve

#endif  // SPARSOLVE_SUBDIVISION_HPP
