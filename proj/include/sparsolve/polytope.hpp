// Exact convex geometry: incremental hulls with merged facet description,
// volumes by coning over the boundary triangulation, Minkowski sums, and
// lattice point enumeration for shifted sums.
//
// Hulls handle fully degenerate input (repeated, collinear, coplanar points,
// lower-dimensional point sets) by reducing to the affine hull first and by
// using only strict visibility predicates, which keeps every newly created
// boundary simplex nondegenerate.

#ifndef SPARSOLVE_POLYTOPE_HPP
#define SPARSOLVE_POLYTOPE_HPP

#include "sparsolve/exact_linalg.hpp"
#include "sparsolve/exponent.hpp"
#include "sparsolve/rational.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparsolve {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a lattice point lands exactly on a facet of the shifted sum,
// i.e. the perturbation failed to be generic and must be redrawn.
struct DegenerateDeltaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::size_t kMaxHullDim = 8;

struct Facet {
    RatVec normal;                      // outward: normal . x <= offset inside
    Rat offset;
    std::vector<std::size_t> vertex_ids;
};

struct Polytope {
    std::size_t ambient = 0;
    int dim = -1;                       // affine dimension, -1 for empty
    std::vector<RatVec> vertices;       // irredundant
    std::vector<Facet> facets;          // merged facets (empty when dim <= 0)
    RatMat equations;                   // rows (a_1..a_n, b): affine hull a.x = b
    Rat volume = 0;                     // ambient-dimensional volume

    bool full_dim() const { return dim == static_cast<int>(ambient); }

    // Closed membership.  Exact: distinguishes boundary from interior.
    bool contains(const RatVec& x) const {
        if (dim < 0) return false;
        if (dim == 0) return x == vertices[0];
        for (const auto& eq : equations) {
            Rat s = -eq[ambient];
            for (std::size_t i = 0; i < ambient; ++i) s += eq[i] * x[i];
            if (s != 0) return false;
        }
        for (const auto& f : facets)
            if (dot(f.normal, x) > f.offset) return false;
        return true;
    }

    // +1 strictly inside (relative to full dimension), 0 on the boundary,
    // -1 outside.  Only meaningful for full-dimensional polytopes.
    int side(const RatVec& x) const {
        bool boundary = false;
        for (const auto& f : facets) {
            Rat s = dot(f.normal, x) - f.offset;
            if (s > 0) return -1;
            if (s == 0) boundary = true;
        }
        return boundary ? 0 : 1;
    }
};

namespace hull_detail {

struct SimpFacet {
    std::vector<std::size_t> verts;     // d affinely independent point ids
    RatVec normal;                      // in subspace coordinates
    Rat offset;
    bool alive = true;
};

// Hyperplane through d points of R^d: returns (normal, offset); the points
// are affinely independent by construction, which is enforced here.
inline std::pair<RatVec, Rat> hyperplane(const std::vector<RatVec>& pts,
                                         const std::vector<std::size_t>& ids) {
    const std::size_t d = pts[ids[0]].size();
    if (d == 1) return {RatVec{Rat(1)}, pts[ids[0]][0]};
    RatMat diff = rat_mat(d - 1, d);
    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
        for (std::size_t j = 0; j < d; ++j)
            diff[i][j] = pts[ids[i + 1]][j] - pts[ids[0]][j];
    auto ker = kernel_basis(diff);
    if (ker.size() != 1)
        throw std::logic_error("hull facet points do not span a hyperplane");
    return {ker[0], dot(ker[0], pts[ids[0]])};
}

}  // namespace hull_detail

// Convex hull with irredundant vertices, merged facet inequalities and exact
// volume.  Points may repeat and may be lower dimensional.
inline Polytope convex_hull(std::vector<RatVec> pts) {
    using hull_detail::SimpFacet;
    Polytope out;
    if (pts.empty()) return out;
    out.ambient = pts[0].size();
    if (out.ambient > kMaxHullDim)
        throw DimensionError("convex_hull supports at most " + std::to_string(kMaxHullDim) +
                             " dimensions");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // Affine hull: origin plus a maximal independent set of differences.
    const RatVec& origin = pts[0];
    std::vector<std::size_t> frame{0};
    RatMat dirs;  // rows: independent directions
    for (std::size_t i = 1; i < pts.size(); ++i) {
        RatMat trial = dirs;
        trial.push_back(pts[i] - origin);
        if (rank(trial) == trial.size()) {
            dirs = std::move(trial);
            frame.push_back(i);
        }
    }
    const std::size_t d = dirs.size();
    out.dim = static_cast<int>(d);

    // Affine-hull equations: kernel of the direction span.
    {
        RatMat m = dirs.empty() ? rat_mat(1, out.ambient) : dirs;
        for (const auto& v : kernel_basis(m)) {
            RatVec eq = v;
            eq.push_back(dot(v, origin));
            out.equations.push_back(std::move(eq));
        }
    }

    if (d == 0) {
        out.vertices = {origin};
        out.volume = out.ambient == 0 ? Rat(1) : Rat(0);
        return out;
    }

    // Subspace coordinates: x = origin + U^T s with U rows = dirs; s solves
    // the Gram system (exact since rows are independent).
    RatMat gram = rat_mat(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) gram[i][j] = dot(dirs[i], dirs[j]);
    std::vector<RatVec> coord(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        RatVec rhs(d);
        RatVec v = pts[i] - origin;
        for (std::size_t j = 0; j < d; ++j) rhs[j] = dot(dirs[j], v);
        auto s = solve_linear(gram, rhs);
        if (!s) throw std::logic_error("affine coordinate solve failed");
        coord[i] = *s;
    }

    // Initial simplex from the frame points; interior reference point c0.
    RatVec c0(d, Rat(0));
    for (std::size_t id : frame)
        for (std::size_t j = 0; j < d; ++j) c0[j] += coord[id][j];
    for (auto& v : c0) v /= Rat(frame.size());

    std::vector<SimpFacet> facets;
    auto make_facet = [&](std::vector<std::size_t> ids) {
        auto [n, b] = hull_detail::hyperplane(coord, ids);
        if (dot(n, c0) > b) {
            for (auto& v : n) v = -v;
            b = -b;
        }
        if (dot(n, c0) == b)
            throw std::logic_error("hull reference point on a facet hyperplane");
        facets.push_back(SimpFacet{std::move(ids), std::move(n), std::move(b), true});
    };
    for (std::size_t skip = 0; skip < frame.size(); ++skip) {
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < frame.size(); ++i)
            if (i != skip) ids.push_back(frame[i]);
        make_facet(std::move(ids));
    }

    // Beneath-beyond insertion with strict visibility.
    std::set<std::size_t> in_frame(frame.begin(), frame.end());
    for (std::size_t p = 0; p < pts.size(); ++p) {
        if (in_frame.count(p)) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < facets.size(); ++f)
            if (facets[f].alive && dot(facets[f].normal, coord[p]) > facets[f].offset)
                visible.push_back(f);
        if (visible.empty()) continue;  // inside or on the boundary

        // Horizon = ridges covered exactly once by the visible region.
        std::map<std::vector<std::size_t>, int> ridge_count;
        for (std::size_t f : visible) {
            const auto& vs = facets[f].verts;
            for (std::size_t skip = 0; skip < vs.size(); ++skip) {
                std::vector<std::size_t> ridge;
                for (std::size_t i = 0; i < vs.size(); ++i)
                    if (i != skip) ridge.push_back(vs[i]);
                std::sort(ridge.begin(), ridge.end());
                ++ridge_count[ridge];
            }
        }
        for (std::size_t f : visible) facets[f].alive = false;
        for (const auto& [ridge, count] : ridge_count) {
            if (count != 1) continue;
            std::vector<std::size_t> ids = ridge;
            ids.push_back(p);
            make_facet(std::move(ids));
        }
    }

    // Merge boundary simplices into true facets keyed by their hyperplane in
    // primitive integer form.
    std::map<std::vector<BigInt>, std::vector<std::size_t>> groups;
    for (std::size_t f = 0; f < facets.size(); ++f) {
        if (!facets[f].alive) continue;
        RatVec v = facets[f].normal;
        v.push_back(facets[f].offset);
        BigInt lcm = 1;
        for (const auto& r : v) lcm = boost::multiprecision::lcm(lcm, denominator(r));
        std::vector<BigInt> key(v.size());
        BigInt g = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            key[i] = numerator(v[i]) * (lcm / denominator(v[i]));
            g = boost::multiprecision::gcd(g, key[i]);
        }
        for (auto& k : key) k /= g;
        groups[key].push_back(f);
    }

    // Vertex filter: a point on the boundary is a vertex iff its tight facet
    // normals span the full subspace.
    std::map<std::size_t, std::vector<const std::vector<BigInt>*>> tight;
    for (const auto& [key, members] : groups)
        for (std::size_t f : members)
            for (std::size_t id : facets[f].verts) {
                auto& lst = tight[id];
                if (lst.empty() || lst.back() != &key) lst.push_back(&key);
            }
    std::vector<std::size_t> vert_ids;
    std::map<std::size_t, std::size_t> remap;
    for (auto& [id, keys] : tight) {
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        RatMat normals;
        for (const auto* k : keys) {
            RatVec n(d);
            for (std::size_t j = 0; j < d; ++j) n[j] = Rat((*k)[j]);
            normals.push_back(std::move(n));
        }
        if (rank(normals) == d) {
            remap[id] = vert_ids.size();
            vert_ids.push_back(id);
        }
    }
    for (std::size_t id : vert_ids) out.vertices.push_back(pts[id]);

    // Facets in ambient coordinates: normal a = dirs^T Gram^{-1} n so that the
    // subspace inequality transports to a . x <= b.
    for (const auto& [key, members] : groups) {
        Facet fa;
        RatVec n(d);
        for (std::size_t j = 0; j < d; ++j) n[j] = Rat(key[j]);
        auto g = solve_linear(gram, n);
        if (!g) throw std::logic_error("facet normal transport failed");
        fa.normal.assign(out.ambient, Rat(0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < out.ambient; ++j) fa.normal[j] += (*g)[i] * dirs[i][j];
        fa.offset = Rat(key[d]) + dot(fa.normal, origin);
        std::set<std::size_t> vs;
        for (std::size_t f : members)
            for (std::size_t id : facets[f].verts)
                if (remap.count(id)) vs.insert(remap[id]);
        fa.vertex_ids.assign(vs.begin(), vs.end());
        out.facets.push_back(std::move(fa));
    }

    // Volume by coning the boundary triangulation over c0.  The subspace
    // coordinate map x = origin + dirs^T s scales volume by |det(dirs)|, so
    // undo that to get the ambient Lebesgue volume.
    if (d == out.ambient) {
        Rat vol = 0;
        for (const auto& f : facets) {
            if (!f.alive) continue;
            RatMat m = rat_mat(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) m[i][j] = coord[f.verts[i]][j] - c0[j];
            Rat dv = determinant(m);
            vol += dv < 0 ? -dv : dv;
        }
        Rat scale = determinant(dirs);
        if (scale < 0) scale = -scale;
        BigInt fact = 1;
        for (std::size_t i = 2; i <= d; ++i) fact *= i;
        out.volume = vol * scale / Rat(fact);
    }
    return out;
}

inline std::vector<RatVec> to_rat_points(const std::vector<ExponentVec>& pts) {
    std::vector<RatVec> r;
    r.reserve(pts.size());
    for (const auto& p : pts) r.push_back(p.to_rat());
    return r;
}

// Hull of the pairwise vertex sums; the Minkowski sum of the convex hulls.
inline Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
    std::vector<RatVec> sums;
    sums.reserve(p.vertices.size() * q.vertices.size());
    for (const auto& a : p.vertices)
        for (const auto& b : q.vertices) sums.push_back(a + b);
    return convex_hull(std::move(sums));
}

// Minkowski sum of a family of point sets, reducing to vertices after each
// pairwise step so candidate counts stay small.
inline Polytope minkowski_sum_of_supports(const std::vector<std::vector<ExponentVec>>& supports) {
    assert(!supports.empty());
    Polytope acc = convex_hull(to_rat_points(supports[0]));
    for (std::size_t i = 1; i < supports.size(); ++i) {
        std::vector<RatVec> sums;
        auto next = to_rat_points(supports[i]);
        for (const auto& a : acc.vertices)
            for (const auto& b : next) sums.push_back(a + b);
        acc = convex_hull(std::move(sums));
    }
    return acc;
}

// Lattice points of Q + delta, i.e. integer p with p - delta in Q, tested
// exactly against the facet inequalities.  The perturbation must keep every
// lattice point off the boundary; an exact hit raises DegenerateDeltaError.
inline std::vector<ExponentVec> lattice_points(const Polytope& q, const RatVec& delta) {
    if (!q.full_dim())
        throw std::invalid_argument("lattice_points requires a full-dimensional polytope");
    const std::size_t n = q.ambient;
    std::vector<std::int64_t> lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
        Rat mn = q.vertices[0][j], mx = mn;
        for (const auto& v : q.vertices) {
            mn = std::min(mn, v[j]);
            mx = std::max(mx, v[j]);
        }
        lo[j] = static_cast<std::int64_t>(rat_ceil(mn + delta[j]));
        hi[j] = static_cast<std::int64_t>(rat_floor(mx + delta[j]));
    }
    std::vector<ExponentVec> out;
    ExponentVec p(n);
    std::vector<std::int64_t> cur(lo);
    while (true) {
        for (std::size_t j = 0; j < n; ++j) p[j] = static_cast<std::int32_t>(cur[j]);
        RatVec x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = Rat(cur[j]) - delta[j];
        bool inside = true;
        for (const auto& f : q.facets) {
            Rat s = dot(f.normal, x) - f.offset;
            if (s == 0)
                throw DegenerateDeltaError("lattice point " + p.str() +
                                           " lies exactly on a facet of the shifted sum");
            if (s > 0) {
                inside = false;
                break;
            }
        }
        if (inside) out.push_back(p);
        std::size_t j = 0;
        while (j < n && ++cur[j] > hi[j]) cur[j++] = lo[j];
        if (j == n) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace sparsolve

#endif  // SPARSOLVE_POLYTOPE_HPP
