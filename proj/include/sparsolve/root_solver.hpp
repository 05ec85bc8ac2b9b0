// Root-finding pipelines over the resultant matrix: block partitioning with
// a well-conditioned constant block, Schur-complement matrix polynomial,
// rank balancing, companion or pencil eigenproblem, coordinate recovery from
// eigenvectors, and residual-based candidate filtering.

#ifndef SPARSOLVE_ROOT_SOLVER_HPP
#define SPARSOLVE_ROOT_SOLVER_HPP

#include "sparsolve/linalg.hpp"
#include "sparsolve/matrix_polynomial.hpp"
#include "sparsolve/polynomial.hpp"
#include "sparsolve/resultant_matrix.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparsolve {

struct SolverOptions {
    std::uint64_t seed = kDefaultLiftSeed;  // matrix construction + random draws
    double pivot_rel = kDefaultPivotRel;    // LU stopping threshold (relative)
    double route_threshold = kConditionRouteThreshold;  // companion vs pencil
    double accept_tol = 1e-6;               // normalized residual acceptance
    double reject_tol = 1e-2;               // normalized residual rejection
    int moebius_trials = 4;                 // random transforms in rank balancing
    double cluster_rel = 1e-7;              // eigenvalue clustering tolerance
    std::int64_t u_range = 1LL << 20;       // adjoined-form coefficient range
};

// Resultant matrix permuted into blocks: a maximal well-conditioned constant
// leading block (M11), constant M21, and per-power slices of M12 and M22 in
// the hidden variable (or u).  Row/column order is the factorization's pivot
// order, so block solves against M11 need no further permutation.
struct PartitionedMatrix {
    std::size_t dim = 0;     // full matrix size
    std::size_t k = 0;       // M11 block size
    std::size_t pencil = 0;  // dim - k
    int degree = 0;          // max power of the hidden variable in the blocks
    bool u_mode = false;

    LuFactorization m11;  // leading k x k block factored, partition frame
    double kappa11 = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> row_order;  // partition position -> original row
    std::vector<std::size_t> col_order;  // partition position -> original column
    std::vector<ExponentVec> exponents;  // per partition column

    std::vector<DenseMatrix> m12;  // per power: k x pencil
    DenseMatrix m21;               // pencil x k (constant columns only)
    std::vector<DenseMatrix> m22;  // per power: pencil x pencil

    DenseCplxMatrix m12_at(const Cplx& x) const {
        DenseCplxMatrix s = DenseCplxMatrix::Zero(static_cast<Eigen::Index>(k),
                                                  static_cast<Eigen::Index>(pencil));
        Cplx xp(1.0, 0.0);
        for (const DenseMatrix& a : m12) {
            s += xp * a.cast<Cplx>();
            xp *= x;
        }
        return s;
    }
};

namespace solver_detail {

inline double real_coeff(const Coefficient& c, const char* who) {
    const Cplx v = c.value();
    if (v.imag() != 0.0)
        throw std::invalid_argument(std::string(who) + ": complex coefficients not supported");
    return v.real();
}

// Pads a matrix with zero columns to square so the threshold LU sees every
// row; zero columns can never be pivoted.
inline DenseMatrix pad_square(const DenseMatrix& a) {
    if (a.rows() == a.cols()) return a;
    if (a.rows() < a.cols()) throw std::invalid_argument("pad_square: wide input");
    DenseMatrix p = DenseMatrix::Zero(a.rows(), a.rows());
    if (a.cols() > 0) p.leftCols(a.cols()) = a;
    return p;
}

// Columns where some entry has positive degree in the hidden variable.
inline std::vector<char> variable_column_mask(const ResultantMatrix& m) {
    std::vector<char> hit(m.size(), 0);
    for (const auto& row : m.entries)
        for (const auto& [c, coeff] : row)
            if (coeff.degree() >= 1) hit[c] = 1;
    return hit;
}

}  // namespace solver_detail

// Permutes the matrix into the block form above.  Columns carrying the hidden
// variable (or u) form the right block; the constant block is factored with
// the threshold LU, and unpivoted rows/columns spill into the pencil.  In
// u-form the rows of the adjoined polynomial are forced to the bottom, paired
// diagonally with their u-columns, which makes the leading matrix-polynomial
// coefficient the identity on those positions.
inline PartitionedMatrix partition(const ResultantMatrix& m, AugmentedSystem::Kind kind,
                                   double pivot_rel = kDefaultPivotRel) {
    if (kind == AugmentedSystem::Kind::plain)
        throw std::invalid_argument("partition: plain matrices have no variable block");
    PartitionedMatrix p;
    p.dim = m.size();
    p.u_mode = kind == AugmentedSystem::Kind::u_form;
    if (p.dim == 0) throw std::invalid_argument("partition: empty matrix");

    const std::vector<char> is_var_col = solver_detail::variable_column_mask(m);
    std::vector<std::size_t> var_cols, const_cols;
    for (std::size_t c = 0; c < p.dim; ++c)
        (is_var_col[c] ? var_cols : const_cols).push_back(c);
    if (var_cols.empty())
        throw std::invalid_argument("partition: no entry depends on the hidden variable");

    std::vector<std::size_t> block_rows;  // candidate rows for M11, original ids
    std::vector<std::size_t> forced_bottom;
    if (p.u_mode) {
        // adjoined rows go to the bottom, ordered by their u-column so the
        // u entries land on the diagonal of the trailing block
        std::vector<std::pair<std::size_t, std::size_t>> urows;  // (u-col, row)
        for (std::size_t r = 0; r < p.dim; ++r) {
            if (m.rows[r].poly_index == 0)
                urows.emplace_back(m.column_of(m.rows[r].point - m.rows[r].vertex), r);
            else
                block_rows.push_back(r);
        }
        std::sort(urows.begin(), urows.end());
        if (urows.size() != var_cols.size())
            throw std::logic_error("partition: adjoined rows and u-columns disagree");
        for (const auto& [c, r] : urows) forced_bottom.push_back(r);
    } else {
        block_rows.resize(p.dim);
        std::iota(block_rows.begin(), block_rows.end(), 0);
    }

    // constant block: candidate rows x constant columns, degree-0 entries
    DenseMatrix z = DenseMatrix::Zero(static_cast<Eigen::Index>(block_rows.size()),
                                      static_cast<Eigen::Index>(const_cols.size()));
    std::vector<std::size_t> col_pos(p.dim, static_cast<std::size_t>(-1));
    for (std::size_t j = 0; j < const_cols.size(); ++j) col_pos[const_cols[j]] = j;
    for (std::size_t i = 0; i < block_rows.size(); ++i)
        for (const auto& [c, poly] : m.entries[block_rows[i]])
            if (col_pos[c] != static_cast<std::size_t>(-1) && poly.degree() >= 0)
                z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col_pos[c])) =
                    solver_detail::real_coeff(poly.coeff(0), "partition");

    p.m11 = lu_threshold(solver_detail::pad_square(z), pivot_rel);
    p.k = p.m11.block;
    p.pencil = p.dim - p.k;
    p.kappa11 = p.k == 0 ? std::numeric_limits<double>::infinity() : kappa_inf_estimate(p.m11);

    // partition order: pivot rows/cols first (the factorization's own order),
    // then spilled rows/columns, then the forced bottom rows / var columns
    p.row_order.reserve(p.dim);
    for (std::size_t i = 0; i < block_rows.size(); ++i)
        p.row_order.push_back(block_rows[p.m11.row_perm[i]]);
    for (std::size_t r : forced_bottom) p.row_order.push_back(r);

    p.col_order.reserve(p.dim);
    for (std::size_t j : p.m11.col_perm)
        if (j < const_cols.size()) p.col_order.push_back(const_cols[j]);
    for (std::size_t c : var_cols) p.col_order.push_back(c);
    if (p.col_order.size() != p.dim) throw std::logic_error("partition: column order incomplete");

    p.exponents.reserve(p.dim);
    for (std::size_t c : p.col_order) p.exponents.push_back(m.columns[c]);

    std::vector<std::size_t> inv_row(p.dim), inv_col(p.dim);
    for (std::size_t i = 0; i < p.dim; ++i) inv_row[p.row_order[i]] = i;
    for (std::size_t i = 0; i < p.dim; ++i) inv_col[p.col_order[i]] = i;

    p.degree = std::max(1, m.max_entry_degree());
    const auto kk = static_cast<Eigen::Index>(p.k);
    const auto pp = static_cast<Eigen::Index>(p.pencil);
    p.m12.assign(static_cast<std::size_t>(p.degree) + 1, DenseMatrix::Zero(kk, pp));
    p.m22.assign(static_cast<std::size_t>(p.degree) + 1, DenseMatrix::Zero(pp, pp));
    p.m21 = DenseMatrix::Zero(pp, kk);

    for (std::size_t r = 0; r < p.dim; ++r) {
        const auto ri = static_cast<Eigen::Index>(inv_row[r]);
        for (const auto& [c, poly] : m.entries[r]) {
            const auto ci = static_cast<Eigen::Index>(inv_col[c]);
            if (ri < kk && ci < kk) continue;  // inside the factored block
            for (int dpow = 0; dpow <= poly.degree(); ++dpow) {
                const double v = solver_detail::real_coeff(
                    poly.coeff(static_cast<std::size_t>(dpow)), "partition");
                if (v == 0.0) continue;
                if (ri < kk)
                    p.m12[static_cast<std::size_t>(dpow)](ri, ci - kk) = v;
                else if (ci < kk)
                    p.m21(ri - kk, ci) = v;  // constant column, power 0 only
                else
                    p.m22[static_cast<std::size_t>(dpow)](ri - kk, ci - kk) = v;
            }
        }
    }
    return p;
}

// M'(x) = M22(x) - M21 M11^-1 M12(x), expanded per power of x by solving
// M11 X_p = (M12)_p against the factored block.  An empty M11 leaves the
// whole matrix as the pencil.  Trailing zero coefficients are trimmed.
inline MatrixPoly form_matrix_polynomial(const PartitionedMatrix& p) {
    if (p.pencil == 0)
        throw std::invalid_argument("form_matrix_polynomial: nothing left outside M11");
    MatrixPoly a;
    a.coeffs.reserve(p.m22.size());
    for (std::size_t pow = 0; pow < p.m22.size(); ++pow) {
        if (p.k == 0 || p.m12[pow].cwiseAbs().maxCoeff() == 0.0) {
            a.coeffs.push_back(p.m22[pow]);
        } else {
            const DenseMatrix x = block_solve(p.m11, p.m12[pow]);
            a.coeffs.push_back(p.m22[pow] - p.m21 * x);
        }
    }
    while (a.coeffs.size() > 1 && a.coeffs.back().cwiseAbs().maxCoeff() == 0.0)
        a.coeffs.pop_back();
    return a;
}

struct RecoveryResult {
    std::vector<Cplx> coords;  // visible variables, in system order
    bool ok = false;
    bool used_extension = false;
    bool used_log_branch = false;  // non-principal-branch risk
    std::string note;
};

namespace solver_detail {

// Ratio search: for each variable find entries at exponents q and q + e_v,
// taking the pair whose denominator entry is largest in magnitude.
inline bool ratio_pass(const std::vector<ExponentVec>& exps, const std::vector<Cplx>& w,
                       std::vector<Cplx>& coords, std::vector<char>& found) {
    std::map<ExponentVec, std::size_t> index;
    for (std::size_t i = 0; i < exps.size(); ++i) index.emplace(exps[i], i);
    const std::size_t n = coords.size();
    bool all = true;
    for (std::size_t v = 0; v < n; ++v) {
        if (found[v]) continue;
        double best = 0.0;
        Cplx value(0.0, 0.0);
        for (std::size_t i = 0; i < exps.size(); ++i) {
            ExponentVec up = exps[i];
            up[v] += 1;
            const auto it = index.find(up);
            if (it == index.end()) continue;
            const double den = std::abs(w[i]);
            if (den > best) {
                best = den;
                value = w[it->second] / w[i];
            }
        }
        if (best > 0.0) {
            coords[v] = value;
            found[v] = 1;
        } else {
            all = false;
        }
    }
    return all;
}

}  // namespace solver_detail

// Coordinates of the candidate root from an eigenvector of the pencil block.
// Entry ratios at exponent pairs differing by a unit vector are tried first
// on the pencil columns, then on the full column set after extending the
// vector through M11 (w1 = -M11^-1 M12(x) w2), and as a last resort by
// solving an affine exponent system in logarithms.
inline RecoveryResult recover_coordinates(const CplxVector& v2, const PartitionedMatrix& p,
                                          const Cplx& x) {
    RecoveryResult out;
    const std::size_t n = p.exponents.empty() ? 0 : p.exponents[0].size();
    out.coords.assign(n, Cplx(0.0, 0.0));
    if (n == 0) {
        out.ok = true;
        return out;
    }
    if (static_cast<std::size_t>(v2.size()) != p.pencil)
        throw std::invalid_argument("recover_coordinates: eigenvector size mismatch");

    std::vector<char> found(n, 0);
    const std::vector<ExponentVec> pencil_exps(
        p.exponents.begin() + static_cast<std::ptrdiff_t>(p.k), p.exponents.end());
    std::vector<Cplx> w2(p.pencil);
    for (std::size_t i = 0; i < p.pencil; ++i) w2[i] = v2(static_cast<Eigen::Index>(i));
    if (solver_detail::ratio_pass(pencil_exps, w2, out.coords, found)) {
        out.ok = true;
        return out;
    }

    // extension through the constant block
    std::vector<Cplx> w(p.dim);
    if (p.k > 0) {
        out.used_extension = true;
        const Eigen::VectorXcd rhs = p.m12_at(x) * v2;
        const DenseMatrix xr = block_solve(p.m11, DenseMatrix(rhs.real()));
        const DenseMatrix xi = block_solve(p.m11, DenseMatrix(rhs.imag()));
        for (std::size_t i = 0; i < p.k; ++i)
            w[i] = -Cplx(xr(static_cast<Eigen::Index>(i), 0), xi(static_cast<Eigen::Index>(i), 0));
    }
    for (std::size_t i = 0; i < p.pencil; ++i) w[p.k + i] = w2[i];
    if (solver_detail::ratio_pass(p.exponents, w, out.coords, found)) {
        out.ok = true;
        return out;
    }

    // affine exponent system in logarithms; exponentials of the solution use
    // the principal branch, which is flagged, not hidden
    double wmax = 0.0;
    for (std::size_t i = 0; i < p.dim; ++i) wmax = std::max(wmax, std::abs(w[i]));
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < p.dim; ++i)
        if (std::abs(w[i]) > 1e-8 * wmax) usable.push_back(i);
    std::vector<std::size_t> chosen;
    DenseMatrix basis;
    for (std::size_t i : usable) {
        if (chosen.size() == n + 1) break;
        if (chosen.empty()) {
            chosen.push_back(i);
            continue;
        }
        DenseMatrix trial(static_cast<Eigen::Index>(chosen.size()), static_cast<Eigen::Index>(n));
        for (std::size_t rsel = 1; rsel < chosen.size(); ++rsel)
            for (std::size_t j = 0; j < n; ++j)
                trial(static_cast<Eigen::Index>(rsel - 1), static_cast<Eigen::Index>(j)) =
                    static_cast<double>(p.exponents[chosen[rsel]][j] - p.exponents[chosen[0]][j]);
        for (std::size_t j = 0; j < n; ++j)
            trial(static_cast<Eigen::Index>(chosen.size() - 1), static_cast<Eigen::Index>(j)) =
                static_cast<double>(p.exponents[i][j] - p.exponents[chosen[0]][j]);
        const DenseMatrix probe =
            trial.rows() >= trial.cols() ? trial : DenseMatrix(trial.transpose());
        if (lu_threshold(solver_detail::pad_square(probe), 1e-12).block ==
            static_cast<std::size_t>(std::min(trial.rows(), trial.cols()))) {
            chosen.push_back(i);
            if (chosen.size() == n + 1) basis = trial;
        }
    }
    if (chosen.size() != n + 1) {
        out.note = "column exponents do not affinely span the variable space";
        return out;
    }
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t j = 1; j <= n; ++j)
        rhs(static_cast<Eigen::Index>(j - 1)) = std::log(w[chosen[j]] / w[chosen[0]]);
    const LuFactorization fb = lu_threshold(basis, 1e-12);
    if (!fb.complete()) {
        out.note = "affine exponent basis is numerically singular";
        return out;
    }
    const SolveResult sr = solve(fb, DenseMatrix(rhs.real()));
    const SolveResult si = solve(fb, DenseMatrix(rhs.imag()));
    for (std::size_t j = 0; j < n; ++j)
        if (!found[j])
            out.coords[j] = std::exp(Cplx(sr.x(static_cast<Eigen::Index>(j), 0),
                                          si.x(static_cast<Eigen::Index>(j), 0)));
    out.used_log_branch = true;
    out.ok = true;
    return out;
}

struct RootCandidate {
    enum class Status {
        accepted,
        rejected,
        borderline,               // residual between accept_tol and reject_tol
        multiplicity_degenerate,  // clustered eigenvalue, recovery unreliable
        recovery_failed
    };

    std::vector<Cplx> coords;  // source-system variable order (hidden included)
    Cplx eigenvalue;           // hidden coordinate or u value (after pullback)
    Cplx alpha;                // pencil pair (beta = 1 on the companion route)
    double beta = 1.0;
    std::vector<double> residuals;  // normalized, per source polynomial
    double max_residual = std::numeric_limits<double>::infinity();
    Status status = Status::rejected;
    std::size_t cluster_size = 1;
    std::size_t cluster_rank = 1;
    bool used_extension = false;
    bool used_log_branch = false;
    double u_identity_error = std::numeric_limits<double>::quiet_NaN();

    bool accepted() const { return status == Status::accepted; }
};

inline const char* status_name(RootCandidate::Status s) {
    switch (s) {
        case RootCandidate::Status::accepted: return "accepted";
        case RootCandidate::Status::rejected: return "rejected";
        case RootCandidate::Status::borderline: return "borderline";
        case RootCandidate::Status::multiplicity_degenerate: return "multiplicity_degenerate";
        case RootCandidate::Status::recovery_failed: return "recovery_failed";
    }
    return "unknown";
}

struct SolveReport {
    std::string pipeline;  // "u" or "hide:<var>"
    std::size_t matrix_dim = 0;
    std::size_t block_dim = 0;   // M11 size
    std::size_t pencil_dim = 0;  // matrix polynomial size
    int poly_degree = 0;         // degree after trailing-zero trim
    double kappa11 = 0.0;
    double kappa_leading = 0.0;  // best conditioning of the leading coefficient
    std::string route;           // "companion" or "pencil"
    MoebiusTransform transform;  // identity unless rank balancing chose one
    std::size_t eigen_count = 0;
    std::size_t infinite_count = 0;   // dropped (alpha, 0) pencil pairs
    std::size_t pole_drop_count = 0;  // pullback hit the transform's pole
    double offline_seconds = 0.0;     // matrix construction through A(x) assembly
    double online_seconds = 0.0;      // eigendecomposition and root recovery
    std::vector<RootCandidate> candidates;
    std::vector<std::string> log;

    std::vector<RootCandidate> accepted() const {
        std::vector<RootCandidate> out;
        for (const RootCandidate& c : candidates)
            if (c.accepted()) out.push_back(c);
        return out;
    }

    std::size_t count(RootCandidate::Status s) const {
        std::size_t n = 0;
        for (const RootCandidate& c : candidates)
            if (c.status == s) ++n;
        return n;
    }
};

// Normalized residual of one polynomial at a point:
// |f(z)| / (1 + max|coeff| * max|monomial value|).  Scale-invariant in the
// coefficients and meaningful for points of any magnitude.
inline double normalized_residual(const LaurentPoly& f, const std::vector<Cplx>& z) {
    if (z.size() != f.nvars)
        throw std::invalid_argument("normalized_residual: wrong point dimension");
    Cplx value(0.0, 0.0);
    double coeff_norm = 0.0;
    double mono_norm = 0.0;
    for (const auto& [e, c] : f.terms) {
        Cplx mono(1.0, 0.0);
        for (std::size_t i = 0; i < f.nvars; ++i)
            if (e[i] != 0) mono *= std::pow(z[i], static_cast<double>(e[i]));
        const Cplx cv = c.value();
        value += cv * mono;
        coeff_norm = std::max(coeff_norm, std::abs(cv));
        mono_norm = std::max(mono_norm, std::abs(mono));
    }
    return std::abs(value) / (1.0 + coeff_norm * mono_norm);
}

inline std::vector<double> candidate_residuals(const PolySystem& source,
                                               const std::vector<Cplx>& point) {
    std::vector<double> out;
    out.reserve(source.polys.size());
    for (const auto& f : source.polys) out.push_back(normalized_residual(f, point));
    return out;
}

namespace solver_detail {

struct EigLists {
    std::vector<Cplx> alphas;
    std::vector<double> betas;
    std::vector<CplxVector> vectors;       // pencil-block subvector, unit norm
    std::vector<std::size_t> kernel_dims;  // numerical nullity at the eigenvalue (0 = unknown)
    std::size_t infinite_count = 0;
};

// Eigen decomposition of the matrix polynomial along the selected route.
// Companion vectors are block-structured and the block used for ratios is
// picked by eigenvalue magnitude.  The pencil route first strips the spectrum
// at infinity by orthogonal deflation (a QZ run on a pencil dominated by
// infinite eigenvalues stalls), runs the generalized decomposition on the
// finite part only, and takes each eigenvector as a null vector of the
// original polynomial evaluated at the eigenvalue.
inline EigLists eigen_candidates(const MatrixPoly& a, const std::string& route,
                                 double pivot_rel, std::vector<std::string>& log) {
    EigLists out;
    const std::size_t r = a.dim();
    const std::size_t d = static_cast<std::size_t>(a.degree());
    if (route == "companion") {
        const DenseMatrix c = companion(a, pivot_rel);
        for (const EigenPair& pr : eig(c)) {
            CplxVector v2 = companion_subvector(pr.vector, r, d, pr.value);
            const double nrm = v2.norm();
            if (nrm == 0.0) continue;
            out.alphas.push_back(pr.value);
            out.betas.push_back(1.0);
            out.vectors.push_back(v2 / nrm);
            out.kernel_dims.push_back(0);
        }
    } else {
        const auto [c1, c0] = pencil_linearization(a);
        const InfiniteDeflation def = deflate_infinite(c1, c0);
        out.infinite_count += def.removed;
        if (def.removed > 0)
            log.push_back("deflated " + std::to_string(def.removed) +
                          " infinite directions in " + std::to_string(def.layers) +
                          " layers; finite pencil dim " +
                          std::to_string(static_cast<std::size_t>(def.b1.rows())));
        if (def.b1.rows() == 0) {
            log.push_back("pencil spectrum is entirely infinite; no finite candidates");
            return out;
        }
        std::uint64_t probe = 0x6e756c6cULL;
        for (const GeneralizedEigenPair& pr : generalized_eig(def.b1, def.b0)) {
            if (pr.infinite()) {
                ++out.infinite_count;
                continue;
            }
            const Cplx y = pr.value();
            KernelVector kv = kernel_vector(a.eval(y), probe++);
            const double nrm = kv.v.norm();
            if (!std::isfinite(nrm) || nrm == 0.0) continue;
            out.alphas.push_back(pr.alpha);
            out.betas.push_back(pr.beta);
            out.vectors.push_back(kv.v / nrm);
            out.kernel_dims.push_back(kv.kernel_dim);
        }
        if (out.infinite_count > 0)
            log.push_back("dropped " + std::to_string(out.infinite_count) +
                          " infinite pencil directions");
    }
    return out;
}

// Groups indices whose values agree to within cluster_rel * (1 + |value|);
// greedy sweep in lexicographic (re, im) order.
inline std::vector<std::vector<std::size_t>> cluster_eigenvalues(const std::vector<Cplx>& vals,
                                                                 double cluster_rel) {
    std::vector<std::size_t> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (vals[a].real() != vals[b].real()) return vals[a].real() < vals[b].real();
        return vals[a].imag() < vals[b].imag();
    });
    std::vector<std::vector<std::size_t>> groups;
    std::vector<char> used(vals.size(), 0);
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t i = order[oi];
        if (used[i]) continue;
        std::vector<std::size_t> g{i};
        used[i] = 1;
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const std::size_t j = order[oj];
            if (used[j]) continue;
            if (std::abs(vals[j] - vals[i]) <= cluster_rel * (1.0 + std::abs(vals[i]))) {
                g.push_back(j);
                used[j] = 1;
            }
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

// Numerical rank of a cluster's eigenvector bundle (unit columns); rank > 1
// witnesses geometric multiplicity > 1.
inline std::size_t cluster_vector_rank(const std::vector<CplxVector>& vecs,
                                       const std::vector<std::size_t>& idx) {
    DenseCplxMatrix b(vecs[idx[0]].size(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
        b.col(static_cast<Eigen::Index>(j)) = vecs[idx[j]];
    Eigen::JacobiSVD<DenseCplxMatrix> svd(b);
    const auto& s = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-7 * s(0)) ++rank;
    return rank;
}

}  // namespace solver_detail

// Shared back end for both pipelines: partitions the matrix, forms the
// Schur-complement matrix polynomial, rank-balances, picks the companion or
// pencil route, recovers coordinates, and filters candidates by residual.
// `source` is the original well-constrained system, used for residuals.
inline SolveReport solve_pipeline(const PolySystem& source, const AugmentedSystem& sys,
                                  const ResultantMatrix& m, const SolverOptions& opt) {
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.pipeline =
        sys.kind == AugmentedSystem::Kind::u_form ? "u" : "hide:" + sys.hidden_name;
    rep.matrix_dim = m.size();

    const PartitionedMatrix part = partition(m, sys.kind, opt.pivot_rel);
    rep.block_dim = part.k;
    rep.pencil_dim = part.pencil;
    rep.kappa11 = part.kappa11;

    const MatrixPoly a = form_matrix_polynomial(part);
    rep.poly_degree = a.degree();
    const auto t_mid = std::chrono::steady_clock::now();
    rep.offline_seconds = std::chrono::duration<double>(t_mid - t_start).count();
    if (a.degree() == 0) {
        rep.log.push_back("matrix polynomial is constant; no finite candidates");
        return rep;
    }

    // route selection on the balanced leading coefficient; the pencil route
    // then uses the original, untransformed polynomial
    const RankBalanceResult rb = rank_balance(a, opt.moebius_trials, opt.seed ^ 0xba1a4ceULL);
    rep.kappa_leading = rb.kappa_leading;
    MatrixPoly routed;
    MoebiusTransform transform;
    if (rb.usable(opt.route_threshold)) {
        rep.route = "companion";
        routed = rb.balanced;
        transform = rb.transform;
        if (!transform.is_identity())
            rep.log.push_back("rank balancing chose transform (" + std::to_string(transform.t1) +
                              "," + std::to_string(transform.t2) + "," +
                              std::to_string(transform.t3) + "," + std::to_string(transform.t4) +
                              ")");
    } else {
        rep.route = "pencil";
        routed = a;  // transform stays the identity
        rep.log.push_back("leading coefficient ill-conditioned everywhere tried; pencil route");
    }
    rep.transform = transform;

    solver_detail::EigLists eigs =
        solver_detail::eigen_candidates(routed, rep.route, opt.pivot_rel, rep.log);
    rep.eigen_count = eigs.alphas.size() + eigs.infinite_count;
    rep.infinite_count = eigs.infinite_count;

    // pull eigenvalues back through the transform: x = (t1 y + t2)/(t3 y + t4)
    std::vector<Cplx> values;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < eigs.alphas.size(); ++i) {
        const Cplx y = eigs.alphas[i] / eigs.betas[i];  // finite by construction
        if (!transform.is_identity() && transform.pole_margin(y) < 1e-12) {
            ++rep.pole_drop_count;
            continue;
        }
        values.push_back(transform.is_identity() ? y : transform.apply(y));
        keep.push_back(i);
    }
    if (rep.pole_drop_count > 0)
        rep.log.push_back("dropped " + std::to_string(rep.pole_drop_count) +
                          " eigenvalues at the transform pole (hidden value at infinity)");

    const std::size_t n = sys.var_names.size();
    for (const std::vector<std::size_t>& group :
         solver_detail::cluster_eigenvalues(values, opt.cluster_rel)) {
        std::size_t g_rank = 1;
        if (group.size() > 1) {
            std::vector<std::size_t> src;
            for (std::size_t gi : group) src.push_back(keep[gi]);
            g_rank = solver_detail::cluster_vector_rank(eigs.vectors, src);
            // null-space dimension at the eigenvalue is a sharper multiplicity
            // witness than the vector bundle when vectors repeat
            for (std::size_t gi : group)
                g_rank = std::max(g_rank, eigs.kernel_dims[keep[gi]]);
        }
        for (std::size_t gi : group) {
            const std::size_t ei = keep[gi];
            RootCandidate cand;
            cand.eigenvalue = values[gi];
            cand.alpha = eigs.alphas[ei];
            cand.beta = eigs.betas[ei];
            cand.cluster_size = group.size();
            cand.cluster_rank = g_rank;

            if (group.size() > 1) {
                // repeated eigenvalue: the eigenvector entries mix the root
                // space of the cluster, so coordinates are untrustworthy
                cand.status = RootCandidate::Status::multiplicity_degenerate;
                rep.candidates.push_back(std::move(cand));
                continue;
            }

            const RecoveryResult rec = recover_coordinates(eigs.vectors[ei], part, values[gi]);
            cand.used_extension = rec.used_extension;
            cand.used_log_branch = rec.used_log_branch;
            if (!rec.ok) {
                cand.status = RootCandidate::Status::recovery_failed;
                if (!rec.note.empty()) rep.log.push_back("recovery failed: " + rec.note);
                rep.candidates.push_back(std::move(cand));
                continue;
            }

            // assemble the source-system point
            std::vector<Cplx> full_point;
            if (sys.kind == AugmentedSystem::Kind::u_form) {
                full_point = rec.coords;
                // adjoined linear form ties the u value to the coordinates
                Cplx acc = values[gi];
                for (std::size_t j = 0; j < sys.u_coeffs.size(); ++j)
                    acc += to_double(sys.u_coeffs[j]) * rec.coords[j];
                cand.u_identity_error = std::abs(acc) / (1.0 + std::abs(values[gi]));
            } else {
                const auto hidden_at = static_cast<std::size_t>(sys.hidden_source_index);
                full_point.reserve(n + 1);
                std::size_t vi = 0;
                for (std::size_t j = 0; j < n + 1; ++j)
                    full_point.push_back(j == hidden_at ? values[gi] : rec.coords[vi++]);
            }
            cand.coords = full_point;

            cand.residuals = candidate_residuals(source, full_point);
            cand.max_residual = 0.0;
            for (double rr : cand.residuals) cand.max_residual = std::max(cand.max_residual, rr);
            if (!std::isfinite(cand.max_residual))
                cand.status = RootCandidate::Status::rejected;
            else if (cand.max_residual <= opt.accept_tol)
                cand.status = RootCandidate::Status::accepted;
            else if (cand.max_residual > opt.reject_tol)
                cand.status = RootCandidate::Status::rejected;
            else
                cand.status = RootCandidate::Status::borderline;
            rep.candidates.push_back(std::move(cand));
        }
    }
    rep.online_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_mid).count();
    return rep;
}

// Adjoined-linear-form pipeline: u + sum c_j x_j is prepended, the matrix is
// built, and the shared back end runs with u as the eigenvalue variable.
inline SolveReport solve_u(const PolySystem& source, const SolverOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(opt.seed ^ 0x5eedf00dULL);
    const AugmentedSystem sys = add_u_polynomial(source, rng, opt.u_range);
    const ResultantMatrix m = build_matrix(sys, opt.seed);
    const auto t1 = std::chrono::steady_clock::now();
    SolveReport rep = solve_pipeline(source, sys, m, opt);
    rep.offline_seconds += std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

// Hidden-variable pipeline: variable `hide_index` moves into the coefficient
// ring, the matrix is built, and candidates carry its value back at the
// original position.
inline SolveReport solve_hidden(const PolySystem& source, std::size_t hide_index,
                                const SolverOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const AugmentedSystem sys = hide_variable(source, hide_index);
    const ResultantMatrix m = build_matrix(sys, opt.seed);
    const auto t1 = std::chrono::steady_clock::now();
    SolveReport rep = solve_pipeline(source, sys, m, opt);
    rep.offline_seconds += std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

}  // namespace sparsolve

#endif  // SPARSOLVE_ROOT_SOLVER_HPP
