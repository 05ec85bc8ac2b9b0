// Dense numerical linear algebra backend: threshold-stopping pivoted LU,
// linear solves with forward error bounds, condition estimation, Schur
// complements, and (generalized) eigendecomposition.  Factorizations and
// eigensolvers are delegated to Eigen where a contract-equivalent routine
// exists; the threshold LU is hand-written because no library routine stops
// at the first small pivot and reports the factored block size.

#ifndef SPARSOLVE_LINALG_HPP
#define SPARSOLVE_LINALG_HPP

#include "sparsolve/rational.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsolve {

using Cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXd;
using DenseCplxMatrix = Eigen::MatrixXcd;
using CplxVector = Eigen::VectorXcd;

// Pivots are accepted while they exceed kDefaultPivotRel * ||A||_inf.
inline constexpr double kDefaultPivotRel = 1e-10;
// Condition numbers at or above this route the solver to the slower pencil path.
inline constexpr double kConditionRouteThreshold = 1e7;
// IEEE double unit roundoff used by the forward error bound below.
inline constexpr double kMachineEps = 2e-16;
// Forward error of a solve against a factored k x k block is bounded by
// kSolveBoundFactor * k * kappa_inf of the block.
inline constexpr double kSolveBoundFactor = 4e-15;

struct SingularFactorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EigConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IdenticallySingularPencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require_finite(const Eigen::Ref<const DenseMatrix>& a, const char* who) {
    if (!a.allFinite())
        throw std::invalid_argument(std::string(who) + ": matrix has NaN or Inf entries");
}

inline double norm_inf_op(const Eigen::Ref<const DenseMatrix>& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double norm_1_op(const Eigen::Ref<const DenseMatrix>& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Complete-pivot LU that stops at the first pivot not exceeding
// pivot_rel * ||A||_inf.  packed holds the permuted matrix after `block`
// elimination steps: L (unit lower) and U share the leading block columns,
// rows block..dim of those columns hold the multipliers, and the trailing
// square is the Schur complement of the factored block.
struct LuFactorization {
    std::size_t dim = 0;
    std::size_t block = 0;
    DenseMatrix packed;
    std::vector<std::size_t> row_perm;  // position i holds original row row_perm[i]
    std::vector<std::size_t> col_perm;
    int perm_sign = 1;
    double source_norm_inf = 0.0;
    double pivot_cutoff = 0.0;

    bool complete() const { return block == dim; }
};

inline LuFactorization lu_threshold(const DenseMatrix& a, double pivot_rel = kDefaultPivotRel) {
    if (a.rows() != a.cols()) throw std::invalid_argument("lu_threshold: matrix must be square");
    if (pivot_rel <= 0.0) throw std::invalid_argument("lu_threshold: threshold must be positive");
    require_finite(a, "lu_threshold");

    LuFactorization f;
    f.dim = static_cast<std::size_t>(a.rows());
    f.packed = a;
    f.row_perm.resize(f.dim);
    f.col_perm.resize(f.dim);
    for (std::size_t i = 0; i < f.dim; ++i) f.row_perm[i] = f.col_perm[i] = i;
    f.source_norm_inf = norm_inf_op(a);
    f.pivot_cutoff = pivot_rel * f.source_norm_inf;

    const auto n = static_cast<Eigen::Index>(f.dim);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pr = k, pc = k;
        double best = 0.0;
        for (Eigen::Index r = k; r < n; ++r)
            for (Eigen::Index c = k; c < n; ++c)
                if (const double v = std::abs(f.packed(r, c)); v > best) {
                    best = v;
                    pr = r;
                    pc = c;
                }
        if (best <= f.pivot_cutoff) break;
        if (pr != k) {
            f.packed.row(pr).swap(f.packed.row(k));
            std::swap(f.row_perm[static_cast<std::size_t>(pr)],
                      f.row_perm[static_cast<std::size_t>(k)]);
            f.perm_sign = -f.perm_sign;
        }
        if (pc != k) {
            f.packed.col(pc).swap(f.packed.col(k));
            std::swap(f.col_perm[static_cast<std::size_t>(pc)],
                      f.col_perm[static_cast<std::size_t>(k)]);
            f.perm_sign = -f.perm_sign;
        }
        const double piv = f.packed(k, k);
        for (Eigen::Index r = k + 1; r < n; ++r) {
            const double m = f.packed(r, k) / piv;
            f.packed(r, k) = m;
            if (m != 0.0)
                f.packed.row(r).segment(k + 1, n - k - 1) -=
                    m * f.packed.row(k).segment(k + 1, n - k - 1);
        }
        f.block = static_cast<std::size_t>(k) + 1;
    }
    return f;
}

namespace linalg_detail {

// One triangular sweep against the factored block: y <- U^-1 L^-1 y or the
// transposed pair.  Operates on block-sized vectors in permuted coordinates.
inline void block_solve_permuted(const LuFactorization& f, Eigen::VectorXd& y, bool transposed) {
    const auto k = static_cast<Eigen::Index>(f.block);
    if (!transposed) {
        for (Eigen::Index i = 1; i < k; ++i)
            y(i) -= f.packed.row(i).head(i).dot(y.head(i));
        for (Eigen::Index i = k - 1; i >= 0; --i) {
            y(i) -= f.packed.row(i).segment(i + 1, k - i - 1).dot(y.segment(i + 1, k - i - 1));
            y(i) /= f.packed(i, i);
        }
    } else {
        for (Eigen::Index i = 0; i < k; ++i) {
            y(i) -= f.packed.col(i).head(i).dot(y.head(i));
            y(i) /= f.packed(i, i);
        }
        for (Eigen::Index i = k - 1; i >= 0; --i)
            y(i) -= f.packed.col(i).segment(i + 1, k - i - 1).dot(y.segment(i + 1, k - i - 1));
    }
}

// Solve against the factored block only (block k rows/cols of the permuted
// matrix).  In permuted coordinates; callers apply row/col permutations.
inline Eigen::VectorXd block_apply_inverse(const LuFactorization& f, const Eigen::VectorXd& rhs,
                                           bool transposed) {
    Eigen::VectorXd y = rhs;
    block_solve_permuted(f, y, transposed);
    return y;
}

// Hager's 1-norm estimator for ||B||_1 with B = inv(block) or its transpose,
// used for kappa_1 / kappa_inf without forming the inverse.
inline double est_inverse_norm1(const LuFactorization& f, bool transposed) {
    const auto k = static_cast<Eigen::Index>(f.block);
    if (k == 0) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        const Eigen::VectorXd y = block_apply_inverse(f, x, transposed);
        est = y.lpNorm<1>();
        Eigen::VectorXd xi(k);
        for (Eigen::Index i = 0; i < k; ++i) xi(i) = y(i) >= 0.0 ? 1.0 : -1.0;
        const Eigen::VectorXd z = block_apply_inverse(f, xi, !transposed);
        Eigen::Index j = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&j);
        if (zmax <= z.dot(x)) break;
        x.setZero();
        x(j) = 1.0;
    }
    return est;
}

}  // namespace linalg_detail

// kappa_inf estimate of the factored block, via the inf-norm of the block of
// the permuted source and Hager's estimate of the inverse norm.
inline double kappa_inf_estimate(const LuFactorization& f) {
    if (f.block == 0) return std::numeric_limits<double>::infinity();
    const auto k = static_cast<Eigen::Index>(f.block);
    DenseMatrix blockA(k, k);
    // reconstruct the permuted block from L and U: cheap and avoids storing A
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            double s = 0.0;
            const Eigen::Index m = std::min(i, j);
            for (Eigen::Index t = 0; t <= m; ++t) {
                const double l = t == i ? 1.0 : f.packed(i, t);
                s += l * f.packed(t, j);
            }
            blockA(i, j) = s;
        }
    const double na = norm_inf_op(blockA);
    const double ninv = linalg_detail::est_inverse_norm1(f, /*transposed=*/true);
    return std::max(1.0, na * ninv);
}

struct SolveResult {
    DenseMatrix x;
    double error_bound = 0.0;  // kSolveBoundFactor * block * kappa_inf(block)
    double kappa_inf = 0.0;
};

// Solve block_system * X = B against a fully factored matrix.  Throws
// SingularFactorError when the factorization stopped early (the matrix is
// singular at the pivot threshold).
inline SolveResult solve(const LuFactorization& f, const DenseMatrix& b) {
    if (!f.complete())
        throw SingularFactorError("solve: factorization is rank-deficient at its threshold (block " +
                                  std::to_string(f.block) + " of " + std::to_string(f.dim) + ")");
    if (static_cast<std::size_t>(b.rows()) != f.dim)
        throw std::invalid_argument("solve: right-hand side has mismatched row count");
    require_finite(b, "solve");

    const auto n = static_cast<Eigen::Index>(f.dim);
    SolveResult out;
    out.x.resize(n, b.cols());
    Eigen::VectorXd y(n);
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
        for (Eigen::Index i = 0; i < n; ++i)
            y(i) = b(static_cast<Eigen::Index>(f.row_perm[static_cast<std::size_t>(i)]), c);
        linalg_detail::block_solve_permuted(f, y, /*transposed=*/false);
        for (Eigen::Index i = 0; i < n; ++i)
            out.x(static_cast<Eigen::Index>(f.col_perm[static_cast<std::size_t>(i)]), c) = y(i);
    }
    out.kappa_inf = kappa_inf_estimate(f);
    out.error_bound = kSolveBoundFactor * static_cast<double>(f.block) * out.kappa_inf;
    return out;
}

// Solve (leading block) * X = B against the factored k x k block alone, in
// the factorization's own permuted frame: row i of B corresponds to permuted
// row i, row i of X to permuted column i.  Callers that work with the
// permuted matrix (block partitioning) use this directly; solve() below wraps
// it with the permutations for plain full-matrix systems.
inline DenseMatrix block_solve(const LuFactorization& f, const DenseMatrix& b) {
    if (static_cast<std::size_t>(b.rows()) != f.block)
        throw std::invalid_argument("block_solve: right-hand side must have block-many rows");
    require_finite(b, "block_solve");
    DenseMatrix x(b.rows(), b.cols());
    Eigen::VectorXd y(b.rows());
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
        y = b.col(c);
        linalg_detail::block_solve_permuted(f, y, /*transposed=*/false);
        x.col(c) = y;
    }
    return x;
}

// Signed determinant from a complete factorization (product of pivots times
// the permutation parity).
inline double determinant(const LuFactorization& f) {
    if (!f.complete())
        throw SingularFactorError("determinant: factorization is rank-deficient at its threshold");
    double d = static_cast<double>(f.perm_sign);
    for (std::size_t i = 0; i < f.dim; ++i)
        d *= f.packed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    return d;
}

struct ConditionReport {
    double kappa1 = std::numeric_limits<double>::infinity();
    double kappa_inf = std::numeric_limits<double>::infinity();
    std::optional<double> kappa2;  // exact from singular values, dims <= 100
    bool singular = false;

    bool ill_conditioned(double threshold = kConditionRouteThreshold) const {
        return singular || kappa_inf >= threshold;
    }
};

inline ConditionReport condition(const DenseMatrix& a, double pivot_rel = kDefaultPivotRel) {
    if (a.rows() != a.cols()) throw std::invalid_argument("condition: matrix must be square");
    require_finite(a, "condition");
    ConditionReport rep;
    const LuFactorization f = lu_threshold(a, pivot_rel);
    rep.singular = !f.complete();
    if (!rep.singular) {
        rep.kappa1 =
            std::max(1.0, norm_1_op(a) * linalg_detail::est_inverse_norm1(f, /*transposed=*/false));
        rep.kappa_inf =
            std::max(1.0, norm_inf_op(a) * linalg_detail::est_inverse_norm1(f, /*transposed=*/true));
    }
    if (a.rows() <= 100 && a.rows() > 0) {
        Eigen::JacobiSVD<DenseMatrix> svd(a);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        if (smin <= smax * 1e-14 || smax == 0.0)
            rep.kappa2 = std::numeric_limits<double>::infinity();
        else
            rep.kappa2 = std::max(1.0, smax / smin);
    }
    return rep;
}

struct EigenPair {
    Cplx value;
    CplxVector vector;     // unit 2-norm right eigenvector
    double residual = 0.0; // ||A v - lambda v||_2
};

// All eigenvalues with right eigenvectors.  Convergence failures surface as
// EigConvergenceError, never as silent bad output.
inline std::vector<EigenPair> eig(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eig: matrix must be square");
    require_finite(a, "eig");
    Eigen::EigenSolver<DenseMatrix> es(a, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw EigConvergenceError("eig: QR iteration failed to converge");
    std::vector<EigenPair> out;
    const Eigen::Index n = a.rows();
    out.reserve(static_cast<std::size_t>(n));
    const DenseCplxMatrix ac = a.cast<Cplx>();
    for (Eigen::Index i = 0; i < n; ++i) {
        EigenPair p;
        p.value = es.eigenvalues()(i);
        p.vector = es.eigenvectors().col(i);
        p.vector.normalize();
        p.residual = (ac * p.vector - p.value * p.vector).norm();
        out.push_back(std::move(p));
    }
    return out;
}

struct GeneralizedEigenPair {
    Cplx alpha;             // normalized: |alpha|^2 + beta^2 = 1, beta >= 0
    double beta = 0.0;
    CplxVector vector;      // unit 2-norm right eigenvector
    double residual = 0.0;  // ||(alpha C1 + beta C0) v||_2

    bool infinite(double tol = 1e-10) const { return std::abs(beta) <= tol; }
    Cplx value() const { return alpha / beta; }
};

// Pairs (alpha, beta) with right vectors v such that (alpha C1 + beta C0) v = 0.
// Finite candidates have value alpha/beta; beta ~ 0 with alpha nonzero marks a
// root at infinity.  Pairs with alpha and beta both ~ 0 (which arise exactly
// when the pencil has a singular part) are dropped; if nothing remains the
// pencil is identically singular and that is reported as an error.
inline std::vector<GeneralizedEigenPair> generalized_eig(const DenseMatrix& c1,
                                                         const DenseMatrix& c0) {
    if (c1.rows() != c1.cols() || c0.rows() != c0.cols() || c1.rows() != c0.rows())
        throw std::invalid_argument("generalized_eig: matrices must be square of equal size");
    require_finite(c1, "generalized_eig");
    require_finite(c0, "generalized_eig");
    const Eigen::Index n = c1.rows();
    if (n == 0) return {};
    // the QZ iteration does not terminate on an all-zero pencil, so the
    // trivially singular case is rejected before it reaches the solver
    if (c1.cwiseAbs().maxCoeff() == 0.0 && c0.cwiseAbs().maxCoeff() == 0.0)
        throw IdenticallySingularPencilError(
            "generalized_eig: both pencil coefficients are zero");

    // (alpha C1 + beta C0) v = 0  <=>  (-C0) v = (alpha/beta) C1 v
    Eigen::GeneralizedEigenSolver<DenseMatrix> ges;
    ges.compute(-c0, c1, /*computeEigenvectors=*/true);
    if (ges.info() != Eigen::Success)
        throw EigConvergenceError("generalized_eig: QZ iteration failed to converge");

    const double scale = std::max({c0.norm(), c1.norm(), 1.0});
    const double zero_tol = 1e-13 * scale;
    const DenseCplxMatrix c1c = c1.cast<Cplx>();
    const DenseCplxMatrix c0c = c0.cast<Cplx>();

    std::vector<GeneralizedEigenPair> out;
    for (Eigen::Index i = 0; i < n; ++i) {
        Cplx alpha = ges.alphas()(i);
        double beta = ges.betas()(i);
        const double s = std::hypot(std::abs(alpha), beta);
        if (!std::isfinite(s) || s <= zero_tol) continue;  // singular part of the pencil
        if (!ges.eigenvectors().col(i).allFinite()) continue;  // back-substitution hit it too
        alpha /= s;
        beta /= s;
        if (beta < 0.0) {
            alpha = -alpha;
            beta = -beta;
        } else if (beta == 0.0 && alpha.real() < 0.0) {
            alpha = -alpha;
        }
        GeneralizedEigenPair p;
        p.alpha = alpha;
        p.beta = beta;
        p.vector = ges.eigenvectors().col(i);
        p.vector.normalize();
        p.residual = ((p.alpha * c1c + Cplx(p.beta, 0.0) * c0c) * p.vector).norm();
        out.push_back(std::move(p));
    }
    if (out.empty())
        throw IdenticallySingularPencilError(
            "generalized_eig: every (alpha, beta) pair vanished; the pencil is identically singular");
    return out;
}

// M22 - M21 M11^-1 M12 without forming the inverse: the factorization of M11
// solves M11 X = M12 and the complement is assembled from X.
inline DenseMatrix schur_complement(const DenseMatrix& m11, const DenseMatrix& m12,
                                    const DenseMatrix& m21, const DenseMatrix& m22,
                                    double pivot_rel = kDefaultPivotRel) {
    if (m11.rows() != m11.cols()) throw std::invalid_argument("schur_complement: M11 not square");
    if (m12.rows() != m11.rows() || m21.cols() != m11.cols() || m22.rows() != m21.rows() ||
        m22.cols() != m12.cols())
        throw std::invalid_argument("schur_complement: block dimensions do not conform");
    const LuFactorization f = lu_threshold(m11, pivot_rel);
    if (!f.complete())
        throw SingularFactorError("schur_complement: M11 is singular at the pivot threshold");
    if (m22.rows() == 0 || m22.cols() == 0) return m22;
    if (m12.cols() == 0) return m22;
    const SolveResult sol = solve(f, m12);
    return m22 - m21 * sol.x;
}

}  // namespace sparsolve

#endif  // SPARSOLVE_LINALG_HPP
