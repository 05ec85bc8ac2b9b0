// Univariate matrix polynomials over dense double matrices: Moebius change
// of variable, rank balancing of the leading coefficient, block companion
// matrices, and pencil linearization.  These are the bridge between a
// partitioned resultant matrix and the eigenproblem that yields roots.

#ifndef SPARSOLVE_MATRIX_POLYNOMIAL_HPP
#define SPARSOLVE_MATRIX_POLYNOMIAL_HPP

#include "sparsolve/linalg.hpp"
#include "sparsolve/rational.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparsolve {

// A(x) = A_0 + x A_1 + ... + x^d A_d with square dense coefficients.
struct MatrixPoly {
    std::vector<DenseMatrix> coeffs;  // index = power, size d+1

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    std::size_t dim() const { return coeffs.empty() ? 0 : static_cast<std::size_t>(coeffs[0].rows()); }

    DenseCplxMatrix eval(const Cplx& x) const {
        const auto r = static_cast<Eigen::Index>(dim());
        DenseCplxMatrix m = DenseCplxMatrix::Zero(r, r);
        Cplx p(1.0, 0.0);
        for (const DenseMatrix& a : coeffs) {
            m += p * a.cast<Cplx>();
            p *= x;
        }
        return m;
    }

    DenseMatrix eval_real(double x) const {
        const auto r = static_cast<Eigen::Index>(dim());
        DenseMatrix m = DenseMatrix::Zero(r, r);
        double p = 1.0;
        for (const DenseMatrix& a : coeffs) {
            m += p * a;
            p *= x;
        }
        return m;
    }
};

inline void require_matrix_poly(const MatrixPoly& a, const char* who) {
    if (a.coeffs.empty()) throw std::invalid_argument(std::string(who) + ": empty polynomial");
    const Eigen::Index r = a.coeffs[0].rows();
    for (const DenseMatrix& c : a.coeffs) {
        if (c.rows() != r || c.cols() != r)
            throw std::invalid_argument(std::string(who) + ": coefficient dimensions disagree");
        require_finite(c, who);
    }
}

// x = (t1 y + t2) / (t3 y + t4), det t1 t4 - t2 t3 != 0.
struct MoebiusTransform {
    std::int64_t t1 = 1, t2 = 0, t3 = 0, t4 = 1;

    bool is_identity() const { return t1 == 1 && t2 == 0 && t3 == 0 && t4 == 1; }
    std::int64_t det() const { return t1 * t4 - t2 * t3; }

    Cplx apply(const Cplx& y) const {
        return (static_cast<double>(t1) * y + static_cast<double>(t2)) /
               (static_cast<double>(t3) * y + static_cast<double>(t4));
    }
    // |t3 y + t4| relative to its terms; ~0 means x escapes to infinity
    double pole_margin(const Cplx& y) const {
        const double den = std::abs(static_cast<double>(t3) * y + static_cast<double>(t4));
        const double scale = std::abs(static_cast<double>(t3) * y) + std::abs(static_cast<double>(t4));
        return scale == 0.0 ? 0.0 : den / scale;
    }
};

// B(y) = (t3 y + t4)^d * A((t1 y + t2)/(t3 y + t4)), expanded so that
// B_c = sum_k A_k * [y^c] (t1 y + t2)^k (t3 y + t4)^(d-k).  The scalar
// weights are exact integers; d and |t_i| are small throughout.
inline MatrixPoly moebius_transform(const MatrixPoly& a, const MoebiusTransform& t) {
    require_matrix_poly(a, "moebius_transform");
    if (t.det() == 0) throw std::invalid_argument("moebius_transform: singular transform");
    const std::size_t d = a.degree();
    const auto r = static_cast<Eigen::Index>(a.dim());

    auto binom_pow = [](std::int64_t u, std::int64_t v, std::size_t e) {
        // coefficients of (u y + v)^e
        std::vector<std::int64_t> c{1};
        for (std::size_t i = 0; i < e; ++i) {
            std::vector<std::int64_t> next(c.size() + 1, 0);
            for (std::size_t j = 0; j < c.size(); ++j) {
                next[j] += v * c[j];
                next[j + 1] += u * c[j];
            }
            c = std::move(next);
        }
        return c;
    };

    MatrixPoly b;
    b.coeffs.assign(d + 1, DenseMatrix::Zero(r, r));
    for (std::size_t k = 0; k <= d; ++k) {
        const auto p = binom_pow(t.t1, t.t2, k);
        const auto q = binom_pow(t.t3, t.t4, d - k);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j) {
                const std::int64_t w = p[i] * q[j];
                if (w != 0) b.coeffs[i + j] += static_cast<double>(w) * a.coeffs[k];
            }
    }
    return b;
}

// True when some random substitution of x gives a numerically nonsingular
// value; identically singular matrix polynomials fail every substitution.
inline bool matrix_poly_regular(const MatrixPoly& a, int trials = 4,
                                std::uint64_t seed = 0x9e11a5ULL) {
    require_matrix_poly(a, "matrix_poly_regular");
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const double x = rng.uniform_real(-3.0, 3.0);
        if (lu_threshold(a.eval_real(x)).complete()) return true;
    }
    return false;
}

struct RankBalanceResult {
    MatrixPoly balanced;
    MoebiusTransform transform;
    double kappa_leading = std::numeric_limits<double>::infinity();
    bool usable(double route_threshold = kConditionRouteThreshold) const {
        return kappa_leading < route_threshold;
    }
};

// Try the identity plus `trials` random integer transforms and keep the one
// whose leading coefficient has the smallest kappa_inf.  Callers route to the
// generalized pencil when even the best leading coefficient is singular or
// ill-conditioned.
inline RankBalanceResult rank_balance(const MatrixPoly& a, int trials = 4,
                                      std::uint64_t seed = 0xba1a4ceULL) {
    require_matrix_poly(a, "rank_balance");
    Rng rng(seed);
    std::vector<MoebiusTransform> candidates{MoebiusTransform{}};
    while (candidates.size() < static_cast<std::size_t>(trials) + 1) {
        MoebiusTransform t;
        t.t1 = rng.uniform_int(-10, 10);
        t.t2 = rng.uniform_int(-10, 10);
        t.t3 = rng.uniform_int(-10, 10);
        t.t4 = rng.uniform_int(-10, 10);
        if (t.det() == 0) continue;
        candidates.push_back(t);
    }

    RankBalanceResult best;
    for (const MoebiusTransform& t : candidates) {
        MatrixPoly b = t.is_identity() ? a : moebius_transform(a, t);
        const ConditionReport rep = condition(b.coeffs.back());
        const double kappa = rep.singular ? std::numeric_limits<double>::infinity() : rep.kappa_inf;
        if (kappa < best.kappa_leading) {
            best.balanced = std::move(b);
            best.transform = t;
            best.kappa_leading = kappa;
        }
    }
    if (!std::isfinite(best.kappa_leading)) {
        best.balanced = a;
        best.transform = MoebiusTransform{};
    }
    return best;
}

// Block companion of the monic polynomial B_d^-1 B(y), order dim * degree.
// Eigenvectors are stacked powers: block i equals y^i times block 0.
inline DenseMatrix companion(const MatrixPoly& b, double pivot_rel = kDefaultPivotRel) {
    require_matrix_poly(b, "companion");
    const std::size_t d = b.degree();
    if (d == 0) throw std::invalid_argument("companion: degree must be positive");
    const auto r = static_cast<Eigen::Index>(b.dim());
    const LuFactorization f = lu_threshold(b.coeffs.back(), pivot_rel);
    if (!f.complete())
        throw SingularFactorError("companion: leading coefficient is singular at the threshold");

    const auto n = static_cast<Eigen::Index>(d) * r;
    DenseMatrix c = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + r < n; ++i) c(i, i + r) = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        const SolveResult s = solve(f, b.coeffs[k]);
        c.block((static_cast<Eigen::Index>(d) - 1) * r, static_cast<Eigen::Index>(k) * r, r, r) =
            -s.x;
    }
    return c;
}

// First companion linearization C1 y + C0 of B(y); degenerate leading
// coefficients are allowed (they surface as infinite pairs).  For degree 1
// this is the pencil B_1 y + B_0 itself.
inline std::pair<DenseMatrix, DenseMatrix> pencil_linearization(const MatrixPoly& b) {
    require_matrix_poly(b, "pencil_linearization");
    const std::size_t d = b.degree();
    if (d == 0) throw std::invalid_argument("pencil_linearization: degree must be positive");
    const auto r = static_cast<Eigen::Index>(b.dim());
    const auto n = static_cast<Eigen::Index>(d) * r;

    DenseMatrix c1 = DenseMatrix::Identity(n, n);
    c1.bottomRightCorner(r, r) = b.coeffs.back();
    DenseMatrix c0 = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + r < n; ++i) c0(i, i + r) = -1.0;
    for (std::size_t k = 0; k < d; ++k)
        c0.block((static_cast<Eigen::Index>(d) - 1) * r, static_cast<Eigen::Index>(k) * r, r, r) =
            b.coeffs[k];
    return {std::move(c1), std::move(c0)};
}

// Subvector of a stacked companion/pencil eigenvector used for coordinate
// ratios: the topmost block when |y| < 1, a lower block otherwise (entry
// magnitudes grow with y^i, so the better-scaled copy is picked).
inline CplxVector companion_subvector(const CplxVector& v, std::size_t r, std::size_t d,
                                      const Cplx& y) {
    if (static_cast<std::size_t>(v.size()) != r * d)
        throw std::invalid_argument("companion_subvector: vector size mismatch");
    std::size_t block = 0;
    if (std::abs(y) >= 1.0) block = std::min((d + 1) / 2, d - 1);
    return v.segment(static_cast<Eigen::Index>(block * r), static_cast<Eigen::Index>(r));
}

// Finite part of a pencil A_0 + x A_1 after stripping the spectrum at
// infinity.  `removed` counts eliminated dimensions, `layers` the compression
// rounds (one per Jordan layer at infinity).
struct InfiniteDeflation {
    DenseMatrix b1, b0;
    std::size_t removed = 0;
    std::size_t layers = 0;
};

// Repeated orthogonal reduction: row-compress A_1 so its trailing rows vanish,
// then column-compress the constant rows those leave behind.  Laplace
// expansion along the compressed rows gives det(A_0 + x A_1) proportional to
// det(b0 + x b1) with a nonzero constant, so finite eigenvalues and their
// multiplicities survive.  Throws when the constant rows are rank-deficient,
// which certifies det(A_0 + x A_1) == 0 identically.
inline InfiniteDeflation deflate_infinite(DenseMatrix a1, DenseMatrix a0,
                                          double rank_rel = 1e-8) {
    if (a1.rows() != a1.cols() || a0.rows() != a0.cols() || a1.rows() != a0.rows())
        throw std::invalid_argument("deflate_infinite: pencil blocks must be square and equal");
    require_finite(a1, "deflate_infinite");
    require_finite(a0, "deflate_infinite");

    InfiniteDeflation out;
    while (a1.rows() > 0) {
        const Eigen::Index n = a1.rows();
        Eigen::ColPivHouseholderQR<DenseMatrix> row_qr(a1);
        row_qr.setThreshold(rank_rel);
        const Eigen::Index r = row_qr.rank();
        if (r == n) break;

        const DenseMatrix q = row_qr.householderQ();
        a1 = (q.transpose() * a1).eval();
        a0 = (q.transpose() * a0).eval();
        a1.bottomRows(n - r).setZero();

        Eigen::ColPivHouseholderQR<DenseMatrix> col_qr(a0.bottomRows(n - r).transpose());
        col_qr.setThreshold(rank_rel);
        if (col_qr.rank() < n - r)
            throw IdenticallySingularPencilError(
                "deflate_infinite: constant rows are rank-deficient, pencil determinant "
                "vanishes identically");
        const DenseMatrix q2 = col_qr.householderQ();
        a0 = (a0 * q2).eval();
        a1 = (a1 * q2).eval();
        // the compressed constant rows now live in the leading n-r columns, so
        // kernel vectors of the pencil are supported on the trailing r columns
        const DenseMatrix nb1 = a1.topRightCorner(r, r);
        const DenseMatrix nb0 = a0.topRightCorner(r, r);
        a1 = nb1;
        a0 = nb0;
        out.removed += static_cast<std::size_t>(n - r);
        ++out.layers;
    }
    out.b1 = std::move(a1);
    out.b0 = std::move(a0);
    return out;
}

// Null vector of a square complex matrix.  Uses the threshold LU kernel when
// the matrix is numerically singular and falls back to inverse iteration from
// a random start otherwise; `kernel_dim` reports the numerical nullity.
struct KernelVector {
    CplxVector v;
    std::size_t kernel_dim = 0;
};

inline KernelVector kernel_vector(const DenseCplxMatrix& m, std::uint64_t seed = 0x6e756c6cULL,
                                  double rank_rel = 1e-10) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument("kernel_vector: matrix must be square and nonempty");
    Eigen::FullPivLU<DenseCplxMatrix> lu(m);
    lu.setThreshold(rank_rel);
    KernelVector out;
    out.kernel_dim = static_cast<std::size_t>(lu.dimensionOfKernel());
    if (out.kernel_dim > 0) {
        out.v = lu.kernel().col(0);
        out.v.normalize();
        return out;
    }
    Rng rng(seed);
    CplxVector v(m.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = Cplx(rng.uniform_real(-1.0, 1.0), rng.uniform_real(-1.0, 1.0));
    v.normalize();
    for (int pass = 0; pass < 2; ++pass) {
        CplxVector w = lu.solve(v);
        const double nrm = w.norm();
        if (!std::isfinite(nrm) || nrm == 0.0) break;
        v = w / nrm;
    }
    out.v = std::move(v);
    return out;
}

}  // namespace sparsolve

#endif  // SPARSOLVE_MATRIX_POLYNOMIAL_HPP
