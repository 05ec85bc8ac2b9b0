// Contract tests for the dense numerics backend: threshold LU, bounded
// solves, condition estimation, eigendecompositions, Schur complements.

#include "sparsolve/exact_linalg.hpp"
#include "sparsolve/linalg.hpp"
#include "sparsolve/rational.hpp"

#include <Eigen/QR>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

using namespace sparsolve;

namespace {

DenseMatrix random_matrix(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
    DenseMatrix a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = rng.uniform_real(lo, hi);
    return a;
}

// Rebuild P A Q from the factorization inputs and compare with L * U.
double reconstruction_error(const DenseMatrix& a, const LuFactorization& f) {
    const auto n = static_cast<Eigen::Index>(f.dim);
    const auto k = static_cast<Eigen::Index>(f.block);
    DenseMatrix paq(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            paq(i, j) = a(static_cast<Eigen::Index>(f.row_perm[static_cast<std::size_t>(i)]),
                          static_cast<Eigen::Index>(f.col_perm[static_cast<std::size_t>(j)]));
    DenseMatrix l = DenseMatrix::Identity(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < std::min(i, k); ++j) l(i, j) = f.packed(i, j);
    DenseMatrix u = DenseMatrix::Zero(k, n);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < n; ++j) u(i, j) = f.packed(i, j);
    // the trailing (n-k) x (n-k) square of packed is the Schur complement,
    // which reconstructs the trailing part of PAQ together with L*U
    DenseMatrix rebuilt = l * u;
    for (Eigen::Index i = k; i < n; ++i)
        for (Eigen::Index j = k; j < n; ++j) rebuilt(i, j) += f.packed(i, j);
    return norm_inf_op(paq - rebuilt);
}

double norm2(const DenseMatrix& a) {
    Eigen::JacobiSVD<DenseMatrix> svd(a);
    return svd.singularValues()(0);
}

double smallest_singular_value(const DenseCplxMatrix& a) {
    Eigen::JacobiSVD<DenseCplxMatrix> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

TEST(LuThreshold, IdentityFactorsFully) {
    const LuFactorization f = lu_threshold(DenseMatrix::Identity(5, 5), 1e-10);
    EXPECT_EQ(f.block, 5u);
    EXPECT_TRUE(f.complete());
    EXPECT_DOUBLE_EQ(determinant(f), 1.0);
}

TEST(LuThreshold, StopsAtTinyPivot) {
    DenseMatrix a = DenseMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-20;
    const LuFactorization f = lu_threshold(a, 1e-12);
    EXPECT_EQ(f.block, 1u);
    EXPECT_FALSE(f.complete());
}

TEST(LuThreshold, ZeroMatrixHasEmptyBlock) {
    const LuFactorization f = lu_threshold(DenseMatrix::Zero(3, 3));
    EXPECT_EQ(f.block, 0u);
}

TEST(LuThreshold, RandomReconstruction) {
    Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 40));
        const DenseMatrix a = random_matrix(rng, n);
        const LuFactorization f = lu_threshold(a);
        EXPECT_EQ(f.block, static_cast<std::size_t>(n));
        EXPECT_LE(reconstruction_error(a, f), 1e-10 * norm_inf_op(a));
    }
}

TEST(LuThreshold, RankDeficientReconstructionStillHolds) {
    Rng rng(102);
    // rank-3 5x5: outer product of 5x3 and 3x5 blocks
    DenseMatrix b(5, 3), c(3, 5);
    for (int r = 0; r < 5; ++r)
        for (int k = 0; k < 3; ++k) b(r, k) = rng.uniform_real(-1.0, 1.0);
    for (int k = 0; k < 3; ++k)
        for (int cc = 0; cc < 5; ++cc) c(k, cc) = rng.uniform_real(-1.0, 1.0);
    const DenseMatrix a = b * c;
    const LuFactorization f = lu_threshold(a);
    EXPECT_EQ(f.block, 3u);
    EXPECT_LE(reconstruction_error(a, f), 1e-10 * norm_inf_op(a));
}

TEST(LuThreshold, RejectsBadInput) {
    EXPECT_THROW(lu_threshold(DenseMatrix::Zero(2, 3)), std::invalid_argument);
    EXPECT_THROW(lu_threshold(DenseMatrix::Identity(2, 2), 0.0), std::invalid_argument);
    DenseMatrix a = DenseMatrix::Identity(2, 2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(lu_threshold(a), std::invalid_argument);
}

TEST(Solve, IdentityReturnsRhs) {
    Rng rng(103);
    const LuFactorization f = lu_threshold(DenseMatrix::Identity(4, 4));
    DenseMatrix b(4, 2);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 2; ++c) b(r, c) = rng.uniform_real(-5.0, 5.0);
    const SolveResult s = solve(f, b);
    EXPECT_LE((s.x - b).norm(), 1e-14);
    EXPECT_GE(s.kappa_inf, 1.0);
    EXPECT_LE(s.kappa_inf, 1.0 + 1e-12);
}

TEST(Solve, HilbertAgainstExactOracle) {
    const int n = 8;
    DenseMatrix h(n, n);
    RatMat hx(n, RatVec(n));
    RatVec bx(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            hx[r][c] = Rat(1, r + c + 1);
            h(r, c) = to_double(hx[r][c]);
        }
        bx[r] = Rat(1);
    }
    const auto exact = solve_linear(hx, bx);
    ASSERT_TRUE(exact.has_value());

    // kappa(H_8) ~ 1.5e10, so its last complete pivot sits right at the
    // default cutoff; a smaller threshold factors it fully
    const LuFactorization f = lu_threshold(h, 1e-14);
    ASSERT_TRUE(f.complete());
    DenseMatrix b = DenseMatrix::Constant(n, 1, 1.0);
    const SolveResult s = solve(f, b);

    double err = 0.0, scale = 0.0;
    for (int r = 0; r < n; ++r) {
        err = std::max(err, std::abs(s.x(r, 0) - to_double((*exact)[r])));
        scale = std::max(scale, std::abs(to_double((*exact)[r])));
    }
    const double rel = err / scale;
    EXPECT_GT(s.error_bound, rel);  // the bound must dominate the observed error
    EXPECT_GT(s.kappa_inf, 1e8);    // Hilbert 8x8 is famously ill-conditioned
}

TEST(Solve, RandomSystemsSatisfyBound) {
    Rng rng(104);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 30));
        const DenseMatrix a = random_matrix(rng, n);
        const LuFactorization f = lu_threshold(a);
        if (!f.complete()) continue;
        const DenseMatrix b = random_matrix(rng, n);
        const SolveResult s = solve(f, b.col(0));
        const Eigen::VectorXd residual = a * s.x.col(0) - b.col(0);
        EXPECT_LE(residual.lpNorm<Eigen::Infinity>(),
                  s.error_bound * s.x.col(0).lpNorm<Eigen::Infinity>() +
                      1e-13 * b.col(0).lpNorm<Eigen::Infinity>());
    }
}

TEST(Solve, SingularFactorThrows) {
    DenseMatrix a = DenseMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    const LuFactorization f = lu_threshold(a);
    EXPECT_THROW(solve(f, DenseMatrix::Identity(2, 2)), SingularFactorError);
    EXPECT_THROW(determinant(f), SingularFactorError);
}

TEST(Condition, OrthogonalIsPerfectlyConditioned) {
    Rng rng(105);
    const DenseMatrix a = random_matrix(rng, 12);
    const Eigen::HouseholderQR<DenseMatrix> qr(a);
    const DenseMatrix q = qr.householderQ();
    const ConditionReport rep = condition(q);
    ASSERT_TRUE(rep.kappa2.has_value());
    EXPECT_NEAR(*rep.kappa2, 1.0, 1e-10);
    EXPECT_GE(rep.kappa1, 1.0);
    EXPECT_GE(rep.kappa_inf, 1.0);
    EXPECT_FALSE(rep.ill_conditioned());
}

TEST(Condition, DiagonalRatio) {
    DenseMatrix a = DenseMatrix::Zero(2, 2);
    a(0, 0) = 10.0;
    a(1, 1) = 1e-3;
    const ConditionReport rep = condition(a);
    ASSERT_TRUE(rep.kappa2.has_value());
    EXPECT_NEAR(*rep.kappa2, 1e4, 1e-6);
}

TEST(Condition, EstimatesSandwichExactKappa2) {
    Rng rng(106);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 50));
        const DenseMatrix a = random_matrix(rng, n);
        const ConditionReport rep = condition(a);
        if (rep.singular) continue;
        ASSERT_TRUE(rep.kappa2.has_value());
        const double d2 = static_cast<double>(n) * static_cast<double>(n);
        EXPECT_LE(rep.kappa1, *rep.kappa2 * d2 * 1.01);
        EXPECT_GE(rep.kappa1, *rep.kappa2 / d2 * 0.99);
        EXPECT_LE(rep.kappa_inf, *rep.kappa2 * d2 * 1.01);
        EXPECT_GE(rep.kappa_inf, *rep.kappa2 / d2 * 0.99);
    }
}

TEST(Condition, SingularReportsInfinity) {
    Rng rng(107);
    DenseMatrix b(4, 2), c(2, 4);
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 2; ++k) b(r, k) = rng.uniform_real(-1.0, 1.0);
    for (int k = 0; k < 2; ++k)
        for (int cc = 0; cc < 4; ++cc) c(k, cc) = rng.uniform_real(-1.0, 1.0);
    const ConditionReport rep = condition(b * c);
    EXPECT_TRUE(rep.singular);
    EXPECT_TRUE(std::isinf(rep.kappa_inf));
    ASSERT_TRUE(rep.kappa2.has_value());
    EXPECT_TRUE(std::isinf(*rep.kappa2));
    EXPECT_TRUE(rep.ill_conditioned());
}

TEST(Eig, DiagonalSpectrum) {
    DenseMatrix a = DenseMatrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    a(2, 2) = 3.0;
    auto pairs = eig(a);
    ASSERT_EQ(pairs.size(), 3u);
    std::vector<double> vals;
    for (const auto& p : pairs) {
        EXPECT_NEAR(p.value.imag(), 0.0, 1e-12);
        EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
        EXPECT_LE(p.residual, 1e-12);
        vals.push_back(p.value.real());
    }
    std::sort(vals.begin(), vals.end());
    EXPECT_NEAR(vals[0], 1.0, 1e-12);
    EXPECT_NEAR(vals[1], 2.0, 1e-12);
    EXPECT_NEAR(vals[2], 3.0, 1e-12);
}

TEST(Eig, CompanionRoots) {
    // companion of x^2 - 3x + 2, roots 1 and 2
    DenseMatrix a(2, 2);
    a << 0.0, -2.0, 1.0, 3.0;
    auto pairs = eig(a);
    std::vector<double> vals{pairs[0].value.real(), pairs[1].value.real()};
    std::sort(vals.begin(), vals.end());
    EXPECT_NEAR(vals[0], 1.0, 1e-10);
    EXPECT_NEAR(vals[1], 2.0, 1e-10);
}

TEST(Eig, TraceAndDeterminantIdentities) {
    Rng rng(108);
    const DenseMatrix a = random_matrix(rng, 20);
    auto pairs = eig(a);
    ASSERT_EQ(pairs.size(), 20u);
    Cplx sum(0.0, 0.0), prod(1.0, 0.0);
    for (const auto& p : pairs) {
        sum += p.value;
        prod *= p.value;
    }
    EXPECT_NEAR(sum.real(), a.trace(), 1e-8 * std::abs(a.trace()) + 1e-10);
    EXPECT_NEAR(sum.imag(), 0.0, 1e-8);
    const double det = determinant(lu_threshold(a));
    EXPECT_NEAR(prod.real(), det, 1e-8 * std::abs(det));
}

TEST(Eig, ResidualInvariantOnRandomMatrices) {
    Rng rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 64));
        const DenseMatrix a = random_matrix(rng, n, -10.0, 10.0);
        const double a2 = norm2(a);
        for (const auto& p : eig(a)) EXPECT_LE(p.residual, 1e-8 * a2);
    }
}

TEST(GeneralizedEig, IdentityLeadingMatchesStandard) {
    Rng rng(110);
    const DenseMatrix c0 = random_matrix(rng, 6);
    auto gen = generalized_eig(DenseMatrix::Identity(6, 6), c0);
    auto std_pairs = eig(-c0);
    ASSERT_EQ(gen.size(), 6u);
    auto key = [](const Cplx& z) { return std::make_pair(z.real(), z.imag()); };
    std::vector<Cplx> gv, sv;
    for (const auto& p : gen) {
        ASSERT_FALSE(p.infinite());
        gv.push_back(p.value());
    }
    for (const auto& p : std_pairs) sv.push_back(p.value);
    auto cmp = [&key](const Cplx& x, const Cplx& y) { return key(x) < key(y); };
    std::sort(gv.begin(), gv.end(), cmp);
    std::sort(sv.begin(), sv.end(), cmp);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_LE(std::abs(gv[i] - sv[i]), 1e-8);
}

TEST(GeneralizedEig, DiagonalWithInfinitePair) {
    DenseMatrix c1 = DenseMatrix::Zero(2, 2), c0 = DenseMatrix::Zero(2, 2);
    c1(0, 0) = 1.0;
    c0(0, 0) = -2.0;
    c0(1, 1) = 1.0;
    auto pairs = generalized_eig(c1, c0);
    ASSERT_EQ(pairs.size(), 2u);
    int finite = 0, infinite = 0;
    for (const auto& p : pairs) {
        const double s = std::hypot(std::abs(p.alpha), p.beta);
        EXPECT_NEAR(s, 1.0, 1e-12);
        EXPECT_GE(p.beta, 0.0);
        if (p.infinite()) {
            ++infinite;
        } else {
            ++finite;
            EXPECT_LE(std::abs(p.value() - Cplx(2.0, 0.0)), 1e-10);
        }
    }
    EXPECT_EQ(finite, 1);
    EXPECT_EQ(infinite, 1);
}

TEST(GeneralizedEig, PairsAnnihilateThePencil) {
    Rng rng(111);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 20));
        const DenseMatrix c1 = random_matrix(rng, n);
        const DenseMatrix c0 = random_matrix(rng, n);
        auto pairs = generalized_eig(c1, c0);
        // regular pencil: degree 1, so candidate count equals the dimension
        EXPECT_EQ(pairs.size(), static_cast<std::size_t>(n));
        const double scale = norm2(c1) + norm2(c0);
        for (const auto& p : pairs) {
            EXPECT_GT(std::hypot(std::abs(p.alpha), p.beta), 0.5);
            EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
            EXPECT_LE(p.residual, 1e-6 * scale);
            const DenseCplxMatrix pencil =
                p.alpha * c1.cast<Cplx>() + Cplx(p.beta, 0.0) * c0.cast<Cplx>();
            EXPECT_LE(smallest_singular_value(pencil), 1e-6 * scale);
        }
    }
}

TEST(GeneralizedEig, IdenticallySingularPencilThrows) {
    const DenseMatrix z = DenseMatrix::Zero(3, 3);
    EXPECT_THROW(generalized_eig(z, z), IdenticallySingularPencilError);
}

TEST(GeneralizedEig, SingularPartIsDropped) {
    // shared null column: det(alpha C1 + beta C0) vanishes identically, but
    // the regular part still carries one honest pair
    DenseMatrix c1 = DenseMatrix::Zero(2, 2), c0 = DenseMatrix::Zero(2, 2);
    c1(0, 0) = 1.0;
    c0(0, 0) = 3.0;
    auto pairs = generalized_eig(c1, c0);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_FALSE(pairs[0].infinite());
    EXPECT_LE(std::abs(pairs[0].value() - Cplx(-3.0, 0.0)), 1e-10);
}

TEST(Schur, ZeroOffDiagonalBlockIsIdentity) {
    Rng rng(112);
    const DenseMatrix m11 = random_matrix(rng, 4) + 4.0 * DenseMatrix::Identity(4, 4);
    const DenseMatrix m22 = random_matrix(rng, 3);
    const DenseMatrix s =
        schur_complement(m11, DenseMatrix::Zero(4, 3), random_matrix(rng, 4).topRows(3), m22);
    EXPECT_LE((s - m22).norm(), 1e-14);
}

TEST(Schur, ScalarBlocks) {
    DenseMatrix a(1, 1), b(1, 1), c(1, 1), d(1, 1);
    a << 2.0;
    b << 3.0;
    c << 4.0;
    d << 5.0;
    const DenseMatrix s = schur_complement(a, b, c, d);
    EXPECT_NEAR(s(0, 0), 5.0 - 4.0 * 3.0 / 2.0, 1e-14);
}

TEST(Schur, DeterminantIdentity) {
    Rng rng(113);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = static_cast<int>(rng.uniform_int(2, 12));
        const int m = static_cast<int>(rng.uniform_int(1, 8));
        DenseMatrix full = random_matrix(rng, k + m);
        const DenseMatrix m11 = full.topLeftCorner(k, k);
        const LuFactorization f11 = lu_threshold(m11);
        if (!f11.complete()) continue;
        const DenseMatrix s = schur_complement(m11, full.topRightCorner(k, m),
                                               full.bottomLeftCorner(m, k),
                                               full.bottomRightCorner(m, m));
        const double det_full = determinant(lu_threshold(full));
        const double det_blocks = determinant(f11) * determinant(lu_threshold(s));
        EXPECT_NEAR(det_full, det_blocks, 1e-8 * std::abs(det_full) + 1e-14);
    }
}

TEST(Schur, SingularM11Throws) {
    const DenseMatrix z = DenseMatrix::Zero(2, 2);
    EXPECT_THROW(schur_complement(z, DenseMatrix::Identity(2, 2), DenseMatrix::Identity(2, 2),
                                  DenseMatrix::Identity(2, 2)),
                 SingularFactorError);
}
