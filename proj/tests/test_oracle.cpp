// Exact-elimination oracle self-checks plus the solver-versus-oracle digit
// agreement on the cyclohexane instance.

#include "oracle_elimination.hpp"
#include "sparsolve/root_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace sparsolve {
namespace {

double nearest(const std::vector<double>& xs, double v) {
    double best = 1e300;
    for (double x : xs) best = std::min(best, std::abs(x - v));
    return best;
}

TEST(OraclePolyOps, RemainderAndGcd) {
    using oracle::QPoly;
    // (x-1)^2 (x+2) and (x-1)(x+3): gcd = x-1
    QPoly a{{Rat(2), Rat(-3), Rat(0), Rat(1)}};
    QPoly b{{Rat(-3), Rat(2), Rat(1)}};
    const QPoly g = oracle::poly_gcd(a, b);
    ASSERT_EQ(g.deg(), 1);
    EXPECT_EQ(g.c[1], Rat(1));
    EXPECT_EQ(g.c[0], Rat(-1));
    const QPoly sf = oracle::squarefree_part(a);
    EXPECT_EQ(sf.deg(), 2);  // (x-1)(x+2) up to scale
    EXPECT_EQ(oracle::eval_q(sf, Rat(1)), Rat(0));
    EXPECT_EQ(oracle::eval_q(sf, Rat(-2)), Rat(0));
}

TEST(OracleSturm, IsolatesQuarticRoots) {
    using oracle::QPoly;
    // (x^2-1)(x^2-4): roots -2, -1, 1, 2
    QPoly p{{Rat(4), Rat(0), Rat(-5), Rat(0), Rat(1)}};
    const std::vector<double> roots = oracle::real_roots(p);
    ASSERT_EQ(roots.size(), 4u);
    EXPECT_NEAR(roots[0], -2.0, 1e-11);
    EXPECT_NEAR(roots[1], -1.0, 1e-11);
    EXPECT_NEAR(roots[2], 1.0, 1e-11);
    EXPECT_NEAR(roots[3], 2.0, 1e-11);
}

TEST(OracleSturm, RepeatedRootsHandledThroughSquarefreePart) {
    using oracle::QPoly;
    // (x-3)^3: one real root
    QPoly p{{Rat(-27), Rat(27), Rat(-9), Rat(1)}};
    const std::vector<double> roots = oracle::real_roots(p);
    ASSERT_EQ(roots.size(), 1u);
    EXPECT_NEAR(roots[0], 3.0, 1e-11);
}

TEST(OracleEliminant, InstanceOneContainsTheKnownCoordinates) {
    const MoleculeInstance inst = molecule_instance_1();
    for (std::size_t m = 0; m < 3; ++m) {
        const std::vector<double> roots = oracle::molecule_coordinate_roots(inst, m);
        // every real solution coordinate is +-1 or +-5
        EXPECT_LT(nearest(roots, 1.0), 1e-10);
        EXPECT_LT(nearest(roots, -1.0), 1e-10);
        EXPECT_LT(nearest(roots, 5.0), 1e-10);
        EXPECT_LT(nearest(roots, -5.0), 1e-10);
    }
}

TEST(OracleEliminant, SymmetricInstanceMatchesClosedForm) {
    const MoleculeInstance inst = symmetric_instance();
    const std::vector<double> roots = oracle::molecule_coordinate_roots(inst, 2);
    const double s3 = std::sqrt(3.0);
    for (double sign : {1.0, -1.0}) {
        EXPECT_LT(nearest(roots, sign * std::sqrt(11.0 + 6.0 * s3)), 1e-9);
        EXPECT_LT(nearest(roots, sign * std::sqrt(11.0 - 6.0 * s3)), 1e-9);
    }
}

// Acceptance-grade agreement: every accepted cyclohexane root coordinate is
// within six significant digits of a root of the corresponding exact
// eliminant.
TEST(OracleVersusSolver, CyclohexaneCoordinatesAgreeToSixDigits) {
    const MoleculeInstance inst = cyclohexane_instance();
    const PolySystem src = molecule_system(inst);
    const SolveReport rep = solve_hidden(src, 2);
    const std::vector<RootCandidate> accepted = rep.accepted();
    ASSERT_GT(accepted.size(), 0u);

    std::vector<std::vector<double>> roots;
    for (std::size_t m = 0; m < 3; ++m) roots.push_back(oracle::molecule_coordinate_roots(inst, m));

    std::size_t real_count = 0;
    for (const RootCandidate& c : accepted) {
        double imag = 0.0;
        for (const Cplx& z : c.coords) imag = std::max(imag, std::abs(z.imag()));
        if (imag > 1e-6) continue;
        ++real_count;
        for (std::size_t m = 0; m < 3; ++m) {
            const double v = c.coords[m].real();
            EXPECT_LT(nearest(roots[m], v), 1e-6 * (1.0 + std::abs(v)))
                << "coordinate " << m << " value " << v;
        }
    }
    EXPECT_GT(real_count, 0u);
}

}  // namespace
}  // namespace sparsolve
