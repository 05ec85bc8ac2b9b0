// Exact hulls, merged facets, volume, Minkowski sums, lattice enumeration.

#include "sparsolve/polytope.hpp"

#include <gtest/gtest.h>

namespace sparsolve {
namespace {

RatVec rv(std::initializer_list<int> v) {
    RatVec r;
    for (int x : v) r.push_back(Rat(x));
    return r;
}

TEST(ConvexHull, SquareWithNoiseCandidates) {
    std::vector<RatVec> pts = {rv({0, 0}), rv({1, 0}),  rv({0, 1}),
                               rv({1, 1}), rv({1, 1}),                    // duplicate
                               {Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(0)}};  // interior, edge
    Polytope p = convex_hull(pts);
    EXPECT_EQ(p.dim, 2);
    EXPECT_EQ(p.vertices.size(), 4u);
    EXPECT_EQ(p.facets.size(), 4u);
    EXPECT_EQ(p.volume, Rat(1));
    EXPECT_TRUE(p.equations.empty());

    EXPECT_EQ(p.side({Rat(1, 2), Rat(1, 2)}), 1);
    EXPECT_EQ(p.side({Rat(0), Rat(1, 2)}), 0);
    EXPECT_EQ(p.side({Rat(2), Rat(0)}), -1);
    EXPECT_TRUE(p.contains({Rat(0), Rat(1, 2)}));
    EXPECT_FALSE(p.contains({Rat(-1, 2), Rat(0)}));
}

TEST(ConvexHull, LowerDimensionalInput) {
    // Collinear points in the plane: a segment with affine-hull equation.
    Polytope p = convex_hull({rv({0, 0}), rv({1, 1}), rv({2, 2}), rv({3, 3})});
    EXPECT_EQ(p.dim, 1);
    ASSERT_EQ(p.vertices.size(), 2u);
    EXPECT_EQ(p.vertices.front(), rv({0, 0}));
    EXPECT_EQ(p.vertices.back(), rv({3, 3}));
    EXPECT_EQ(p.volume, Rat(0));
    ASSERT_EQ(p.equations.size(), 1u);
    EXPECT_TRUE(p.contains(rv({2, 2})));
    EXPECT_FALSE(p.contains(rv({2, 1})));
    EXPECT_FALSE(p.contains(rv({4, 4})));

    Polytope point = convex_hull({rv({5, 7}), rv({5, 7})});
    EXPECT_EQ(point.dim, 0);
    EXPECT_TRUE(point.contains(rv({5, 7})));
    EXPECT_FALSE(point.contains(rv({5, 8})));
}

TEST(ConvexHull, MergedFacetsOnCube) {
    std::vector<RatVec> pts;
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y)
            for (int z = 0; z <= 1; ++z) pts.push_back(rv({x, y, z}));
    pts.push_back({Rat(1, 2), Rat(1, 2), Rat(1, 2)});  // center
    pts.push_back({Rat(1, 2), Rat(1, 2), Rat(0)});     // face center
    Polytope p = convex_hull(pts);
    EXPECT_EQ(p.dim, 3);
    EXPECT_EQ(p.vertices.size(), 8u);
    ASSERT_EQ(p.facets.size(), 6u);
    for (const auto& f : p.facets) EXPECT_EQ(f.vertex_ids.size(), 4u);
    EXPECT_EQ(p.volume, Rat(1));
}

TEST(ConvexHull, SimplexVolume) {
    Polytope p = convex_hull({rv({0, 0, 0}), rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1})});
    EXPECT_EQ(p.volume, Rat(1, 6));
    EXPECT_EQ(p.facets.size(), 4u);
}

TEST(ConvexHull, CollinearExtensionMergesBoundary) {
    // (1,0) lies inside the bottom edge once (2,0) arrives.
    Polytope p = convex_hull({rv({0, 0}), rv({0, 1}), rv({0, 2}), rv({1, 0}), rv({2, 0})});
    EXPECT_EQ(p.vertices.size(), 3u);
    EXPECT_EQ(p.facets.size(), 3u);
    EXPECT_EQ(p.volume, Rat(2));
}

TEST(ConvexHull, DimensionGuard) {
    std::vector<RatVec> pts(2, RatVec(9, Rat(0)));
    pts[1][0] = 1;
    EXPECT_THROW(convex_hull(pts), DimensionError);
}

TEST(Minkowski, SquarePlusSegment) {
    Polytope sq = convex_hull({rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})});
    Polytope seg = convex_hull({rv({0, 0}), rv({1, 0})});
    Polytope sum = minkowski_sum(sq, seg);
    EXPECT_EQ(sum.volume, Rat(2));
    EXPECT_EQ(sum.vertices.size(), 4u);
}

TEST(Minkowski, ZonotopeFromThreeSegments) {
    std::vector<std::vector<ExponentVec>> supports = {
        {{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}, {{0, 0}, {1, 1}}};
    Polytope z = minkowski_sum_of_supports(supports);
    EXPECT_EQ(z.volume, Rat(3));
    EXPECT_EQ(z.vertices.size(), 6u);
}

TEST(LatticePoints, ShiftedSquareAndSimplex) {
    Polytope sq = convex_hull({rv({0, 0}), rv({2, 0}), rv({0, 2}), rv({2, 2})});
    RatVec delta = {Rat(1, 7), Rat(1, 9)};
    auto pts = lattice_points(sq, delta);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(pts[0], (ExponentVec{1, 1}));
    EXPECT_EQ(pts[3], (ExponentVec{2, 2}));

    Polytope tri = convex_hull({rv({0, 0}), rv({2, 0}), rv({0, 2})});
    auto tpts = lattice_points(tri, {Rat(1, 3), Rat(1, 5)});
    ASSERT_EQ(tpts.size(), 1u);
    EXPECT_EQ(tpts[0], (ExponentVec{1, 1}));
}

TEST(LatticePoints, ExactBoundaryHitRaises) {
    Polytope sq = convex_hull({rv({0, 0}), rv({2, 0}), rv({0, 2}), rv({2, 2})});
    EXPECT_THROW(lattice_points(sq, {Rat(0), Rat(0)}), DegenerateDeltaError);
    Polytope seg = convex_hull({rv({0, 0}), rv({1, 1})});
    EXPECT_THROW(lattice_points(seg, {Rat(1, 7), Rat(1, 9)}), std::invalid_argument);
}

}  // namespace
}  // namespace sparsolve
