#include "sparsolve/subdivision.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace sparsolve;

namespace {

using Supports = std::vector<std::vector<ExponentVec>>;

std::vector<ExponentVec> simplex_support(int n) {
    std::vector<ExponentVec> pts = {ExponentVec(static_cast<std::size_t>(n))};
    for (int j = 0; j < n; ++j) {
        ExponentVec e(static_cast<std::size_t>(n));
        e[j] = 1;
        pts.push_back(e);
    }
    return pts;
}

std::vector<ExponentVec> dense_support(int n, int deg) {
    std::vector<ExponentVec> pts;
    ExponentVec e(static_cast<std::size_t>(n));
    auto rec = [&](auto&& self, int j, int left) -> void {
        if (j == n) {
            pts.push_back(e);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            e[j] = v;
            self(self, j + 1, left - v);
        }
        e[j] = 0;
    };
    rec(rec, 0, deg);
    return pts;
}

std::vector<ExponentVec> random_support(Rng& rng, int n, int maxdeg, int size) {
    std::set<ExponentVec> pts;
    while (static_cast<int>(pts.size()) < size) {
        ExponentVec e(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) e[j] = static_cast<int32_t>(rng.uniform_int(0, maxdeg));
        pts.insert(e);
    }
    return {pts.begin(), pts.end()};
}

std::vector<ExponentVec> sum_support(const std::vector<ExponentVec>& a,
                                     const std::vector<ExponentVec>& b) {
    std::set<ExponentVec> pts;
    for (const auto& p : a)
        for (const auto& q : b) pts.insert(p + q);
    return {pts.begin(), pts.end()};
}

std::vector<ExponentVec> shift_support(const std::vector<ExponentVec>& a, const ExponentVec& t) {
    std::vector<ExponentVec> out;
    for (const auto& p : a) out.push_back(p + t);
    return out;
}

// Bearing-vector product structure: all 16 pairs from two tetrahedral factors.
std::vector<ExponentVec> camera_quadric_support() {
    std::vector<ExponentVec> pts;
    auto corners = simplex_support(3);
    for (const auto& q : corners)
        for (const auto& d : corners) {
            ExponentVec e{q[0], q[1], q[2], d[0], d[1], d[2]};
            pts.push_back(e);
        }
    return pts;
}

Supports camera_supports() {
    Supports s(5, camera_quadric_support());
    std::vector<ExponentVec> c = {ExponentVec{0, 0, 0, 0, 0, 0}};
    for (int j = 0; j < 3; ++j) {
        ExponentVec e(std::size_t{6});
        e[j] = 1;
        e[j + 3] = 1;
        c.push_back(e);
    }
    s.push_back(c);
    return s;
}

Supports molecule_supports() {
    auto sq = [](int skip) {
        std::vector<ExponentVec> pts;
        int u = (skip + 1) % 3, v = (skip + 2) % 3;
        for (int a : {0, 2})
            for (int b : {0, 2}) {
                ExponentVec e(std::size_t{3});
                e[u] = a;
                e[v] = b;
                pts.push_back(e);
            }
        ExponentVec mid(std::size_t{3});
        mid[u] = 1;
        mid[v] = 1;
        pts.push_back(mid);
        return pts;
    };
    return {sq(0), sq(1), sq(2)};
}

}  // namespace

TEST(LocateEnvelope, TwoSegmentWalkthrough) {
    Supports segs = {{ExponentVec{0}, ExponentVec{1}}, {ExponentVec{0}, ExponentVec{1}}};
    auto ls = LiftedSupports::with_lifts(segs, {{Rat(0), Rat(0)}, {Rat(0), Rat(1)}});

    auto left = locate_envelope(ls, {Rat(1, 2)});
    ASSERT_TRUE(left.has_value());
    EXPECT_TRUE(left->fine);
    EXPECT_EQ(left->face_ids[0], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(left->face_ids[1], (std::vector<std::size_t>{0}));
    EXPECT_EQ(left->gamma[0], Rat(0));

    auto right = locate_envelope(ls, {Rat(3, 2)});
    ASSERT_TRUE(right.has_value());
    EXPECT_EQ(right->face_ids[0], (std::vector<std::size_t>{1}));
    EXPECT_EQ(right->face_ids[1], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(right->gamma[0], Rat(1));

    EXPECT_FALSE(locate_envelope(ls, {Rat(5, 2)}).has_value());
    EXPECT_FALSE(locate_envelope(ls, {Rat(-1, 10)}).has_value());
}

TEST(MixedSubdivisionTest, TwoSegmentCellsAndTypes) {
    Supports segs = {{ExponentVec{0}, ExponentVec{1}}, {ExponentVec{0}, ExponentVec{1}}};
    auto ls = LiftedSupports::with_lifts(segs, {{Rat(0), Rat(0)}, {Rat(0), Rat(1)}});
    MixedSubdivision sub(ls);

    const auto& cells = sub.cells();
    ASSERT_EQ(cells.size(), 2u);
    std::vector<std::vector<int>> types;
    Rat total = 0;
    for (const auto& c : cells) {
        types.push_back(c.type);
        total += c.volume;
        EXPECT_EQ(c.volume, Rat(1));
    }
    std::sort(types.begin(), types.end());
    EXPECT_EQ(types[0], (std::vector<int>{0, 1}));
    EXPECT_EQ(types[1], (std::vector<int>{1, 0}));
    EXPECT_EQ(total, Rat(2));
}

TEST(MixedSubdivisionTest, IdenticalSimplicesCoverTheDilation) {
    for (int n : {2, 3}) {
        Supports s(static_cast<std::size_t>(n) + 1, simplex_support(n));
        MixedSubdivision sub(s, /*seed=*/91 + n);
        const auto& cells = sub.cells();
        Rat total = 0;
        for (const auto& c : cells) {
            total += c.volume;
            int type_sum = 0;
            for (int d : c.type) type_sum += d;
            EXPECT_EQ(type_sum, n);
        }
        Rat expected = 1;
        for (int k = 2; k <= n; ++k) expected /= k;
        for (int k = 0; k < n; ++k) expected *= n + 1;  // (n+1)^n / n!
        EXPECT_EQ(total, expected) << "n=" << n;
        EXPECT_GT(cells.size(), 1u);
    }
}

TEST(MixedSubdivisionTest, CellInteriorsAreDisjoint) {
    Supports s(3, simplex_support(2));
    MixedSubdivision sub(s, 17);
    auto cells = sub.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        RatVec centroid(2, Rat(0));
        for (const auto& v : cells[i].poly.vertices) centroid = centroid + v;
        for (auto& c : centroid) c /= Rat(cells[i].poly.vertices.size());
        EXPECT_EQ(cells[i].poly.side(centroid), 1);
        for (std::size_t j = 0; j < cells.size(); ++j)
            if (j != i) EXPECT_NE(cells[j].poly.side(centroid), 1);
    }
}

TEST(MixedCells, MatchFullSubdivisionOnSharedLifting) {
    Supports s = {{ExponentVec{0, 0}, ExponentVec{2, 0}, ExponentVec{0, 1}},
                  {ExponentVec{0, 0}, ExponentVec{1, 0}, ExponentVec{0, 2}, ExponentVec{1, 1}}};
    auto ls = LiftedSupports::random_lifting(s, 2024);

    auto lites = enumerate_mixed_cells(ls);
    MixedSubdivision sub(ls);
    std::vector<const MixedCell*> mixed;
    for (const auto& c : sub.cells())
        if (c.fully_mixed()) mixed.push_back(&c);
    ASSERT_EQ(lites.size(), mixed.size());

    std::set<std::vector<std::size_t>> lite_keys;
    Rat lite_total = 0;
    for (const auto& lc : lites) {
        std::vector<std::size_t> key;
        for (const auto& e : lc.edge_ids) {
            key.push_back(2);
            key.push_back(std::min(e[0], e[1]));
            key.push_back(std::max(e[0], e[1]));
        }
        lite_keys.insert(key);
        lite_total += Rat(lc.cell_volume);

        // The dual certificate must reproduce the same cell through location.
        RatVec mid(2, Rat(0));
        for (std::size_t i = 0; i < s.size(); ++i)
            mid = mid + (ls.supports[i][lc.edge_ids[i][0]].to_rat() +
                         ls.supports[i][lc.edge_ids[i][1]].to_rat());
        for (auto& v : mid) v /= 2;
        auto ef = locate_envelope(ls, mid);
        ASSERT_TRUE(ef.has_value());
        EXPECT_TRUE(ef->fine);
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::vector<std::size_t> want = {std::min(lc.edge_ids[i][0], lc.edge_ids[i][1]),
                                             std::max(lc.edge_ids[i][0], lc.edge_ids[i][1])};
            EXPECT_EQ(ef->face_ids[i], want);
        }
    }
    Rat cell_total = 0;
    for (const auto* c : mixed) {
        EXPECT_TRUE(lite_keys.count(c->key()));
        cell_total += c->volume;
    }
    EXPECT_EQ(lite_total, cell_total);
}

TEST(MixedVolumeTest, UnitSimplicesGiveOne) {
    for (int n : {1, 2, 3, 4}) {
        Supports s(static_cast<std::size_t>(n), simplex_support(n));
        EXPECT_EQ(mixed_volume(s), 1) << "n=" << n;
        EXPECT_EQ(mixed_volume_ie(s), 1) << "n=" << n;
    }
}

TEST(MixedVolumeTest, DenseSystemsMatchDegreeProduct) {
    Supports s = {dense_support(2, 2), dense_support(2, 3)};
    EXPECT_EQ(mixed_volume(s), 6);
    EXPECT_EQ(mixed_volume_ie(s), 6);

    Supports t = {dense_support(3, 1), dense_support(3, 2), dense_support(3, 2)};
    EXPECT_EQ(mixed_volume(t), 4);
    EXPECT_EQ(mixed_volume_ie(t), 4);
}

TEST(MixedVolumeTest, IdenticalBodiesGiveScaledVolume) {
    // MV(P,...,P) = n! Vol(P); the square has volume 4.
    std::vector<ExponentVec> square = {ExponentVec{0, 0}, ExponentVec{2, 0}, ExponentVec{0, 2},
                                       ExponentVec{2, 2}};
    Supports s = {square, square};
    EXPECT_EQ(mixed_volume(s), 8);
    EXPECT_EQ(mixed_volume_ie(s), 8);
}

TEST(MixedVolumeTest, AgreesWithInclusionExclusionOnRandomInstances) {
    Rng rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        Supports s = {random_support(rng, 2, 4, 3 + static_cast<int>(rng.uniform_int(0, 3))),
                      random_support(rng, 2, 4, 3 + static_cast<int>(rng.uniform_int(0, 3)))};
        std::int64_t mv = mixed_volume(s, 1000 + static_cast<std::uint64_t>(trial));
        EXPECT_EQ(mv, mixed_volume_ie(s)) << "trial " << trial;
        EXPECT_GE(mv, 0);
    }
    for (int trial = 0; trial < 10; ++trial) {
        Supports s = {random_support(rng, 3, 3, 4), random_support(rng, 3, 3, 4),
                      random_support(rng, 3, 3, 4)};
        std::int64_t mv = mixed_volume(s, 2000 + static_cast<std::uint64_t>(trial));
        EXPECT_EQ(mv, mixed_volume_ie(s)) << "trial " << trial;
    }
}

TEST(MixedVolumeTest, SymmetryAndTranslationInvariance) {
    Rng rng(4242);
    Supports s = {random_support(rng, 2, 4, 4), random_support(rng, 2, 4, 5)};
    std::int64_t base = mixed_volume(s);

    Supports perm = {s[1], s[0]};
    EXPECT_EQ(mixed_volume(perm), base);

    Supports shifted = {shift_support(s[0], ExponentVec{2, 3}), s[1]};
    EXPECT_EQ(mixed_volume(shifted), base);
}

TEST(MixedVolumeTest, MultilinearInMinkowskiSum) {
    Rng rng(555);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_support(rng, 2, 3, 3);
        auto a2 = random_support(rng, 2, 3, 3);
        auto b = random_support(rng, 2, 3, 4);
        std::int64_t lhs = mixed_volume({sum_support(a, a2), b});
        std::int64_t rhs = mixed_volume({a, b}) + mixed_volume({a2, b});
        EXPECT_EQ(lhs, rhs) << "trial " << trial;
    }
}

TEST(MixedVolumeTest, BezoutDominance) {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Supports s = {random_support(rng, 2, 3, 4), random_support(rng, 2, 3, 4)};
        std::int64_t bezout = 1;
        for (const auto& a : s) {
            std::int64_t deg = 0;
            for (const auto& e : a) deg = std::max(deg, e.positive_degree());
            bezout *= deg;
        }
        EXPECT_LE(mixed_volume(s), bezout) << "trial " << trial;
    }
}

TEST(StableMixedVolume, BoundsPlainMixedVolume) {
    // Bilinear supports without the origin: toric count 1, affine count 2.
    std::vector<ExponentVec> bilin = {ExponentVec{1, 0}, ExponentVec{0, 1}, ExponentVec{1, 1}};
    Supports s = {bilin, bilin};
    EXPECT_EQ(mixed_volume(s), 1);
    EXPECT_EQ(stable_mixed_volume(s), 2);

    Rng rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        Supports t = {shift_support(random_support(rng, 2, 3, 3), ExponentVec{1, 1}),
                      shift_support(random_support(rng, 2, 3, 3), ExponentVec{1, 0})};
        EXPECT_GE(stable_mixed_volume(t), mixed_volume(t)) << "trial " << trial;
    }
}

TEST(DegenerateLifting, ZeroLiftsWithCollinearTieAreRejected) {
    Supports s = {{ExponentVec{0, 0}, ExponentVec{1, 0}, ExponentVec{2, 0}},
                  {ExponentVec{0, 0}, ExponentVec{0, 1}}};
    auto ls = LiftedSupports::with_lifts(s, {{Rat(0), Rat(0), Rat(0)}, {Rat(0), Rat(0)}});
    EXPECT_THROW(enumerate_mixed_cells(ls), NonGenericLiftingError);

    // The public entry redraws liftings internally and still gets the value.
    EXPECT_EQ(mixed_volume(s), 2);
    EXPECT_EQ(mixed_volume_ie(s), 2);
}

TEST(MoleculeGeometry, MixedVolumeSixteen) {
    Supports s = molecule_supports();
    EXPECT_EQ(mixed_volume(s), 16);
    EXPECT_EQ(mixed_volume_ie(s), 16);
}

TEST(CameraGeometry, MixedVolumeTwenty) {
    Supports s = camera_supports();
    EXPECT_EQ(mixed_volume(s), 20);
}

TEST(CameraGeometry, InclusionExclusionAgrees) {
    EXPECT_EQ(mixed_volume_ie(camera_supports()), 20);
}
