#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cround/plane_tilings.hpp"
#include "cround/verify.hpp"

using namespace cround;

namespace {

std::vector<SchemeDescriptor> plane_schemes() {
    std::vector<SchemeDescriptor> v{make_hex3()};
    for (int k = 3; k <= 8; ++k) v.push_back(make_brick_wall(k));
    for (int m = 3; m <= 8; ++m) v.push_back(make_honeycomb_rect(m));
    return v;
}

}  // namespace

TEST(BrickWall, Parameters) {
    EXPECT_NEAR(brick_wall_params(3).h, 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(brick_wall_params(4).h, 1, 1e-15);
    EXPECT_NEAR(brick_wall_params(5).h, std::sqrt(1.5), 1e-15);
    for (int k = 3; k <= 12; ++k) {
        auto p = brick_wall_params(k);
        EXPECT_NEAR(p.w * p.h, 1, 1e-14);
    }
    EXPECT_THROW(brick_wall_params(2), InvalidParameters);
}

TEST(BrickWall, ExactDistanceEqualsNominal) {
    for (int k = 3; k <= 8; ++k) {
        Scheme s = build_scheme(make_brick_wall(k));
        EXPECT_NEAR(exact_min_distance(s).t_measured, s.nominal_min_distance(), 1e-9) << k;
    }
}

TEST(BrickWall, GapsEqualInBothDirections) {
    for (int k = 3; k <= 8; ++k) {
        auto p = brick_wall_params(k);
        Scheme s = build_scheme(make_brick_wall(k));
        // every row-0 brick: its colour twin two rows up is h away vertically,
        // and the nearest twin in row 1 is h away horizontally
        for (int i = 0; i < k; ++i) {
            TileId base{{0, 0}, i};
            Color c = s.color_of(base);
            const auto& g = s.fundamental_tiles()[i].geometry;
            double best_h = 1e300;
            for (std::int64_t cx = -2; cx <= 2; ++cx)
                for (int j = 0; j < k; ++j) {
                    TileId other{{cx, 0}, k + j};
                    if (s.color_of(other) != c) continue;
                    auto o = s.tile_info(other).geometry;
                    double gap = std::max({0.0, o.lo[0] - g.hi[0], g.lo[0] - o.hi[0]});
                    best_h = std::min(best_h, gap);
                }
            EXPECT_NEAR(best_h, p.h, 1e-9) << "k=" << k << " i=" << i;
            auto up = s.tile_info(TileId{{0, 1}, i}).geometry;
            EXPECT_EQ(s.color_of(TileId{{0, 1}, i}), c);
            EXPECT_NEAR(up.lo[1] - g.hi[1], p.h, 1e-12);
        }
    }
}

TEST(BrickWall, LayoutConvention) {
    Scheme s = build_scheme(make_brick_wall(4));
    auto a = s.encode({0.1, 0.1}), b = s.encode({0.45, 0.45});
    EXPECT_EQ(a.tile, b.tile);
    EXPECT_NEAR(a.center[0], 0.5, 1e-12);
    EXPECT_NEAR(a.center[1], 0.5, 1e-12);
    EXPECT_EQ(a.color.index, 0);
    // row 0 colours run 0..k-1 left to right
    for (int i = 0; i < 4; ++i) EXPECT_EQ(s.encode({i + 0.5, 0.5}).color.index, i);
}

TEST(Hex3, SideAndArea) {
    double s = hex_side();
    EXPECT_NEAR(3 * std::sqrt(3.0) / 2 * s * s, 1, 1e-14);
    EXPECT_NEAR(s, 0.6204032394, 1e-9);
}

TEST(Hex3, LocateMatchesNearestCentre) {
    Scheme sch = build_scheme(make_hex3());
    const double s = hex_side();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int it = 0; it < 50'000; ++it) {
        Point x{u(rng), u(rng)};
        // Voronoi cells of the hexagonal centre lattice are exactly the tiles
        double best = 1e300;
        int bq = 0, br = 0;
        for (int q = -12; q <= 12; ++q)
            for (int r = -14; r <= 14; ++r) {
                double cx = 1.5 * s * q, cy = std::sqrt(3.0) * s * (r + q / 2.0);
                double d = std::hypot(x[0] - cx, x[1] - cy);
                if (d < best) {
                    best = d;
                    bq = q;
                    br = r;
                }
            }
        auto e = sch.encode(x);
        ASSERT_NEAR(e.center[0], 1.5 * s * bq, 1e-9);
        ASSERT_NEAR(e.center[1], std::sqrt(3.0) * s * (br + bq / 2.0), 1e-9);
        ASSERT_EQ(e.color.index, ((bq - br) % 3 + 3) % 3);
    }
}

TEST(Hex3, FaultToleranceNear031) {
    Scheme s = build_scheme(make_hex3());
    double ft = exact_min_distance(s).t_measured / 2;
    EXPECT_GE(ft, 0.30);
    EXPECT_LE(ft, 0.32);
    EXPECT_NEAR(ft, hex_side() / 2, 1e-9);
}

TEST(Honeycomb, ParameterBalancesBothGaps) {
    for (int m = 3; m <= 32; ++m) {
        auto p = honeycomb_params(m);
        double horizontal = (m - 1) * p.a;
        double diagonal = std::hypot((m - 1) / p.a, (m / 2.0 - 1) * p.a);
        EXPECT_NEAR(horizontal, diagonal, 1e-9 * horizontal) << m;
        EXPECT_NEAR(honeycomb_horizontal_distance(m), honeycomb_diagonal_distance(m), 1e-9 * horizontal);
    }
}

TEST(Honeycomb, ExactDistanceEqualsNominal) {
    for (int m = 3; m <= 8; ++m) {
        Scheme s = build_scheme(make_honeycomb_rect(m));
        EXPECT_NEAR(exact_min_distance(s).t_measured, (m - 1) * honeycomb_params(m).a, 1e-9) << m;
    }
}

TEST(Honeycomb, ApproachesCirclePackingConstant) {
    double prev = 0;
    for (int m : {4, 8, 16, 32, 64, 128}) {
        auto p = honeycomb_params(m);
        double ratio = (m - 1) * p.a / m;
        EXPECT_GT(ratio, prev);
        prev = ratio;
    }
    EXPECT_NEAR(prev, std::pow(4.0 / 3.0, 0.25), 0.02);
}

TEST(PlaneTilings, SameColourTilesNeverTouch) {
    for (const auto& desc : plane_schemes()) {
        Scheme s = build_scheme(desc);
        for (int l = 0; l < s.tiles_per_domain(); ++l) {
            const auto& g = s.fundamental_tiles()[l].geometry;
            for (std::int64_t cx = -2; cx <= 2; ++cx)
                for (std::int64_t cy = -2; cy <= 2; ++cy)
                    for (int l2 = 0; l2 < s.tiles_per_domain(); ++l2) {
                        if (cx == 0 && cy == 0 && l2 == l) continue;
                        TileId other{{cx, cy}, l2};
                        auto o = s.tile_info(other).geometry;
                        double dist = piece_distance(g.pieces[0], o.pieces[0], {0, 0, 0}).distance;
                        if (dist <= 1e-9) {
                            ASSERT_NE(s.color_of(TileId{{0, 0}, l}), s.color_of(other)) << s.name();
                        }
                    }
        }
    }
}

TEST(PlaneTilings, ColourBalance) {
    for (const auto& desc : plane_schemes()) {
        Scheme s = build_scheme(desc);
        std::vector<double> area(s.colors(), 0);
        for (const auto& t : s.fundamental_tiles()) area[t.color.index] += t.geometry.volume;
        for (double a : area) EXPECT_NEAR(a, s.period_volume() / s.colors(), 1e-9) << s.name();
    }
}

TEST(Parity1d, WorkedExample) {
    Scheme s = build_scheme(make_parity_1d());
    auto e = s.encode({0.49999});
    EXPECT_EQ(e.center, Point{0.0});
    EXPECT_EQ(e.color.index, 0);
    auto d = s.decode({0.50001}, e.color);
    EXPECT_EQ(d.center, Point{0.0});
    // without side information 0.50001 would round to 1
    EXPECT_EQ(s.encode({0.50001}).center, Point{1.0});
    EXPECT_EQ(exact_min_distance(s).t_measured, 1.0);
}
