#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cround/geometry.hpp"
#include "cround/types.hpp"

using namespace cround;

namespace {

std::vector<Vec2> regular(int n, double cx, double cy, double r, double phase) {
    std::vector<Vec2> v;
    for (int i = 0; i < n; ++i) {
        double th = phase + 2 * std::numbers::pi * i / n;
        v.push_back({cx + r * std::cos(th), cy + r * std::sin(th)});
    }
    return v;
}

// brute force: distance between boundaries sampled densely (convex, disjoint)
double sampled_distance(const ConvexPiece& p, const ConvexPiece& q, const Vec3& shift) {
    double best = 1e300;
    auto edges = [](const ConvexPiece& c) {
        std::vector<Vec3> pts;
        const auto& v = c.vertices();
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j)
                for (int s = 0; s <= 80; ++s) pts.push_back(v[i] + (s / 80.0) * (v[j] - v[i]));
        return pts;
    };
    auto a = edges(p), b = edges(q);
    for (const auto& x : a)
        for (const auto& y : b) best = std::min(best, norm(x - (y + shift)));
    return best;
}

}  // namespace

TEST(Geometry, BoxVolumeCentroid) {
    auto b = ConvexPiece::box({0, 0, 0}, {2, 3, 0}, 2);
    EXPECT_TRUE(b.is_box());
    EXPECT_NEAR(b.volume(), 6, 1e-12);
    EXPECT_NEAR(b.centroid()[0], 1, 1e-12);
    EXPECT_NEAR(b.centroid()[1], 1.5, 1e-12);
    auto c = ConvexPiece::box({0, 0, 0}, {1, 2, 3}, 3);
    EXPECT_NEAR(c.volume(), 6, 1e-12);
    EXPECT_NEAR(ConvexPiece::interval(-0.5, 0.5).volume(), 1, 1e-15);
}

TEST(Geometry, PolygonAndPrismVolume) {
    // regular hexagon of side s has area 3 sqrt3 / 2 s^2
    auto hex = ConvexPiece::polygon(regular(6, 0, 0, 1, 0));
    EXPECT_NEAR(hex.volume(), 3 * std::sqrt(3.0) / 2, 1e-12);
    EXPECT_NEAR(hex.centroid()[0], 0, 1e-12);
    auto prism = ConvexPiece::prism(regular(6, 0, 0, 1, 0), -1, 2);
    EXPECT_NEAR(prism.volume(), 3 * 3 * std::sqrt(3.0) / 2, 1e-12);
    EXPECT_NEAR(prism.centroid()[2], 0.5, 1e-12);
    EXPECT_FALSE(prism.is_box());
}

TEST(Geometry, MaxViolationSign) {
    auto hex = ConvexPiece::polygon(regular(6, 0, 0, 1, 0));
    EXPECT_LT(hex.max_violation({0, 0, 0}), 0);
    EXPECT_NEAR(hex.max_violation({1, 0, 0}), 0, 1e-12);
    EXPECT_GT(hex.max_violation({2, 0, 0}), 0);
}

TEST(Geometry, BoxDistanceClosedForm) {
    Aabb a{{0, 0, 0}, {1, 1, 1}}, b{{2, 3, 1}, {3, 4, 2}};
    auto c = box_distance(a, b, 3);
    EXPECT_NEAR(c.distance, std::sqrt(1 + 4), 1e-12);
    EXPECT_NEAR(aabb_distance(a, b), std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(aabb_distance_linf(a, b), 2, 1e-12);
}

TEST(Geometry, GjkAgreesWithBoxFormula) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int it = 0; it < 500; ++it) {
        Vec3 lo1{u(rng), u(rng), u(rng)}, lo2{u(rng), u(rng), u(rng)};
        Vec3 hi1 = lo1 + Vec3{1 + u(rng) / 3 + 1, 0.5, 1.2}, hi2 = lo2 + Vec3{0.7, 1.3, 0.4};
        auto p = ConvexPiece::box(lo1, hi1, 3), q = ConvexPiece::box(lo2, hi2, 3);
        Vec3 shift{u(rng), u(rng), u(rng)};
        double closed = piece_distance(p, q, shift).distance;
        double gjk = convex_distance(p.vertices(), q.vertices(), shift).distance;
        ASSERT_NEAR(closed, gjk, 1e-9) << it;
    }
}

TEST(Geometry, GjkAgreesWithSampling) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int it = 0; it < 30; ++it) {
        auto p = ConvexPiece::polygon(regular(3 + it % 6, 0, 0, 1, u(rng)));
        auto q = ConvexPiece::polygon(regular(3 + (it / 6) % 5, 0, 0, 0.8, u(rng)));
        double ang = 2 * std::numbers::pi * u(rng);
        Vec3 shift{3 * std::cos(ang), 3 * std::sin(ang), 0};
        auto c = piece_distance(p, q, shift);
        double brute = sampled_distance(p, q, shift);
        ASSERT_LE(c.distance, brute + 1e-12);
        ASSERT_NEAR(c.distance, brute, 5e-3);
        // reported points realise the distance
        ASSERT_NEAR(norm(c.a - c.b), c.distance, 1e-9);
        ASSERT_LE(p.max_violation(c.a), 1e-9);
        ASSERT_LE(q.translated(shift).max_violation(c.b), 1e-9);
    }
}

TEST(Geometry, GjkPrisms3d) {
    auto p = ConvexPiece::prism(regular(8, 0, 0, 1, 0.1), 0, 1);
    auto q = ConvexPiece::prism(regular(5, 0, 0, 1, 0.3), 0, 2);
    // stacked above with a vertical gap of 0.5: distance is exactly 0.5
    auto c = piece_distance(p, q, {0.2, -0.1, 1.5});
    EXPECT_NEAR(c.distance, 0.5, 1e-9);
    // overlapping pieces have distance 0
    EXPECT_NEAR(piece_distance(p, q, {0.1, 0, 0.5}).distance, 0, 1e-12);
}

TEST(Geometry, PointPieceDistance) {
    auto hex = ConvexPiece::polygon(regular(6, 0, 0, 1, 0));
    // apothem sqrt3/2 along the y axis
    auto c = point_piece_distance({0, 2, 0}, hex);
    EXPECT_NEAR(c.distance, 2 - std::sqrt(3.0) / 2, 1e-9);
    auto in = point_piece_distance({0.1, 0.1, 0}, hex);
    EXPECT_NEAR(in.distance, 0, 1e-12);
    auto b = ConvexPiece::box({0, 0, 0}, {1, 1, 0}, 2);
    EXPECT_NEAR(point_piece_distance({2, 2, 0}, b).distance, std::sqrt(2.0), 1e-12);
}

TEST(Geometry, LinfPieceDistance) {
    auto a = ConvexPiece::box({0, 0, 0}, {1, 1, 0}, 2), b = ConvexPiece::box({0, 0, 0}, {1, 1, 0}, 2);
    EXPECT_NEAR(piece_distance_linf(a, b, {3, 1.5, 0}).distance, 2, 1e-12);
    auto hex = ConvexPiece::polygon(regular(6, 0, 0, 1, 0));
    EXPECT_THROW(piece_distance_linf(a, hex, {3, 0, 0}), UnsupportedDimension);
}

TEST(Geometry, EmptyInputThrows) {
    std::vector<Vec3> none;
    std::vector<Vec3> one{{0, 0, 0}};
    EXPECT_THROW(convex_distance(none, one), InvalidParameters);
}
