#include "cround/plane_tilings.hpp"

#include <cmath>
#include <numbers>

#include "tilings_internal.hpp"

namespace cround {

BrickWallParams brick_wall_params(int k) {
    if (k < 3) throw InvalidParameters("brick_wall needs k >= 3");
    BrickWallParams p;
    p.k = k;
    p.w = std::sqrt(2.0 / (k - 2));
    p.h = std::sqrt((k - 2) / 2.0);
    p.odd = k % 2 == 1;
    return p;
}

HoneycombParams honeycomb_params(int m) {
    if (m < 3) throw InvalidParameters("honeycomb_rect needs m >= 3");
    HoneycombParams p;
    p.m = m;
    p.k = m * m;
    const double md = m;
    p.a = std::pow((md * md - 2 * md + 1) / (0.75 * md * md - md), 0.25);
    return p;
}

double hex_side() { return std::sqrt(2.0 / (3.0 * std::numbers::sqrt3)); }

double honeycomb_horizontal_distance(int m) { return (m - 1) * honeycomb_params(m).a; }

double honeycomb_diagonal_distance(int m) {
    const double a = honeycomb_params(m).a;
    return std::hypot((m - 1) / a, (m / 2.0 - 1) * a);
}

SchemeDescriptor make_parity_1d() { return {Family::parity1d, 1, 2, 0, {}}; }

SchemeDescriptor make_brick_wall(int k) {
    auto p = brick_wall_params(k);
    return {Family::brick_wall, 2, k, 0, {{"w", p.w}, {"h", p.h}}};
}

SchemeDescriptor make_hex3() { return {Family::hex3, 2, 3, 0, {{"side", hex_side()}}}; }

SchemeDescriptor make_honeycomb_rect(int m) {
    auto p = honeycomb_params(m);
    return {Family::honeycomb_rect, 2, p.k, m, {{"a", p.a}}};
}

namespace detail {

namespace {

void require_shape(const SchemeDescriptor& desc, int d, int k) {
    if (desc.d != d) throw InvalidParameters(to_string(desc.family) + " needs d = " + std::to_string(d));
    if (desc.k != k) throw InvalidParameters(to_string(desc.family) + " needs k = " + std::to_string(k));
}

// ---------------------------------------------------------------- parity1d

class Parity1d final : public Tiling {
public:
    Parity1d() {
        d = 1;
        k = 2;
        nominal_t = 1;
        periods = {{2.0}};
        for (int l = 0; l < 2; ++l) {
            colors.push_back({l});
            TileGeometry g;
            g.pieces.push_back(ConvexPiece::interval(l - 0.5, l + 0.5));
            geometry.push_back(std::move(g));
        }
        finish_geometry();
    }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        auto n = static_cast<std::int64_t>(std::floor(x[0] + 0.5));
        cell[0] = floor_div(n, 2);
        local = static_cast<int>(floor_mod(n, 2));
    }
};

// -------------------------------------------------------------- brick_wall

class BrickWall final : public Tiling {
public:
    explicit BrickWall(const BrickWallParams& p) : p_(p) {
        d = 2;
        k = p.k;
        nominal_t = p.h;
        periods = {{k * p.w, 0}, {0, 2 * p.h}};
        offset_ = p.odd ? p.w / 2 : 0;
        shift_ = p.odd ? (k + 1) / 2 : k / 2;
        for (int r = 0; r < 2; ++r) {
            for (int i = 0; i < k; ++i) {
                double x0 = (r ? offset_ : 0) + i * p.w;
                colors.push_back({r ? (i + shift_) % k : i});
                TileGeometry g;
                g.pieces.push_back(ConvexPiece::box({x0, r * p.h, 0}, {x0 + p.w, (r + 1) * p.h, 0}, 2));
                geometry.push_back(std::move(g));
            }
        }
        finish_geometry();
    }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        auto row = static_cast<std::int64_t>(std::floor(x[1] / p_.h));
        int r = static_cast<int>(floor_mod(row, 2));
        auto idx = static_cast<std::int64_t>(std::floor((x[0] - (r ? offset_ : 0)) / p_.w));
        cell[0] = floor_div(idx, k);
        cell[1] = floor_div(row, 2);
        local = r * k + static_cast<int>(floor_mod(idx, k));
    }

private:
    BrickWallParams p_;
    double offset_ = 0;
    int shift_ = 0;
};

// -------------------------------------------------------------------- hex3

// Flat-top hexagons; axial (q, r) has centre (1.5 s q, sqrt3 s (r + q/2))
// and colour (q - r) mod 3. Periods are the axial vectors (1,1) and (2,-1).
class Hex3 final : public Tiling {
public:
    Hex3() : s_(hex_side()) {
        d = 2;
        k = 3;
        nominal_t = s_;
        periods = {center(1, 1), center(2, -1)};
        const int offs[3][2] = {{0, 0}, {1, 0}, {0, 1}};
        for (int c = 0; c < 3; ++c) {
            colors.push_back({c});
            Point ctr = center(offs[c][0], offs[c][1]);
            std::array<Vec2, 6> v;
            for (int i = 0; i < 6; ++i) {
                double th = std::numbers::pi / 3 * i;
                v[i] = {ctr[0] + s_ * std::cos(th), ctr[1] + s_ * std::sin(th)};
            }
            TileGeometry g;
            g.pieces.push_back(ConvexPiece::polygon(v));
            geometry.push_back(std::move(g));
        }
        finish_geometry();
        // exact centres, free of trig round-off
        for (int c = 0; c < 3; ++c) geometry[c].centroid = center(offs[c][0], offs[c][1]);
    }

    Point center(double q, double r) const { return {1.5 * s_ * q, std::numbers::sqrt3 * s_ * (r + q / 2)}; }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        double fq = (2.0 / 3.0 * x[0]) / s_;
        double fr = (-x[0] / 3.0 + std::numbers::sqrt3 / 3.0 * x[1]) / s_;
        double fs = -fq - fr;
        double q = std::round(fq), r = std::round(fr), s = std::round(fs);
        double dq = std::abs(q - fq), dr = std::abs(r - fr), ds = std::abs(s - fs);
        if (dq > dr && dq > ds)
            q = -r - s;
        else if (dr > ds)
            r = -q - s;
        auto qi = static_cast<std::int64_t>(q), ri = static_cast<std::int64_t>(r);
        int c = static_cast<int>(floor_mod(qi - ri, 3));
        const std::int64_t offs[3][2] = {{0, 0}, {1, 0}, {0, 1}};
        std::int64_t q1 = qi - offs[c][0], r1 = ri - offs[c][1];
        std::int64_t j = (q1 - r1) / 3;  // exact by construction
        cell[0] = r1 + j;
        cell[1] = j;
        local = c;
    }

private:
    double s_;
};

// ---------------------------------------------------------- honeycomb_rect

class Honeycomb final : public Tiling {
public:
    explicit Honeycomb(const HoneycombParams& p) : p_(p) {
        d = 2;
        k = p.k;
        nominal_t = (p.m - 1) * p.a;
        const int m = p.m;
        const double a = p.a, b = 1 / p.a;
        periods = {{m * a, 0}, {0, 2 * m * b}};
        for (int r = 0; r < 2; ++r)
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) {
                    double x0 = r * m * a / 2 + i * a, y0 = r * m * b + j * b;
                    colors.push_back({j * m + i});
                    TileGeometry g;
                    g.pieces.push_back(ConvexPiece::box({x0, y0, 0}, {x0 + a, y0 + b, 0}, 2));
                    geometry.push_back(std::move(g));
                }
        finish_geometry();
    }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        const int m = p_.m;
        const double a = p_.a, b = 1 / p_.a;
        auto fr = static_cast<std::int64_t>(std::floor(x[1] / (m * b)));
        int r = static_cast<int>(floor_mod(fr, 2));
        double yy = x[1] - fr * m * b;
        double xx = x[0] - r * m * a / 2;
        auto blk = static_cast<std::int64_t>(std::floor(xx / (m * a)));
        double xi = xx - blk * m * a;
        int i = std::clamp(static_cast<int>(std::floor(xi / a)), 0, m - 1);
        int j = std::clamp(static_cast<int>(std::floor(yy / b)), 0, m - 1);
        cell[0] = blk;
        cell[1] = floor_div(fr, 2);
        local = r * m * m + j * m + i;
    }

private:
    HoneycombParams p_;
};

}  // namespace

std::shared_ptr<const Tiling> build_parity1d(SchemeDescriptor& desc) {
    require_shape(desc, 1, 2);
    reject_unknown_params(desc, {});
    desc.m = 0;
    return std::make_shared<Parity1d>();
}

std::shared_ptr<const Tiling> build_brick_wall(SchemeDescriptor& desc) {
    if (desc.d != 2) throw InvalidParameters("brick_wall needs d = 2");
    auto p = brick_wall_params(desc.k);
    reject_unknown_params(desc, {"w", "h"});
    require_param(desc, "w", p.w);
    require_param(desc, "h", p.h);
    desc.m = 0;
    return std::make_shared<BrickWall>(p);
}

std::shared_ptr<const Tiling> build_hex3(SchemeDescriptor& desc) {
    require_shape(desc, 2, 3);
    reject_unknown_params(desc, {"side"});
    require_param(desc, "side", hex_side());
    desc.m = 0;
    return std::make_shared<Hex3>();
}

std::shared_ptr<const Tiling> build_honeycomb_rect(SchemeDescriptor& desc) {
    if (desc.d != 2) throw InvalidParameters("honeycomb_rect needs d = 2");
    int m = desc.m;
    if (m == 0) {
        m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(desc.k))));
        if (m * m != desc.k) throw InvalidParameters("honeycomb_rect needs k = m^2");
    }
    auto p = honeycomb_params(m);
    if (desc.k != p.k) throw InvalidParameters("honeycomb_rect needs k = m^2");
    reject_unknown_params(desc, {"a"});
    require_param(desc, "a", p.a);
    desc.m = m;
    return std::make_shared<Honeycomb>(p);
}

}  // namespace detail
}  // namespace cround
