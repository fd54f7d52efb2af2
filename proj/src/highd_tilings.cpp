#include "cround/highd_tilings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "tilings_internal.hpp"

namespace cround {

Point sorted_wall_distances(const Point& x, double a) {
    if (!(a > 0)) throw InvalidParameters("wall spacing must be positive");
    Point f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::abs(x[i] - a * std::round(x[i] / a));
    std::sort(f.begin(), f.end());
    return f;
}

double dim_reduce_optimal_t(int d) { return 1.0 / (1.0 + (d - 1) * std::numbers::sqrt2); }
double dim_reduce_conservative_t(int d) { return 1.0 / (1.0 + 2.0 * (d - 1) * std::numbers::sqrt2); }

DimReduceParams dim_reduce_params(int d, double t) {
    if (d < 2) throw InvalidParameters("dim_reduce needs d >= 2");
    if (d > 16) throw InvalidParameters("dim_reduce supports d <= 16");
    if (!(t > 0)) throw InvalidParameters("dim_reduce spacing t must be positive");
    DimReduceParams p;
    p.d = d;
    p.t = t;
    p.a = 1 + t;
    for (int j = 0; j < d; ++j) p.thresholds.push_back(t / 2 + j * t / std::numbers::sqrt2);
    // corners of neighbouring cells must stay t apart
    if (p.a - 2 * p.thresholds.back() < t - 1e-12)
        throw InvalidParameters("dim_reduce spacing too large: corner tiles would be closer than t");
    return p;
}

BnBParams bnb_params() {
    BnBParams p;
    p.a = std::cbrt(1.0 / (12.0 + 8.0 * std::numbers::sqrt2));
    p.z = p.a;
    p.H = (2 + std::numbers::sqrt2) * p.a;
    // centre of the optimal plateau found by calibrate_bricks_balloons
    p.offset_x = 3 * p.H;
    p.offset_y = std::numbers::sqrt2 * p.a / 2;
    return p;
}

CpbParams cpb_params(int m) {
    if (m < 3) throw InvalidParameters("cpb needs m >= 3");
    CpbParams p;
    p.m = m;
    p.k = m * m * m;
    p.a = std::pow(2.0, 1.0 / 6.0);
    p.b = std::numbers::sqrt3 / 2 * p.a;
    p.c = std::sqrt(6.0) / 3 * p.a;
    p.shift_x = m * p.a / 2;
    p.shift_y = std::numbers::sqrt3 * m * p.a / 6;
    return p;
}

SchemeDescriptor make_cube_linf(int d, int m) {
    if (d < 1 || m < 2) throw InvalidParameters("cube_linf needs d >= 1 and m >= 2");
    double k = std::pow(static_cast<double>(m), d);
    if (k > (1 << 20)) throw InvalidParameters("cube_linf: m^d too large");
    return {Family::cube_linf, d, static_cast<int>(std::lround(k)), m, {}};
}

SchemeDescriptor make_dimension_reducing(int d) { return make_dimension_reducing(d, dim_reduce_optimal_t(d)); }

SchemeDescriptor make_dimension_reducing(int d, double t) {
    auto p = dim_reduce_params(d, t);
    return {Family::dim_reduce, d, d + 1, 0, {{"t", p.t}, {"a", p.a}}};
}

SchemeDescriptor make_bricks_balloons() {
    auto p = bnb_params();
    return make_bricks_balloons(p.offset_x, p.offset_y);
}

SchemeDescriptor make_bricks_balloons(double offset_x, double offset_y) {
    auto p = bnb_params();
    return {Family::bricks_balloons, 3, 4, 0,
            {{"a", p.a}, {"z", p.z}, {"offset_x", offset_x}, {"offset_y", offset_y}}};
}

SchemeDescriptor make_cpb(int m) {
    auto p = cpb_params(m);
    return {Family::cpb, 3, p.k, m, {{"a", p.a}, {"b", p.b}, {"c", p.c}}};
}

namespace detail {

namespace {

// ---------------------------------------------------------------- cube_linf

class CubeLinf final : public Tiling {
public:
    CubeLinf(int dim, int m) : m_(m) {
        d = dim;
        metric = Metric::linf;
        nominal_t = m - 1;
        int n = 1;
        for (int i = 0; i < d; ++i) n *= m;
        k = n;
        periods.assign(d, Point(d, 0));
        for (int i = 0; i < d; ++i) periods[i][i] = m;
        for (int l = 0; l < n; ++l) {
            colors.push_back({l});
            TileGeometry g;
            g.lo.assign(d, 0);
            g.hi.assign(d, 0);
            g.centroid.assign(d, 0);
            int rest = l;
            for (int i = 0; i < d; ++i) {
                int idx = rest % m;
                rest /= m;
                g.lo[i] = idx;
                g.hi[i] = idx + 1;
                g.centroid[i] = idx + 0.5;
            }
            g.volume = 1;
            if (d <= 3) {
                Vec3 lo{0, 0, 0}, hi{0, 0, 0};
                for (int i = 0; i < d; ++i) {
                    lo[i] = g.lo[i];
                    hi[i] = g.hi[i];
                }
                g.pieces.push_back(ConvexPiece::box(lo, hi, d));
            }
            geometry.push_back(std::move(g));
        }
    }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        local = 0;
        int stride = 1;
        for (int i = 0; i < d; ++i) {
            auto idx = static_cast<std::int64_t>(std::floor(x[i]));
            cell[i] = floor_div(idx, m_);
            local += static_cast<int>(floor_mod(idx, m_)) * stride;
            stride *= m_;
        }
    }

    double closest_point(int local, std::span<const double> x, Metric m, double* out) const override {
        const auto& g = geometry[local];
        double s = 0, mx = 0;
        for (int i = 0; i < d; ++i) {
            double c = std::clamp(x[i], g.lo[i], g.hi[i]);
            if (out) out[i] = c;
            double gap = std::abs(x[i] - c);
            s += gap * gap;
            mx = std::max(mx, gap);
        }
        return m == Metric::linf ? mx : std::sqrt(s);
    }

    double interior_depth(int local, std::span<const double> x) const override {
        const auto& g = geometry[local];
        double depth = std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i) depth = std::min({depth, x[i] - g.lo[i], g.hi[i] - x[i]});
        return depth;
    }

    // Axes are independent: pick the nearest cube with the right residue per axis.
    bool nearest_of_color(std::span<const double> y, int color, std::int64_t* cell, int& local,
                          double& dist) const override {
        double s = 0, mx = 0;
        int rest = color;
        for (int i = 0; i < d; ++i) {
            int digit = rest % m_;
            rest /= m_;
            auto base = static_cast<std::int64_t>(std::floor(y[i]));
            std::int64_t n0 = base - floor_mod(base - digit, m_);
            std::int64_t n1 = n0 + m_;
            double g0 = std::max(0.0, y[i] - static_cast<double>(n0 + 1));
            double g1 = std::max(0.0, static_cast<double>(n1) - y[i]);
            std::int64_t n = g1 < g0 ? n1 : n0;
            double g = std::min(g0, g1);
            cell[i] = floor_div(n, m_);
            s += g * g;
            mx = std::max(mx, g);
        }
        local = color;
        dist = metric == Metric::linf ? mx : std::sqrt(s);
        return true;
    }

private:
    int m_;
};

// --------------------------------------------------------------- dim_reduce

// volume of {0 <= w_1 <= ... <= w_s, w_i <= th_i}, th ascending
double ordered_staircase_volume(const std::vector<double>& th, int s) {
    if (s == 0) return 1;
    // piecewise polynomial on [th_{i-1}, th_i], coefficients in x
    std::vector<std::vector<double>> poly(s, std::vector<double>{1.0});
    auto eval = [](const std::vector<double>& p, double x) {
        double v = 0;
        for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
        return v;
    };
    for (int j = 1; j <= s; ++j) {
        std::vector<std::vector<double>> next(s);
        double acc = 0;  // G_j at the left end of the segment
        for (int i = 0; i < s; ++i) {
            double left = i == 0 ? 0.0 : th[i - 1];
            if (i < j) {
                std::vector<double> anti(poly[i].size() + 1, 0.0);
                for (std::size_t p = 0; p < poly[i].size(); ++p) anti[p + 1] = poly[i][p] / (p + 1);
                anti[0] = acc - eval(anti, left);
                next[i] = anti;
                acc = eval(anti, th[i]);
            } else {
                next[i] = {acc};
            }
        }
        poly = std::move(next);
    }
    return eval(poly[s - 1], th[s - 1]);
}

class DimReduce final : public Tiling {
public:
    explicit DimReduce(const DimReduceParams& p) : p_(p) {
        d = p.d;
        k = d + 1;
        nominal_t = p.t;
        periods.assign(d, Point(d, 0));
        for (int i = 0; i < d; ++i) periods[i][i] = p.a;
        const int n = 1 << d;
        for (int mask = 0; mask < n; ++mask) {
            const int s = std::popcount(static_cast<unsigned>(mask));
            colors.push_back({s});
            const double th = p.thresholds[s];
            TileGeometry g;
            g.lo.assign(d, 0);
            g.hi.assign(d, 0);
            g.centroid.assign(d, 0);
            for (int i = 0; i < d; ++i) {
                if (mask >> i & 1) {
                    g.lo[i] = -p.thresholds[s - 1];
                    g.hi[i] = p.thresholds[s - 1];
                } else {
                    g.lo[i] = th;
                    g.hi[i] = p.a - th;
                    g.centroid[i] = p.a / 2;
                }
            }
            double fact = 1;
            for (int i = 2; i <= s; ++i) fact *= i;
            g.volume = std::pow(p.a - 2 * th, d - s) * std::pow(2.0, s) * fact *
                       ordered_staircase_volume(p.thresholds, s);
            if (d <= 3) g.pieces = pieces(mask);
            geometry.push_back(std::move(g));
        }
    }

    // grid decomposition of the staircase: level l of an axis is the band
    // th_{l-1} <= |v| <= th_l; a level tuple is kept iff its sorted levels
    // satisfy l_(j) <= j
    std::vector<ConvexPiece> pieces(int mask) const {
        const int s = std::popcount(static_cast<unsigned>(mask));
        const auto& th = p_.thresholds;
        std::vector<int> axes;
        for (int i = 0; i < d; ++i)
            if (mask >> i & 1) axes.push_back(i);
        std::vector<ConvexPiece> out;
        std::vector<int> lvl(s, 1);
        auto emit = [&](std::vector<int> sorted) {
            std::sort(sorted.begin(), sorted.end());
            for (int j = 0; j < s; ++j)
                if (sorted[j] > j + 1) return;
            // sign choices for levels >= 2
            std::vector<int> split;
            for (int j = 0; j < s; ++j)
                if (lvl[j] >= 2) split.push_back(j);
            for (int signs = 0; signs < (1 << split.size()); ++signs) {
                Vec3 lo{0, 0, 0}, hi{0, 0, 0};
                for (int i = 0; i < d; ++i) {
                    if (!(mask >> i & 1)) {
                        lo[i] = th[s];
                        hi[i] = p_.a - th[s];
                    }
                }
                for (int j = 0; j < s; ++j) {
                    int ax = axes[j];
                    if (lvl[j] == 1) {
                        lo[ax] = -th[0];
                        hi[ax] = th[0];
                    } else {
                        int which = static_cast<int>(std::find(split.begin(), split.end(), j) - split.begin());
                        bool neg = signs >> which & 1;
                        double inner = th[lvl[j] - 2], outer = th[lvl[j] - 1];
                        lo[ax] = neg ? -outer : inner;
                        hi[ax] = neg ? -inner : outer;
                    }
                }
                out.push_back(ConvexPiece::box(lo, hi, d));
            }
        };
        if (s == 0) {
            emit({});
            return out;
        }
        while (true) {
            emit(lvl);
            int j = 0;
            while (j < s && lvl[j] == s) lvl[j++] = 1;
            if (j == s) break;
            ++lvl[j];
        }
        return out;
    }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        const double a = p_.a;
        std::array<std::pair<double, int>, 16> u;
        for (int i = 0; i < d; ++i) u[i] = {std::abs(x[i] - a * std::round(x[i] / a)), i};
        std::sort(u.begin(), u.begin() + d);
        int s = 0;  // number of pinned axes = colour index
        while (s < d && u[s].first <= p_.thresholds[s]) ++s;
        int mask = 0;
        for (int j = 0; j < s; ++j) mask |= 1 << u[j].second;
        for (int i = 0; i < d; ++i)
            cell[i] = static_cast<std::int64_t>((mask >> i & 1) ? std::round(x[i] / a) : std::floor(x[i] / a));
        local = mask;
    }

    // Distance to the staircase: match |v| sorted ascending with the thresholds.
    double closest_point(int local, std::span<const double> x, Metric, double* out) const override {
        const int s = std::popcount(static_cast<unsigned>(local));
        const double th = p_.thresholds[s];
        double sum = 0;
        std::array<std::pair<double, int>, 16> pinned;
        int np = 0;
        for (int i = 0; i < d; ++i) {
            if (local >> i & 1) {
                pinned[np++] = {std::abs(x[i]), i};
            } else {
                double c = std::clamp(x[i], th, p_.a - th);
                if (out) out[i] = c;
                sum += (x[i] - c) * (x[i] - c);
            }
        }
        std::sort(pinned.begin(), pinned.begin() + np);
        for (int j = 0; j < np; ++j) {
            auto [mag, ax] = pinned[j];
            double lim = p_.thresholds[j];
            double c = std::min(mag, lim);
            if (out) out[ax] = std::copysign(c, x[ax]);
            sum += (mag - c) * (mag - c);
        }
        return std::sqrt(sum);
    }

    double interior_depth(int local, std::span<const double> x) const override {
        const int s = std::popcount(static_cast<unsigned>(local));
        const double th = p_.thresholds[s];
        double depth = std::numeric_limits<double>::infinity();
        std::array<double, 16> pinned;
        int np = 0;
        for (int i = 0; i < d; ++i) {
            if (local >> i & 1)
                pinned[np++] = std::abs(x[i]);
            else
                depth = std::min({depth, x[i] - th, p_.a - th - x[i]});
        }
        std::sort(pinned.begin(), pinned.begin() + np);
        // depth inside the box picked by the sorted matching
        for (int j = 0; j < np; ++j) depth = std::min(depth, p_.thresholds[j] - pinned[j]);
        return depth;
    }

    std::vector<Point> witness_candidates() const override {
        std::vector<Point> out;
        Point corner(p_.thresholds.begin(), p_.thresholds.end());
        out.push_back(corner);
        if (d <= 3) {
            auto rest = Tiling::witness_candidates();
            out.insert(out.end(), rest.begin(), rest.end());
        }
        return out;
    }

    bool nearest_of_color(std::span<const double> y, int color, std::int64_t* cell, int& local,
                          double& dist) const override {
        const double a = p_.a;
        const int s = color;
        const double th = p_.thresholds[s];
        std::array<double, 16> gap2, u;
        std::array<std::int64_t, 16> cube, wall;
        for (int i = 0; i < d; ++i) {
            wall[i] = static_cast<std::int64_t>(std::round(y[i] / a));
            u[i] = std::abs(y[i] - a * wall[i]);
            auto base = static_cast<std::int64_t>(std::floor(y[i] / a));
            double best = std::numeric_limits<double>::infinity();
            for (std::int64_t n = base - 1; n <= base + 1; ++n) {
                double lo = a * n + th, hi = a * (n + 1) - th;
                double g = y[i] < lo ? lo - y[i] : (y[i] > hi ? y[i] - hi : 0.0);
                if (g < best) {
                    best = g;
                    cube[i] = n;
                }
            }
            gap2[i] = best * best;
        }
        double best = std::numeric_limits<double>::infinity();
        TileId best_id;
        std::vector<int> pick(d, 0);
        std::fill(pick.end() - s, pick.end(), 1);
        std::array<double, 16> pu;
        do {
            double cost = 0;
            int np = 0, mask = 0;
            for (int i = 0; i < d; ++i) {
                if (pick[i]) {
                    pu[np++] = u[i];
                    mask |= 1 << i;
                } else {
                    cost += gap2[i];
                }
            }
            std::sort(pu.begin(), pu.begin() + np);
            for (int j = 0; j < np; ++j) {
                double e = std::max(0.0, pu[j] - p_.thresholds[j]);
                cost += e * e;
            }
            TileId id{std::vector<std::int64_t>(d), mask};
            for (int i = 0; i < d; ++i) id.cell[i] = pick[i] ? wall[i] : cube[i];
            if (cost < best - 1e-15 || (std::abs(cost - best) <= 1e-15 && id < best_id)) {
                best = cost;
                best_id = std::move(id);
            }
        } while (std::next_permutation(pick.begin(), pick.end()));
        std::copy(best_id.cell.begin(), best_id.cell.end(), cell);
        local = best_id.local;
        dist = std::sqrt(best);
        return true;
    }

private:
    DimReduceParams p_;
};

// ---------------------------------------------------------- bricks_balloons

// Brick layer z in [0, a): 4 rows of 2H x H bricks, odd rows indented by H.
// Balloon layer z in [a, 2a): octagons on the lattice {(uH, vH): u + v even}
// shifted by the offsets, each with the square above it.
class BricksBalloons final : public Tiling {
public:
    BricksBalloons(const BnBParams& p) : p_(p) {
        d = 3;
        k = 4;
        nominal_t = std::min(p.a, p.z);
        const double H = p.H, W = 2 * H, a = p.a, z = p.z;
        periods = {{4 * H, 0, 0}, {0, 4 * H, 0}, {0, 0, 2 * z}};
        for (int r = 0; r < 4; ++r)
            for (int i = 0; i < 2; ++i) {
                double x0 = (r % 2 ? H : 0) + i * W;
                colors.push_back({row_color(r, i)});
                TileGeometry g;
                g.pieces.push_back(ConvexPiece::box({x0, r * H, 0}, {x0 + W, (r + 1) * H, z}, 3));
                geometry.push_back(std::move(g));
            }
        const double h = (1 + std::numbers::sqrt2) * a;
        for (int q = 0; q < 4; ++q)
            for (int j = 0; j < 2; ++j) {
                double cx = p.offset_x + q * H, cy = p.offset_y + (q % 2) * H + 2 * H * j;
                const Vec2 oct[8] = {{cx + h, cy - a}, {cx + h, cy + a}, {cx + a, cy + h}, {cx - a, cy + h},
                                     {cx - h, cy + a}, {cx - h, cy - a}, {cx - a, cy - h}, {cx + a, cy - h}};
                const Vec2 sq[4] = {{cx - a, cy + h}, {cx + a, cy + h}, {cx + a, cy + h + 2 * a},
                                    {cx - a, cy + h + 2 * a}};
                colors.push_back({row_color(q, j)});
                TileGeometry g;
                g.pieces.push_back(ConvexPiece::prism(oct, z, 2 * z));
                g.pieces.push_back(ConvexPiece::prism(sq, z, 2 * z));
                geometry.push_back(std::move(g));
            }
        finish_geometry();
    }

    // rows 0/2 use colours {0,1}, rows 1/3 use {2,3}; rows 2/3 swap the pair
    static int row_color(int r, int i) {
        switch (r) {
            case 0: return i;
            case 1: return 2 + i;
            case 2: return 1 - i;
            default: return 3 - i;
        }
    }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        const double H = p_.H, a = p_.a;
        auto layer = static_cast<std::int64_t>(std::floor(x[2] / p_.z));
        cell[2] = floor_div(layer, 2);
        if (floor_mod(layer, 2) == 0) {
            auto row = static_cast<std::int64_t>(std::floor(x[1] / H));
            int r = static_cast<int>(floor_mod(row, 4));
            auto idx = static_cast<std::int64_t>(std::floor((x[0] - (r % 2 ? H : 0)) / (2 * H)));
            cell[0] = floor_div(idx, 2);
            cell[1] = floor_div(row, 4);
            local = 2 * r + static_cast<int>(floor_mod(idx, 2));
            return;
        }
        double X = (x[0] - p_.offset_x) / H, Y = (x[1] - p_.offset_y) / H;
        auto U = static_cast<std::int64_t>(std::round(X)), V = static_cast<std::int64_t>(std::round(Y));
        if (floor_mod(U + V, 2) != 0) {
            double dx = X - U, dy = Y - V, half = a / H;
            if (std::abs(dx) <= half && std::abs(dy) <= half)
                V -= 1;  // square sits on the octagon below
            else if (std::abs(dx) >= std::abs(dy))
                U += dx >= 0 ? 1 : -1;
            else
                V += dy >= 0 ? 1 : -1;
        }
        std::int64_t q = floor_mod(U, 4);
        std::int64_t jg = (V - floor_mod(U, 2)) / 2;
        cell[0] = floor_div(U, 4);
        cell[1] = floor_div(jg, 2);
        local = 8 + static_cast<int>(2 * q + floor_mod(jg, 2));
    }

private:
    BnBParams p_;
};

// ---------------------------------------------------------------------- cpb

// Two layers of fattened honeycomb-of-large-boxes; the upper layer is shifted
// in-plane so that large-box corners sit on hexagonal close packing centres.
class Cpb final : public Tiling {
public:
    explicit Cpb(const CpbParams& p) : p_(p) {
        d = 3;
        k = p.k;
        const int m = p.m;
        nominal_t = (m - 1) * p.a;
        periods = {{m * p.a, 0, 0}, {0, 2 * m * p.b, 0}, {0, 0, 2 * m * p.c}};
        for (int L = 0; L < 2; ++L)
            for (int f = 0; f < 2; ++f)
                for (int l = 0; l < m; ++l)
                    for (int j = 0; j < m; ++j)
                        for (int i = 0; i < m; ++i) {
                            double x0 = L * p.shift_x + f * m * p.a / 2 + i * p.a;
                            double y0 = L * p.shift_y + f * m * p.b + j * p.b;
                            double z0 = L * m * p.c + l * p.c;
                            colors.push_back({i + m * j + m * m * l});
                            TileGeometry g;
                            g.pieces.push_back(
                                ConvexPiece::box({x0, y0, z0}, {x0 + p.a, y0 + p.b, z0 + p.c}, 3));
                            geometry.push_back(std::move(g));
                        }
        finish_geometry();
    }

    void locate(std::span<const double> x, std::int64_t* cell, int& local) const override {
        const int m = p_.m;
        const double a = p_.a, b = p_.b, c = p_.c;
        auto layer = static_cast<std::int64_t>(std::floor(x[2] / (m * c)));
        int L = static_cast<int>(floor_mod(layer, 2));
        double y = x[1] - L * p_.shift_y;
        auto fr = static_cast<std::int64_t>(std::floor(y / (m * b)));
        int f = static_cast<int>(floor_mod(fr, 2));
        double xx = x[0] - L * p_.shift_x - f * m * a / 2;
        auto blk = static_cast<std::int64_t>(std::floor(xx / (m * a)));
        int i = std::clamp(static_cast<int>(std::floor((xx - blk * m * a) / a)), 0, m - 1);
        int j = std::clamp(static_cast<int>(std::floor((y - fr * m * b) / b)), 0, m - 1);
        int l = std::clamp(static_cast<int>(std::floor((x[2] - layer * m * c) / c)), 0, m - 1);
        cell[0] = blk;
        cell[1] = floor_div(fr, 2);
        cell[2] = floor_div(layer, 2);
        local = ((L * 2 + f) * m + l) * m * m + j * m + i;
    }

private:
    CpbParams p_;
};

}  // namespace

std::shared_ptr<const Tiling> build_cube_linf(SchemeDescriptor& desc) {
    auto canon = make_cube_linf(desc.d, desc.m);
    if (desc.k != canon.k) throw InvalidParameters("cube_linf needs k = m^d");
    reject_unknown_params(desc, {});
    return std::make_shared<CubeLinf>(desc.d, desc.m);
}

std::shared_ptr<const Tiling> build_dim_reduce(SchemeDescriptor& desc) {
    if (desc.d < 2) throw InvalidParameters("dim_reduce needs d >= 2");
    if (desc.k != desc.d + 1) throw InvalidParameters("dim_reduce needs k = d + 1");
    reject_unknown_params(desc, {"t", "a"});
    double t = param_or(desc, "t", dim_reduce_optimal_t(desc.d));
    auto p = dim_reduce_params(desc.d, t);
    desc.params["t"] = t;
    require_param(desc, "a", p.a);
    desc.m = 0;
    return std::make_shared<DimReduce>(p);
}

std::shared_ptr<const Tiling> build_bricks_balloons(SchemeDescriptor& desc) {
    if (desc.d != 3 || desc.k != 4) throw InvalidParameters("bricks_balloons needs d = 3, k = 4");
    reject_unknown_params(desc, {"a", "z", "offset_x", "offset_y"});
    auto p = bnb_params();
    require_param(desc, "a", p.a);
    require_param(desc, "z", p.z);
    p.offset_x = param_or(desc, "offset_x", p.offset_x);
    p.offset_y = param_or(desc, "offset_y", p.offset_y);
    desc.params["offset_x"] = p.offset_x;
    desc.params["offset_y"] = p.offset_y;
    desc.m = 0;
    return std::make_shared<BricksBalloons>(p);
}

std::shared_ptr<const Tiling> build_cpb(SchemeDescriptor& desc) {
    if (desc.d != 3) throw InvalidParameters("cpb needs d = 3");
    int m = desc.m;
    if (m == 0) {
        m = static_cast<int>(std::lround(std::cbrt(static_cast<double>(desc.k))));
        if (m * m * m != desc.k) throw InvalidParameters("cpb needs k = m^3");
    }
    auto p = cpb_params(m);
    if (desc.k != p.k) throw InvalidParameters("cpb needs k = m^3");
    reject_unknown_params(desc, {"a", "b", "c"});
    require_param(desc, "a", p.a);
    require_param(desc, "b", p.b);
    require_param(desc, "c", p.c);
    desc.m = m;
    return std::make_shared<Cpb>(p);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// bricks & balloons calibration

double bnb_cross_layer_distance(double offset_x, double offset_y) {
    Scheme s = build_scheme(make_bricks_balloons(offset_x, offset_y));
    const auto& tiles = s.fundamental_tiles();
    const double P = s.periods()[0][0];
    double best = std::numeric_limits<double>::infinity();
    // both layers touch, so the 3D distance is the distance of the footprints
    for (int b = 0; b < 8; ++b)
        for (int l = 8; l < 16; ++l) {
            if (tiles[b].color != tiles[l].color) continue;
            for (int dx = -2; dx <= 2; ++dx)
                for (int dy = -2; dy <= 2; ++dy) {
                    Vec3 shift{dx * P, dy * P, -s.periods()[2][2] / 2};
                    for (const auto& piece : tiles[l].geometry.pieces)
                        best = std::min(best,
                                        piece_distance(tiles[b].geometry.pieces[0], piece, shift).distance);
                }
        }
    return best;
}

BnBCalibration calibrate_bricks_balloons(int grid) {
    if (grid < 1) throw InvalidParameters("calibration grid must be positive");
    const double P = 4 * bnb_params().H;
    BnBCalibration out;
    out.grid = grid;
    std::vector<double> values(static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) values[i * grid + j] = bnb_cross_layer_distance(i * P / grid, j * P / grid);
    double best = *std::max_element(values.begin(), values.end());
    auto optimal = [&](int i, int j) { return values[i * grid + j] >= best - 1e-12; };
    out.cross_layer_distance = best;
    out.optimal_cells = static_cast<int>(
        std::count_if(values.begin(), values.end(), [&](double v) { return v >= best - 1e-12; }));
    // middle of the first optimal run along y, scanning x first
    for (int i = 0; i < grid; ++i) {
        int j = 0;
        while (j < grid && !optimal(i, j)) ++j;
        if (j == grid) continue;
        int last = j;
        while (last + 1 < grid && optimal(i, last + 1)) ++last;
        out.offset_x = i * P / grid;
        out.offset_y = 0.5 * (j + last) * P / grid;
        break;
    }
    return out;
}

}  // namespace cround
