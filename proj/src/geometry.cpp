#include "cround/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "cround/types.hpp"

namespace cround {

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

namespace {

Aabb bounds_of(const std::vector<Vec3>& pts) {
    Aabb b;
    b.lo = b.hi = pts.front();
    for (const auto& p : pts) {
        for (int i = 0; i < 3; ++i) {
            b.lo[i] = std::min(b.lo[i], p[i]);
            b.hi[i] = std::max(b.hi[i], p[i]);
        }
    }
    return b;
}

struct PolygonMoments {
    double area = 0;
    double cx = 0;
    double cy = 0;
};

PolygonMoments polygon_moments(std::span<const Vec2> v) {
    PolygonMoments m;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % n];
        double cr = p[0] * q[1] - q[0] * p[1];
        m.area += cr;
        m.cx += (p[0] + q[0]) * cr;
        m.cy += (p[1] + q[1]) * cr;
    }
    m.area *= 0.5;
    m.cx /= 6.0 * m.area;
    m.cy /= 6.0 * m.area;
    return m;
}

std::vector<HalfSpace> edge_halfspaces(std::span<const Vec2> v) {
    std::vector<HalfSpace> out;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % n];
        double ex = q[0] - p[0], ey = q[1] - p[1];
        double len = std::hypot(ex, ey);
        Vec3 nrm{ey / len, -ex / len, 0};
        out.push_back({nrm, nrm[0] * p[0] + nrm[1] * p[1]});
    }
    return out;
}

}  // namespace

ConvexPiece ConvexPiece::interval(double lo, double hi) {
    return box({lo, 0, 0}, {hi, 0, 0}, 1);
}

ConvexPiece ConvexPiece::box(const Vec3& lo, const Vec3& hi, int dim) {
    if (dim < 1 || dim > 3) throw UnsupportedDimension("box pieces exist for d <= 3 only");
    ConvexPiece p;
    p.dim_ = dim;
    p.is_box_ = true;
    Vec3 l = lo, h = hi;
    for (int i = dim; i < 3; ++i) l[i] = h[i] = 0;
    if (dim == 2) {
        // counter-clockwise, the renderer relies on it
        p.vertices_ = {{l[0], l[1], 0}, {h[0], l[1], 0}, {h[0], h[1], 0}, {l[0], h[1], 0}};
    } else {
        for (int mask = 0; mask < (1 << dim); ++mask) {
            Vec3 v{0, 0, 0};
            for (int i = 0; i < dim; ++i) v[i] = (mask >> i & 1) ? h[i] : l[i];
            p.vertices_.push_back(v);
        }
    }
    p.volume_ = 1;
    for (int i = 0; i < dim; ++i) {
        Vec3 e{0, 0, 0};
        e[i] = 1;
        p.faces_.push_back({e, h[i]});
        e[i] = -1;
        p.faces_.push_back({e, -l[i]});
        p.volume_ *= h[i] - l[i];
        p.centroid_[i] = 0.5 * (l[i] + h[i]);
    }
    p.bounds_ = {l, h};
    return p;
}

ConvexPiece ConvexPiece::polygon(std::span<const Vec2> ccw) {
    if (ccw.size() < 3) throw InvalidParameters("polygon needs at least 3 vertices");
    ConvexPiece p;
    p.dim_ = 2;
    for (const auto& v : ccw) p.vertices_.push_back({v[0], v[1], 0});
    p.faces_ = edge_halfspaces(ccw);
    auto m = polygon_moments(ccw);
    p.volume_ = m.area;
    p.centroid_ = {m.cx, m.cy, 0};
    p.bounds_ = bounds_of(p.vertices_);
    return p;
}

ConvexPiece ConvexPiece::prism(std::span<const Vec2> ccw, double z0, double z1) {
    if (ccw.size() < 3) throw InvalidParameters("prism base needs at least 3 vertices");
    ConvexPiece p;
    p.dim_ = 3;
    for (const auto& v : ccw) p.vertices_.push_back({v[0], v[1], z0});
    for (const auto& v : ccw) p.vertices_.push_back({v[0], v[1], z1});
    p.faces_ = edge_halfspaces(ccw);
    p.faces_.push_back({{0, 0, 1}, z1});
    p.faces_.push_back({{0, 0, -1}, -z0});
    auto m = polygon_moments(ccw);
    p.volume_ = m.area * (z1 - z0);
    p.centroid_ = {m.cx, m.cy, 0.5 * (z0 + z1)};
    p.bounds_ = bounds_of(p.vertices_);
    return p;
}

ConvexPiece ConvexPiece::translated(const Vec3& s) const {
    ConvexPiece p = *this;
    for (auto& v : p.vertices_) v = v + s;
    for (auto& f : p.faces_) f.offset += dot(f.normal, s);
    p.bounds_.lo = p.bounds_.lo + s;
    p.bounds_.hi = p.bounds_.hi + s;
    p.centroid_ = p.centroid_ + s;
    return p;
}

double ConvexPiece::max_violation(const Vec3& x) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : faces_) worst = std::max(worst, dot(f.normal, x) - f.offset);
    return worst;
}

namespace {

struct SimplexVertex {
    Vec3 w;
    int ip;
    int iq;
};

// Closest point to the origin of conv(s), by checking the affine projection
// onto every face. Faces are visited smallest first, so ties keep the
// lower-dimensional face.
struct SubResult {
    Vec3 v{0, 0, 0};
    std::array<double, 4> lambda{};
    unsigned mask = 0;
};

bool solve_small(int n, double g[3][3], double rhs[3], double out[3]) {
    double scale = 0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(g[i][i]));
    if (scale == 0) return false;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(g[r][c]) > std::abs(g[piv][c])) piv = r;
        if (std::abs(g[piv][c]) <= 1e-13 * scale) return false;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(g[c][k], g[piv][k]);
            std::swap(rhs[c], rhs[piv]);
        }
        for (int r = c + 1; r < n; ++r) {
            double f = g[r][c] / g[c][c];
            for (int k = c; k < n; ++k) g[r][k] -= f * g[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int k = r + 1; k < n; ++k) s -= g[r][k] * out[k];
        out[r] = s / g[r][r];
    }
    return true;
}

SubResult closest_on_simplex(const std::vector<SimplexVertex>& s) {
    const int n = static_cast<int>(s.size());
    SubResult best;
    double best_nn = std::numeric_limits<double>::infinity();
    for (int size = 1; size <= n; ++size) {
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (std::popcount(mask) != size) continue;
            int idx[4], m = 0;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) idx[m++] = i;
            std::array<double, 4> lam{};
            if (m == 1) {
                lam[0] = 1;
            } else {
                const Vec3& y0 = s[idx[0]].w;
                Vec3 e[3]{};
                for (int j = 1; j < m; ++j) e[j - 1] = s[idx[j]].w - y0;
                double g[3][3], rhs[3], mu[3];
                for (int a = 0; a < m - 1; ++a) {
                    for (int b = 0; b < m - 1; ++b) g[a][b] = dot(e[a], e[b]);
                    rhs[a] = -dot(e[a], y0);
                }
                if (!solve_small(m - 1, g, rhs, mu)) continue;
                double sum = 0;
                bool ok = true;
                for (int j = 1; j < m; ++j) {
                    lam[j] = mu[j - 1];
                    sum += mu[j - 1];
                    if (!(lam[j] > 0)) ok = false;
                }
                lam[0] = 1 - sum;
                if (!ok || !(lam[0] > 0)) continue;
            }
            Vec3 v{0, 0, 0};
            for (int j = 0; j < m; ++j) v = v + lam[j] * s[idx[j]].w;
            double nn = dot(v, v);
            if (nn < best_nn) {
                best_nn = nn;
                best.v = v;
                best.mask = mask;
                best.lambda = {};
                for (int j = 0; j < m; ++j) best.lambda[idx[j]] = lam[j];
            }
        }
    }
    return best;
}

int support(std::span<const Vec3> pts, const Vec3& dir) {
    int best = 0;
    double bv = dot(pts[0], dir);
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
        double v = dot(pts[i], dir);
        if (v > bv) {
            bv = v;
            best = i;
        }
    }
    return best;
}

}  // namespace

ClosestPair convex_distance(std::span<const Vec3> p, std::span<const Vec3> q, const Vec3& q_shift) {
    if (p.empty() || q.empty()) throw InvalidParameters("convex_distance: empty vertex set");

    std::vector<SimplexVertex> simplex{{p[0] - (q[0] + q_shift), 0, 0}};
    std::array<double, 4> lambda{1, 0, 0, 0};
    Vec3 v = simplex[0].w;

    for (int iter = 0; iter < 128; ++iter) {
        double vv = dot(v, v);
        if (vv <= 1e-30) break;
        Vec3 d = -1.0 * v;
        int ip = support(p, d);
        int iq = support(q, v);
        Vec3 w = p[ip] - (q[iq] + q_shift);
        if (vv - dot(v, w) <= 1e-14 * vv) break;
        bool dup = false;
        for (const auto& sv : simplex) dup |= (sv.ip == ip && sv.iq == iq);
        if (dup) break;

        simplex.push_back({w, ip, iq});
        SubResult sub = closest_on_simplex(simplex);
        if (dot(sub.v, sub.v) >= vv) {
            simplex.pop_back();
            break;
        }
        std::vector<SimplexVertex> kept;
        std::array<double, 4> kept_l{};
        for (int i = 0; i < static_cast<int>(simplex.size()); ++i) {
            if (sub.mask >> i & 1) {
                kept_l[kept.size()] = sub.lambda[i];
                kept.push_back(simplex[i]);
            }
        }
        simplex = std::move(kept);
        lambda = kept_l;
        v = sub.v;
        if (simplex.size() == 4) break;  // origin enclosed up to round-off
    }

    ClosestPair out;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        out.a = out.a + lambda[i] * p[simplex[i].ip];
        out.b = out.b + lambda[i] * (q[simplex[i].iq] + q_shift);
    }
    out.distance = norm(v);
    if (out.distance <= 1e-15) {
        out.distance = 0;
        out.b = out.a;
    }
    return out;
}

ClosestPair box_distance(const Aabb& p, const Aabb& q, int dim) {
    ClosestPair out;
    double s = 0;
    for (int i = 0; i < dim; ++i) {
        if (p.hi[i] < q.lo[i]) {
            out.a[i] = p.hi[i];
            out.b[i] = q.lo[i];
        } else if (q.hi[i] < p.lo[i]) {
            out.a[i] = p.lo[i];
            out.b[i] = q.hi[i];
        } else {
            double c = 0.5 * (std::max(p.lo[i], q.lo[i]) + std::min(p.hi[i], q.hi[i]));
            out.a[i] = out.b[i] = c;
        }
        double g = out.b[i] - out.a[i];
        s += g * g;
    }
    out.distance = std::sqrt(s);
    return out;
}

ClosestPair piece_distance(const ConvexPiece& p, const ConvexPiece& q, const Vec3& q_shift) {
    if (p.is_box() && q.is_box()) {
        Aabb qb{q.bounds().lo + q_shift, q.bounds().hi + q_shift};
        return box_distance(p.bounds(), qb, std::max(p.dim(), q.dim()));
    }
    return convex_distance(p.vertices(), q.vertices(), q_shift);
}

ClosestPair piece_distance_linf(const ConvexPiece& p, const ConvexPiece& q, const Vec3& q_shift) {
    if (!(p.is_box() && q.is_box())) throw UnsupportedDimension("L-infinity distance needs box pieces");
    Aabb qb{q.bounds().lo + q_shift, q.bounds().hi + q_shift};
    ClosestPair c = box_distance(p.bounds(), qb, std::max(p.dim(), q.dim()));
    double m = 0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(c.b[i] - c.a[i]));
    c.distance = m;
    return c;
}

ClosestPair point_piece_distance(const Vec3& x, const ConvexPiece& piece) {
    if (piece.is_box()) {
        ClosestPair out;
        out.a = x;
        const auto& b = piece.bounds();
        for (int i = 0; i < 3; ++i) out.b[i] = std::clamp(x[i], b.lo[i], b.hi[i]);
        out.distance = norm(out.b - x);
        return out;
    }
    std::array<Vec3, 1> one{x};
    return convex_distance(one, piece.vertices());
}

double aabb_distance(const Aabb& p, const Aabb& q) {
    double s = 0;
    for (int i = 0; i < 3; ++i) {
        double g = std::max({0.0, q.lo[i] - p.hi[i], p.lo[i] - q.hi[i]});
        s += g * g;
    }
    return std::sqrt(s);
}

double aabb_distance_linf(const Aabb& p, const Aabb& q) {
    double m = 0;
    for (int i = 0; i < 3; ++i) m = std::max({m, q.lo[i] - p.hi[i], p.lo[i] - q.hi[i]});
    return m;
}

}  // namespace cround
