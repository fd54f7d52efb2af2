#include "cround/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <thread>
#include <tuple>

namespace cround {

std::string to_string(Method m) { return m == Method::exact_enumeration ? "exact" : "empirical"; }

namespace {

constexpr std::int64_t kChunk = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::int64_t chunk) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(chunk))));
}

unsigned resolve_workers(unsigned w) {
    if (w) return w;
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

// Runs fn(chunk) for chunk in [0, n) on a small pool. fn returns false to ask
// the pool to skip every chunk after this one.
template <class Fn>
void for_chunks(std::int64_t n, unsigned workers, Fn&& fn) {
    workers = static_cast<unsigned>(std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(n, 1)));
    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> stop{n};
    auto run = [&] {
        while (true) {
            std::int64_t c = next.fetch_add(1);
            if (c >= n || c > stop.load()) return;
            if (!fn(c)) {
                std::int64_t cur = stop.load();
                while (c < cur && !stop.compare_exchange_weak(cur, c)) {
                }
            }
        }
    };
    if (workers <= 1) {
        run();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

double metric_distance(const Point& a, const Point& b, Metric m) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double g = std::abs(a[i] - b[i]);
        s = m == Metric::linf ? std::max(s, g) : s + g * g;
    }
    return m == Metric::linf ? s : std::sqrt(s);
}

double uniform(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Point random_in_domain(const Scheme& s, std::mt19937_64& rng) {
    std::vector<double> u(s.dimension());
    for (double& v : u) v = uniform(rng);
    return s.random_point_in_domain(u.data());
}

// uniform in the open ball (or cube for L-inf) of radius r
Point random_offset(int d, double r, Metric m, std::mt19937_64& rng) {
    Point v(d);
    if (m == Metric::linf) {
        for (double& x : v) x = r * (2 * uniform(rng) - 1);
        return v;
    }
    std::normal_distribution<double> g;
    double n = 0;
    do {
        n = 0;
        for (double& x : v) {
            x = g(rng);
            n += x * x;
        }
    } while (n == 0);
    double scale = r * std::pow(uniform(rng), 1.0 / d) / std::sqrt(n);
    for (double& x : v) x *= scale;
    return v;
}

// Walks from `inside` (in tile id) towards `outside` and returns a point on the tile boundary.
Point bisect_boundary(const Scheme& s, const TileId& id, Point inside, Point outside) {
    Point mid(inside.size());
    for (int it = 0; it < 40; ++it) {
        for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (inside[i] + outside[i]);
        if (s.distance_to_tile(id, mid) <= 0)
            inside = mid;
        else
            outside = mid;
    }
    return inside;
}

// Query-point sampler shared by the consistency and disjointness tests:
// half uniform, a quarter close to tile vertices, a quarter close to tile boundaries.
class PointSampler {
public:
    explicit PointSampler(const Scheme& s) : s_(s), scale_(s.nominal_min_distance()) {
        vertices_ = s.tiling().witness_candidates();
    }

    Point operator()(std::mt19937_64& rng) const {
        const int d = s_.dimension();
        double u = uniform(rng);
        Point x = random_in_domain(s_, rng);
        if (u < 0.5) return x;
        if (u < 0.75 && !vertices_.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, vertices_.size() - 1);
            Point v = vertices_[pick(rng)];
            Point off = random_offset(d, 0.03 * scale_, Metric::l2, rng);
            for (int i = 0; i < d; ++i) v[i] += off[i];
            return v;
        }
        TileId id = s_.tile_of(x);
        Point dir = random_offset(d, 1.0, Metric::l2, rng);
        double n = 0;
        for (double v : dir) n += v * v;
        n = std::sqrt(n);
        if (n == 0) return x;
        Point far(d);
        for (int i = 0; i < d; ++i) far[i] = x[i] + dir[i] / n * 2 * s_.tile_diameter();
        Point b = bisect_boundary(s_, id, x, far);
        double back = (2 * uniform(rng) - 1) * 0.05 * scale_;
        for (int i = 0; i < d; ++i) b[i] -= dir[i] / n * back;
        return b;
    }

private:
    const Scheme& s_;
    double scale_;
    std::vector<Point> vertices_;
};

struct Pair {
    double distance = std::numeric_limits<double>::infinity();
    Witness w;
};

bool better(const Pair& a, const Pair& b) { return a.distance < b.distance; }

struct Candidate {
    double lb;  // bounding-box gap
    int l1;
    int l2;
    std::vector<std::int64_t> cell;
};

double norm_in(const Point& v, Metric m) {
    double s = 0;
    for (double x : v) s = m == Metric::linf ? std::max(s, std::abs(x)) : s + x * x;
    return m == Metric::linf ? s : std::sqrt(s);
}

// Same-colour pairs (FD tile l1, tile l2 in `cell`) whose bounding boxes are
// within `reach`, sorted by that gap.
std::vector<Candidate> same_color_pairs(const Scheme& s, double reach, Metric metric) {
    const int d = s.dimension();
    const auto& t = s.tiling();
    const int n_local = s.tiles_per_domain();
    std::vector<double> col(d, 0);
    for (int j = 0; j < d; ++j) {
        Point e(d, 0);
        e[j] = 1;
        Point c = s.lattice_coordinates(e);
        for (int i = 0; i < d; ++i) col[i] += c[i] * c[i];
    }
    for (double& c : col) c = std::sqrt(c);
    // an L-inf gap of reach allows an L2 gap of sqrt(d) reach
    const double reach2 = metric == Metric::linf ? reach * std::sqrt(static_cast<double>(d)) : reach;

    std::vector<Candidate> out;
    double work = 0;
    std::vector<std::int64_t> lo(d), hi(d), off(d);
    Point v(d);
    for (int l1 = 0; l1 < n_local; ++l1) {
        const auto& g1 = t.geometry[l1];
        for (int l2 = 0; l2 < n_local; ++l2) {
            if (t.colors[l2] != t.colors[l1]) continue;
            const auto& g2 = t.geometry[l2];
            double r = 0;
            for (int i = 0; i < d; ++i) {
                v[i] = 0.5 * (g1.lo[i] + g1.hi[i]) - 0.5 * (g2.lo[i] + g2.hi[i]);
                r += (g1.hi[i] - g1.lo[i]) * (g1.hi[i] - g1.lo[i]) + (g2.hi[i] - g2.lo[i]) * (g2.hi[i] - g2.lo[i]);
            }
            // half diagonals, bounded together by sqrt(2 (r1^2 + r2^2))
            const double rad = reach2 + std::sqrt(r / 2);
            Point lc = s.lattice_coordinates(v);
            double cells = 1;
            for (int i = 0; i < d; ++i) {
                lo[i] = static_cast<std::int64_t>(std::floor(lc[i] - rad * col[i])) - 1;
                hi[i] = static_cast<std::int64_t>(std::ceil(lc[i] + rad * col[i])) + 1;
                cells *= static_cast<double>(hi[i] - lo[i] + 1);
            }
            work += cells;
            if (work > 5e7) throw ResourceLimit("same-colour pair enumeration too large");
            off = lo;
            while (true) {
                bool origin = std::all_of(off.begin(), off.end(), [](std::int64_t x) { return x == 0; });
                if (!(origin && l1 == l2)) {
                    Point shift = s.translation(off);
                    Point gap(d);
                    for (int i = 0; i < d; ++i)
                        gap[i] = std::max({0.0, g2.lo[i] + shift[i] - g1.hi[i], g1.lo[i] - g2.hi[i] - shift[i]});
                    double lb = norm_in(gap, metric);
                    if (lb <= reach) out.push_back({lb, l1, l2, off});
                }
                int i = 0;
                while (i < d && off[i] == hi[i]) {
                    off[i] = lo[i];
                    ++i;
                }
                if (i == d) break;
                ++off[i];
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.lb, a.l1, a.l2, a.cell) < std::tie(b.lb, b.l1, b.l2, b.cell);
    });
    return out;
}

// Any tile and its translate by a period vector share a colour, so the
// shortest period bounds t from above.
double shortest_period(const Scheme& s, Metric m) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : s.periods()) best = std::min(best, norm_in(p, m));
    return best;
}

}  // namespace

VerificationReport exact_min_distance(const Scheme& s, std::optional<Metric> metric_opt) {
    const int d = s.dimension();
    if (d > 3) throw ResourceLimit("exact enumeration is limited to d <= 3");
    const Metric metric = metric_opt.value_or(s.metric());
    const auto& t = s.tiling();
    for (const auto& g : t.geometry)
        if (g.pieces.empty()) throw UnsupportedDimension("exact enumeration needs polytope tiles");

    Pair best;
    for (const auto& c : same_color_pairs(s, shortest_period(s, metric), metric)) {
        if (c.lb >= best.distance) break;
        Point shift = s.translation(c.cell);
        Vec3 shift3{0, 0, 0};
        for (int i = 0; i < d; ++i) shift3[i] = shift[i];
        for (const auto& p1 : t.geometry[c.l1].pieces)
            for (const auto& p2 : t.geometry[c.l2].pieces) {
                Aabb b2{p2.bounds().lo + shift3, p2.bounds().hi + shift3};
                double lb = metric == Metric::linf ? aabb_distance_linf(p1.bounds(), b2) : aabb_distance(p1.bounds(), b2);
                if (lb >= best.distance) continue;
                ClosestPair cp = metric == Metric::linf ? piece_distance_linf(p1, p2, shift3)
                                                        : piece_distance(p1, p2, shift3);
                if (cp.distance < best.distance) {
                    best.distance = cp.distance;
                    best.w.a.assign(cp.a.begin(), cp.a.begin() + d);
                    best.w.b.assign(cp.b.begin(), cp.b.begin() + d);
                    best.w.tile_a = {std::vector<std::int64_t>(d, 0), c.l1};
                    best.w.tile_b = {c.cell, c.l2};
                }
            }
    }

    VerificationReport r;
    r.scheme = s.name();
    r.family = s.family();
    r.d = d;
    r.k = s.colors();
    r.metric = metric;
    r.method = Method::exact_enumeration;
    r.t_measured = best.distance;
    r.witness = best.w;
    return r;
}

// ---------------------------------------------------------------------------

namespace {

Point random_in_tile(const Scheme& s, const TileId& id, std::mt19937_64& rng) {
    const auto& g = s.tiling().geometry[id.local];
    Point shift = s.translation(id.cell);
    Point y(s.dimension());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = g.lo[i] + uniform(rng) * (g.hi[i] - g.lo[i]) + shift[i];
    Point c;
    if (s.distance_to_tile(id, y, &c) > 0) return c;
    return y;
}

}  // namespace

VerificationReport empirical_min_distance(const Scheme& s, std::int64_t trials, std::uint64_t seed,
                                          unsigned workers) {
    if (trials <= 0) throw InvalidParameters("trials must be positive");
    const int d = s.dimension();
    const Metric metric = s.metric();
    const double shortest = shortest_period(s, metric);
    // Partners farther than 1.5 nominal t cannot realise the minimum for any
    // of the shipped families; the shortest period caps it in general.
    const double reach = std::min(shortest, 1.5 * s.nominal_min_distance());
    std::vector<std::vector<Candidate>> lists(s.tiles_per_domain());
    for (auto& c : same_color_pairs(s, reach, metric)) lists[c.l1].push_back(std::move(c));

    const std::int64_t n_chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Pair> per_chunk(n_chunks);
    for_chunks(n_chunks, workers, [&](std::int64_t c) {
        auto rng = chunk_rng(seed, c);
        Pair best;
        std::int64_t lo = c * kChunk, hi = std::min(trials, lo + kChunk);
        for (std::int64_t n = lo; n < hi; ++n) {
            Point x = random_in_domain(s, rng);
            TileId ta = s.tile_of(x);
            const auto& nb = lists[ta.local];
            if (nb.empty()) continue;
            const Candidate& pick = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
            TileId tb = ta;
            for (int i = 0; i < d; ++i) tb.cell[i] += pick.cell[i];
            tb.local = pick.l2;
            Point y = random_in_tile(s, tb, rng);
            if (uniform(rng) < 0.5) {
                Point xb = bisect_boundary(s, ta, x, y);
                y = bisect_boundary(s, tb, y, xb);
                x = xb;
            }
            // alternating projections
            double dist = metric_distance(x, y, metric);
            for (int it = 0; it < 200; ++it) {
                s.distance_to_tile(ta, y, &x, metric);
                s.distance_to_tile(tb, x, &y, metric);
                double nd = metric_distance(x, y, metric);
                bool done = dist - nd < 1e-9;
                dist = std::min(dist, nd);
                if (done) break;
            }
            dist = metric_distance(x, y, metric);
            if (dist < best.distance) {
                best.distance = dist;
                best.w = {x, y, ta, tb};
            }
        }
        per_chunk[c] = std::move(best);
        return true;
    });

    Pair best;
    for (auto& p : per_chunk)
        if (better(p, best)) best = std::move(p);

    VerificationReport r;
    r.scheme = s.name();
    r.family = s.family();
    r.d = d;
    r.k = s.colors();
    r.metric = metric;
    r.method = Method::random_descent;
    r.t_measured = best.distance;
    r.witness = best.w;
    r.trials = trials;
    r.seed = seed;
    return r;
}

// ---------------------------------------------------------------------------

ConsistencyReport consistency_test(const Scheme& s, double r, std::int64_t trials, std::uint64_t seed,
                                   unsigned workers, bool stop_at_first) {
    if (trials <= 0 || !(r >= 0)) throw InvalidParameters("need trials > 0 and r >= 0");
    const int d = s.dimension();
    const PointSampler sampler(s);
    const std::int64_t n_chunks = (trials + kChunk - 1) / kChunk;
    struct ChunkResult {
        bool done = false;
        std::int64_t failures = 0;
        std::optional<ConsistencyFailure> first;
    };
    std::vector<ChunkResult> res(n_chunks);
    for_chunks(n_chunks, workers, [&](std::int64_t c) {
        auto rng = chunk_rng(seed, c);
        ChunkResult out;
        std::int64_t lo = c * kChunk, hi = std::min(trials, lo + kChunk);
        for (std::int64_t n = lo; n < hi; ++n) {
            Point x = sampler(rng);
            Point delta = random_offset(d, r, s.metric(), rng);
            Point y = x;
            for (int i = 0; i < d; ++i) y[i] += delta[i];
            RoundResult enc = s.encode(x);
            RoundResult dec = s.decode(y, enc.color);
            if (dec.tile != enc.tile) {
                ++out.failures;
                if (!out.first) out.first = ConsistencyFailure{x, y, enc.center, dec.center};
            }
        }
        out.done = true;
        bool ok = out.failures == 0;
        res[c] = std::move(out);
        return ok || !stop_at_first;
    });

    ConsistencyReport rep;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        if (!res[c].done) break;
        rep.trials_run += std::min(trials, (c + 1) * kChunk) - c * kChunk;
        rep.failures += res[c].failures;
        if (!rep.witness && res[c].first) rep.witness = res[c].first;
        if (stop_at_first && res[c].failures) break;
    }
    rep.passed = rep.failures == 0;
    return rep;
}

DisjointnessReport inflation_disjointness_test(const Scheme& s, double r, std::int64_t trials,
                                               std::uint64_t seed, unsigned workers) {
    if (trials <= 0 || !(r >= 0)) throw InvalidParameters("need trials > 0 and r >= 0");
    const int d = s.dimension();
    const PointSampler sampler(s);
    const std::int64_t n_chunks = (trials + kChunk - 1) / kChunk;
    std::vector<std::int64_t> violations(n_chunks, 0);
    std::vector<std::optional<Point>> first(n_chunks);
    for_chunks(n_chunks, workers, [&](std::int64_t c) {
        auto rng = chunk_rng(seed, c);
        std::int64_t lo = c * kChunk, hi = std::min(trials, lo + kChunk);
        for (std::int64_t n = lo; n < hi; ++n) {
            Point x = sampler(rng);
            Color col = s.color_of(s.tile_of(x));
            // x's own tile is within |delta| < r of x + delta; no second one may be
            Point delta = random_offset(d, r, s.metric(), rng);
            for (int i = 0; i < d; ++i) x[i] += delta[i];
            auto near = s.nearest_of_color(x, col, 2);
            if (near.size() == 2 && near[1].distance < r - 1e-9) {
                ++violations[c];
                if (!first[c]) first[c] = x;
            }
        }
        return true;
    });
    DisjointnessReport rep;
    rep.trials_run = trials;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        rep.violations += violations[c];
        if (!rep.witness && first[c]) rep.witness = first[c];
    }
    rep.passed = rep.violations == 0;
    return rep;
}

MultiTileWitness multi_tile_witness(const Scheme& s, int target, double eps, std::uint64_t seed) {
    auto cand = s.tiling().witness_candidates();
    std::mt19937_64 rng(splitmix64(seed));
    std::shuffle(cand.begin(), cand.end(), rng);
    MultiTileWitness w;
    for (const auto& v : cand) {
        ++w.candidates_checked;
        auto tiles = s.tiles_containing(v, eps);
        if (static_cast<int>(tiles.size()) >= target) {
            w.found = true;
            w.point = v;
            w.tiles = std::move(tiles);
            return w;
        }
    }
    return w;
}

// ---------------------------------------------------------------------------

namespace {
std::string join(const Point& p) {
    std::string s;
    char buf[64];
    for (std::size_t i = 0; i < p.size(); ++i) {
        double v = p[i] == 0 ? 0.0 : p[i];
        std::snprintf(buf, sizeof buf, "%.9f", v);
        if (i) s += ';';
        s += buf;
    }
    return s;
}
}  // namespace

std::string csv_header() { return "scheme,family,d,k,metric,method,t,ft,witness_x,witness_y,trials,seed"; }

std::string csv_row(const VerificationReport& r) {
    char t[64], ft[64];
    std::snprintf(t, sizeof t, "%.12f", r.t_measured);
    std::snprintf(ft, sizeof ft, "%.12f", r.t_measured / 2);
    return r.scheme + "," + to_string(r.family) + "," + std::to_string(r.d) + "," + std::to_string(r.k) + "," +
           to_string(r.metric) + "," + to_string(r.method) + "," + t + "," + ft + "," + join(r.witness.a) + "," +
           join(r.witness.b) + "," + std::to_string(r.trials) + "," + std::to_string(r.seed);
}

}  // namespace cround
