#include "cround/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "tilings_internal.hpp"

namespace cround {

std::string to_string(Metric m) { return m == Metric::l2 ? "l2" : "linf"; }

Metric metric_from_string(const std::string& s) {
    if (s == "l2") return Metric::l2;
    if (s == "linf") return Metric::linf;
    throw InvalidParameters("unknown metric '" + s + "'");
}

std::string to_string(const TileId& id) {
    std::string s = "(";
    for (std::size_t i = 0; i < id.cell.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(id.cell[i]);
    }
    return s + ")#" + std::to_string(id.local);
}

namespace {
constexpr std::pair<Family, const char*> kFamilyNames[] = {
    {Family::parity1d, "parity1d"},       {Family::brick_wall, "brick_wall"},
    {Family::hex3, "hex3"},               {Family::honeycomb_rect, "honeycomb_rect"},
    {Family::cube_linf, "cube_linf"},     {Family::dim_reduce, "dim_reduce"},
    {Family::bricks_balloons, "bricks_balloons"}, {Family::cpb, "cpb"},
};

constexpr double kContainTol = 1e-9;
constexpr double kPerturb = 1e-7;
constexpr std::size_t kMaxOffsets = 4'000'000;
}  // namespace

std::string to_string(Family f) {
    for (auto [fam, name] : kFamilyNames)
        if (fam == f) return name;
    return "?";
}

Family family_from_string(const std::string& s) {
    for (auto [fam, name] : kFamilyNames)
        if (s == name) return fam;
    throw InvalidParameters("unknown family '" + s + "'");
}

// ---------------------------------------------------------------------------
// Tiling defaults

namespace detail {

namespace {
Vec3 pad(std::span<const double> x) {
    Vec3 v{0, 0, 0};
    for (std::size_t i = 0; i < x.size() && i < 3; ++i) v[i] = x[i];
    return v;
}
}  // namespace

double Tiling::closest_point(int local, std::span<const double> x, Metric m, double* out) const {
    const auto& g = geometry[local];
    if (g.pieces.empty()) throw UnsupportedDimension("tile has no polytope pieces");
    Vec3 p = pad(x);
    double best = std::numeric_limits<double>::infinity();
    Vec3 arg{0, 0, 0};
    for (const auto& piece : g.pieces) {
        ClosestPair c = point_piece_distance(p, piece);
        double dist = c.distance;
        if (m == Metric::linf) {
            if (!piece.is_box()) throw UnsupportedDimension("L-infinity distance needs box pieces");
            dist = 0;
            for (int i = 0; i < 3; ++i) dist = std::max(dist, std::abs(c.b[i] - p[i]));
        }
        if (dist < best) {
            best = dist;
            arg = c.b;
        }
    }
    if (out)
        for (int i = 0; i < d; ++i) out[i] = arg[i];
    return best;
}

double Tiling::interior_depth(int local, std::span<const double> x) const {
    Vec3 p = pad(x);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& piece : geometry[local].pieces) best = std::max(best, -piece.max_violation(p));
    return best;
}

std::vector<Point> Tiling::witness_candidates() const {
    std::set<Point> seen;
    for (const auto& g : geometry)
        for (const auto& piece : g.pieces)
            for (const auto& v : piece.vertices()) seen.insert(Point(v.begin(), v.begin() + d));
    return {seen.begin(), seen.end()};
}

bool Tiling::nearest_of_color(std::span<const double>, int, std::int64_t*, int&, double&) const { return false; }

void Tiling::finish_geometry() {
    for (auto& g : geometry) {
        if (g.pieces.empty()) continue;  // closed-form families fill these themselves
        g.volume = 0;
        Vec3 c{0, 0, 0};
        Aabb box = g.pieces.front().bounds();
        for (const auto& piece : g.pieces) {
            g.volume += piece.volume();
            c = c + piece.volume() * piece.centroid();
            for (int i = 0; i < 3; ++i) {
                box.lo[i] = std::min(box.lo[i], piece.bounds().lo[i]);
                box.hi[i] = std::max(box.hi[i], piece.bounds().hi[i]);
            }
        }
        g.centroid.assign(d, 0);
        g.lo.assign(d, 0);
        g.hi.assign(d, 0);
        for (int i = 0; i < d; ++i) {
            g.centroid[i] = c[i] / g.volume;
            g.lo[i] = box.lo[i];
            g.hi[i] = box.hi[i];
        }
    }
}

void require_param(SchemeDescriptor& desc, const std::string& key, double expected) {
    auto it = desc.params.find(key);
    if (it == desc.params.end()) {
        desc.params[key] = expected;
        return;
    }
    double rel = std::abs(it->second - expected) / std::max(1.0, std::abs(expected));
    if (!(rel <= 1e-12))
        throw InvalidParameters("parameter '" + key + "' does not match its closed form");
    it->second = expected;
}

double param_or(const SchemeDescriptor& desc, const std::string& key, double fallback) {
    auto it = desc.params.find(key);
    return it == desc.params.end() ? fallback : it->second;
}

void reject_unknown_params(const SchemeDescriptor& desc, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : desc.params) {
        bool ok = false;
        for (const char* a : allowed) ok |= key == a;
        if (!ok) throw InvalidParameters("unknown parameter '" + key + "' for " + to_string(desc.family));
        if (!std::isfinite(value)) throw InvalidParameters("parameter '" + key + "' is not finite");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scheme

struct Scheme::Data {
    SchemeDescriptor desc;
    std::shared_ptr<const detail::Tiling> tiling;
    std::vector<TileInfo> fd_tiles;
    std::vector<std::vector<double>> inv;  // inverse of the period matrix
    std::vector<std::vector<int>> locals_by_color;
    double diameter = 0;
    double period_volume = 0;
    std::vector<int> radius;
    // candidate cell offsets sorted by a lower bound on their distance from the FD
    // packed mixed-radix codes, digit i in [0, 2 radius_i]
    std::vector<std::uint32_t> offsets;
    std::vector<double> offset_key;
    void unpack(std::uint32_t code, std::int64_t* off) const {
        for (std::size_t i = 0; i < radius.size(); ++i) {
            const std::uint32_t base = 2 * radius[i] + 1;
            off[i] = static_cast<std::int64_t>(code % base) - radius[i];
            code /= base;
        }
    }
    Point fd_center;
    double fd_radius = 0;
    Point union_lo, union_hi;
};

namespace {

std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        double p = a[c][c];
        if (std::abs(p) < 1e-300) throw InvalidParameters("singular period matrix");
        for (int k = 0; k < n; ++k) {
            a[c][k] /= p;
            inv[c][k] /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = a[r][c];
            if (f == 0) continue;
            for (int k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

double box_point_distance(std::span<const double> lo, std::span<const double> hi, std::span<const double> x,
                          std::span<const double> shift) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double l = lo[i] + shift[i], h = hi[i] + shift[i];
        double g = x[i] < l ? l - x[i] : (x[i] > h ? x[i] - h : 0.0);
        s += g * g;
    }
    return std::sqrt(s);
}

}  // namespace

Scheme::Scheme(SchemeDescriptor desc, std::shared_ptr<const detail::Tiling> tiling) {
    auto data = std::make_shared<Data>();
    const auto& t = *tiling;
    const int d = t.d;
    data->desc = std::move(desc);
    data->tiling = tiling;

    const int n_local = static_cast<int>(t.colors.size());
    data->locals_by_color.assign(t.k, {});
    for (int l = 0; l < n_local; ++l) {
        TileInfo info;
        info.id = {std::vector<std::int64_t>(d, 0), l};
        info.color = t.colors[l];
        info.geometry = t.geometry[l];
        info.center = info.geometry.centroid;
        data->fd_tiles.push_back(std::move(info));
        data->locals_by_color.at(t.colors[l].index).push_back(l);
        double diag = 0;
        for (int i = 0; i < d; ++i) diag += std::pow(t.geometry[l].hi[i] - t.geometry[l].lo[i], 2);
        data->diameter = std::max(data->diameter, std::sqrt(diag));
    }
    for (int c = 0; c < t.k; ++c)
        if (data->locals_by_color[c].empty()) throw InvalidParameters("color without tiles");

    data->inv = invert(t.periods);
    {
        // |det| by elimination of a copy
        auto a = t.periods;
        double det = 1;
        for (int c = 0; c < d; ++c) {
            int piv = c;
            for (int r = c + 1; r < d; ++r)
                if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
            std::swap(a[c], a[piv]);
            det *= a[c][c];
            for (int r = c + 1; r < d; ++r) {
                double f = a[r][c] / a[c][c];
                for (int k = c; k < d; ++k) a[r][k] -= f * a[c][k];
            }
        }
        data->period_volume = std::abs(det);
    }

    // FD parallelepiped centre and circumradius
    data->fd_center.assign(d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) data->fd_center[j] += 0.5 * t.periods[i][j];
    double fd_diam = 0;
    if (d <= 20) {
        for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
            double s = 0;
            for (int j = 0; j < d; ++j) {
                double x = 0;
                for (int i = 0; i < d; ++i) x += ((mask >> i) & 1 ? 1.0 : 0.0) * t.periods[i][j];
                s += (x - data->fd_center[j]) * (x - data->fd_center[j]);
            }
            data->fd_radius = std::max(data->fd_radius, std::sqrt(s));
        }
    }
    fd_diam = 2 * data->fd_radius;

    data->union_lo.assign(d, std::numeric_limits<double>::infinity());
    data->union_hi.assign(d, -std::numeric_limits<double>::infinity());
    for (const auto& g : t.geometry)
        for (int i = 0; i < d; ++i) {
            data->union_lo[i] = std::min(data->union_lo[i], g.lo[i]);
            data->union_hi[i] = std::max(data->union_hi[i], g.hi[i]);
        }

    // Every FD copy holds a tile of every colour, so the nearest tile of any
    // colour lies within fd_diam + diameter of the query point.
    const double reach = fd_diam + 2 * data->diameter;
    data->radius.assign(d, 0);
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) {
        double col = 0, cmin = 0, cmax = 0;
        for (int j = 0; j < d; ++j) col += data->inv[j][i] * data->inv[j][i];
        col = std::sqrt(col);
        for (int j = 0; j < d; ++j) {
            double a = data->union_lo[j] * data->inv[j][i], b = data->union_hi[j] * data->inv[j][i];
            cmin += std::min(a, b);
            cmax += std::max(a, b);
        }
        double spill = std::max(std::abs(cmax), std::abs(1 - cmin));
        data->radius[i] = static_cast<int>(std::ceil(reach * col + spill)) + 1;
        count *= static_cast<std::uint64_t>(2 * data->radius[i] + 1);
        if (count > kMaxOffsets) break;
    }

    if (count <= kMaxOffsets) {
        std::vector<std::pair<double, std::uint32_t>> all(count);
        std::vector<std::int64_t> off(d);
        Point shift(d);
        for (std::uint32_t code = 0; code < count; ++code) {
            data->unpack(code, off.data());
            std::fill(shift.begin(), shift.end(), 0.0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) shift[j] += static_cast<double>(off[i]) * t.periods[i][j];
            all[code] = {box_point_distance(data->union_lo, data->union_hi, data->fd_center, shift), code};
        }
        std::sort(all.begin(), all.end());
        data->offsets.reserve(count);
        data->offset_key.reserve(count);
        for (auto [key, code] : all) {
            data->offset_key.push_back(key);
            data->offsets.push_back(code);
        }
    }
    data_ = std::move(data);
}

const SchemeDescriptor& Scheme::descriptor() const { return data_->desc; }
int Scheme::dimension() const { return data_->tiling->d; }
int Scheme::colors() const { return data_->tiling->k; }
Metric Scheme::metric() const { return data_->tiling->metric; }
int Scheme::tiles_per_domain() const { return static_cast<int>(data_->fd_tiles.size()); }
double Scheme::nominal_min_distance() const { return data_->tiling->nominal_t; }
double Scheme::tile_diameter() const { return data_->diameter; }
double Scheme::side_info_bits() const { return std::log2(static_cast<double>(colors())); }
const std::vector<Point>& Scheme::periods() const { return data_->tiling->periods; }
double Scheme::period_volume() const { return data_->period_volume; }
const std::vector<TileInfo>& Scheme::fundamental_tiles() const { return data_->fd_tiles; }
const detail::Tiling& Scheme::tiling() const { return *data_->tiling; }
const std::vector<int>& Scheme::decode_radius() const { return data_->radius; }

std::string Scheme::name() const {
    const auto& d = descriptor();
    std::string s = to_string(d.family) + "/d" + std::to_string(d.d) + "/k" + std::to_string(d.k);
    if (d.m) s += "/m" + std::to_string(d.m);
    return s;
}

void Scheme::check_dim(const Point& x) const {
    if (static_cast<int>(x.size()) != dimension())
        throw DimensionMismatch("point has dimension " + std::to_string(x.size()) + ", scheme has " +
                                std::to_string(dimension()));
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidParameters("point coordinates must be finite");
}

void Scheme::check_id(const TileId& id) const {
    if (static_cast<int>(id.cell.size()) != dimension() || id.local < 0 || id.local >= tiles_per_domain())
        throw InvalidTileId("invalid tile id " + to_string(id));
}

Point Scheme::translation(std::span<const std::int64_t> cell) const {
    const int d = dimension();
    Point s(d, 0);
    for (int i = 0; i < d; ++i) {
        if (cell[i] == 0) continue;
        for (int j = 0; j < d; ++j) s[j] += static_cast<double>(cell[i]) * periods()[i][j];
    }
    return s;
}

std::vector<std::int64_t> Scheme::cell_of(const Point& x) const {
    const int d = dimension();
    std::vector<std::int64_t> c(d);
    for (int i = 0; i < d; ++i) {
        double coef = 0;
        for (int j = 0; j < d; ++j) coef += x[j] * data_->inv[j][i];
        c[i] = static_cast<std::int64_t>(std::floor(coef));
    }
    return c;
}

Point Scheme::lattice_coordinates(const Point& x) const {
    const int d = dimension();
    Point c(d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) c[i] += x[j] * data_->inv[j][i];
    return c;
}

Point Scheme::random_point_in_domain(double u01[]) const {
    const int d = dimension();
    Point x(d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) x[j] += u01[i] * periods()[i][j];
    return x;
}

double Scheme::distance_to_tile(const TileId& id, const Point& x, Point* closest, Metric m) const {
    check_id(id);
    check_dim(x);
    Point shift = translation(id.cell);
    Point rel(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) rel[i] = x[i] - shift[i];
    Point out(x.size());
    double dist = data_->tiling->closest_point(id.local, rel, m, out.data());
    if (closest) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] += shift[i];
        *closest = std::move(out);
    }
    return dist;
}

bool Scheme::contains(const TileId& id, const Point& x, double tol) const {
    return distance_to_tile(id, x) <= tol;
}

std::vector<TileId> Scheme::tiles_containing(const Point& x, double tol) const {
    check_dim(x);
    const int d = dimension();
    const auto& t = *data_->tiling;
    std::set<TileId> found;
    const double step = std::max(kPerturb, 10 * tol);
    // Full 3^d stencil up to d = 6, axis and diagonal directions beyond.
    std::vector<std::vector<int>> stencil;
    if (d <= 6) {
        std::vector<int> s(d, -1);
        while (true) {
            stencil.push_back(s);
            int i = 0;
            while (i < d && s[i] == 1) s[i++] = -1;
            if (i == d) break;
            ++s[i];
        }
    } else {
        stencil.emplace_back(d, 0);
        stencil.emplace_back(d, 1);
        stencil.emplace_back(d, -1);
        for (int i = 0; i < d; ++i)
            for (int sg : {-1, 1}) {
                std::vector<int> s(d, 0);
                s[i] = sg;
                stencil.push_back(s);
            }
    }
    std::vector<std::int64_t> cell(d);
    Point y(d);
    for (const auto& s : stencil) {
        for (int i = 0; i < d; ++i) y[i] = x[i] + step * s[i];
        int local = 0;
        t.locate(y, cell.data(), local);
        TileId id{cell, local};
        if (found.count(id)) continue;
        if (distance_to_tile(id, x) <= tol) found.insert(id);
    }
    return {found.begin(), found.end()};
}

TileId Scheme::tile_of(const Point& x) const {
    check_dim(x);
    const int d = dimension();
    const auto& t = *data_->tiling;
    TileId primary{std::vector<std::int64_t>(d), 0};
    t.locate(x, primary.cell.data(), primary.local);
    Point shift = translation(primary.cell);
    Point rel(d);
    for (int i = 0; i < d; ++i) rel[i] = x[i] - shift[i];
    // A point deep inside its tile has no competitor; skip the tie-break search.
    if (t.interior_depth(primary.local, rel) > 1e-8) return primary;
    auto all = tiles_containing(x, kContainTol);
    if (all.empty()) return primary;
    return all.front();
}

TileInfo Scheme::tile_info(const TileId& id) const {
    check_id(id);
    TileInfo info = data_->fd_tiles[id.local];
    info.id = id;
    Point s = translation(id.cell);
    const int d = dimension();
    Vec3 s3{0, 0, 0};
    for (int i = 0; i < d && i < 3; ++i) s3[i] = s[i];
    for (auto& piece : info.geometry.pieces) piece = piece.translated(s3);
    for (int i = 0; i < d; ++i) {
        info.center[i] += s[i];
        info.geometry.centroid[i] += s[i];
        info.geometry.lo[i] += s[i];
        info.geometry.hi[i] += s[i];
    }
    return info;
}

Color Scheme::color_of(const TileId& id) const {
    check_id(id);
    return data_->tiling->colors[id.local];
}

Point Scheme::center_of(const TileId& id) const {
    check_id(id);
    Point c = data_->fd_tiles[id.local].center;
    Point s = translation(id.cell);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += s[i];
    return c;
}

RoundResult Scheme::encode(const Point& x) const {
    TileId id = tile_of(x);
    RoundResult r;
    r.color = color_of(id);
    r.center = center_of(id);
    r.tile = std::move(id);
    r.distance = 0;
    return r;
}

std::vector<TileDistance> Scheme::nearest_of_color(const Point& y, Color c, int count, int extra_cells) const {
    check_dim(y);
    if (c.index < 0 || c.index >= colors()) throw InvalidColor("color " + std::to_string(c.index) + " out of range");
    const int d = dimension();
    const auto& t = *data_->tiling;
    const Metric metric = t.metric;

    if (count == 1 && extra_cells == 0 && data_->offsets.empty()) {
        std::vector<std::int64_t> cell(d);
        int local = 0;
        double dist = 0;
        if (t.nearest_of_color(y, c.index, cell.data(), local, dist)) return {{dist, TileId{cell, local}}};
    }
    if (data_->offsets.empty() || extra_cells < 0)
        throw ResourceLimit("candidate enumeration too large in dimension " + std::to_string(d));

    const auto base = cell_of(y);
    Point base_shift = translation(base);
    Point rel(d);
    for (int i = 0; i < d; ++i) rel[i] = y[i] - base_shift[i];
    // lower bounds below are Euclidean; L-inf distances are at least L2 / sqrt(d)
    const double lb_scale = metric == Metric::linf ? 1.0 / std::sqrt(static_cast<double>(d)) : 1.0;
    const double tie = 1e-12;

    std::vector<TileDistance> best;
    auto worst = [&] {
        return static_cast<int>(best.size()) < count ? std::numeric_limits<double>::infinity()
                                                     : best.back().distance;
    };
    Point shift(d), q(d);
    std::vector<std::int64_t> cell(d);

    auto consider = [&](std::span<const std::int64_t> off) {
        for (int i = 0; i < d; ++i) shift[i] = 0;
        for (int i = 0; i < d; ++i) {
            if (off[i] == 0) continue;
            for (int j = 0; j < d; ++j) shift[j] += static_cast<double>(off[i]) * t.periods[i][j];
        }
        for (int local : data_->locals_by_color[c.index]) {
            const auto& g = t.geometry[local];
            double lb = box_point_distance(g.lo, g.hi, rel, shift) * lb_scale;
            if (lb > worst() + tie) continue;
            for (int i = 0; i < d; ++i) q[i] = rel[i] - shift[i];
            double dist = t.closest_point(local, q, metric, nullptr);
            if (dist > worst() + tie) continue;
            for (int i = 0; i < d; ++i) cell[i] = base[i] + off[i];
            TileDistance cand{dist, TileId{cell, local}};
            auto pos = std::find_if(best.begin(), best.end(), [&](const TileDistance& b) {
                if (std::abs(b.distance - cand.distance) <= tie) return cand.tile < b.tile;
                return cand.distance < b.distance;
            });
            best.insert(pos, std::move(cand));
            if (static_cast<int>(best.size()) > count) best.pop_back();
        }
    };

    if (extra_cells == 0) {
        std::vector<std::int64_t> off(d);
        for (std::size_t n = 0; n < data_->offsets.size(); ++n) {
            if ((data_->offset_key[n] - data_->fd_radius) * lb_scale > worst() + tie) break;
            data_->unpack(data_->offsets[n], off.data());
            consider(off);
        }
    } else {
        // exhaustive scan over a widened box, no early exit
        std::vector<std::int64_t> off(d);
        std::vector<int> r(d);
        for (int i = 0; i < d; ++i) {
            r[i] = data_->radius[i] + extra_cells;
            off[i] = -r[i];
        }
        while (true) {
            consider(off);
            int i = 0;
            while (i < d && off[i] == r[i]) {
                off[i] = -r[i];
                ++i;
            }
            if (i == d) break;
            ++off[i];
        }
    }
    return best;
}

RoundResult Scheme::decode(const Point& y, Color c) const {
    auto near = nearest_of_color(y, c, 1);
    RoundResult r;
    r.tile = near.front().tile;
    r.distance = near.front().distance;
    r.color = c;
    r.center = center_of(r.tile);
    return r;
}

Scheme build_scheme(const SchemeDescriptor& input) {
    SchemeDescriptor desc = input;
    std::shared_ptr<const detail::Tiling> tiling;
    switch (desc.family) {
        case Family::parity1d: tiling = detail::build_parity1d(desc); break;
        case Family::brick_wall: tiling = detail::build_brick_wall(desc); break;
        case Family::hex3: tiling = detail::build_hex3(desc); break;
        case Family::honeycomb_rect: tiling = detail::build_honeycomb_rect(desc); break;
        case Family::cube_linf: tiling = detail::build_cube_linf(desc); break;
        case Family::dim_reduce: tiling = detail::build_dim_reduce(desc); break;
        case Family::bricks_balloons: tiling = detail::build_bricks_balloons(desc); break;
        case Family::cpb: tiling = detail::build_cpb(desc); break;
    }
    return Scheme(std::move(desc), std::move(tiling));
}

}  // namespace cround
