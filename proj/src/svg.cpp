#include "cround/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cround {

namespace {

const char* const kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33",
                                "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62", "#8da0cb"};
constexpr int kPaletteSize = sizeof kPalette / sizeof kPalette[0];

using Poly = std::vector<Vec2>;

// Sutherland-Hodgman against one axis-aligned half plane: keep coord[axis] * sign <= bound * sign
Poly clip_half(const Poly& in, int axis, double bound, double sign) {
    Poly out;
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = in[i];
        const Vec2& q = in[(i + 1) % n];
        bool pin = sign * (p[axis] - bound) <= 0, qin = sign * (q[axis] - bound) <= 0;
        if (pin) out.push_back(p);
        if (pin != qin) {
            double s = (bound - p[axis]) / (q[axis] - p[axis]);
            out.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
        }
    }
    return out;
}

Poly clip(Poly p, const Viewport& v) {
    p = clip_half(p, 0, v.x0, -1);
    if (p.empty()) return p;
    p = clip_half(p, 0, v.x1, 1);
    if (p.empty()) return p;
    p = clip_half(p, 1, v.y0, -1);
    if (p.empty()) return p;
    return clip_half(p, 1, v.y1, 1);
}

double area(const Poly& p) {
    double a = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2& u = p[i];
        const Vec2& w = p[(i + 1) % p.size()];
        a += u[0] * w[1] - u[1] * w[0];
    }
    return a / 2;
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

// Piece outline in counter-clockwise order (boxes come out of the piece factory that way too).
Poly outline(const ConvexPiece& piece, const Point& shift) {
    Poly p;
    for (const auto& v : piece.vertices()) p.push_back({v[0] + shift[0], v[1] + shift[1]});
    if (area(p) < 0) std::reverse(p.begin(), p.end());
    return p;
}

std::string inflated_path(const Poly& p, double r) {
    const std::size_t n = p.size();
    std::vector<Vec2> normal(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % n];
        double dx = b[0] - a[0], dy = b[1] - a[1], len = std::hypot(dx, dy);
        normal[i] = {dy / len, -dx / len};
    }
    std::string d;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % n];
        const Vec2& nn = normal[(i + 1) % n];
        Vec2 s{a[0] + r * normal[i][0], a[1] + r * normal[i][1]};
        Vec2 e{b[0] + r * normal[i][0], b[1] + r * normal[i][1]};
        Vec2 f{b[0] + r * nn[0], b[1] + r * nn[1]};
        if (i == 0) d += "M" + num(s[0]) + " " + num(s[1]) + " ";
        d += "L" + num(e[0]) + " " + num(e[1]) + " ";
        d += "A" + num(r) + " " + num(r) + " 0 0 1 " + num(f[0]) + " " + num(f[1]) + " ";
    }
    return d + "Z";
}

}  // namespace

Viewport parse_viewport(const std::string& text) {
    Viewport v;
    std::stringstream ss(text);
    std::string item;
    std::vector<double> vals;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidParameters("viewport must be x0,y0,x1,y1");
        }
    }
    if (vals.size() != 4) throw InvalidParameters("viewport must be x0,y0,x1,y1");
    for (double x : vals)
        if (!std::isfinite(x)) throw InvalidParameters("viewport must be finite");
    return {vals[0], vals[1], vals[2], vals[3]};
}

std::string render_svg(const Scheme& s, const Viewport& v, std::optional<double> inflate,
                       std::optional<Color> highlight, SvgStats* stats) {
    if (s.dimension() != 2) throw UnsupportedDimension("render needs a 2D scheme");
    if (inflate && !(*inflate >= 0)) throw InvalidParameters("inflate must be non-negative");
    SvgStats st;
    const bool empty = !(v.x1 > v.x0 && v.y1 > v.y0);
    const double w = empty ? 0 : v.x1 - v.x0, h = empty ? 0 : v.y1 - v.y0;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(w * 100) << "\" height=\""
        << num(h * 100) << "\" viewBox=\"" << num(v.x0) << " " << num(-v.y1) << " " << num(w) << " " << num(h)
        << "\">\n";
    out << "<g transform=\"scale(1,-1)\" stroke=\"#000000\" stroke-width=\"" << num(std::max(w, h) / 800) << "\">\n";

    std::ostringstream overlay;
    if (!empty) {
        const double r = inflate.value_or(0);
        const bool draw_overlay = inflate && highlight;
        // cells whose tiles can reach the (inflated) viewport
        const auto& t = s.tiling();
        double ulo[2] = {1e300, 1e300}, uhi[2] = {-1e300, -1e300};
        for (const auto& g : t.geometry)
            for (int i = 0; i < 2; ++i) {
                ulo[i] = std::min(ulo[i], g.lo[i]);
                uhi[i] = std::max(uhi[i], g.hi[i]);
            }
        double cmin[2] = {1e300, 1e300}, cmax[2] = {-1e300, -1e300};
        for (double x : {v.x0 - uhi[0] - r, v.x1 - ulo[0] + r})
            for (double y : {v.y0 - uhi[1] - r, v.y1 - ulo[1] + r}) {
                Point c = s.lattice_coordinates({x, y});
                for (int i = 0; i < 2; ++i) {
                    cmin[i] = std::min(cmin[i], c[i]);
                    cmax[i] = std::max(cmax[i], c[i]);
                }
            }
        auto i0 = static_cast<std::int64_t>(std::floor(cmin[0])) - 1, i1 = static_cast<std::int64_t>(std::ceil(cmax[0])) + 1;
        auto j0 = static_cast<std::int64_t>(std::floor(cmin[1])) - 1, j1 = static_cast<std::int64_t>(std::ceil(cmax[1])) + 1;
        if ((i1 - i0) * (j1 - j0) > 4'000'000) throw ResourceLimit("viewport covers too many cells");
        for (auto j = j0; j <= j1; ++j)
            for (auto i = i0; i <= i1; ++i) {
                std::int64_t cell[2] = {i, j};
                Point shift = s.translation(cell);
                for (int l = 0; l < s.tiles_per_domain(); ++l) {
                    const auto& g = t.geometry[l];
                    if (g.lo[0] + shift[0] - r > v.x1 || g.hi[0] + shift[0] + r < v.x0 ||
                        g.lo[1] + shift[1] - r > v.y1 || g.hi[1] + shift[1] + r < v.y0)
                        continue;
                    const int c = t.colors[l].index;
                    for (const auto& piece : g.pieces) {
                        Poly full = outline(piece, shift);
                        Poly p = clip(full, v);
                        if (p.size() >= 3 && area(p) > 1e-12) {
                            ++st.polygons;
                            out << "<polygon fill=\"" << kPalette[c % kPaletteSize] << "\" points=\"";
                            for (std::size_t q = 0; q < p.size(); ++q)
                                out << (q ? " " : "") << num(p[q][0]) << "," << num(p[q][1]);
                            out << "\"/>\n";
                        }
                        if (draw_overlay && c == highlight->index) {
                            ++st.outlines;
                            overlay << "<path fill=\"none\" stroke=\"#000000\" d=\"" << inflated_path(full, r)
                                    << "\"/>\n";
                        }
                    }
                }
            }
    }
    out << overlay.str() << "</g>\n</svg>\n";
    if (stats) *stats = st;
    return out.str();
}

}  // namespace cround
