#include "cround/bounds.hpp"

#include <cmath>
#include <numbers>

#include "cround/highd_tilings.hpp"
#include "cround/plane_tilings.hpp"
#include "cround/scheme.hpp"

namespace cround {

namespace {
constexpr std::pair<Technique, const char*> kNames[] = {
    {Technique::bm2d, "bm2d"},
    {Technique::circle_packing, "circle_packing"},
    {Technique::ms_zenodorus, "ms_zenodorus"},
    {Technique::bm_general, "bm_general"},
    {Technique::sphere_packing, "sphere_packing"},
    {Technique::linf, "linf"},
};

using std::numbers::pi;

// Gamma(d/2 + 1)^{1/d} via lgamma, safe for very large d
double gamma_root(int d) { return std::exp(std::lgamma(d / 2.0 + 1.0) / d); }

// k^{1/d} - 1 without cancellation for k close to 1 in relative terms
double root_minus_one(double k, int d) { return std::expm1(std::log(k) / d); }
}  // namespace

std::string to_string(Technique t) {
    for (auto [tech, name] : kNames)
        if (tech == t) return name;
    return "?";
}

Technique technique_from_string(const std::string& s) {
    for (auto [tech, name] : kNames)
        if (s == name) return tech;
    throw InvalidParameters("unknown technique '" + s + "'");
}

double PackingDensity::delta(int d) {
    switch (d) {
        case 3: return pi / (3 * std::numbers::sqrt2);
        case 8: return std::pow(pi, 4) / (16.0 * 24.0);
        case 24: return std::pow(pi, 12) / std::tgamma(13.0);
        default: throw UnsupportedDimension("packing density known only for d in {3, 8, 24}");
    }
}

double PackingDensity::unit_ball_volume(int d) { return std::pow(pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0); }

double sphere_packing_coefficient(int d) {
    return 2 * std::pow(PackingDensity::delta(d) / PackingDensity::unit_ball_volume(d), 1.0 / d);
}

BoundReport upper_bound(Technique technique, int d, double k, std::optional<int> l) {
    if (!(k >= 1) || !std::isfinite(k)) throw InvalidParameters("k must be >= 1");
    if (d < 1) throw InvalidParameters("d must be >= 1");
    BoundReport r;
    r.technique = technique;
    r.d = d;
    r.k = k;
    auto need_plane = [&] {
        if (d != 2) throw UnsupportedDimension(to_string(technique) + " is a planar bound (d = 2)");
    };
    switch (technique) {
        case Technique::bm2d:
            need_plane();
            r.t_bound = 2 / std::sqrt(pi) * (std::sqrt(k) - 1);
            break;
        case Technique::circle_packing:
            // each inflated tile holds a disk of radius t/2; Fejes Toth density
            need_plane();
            r.t_bound = std::sqrt(2 / std::sqrt(3.0)) * std::sqrt(k);
            r.asymptotic = true;
            break;
        case Technique::ms_zenodorus: {
            need_plane();
            if (!l || *l < 3) throw InvalidParameters("ms_zenodorus needs l >= 3");
            r.extra = l;
            double alpha = 2 * std::sqrt(static_cast<double>(*l)) / std::sqrt(1 / std::tan(pi / *l));
            // 1 + alpha t / 2 + pi t^2 / 4 <= k
            r.t_bound = (-alpha + std::sqrt(alpha * alpha + 4 * (k - 1) * pi)) / pi;
            break;
        }
        case Technique::bm_general:
            r.t_bound = 2 * gamma_root(d) / std::sqrt(pi) * root_minus_one(k, d);
            break;
        case Technique::sphere_packing:
            r.t_bound = sphere_packing_coefficient(d) * std::pow(k, 1.0 / d);
            r.asymptotic = true;
            break;
        case Technique::linf: {
            double m = std::round(std::pow(k, 1.0 / d));
            if (std::abs(std::pow(m, d) - k) > 1e-9 * k) throw InvalidParameters("linf needs k = m^d");
            r.t_bound = m - 1;
            break;
        }
    }
    r.ft_bound = r.t_bound / 2;
    return r;
}

std::vector<Table1Row> table1_report() {
    std::vector<Table1Row> rows;
    auto ft = [](const SchemeDescriptor& d) { return build_scheme(d).fault_tolerance(); };
    auto ub = [](Technique t, int d, double k, std::optional<int> l = std::nullopt) {
        return upper_bound(t, d, k, l).ft_bound;
    };

    rows.push_back({"3 colors in R^2", "1", ft(make_brick_wall(3)), ub(Technique::bm2d, 2, 3), "brick wall",
                    "Brunn-Minkowski", false});
    rows.push_back({"4 colors in R^2", "1", ft(make_brick_wall(4)), ub(Technique::bm2d, 2, 4), "brick wall",
                    "Brunn-Minkowski", false});
    // honeycomb: (m - 1) a / 2 -> (4/3)^{1/4} / 2 per sqrt(k)
    rows.push_back({"k colors in R^2", "sqrt(k)", std::pow(4.0 / 3.0, 0.25) / 2,
                    upper_bound(Technique::circle_packing, 2, 1).ft_bound, "honeycomb of rectangles",
                    "circle packing", true});
    rows.push_back({"4 colors in R^3", "1", ft(make_bricks_balloons()), ub(Technique::bm_general, 3, 4),
                    "bricks and balloons", "Brunn-Minkowski", false});
    rows.push_back({"k colors in R^3", "k^(1/3)", cpb_params(3).a / 2, sphere_packing_coefficient(3) / 2,
                    "close packing of boxes", "sphere packing", true});
    rows.push_back({"k colors in R^8", "k^(1/8)", sphere_packing_coefficient(8) / 2, sphere_packing_coefficient(8) / 2,
                    "E8 box tiling (limit constant)", "sphere packing", true});
    rows.push_back({"k colors in R^24", "k^(1/24)", sphere_packing_coefficient(24) / 2,
                    sphere_packing_coefficient(24) / 2, "Leech box tiling (limit constant)", "sphere packing", true});
    return rows;
}

}  // namespace cround
