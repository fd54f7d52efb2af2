#include "cround/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cround/bounds.hpp"
#include "cround/config.hpp"
#include "cround/hash_round.hpp"
#include "cround/svg.hpp"
#include "cround/verify.hpp"

namespace cround {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemeOpts {
    std::string family;
    std::optional<int> d, k, m;
    std::string metric;
    std::string config;
    std::optional<std::uint64_t> seed;
};

void add_scheme_options(CLI::App* app, SchemeOpts& o) {
    app->add_option("--family", o.family, "tiling family");
    app->add_option("--d", o.d, "dimension");
    app->add_option("--k", o.k, "number of colors");
    app->add_option("--m", o.m, "family size parameter");
    app->add_option("--metric", o.metric, "l2 or linf");
    app->add_option("--config", o.config, "JSON scheme config");
}

SchemeConfig resolve(const SchemeOpts& o) {
    SchemeConfig c;
    if (!o.config.empty()) {
        if (!o.family.empty()) throw UsageError("--config and --family are exclusive");
        c = load_config(o.config);
    } else {
        if (o.family.empty()) throw UsageError("need --family or --config");
        c.descriptor = make_descriptor(family_from_string(o.family), o.d, o.k, o.m);
    }
    if (!o.metric.empty()) c.metric = metric_from_string(o.metric);
    if (o.seed) c.seed = o.seed;
    return c;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

std::string fmt_point(const Point& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + fmt(p[i]);
    return s;
}

Point parse_point(const std::string& text) {
    std::string t = text;
    for (char& ch : t)
        if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ss(t);
    Point p;
    std::string tok;
    while (ss >> tok) {
        try {
            std::size_t used = 0;
            p.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InvalidParameters("bad coordinate '" + tok + "'");
        }
    }
    if (p.empty()) throw InvalidParameters("empty point");
    return p;
}

std::vector<Point> gather_points(const std::vector<std::string>& flags, std::istream& in) {
    std::vector<Point> pts;
    for (const auto& f : flags) pts.push_back(parse_point(f));
    if (flags.empty()) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            pts.push_back(parse_point(line));
        }
    }
    return pts;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Consistent rounding with colored periodic tilings", "cround"};
    app.require_subcommand(1, 1);

    SchemeOpts so;
    std::vector<std::string> points;
    int color = -1;
    std::string mode = "exact", viewport = "0,0,4,4", out_path, technique;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::optional<double> inflate, radius;
    std::optional<int> l;
    bool table1 = false;
    std::string second;

    auto* build = app.add_subcommand("build", "validate a scheme and print derived constants");
    add_scheme_options(build, so);

    auto* encode = app.add_subcommand("encode", "round points (flags or stdin lines)");
    add_scheme_options(encode, so);
    encode->add_option("--point", points, "point, comma separated");

    auto* decode = app.add_subcommand("decode", "decode noisy points with a color");
    add_scheme_options(decode, so);
    decode->add_option("--point", points, "point, comma separated");
    decode->add_option("--color", color, "published color")->required();

    auto* verify = app.add_subcommand("verify", "measure t or test consistency");
    add_scheme_options(verify, so);
    verify->add_option("--mode", mode, "exact, empirical or consistency")
        ->check(CLI::IsMember({"exact", "empirical", "consistency"}));
    verify->add_option("--trials", trials, "random trials")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--workers", workers, "threads, 0 = all cores");
    verify->add_option("--radius", radius, "consistency radius, default 0.99 t/2");
    verify->add_option("--out", out_path, "CSV output file");

    auto* bounds = app.add_subcommand("bounds", "upper bounds on t");
    bounds->add_flag("--table1", table1, "summary table of lower and upper bounds");
    bounds->add_option("--technique", technique, "bound technique");
    bounds->add_option("--d", so.d, "dimension");
    bounds->add_option("--k", so.k, "number of colors");
    bounds->add_option("--l", l, "polygon vertex count for ms_zenodorus");

    auto* render = app.add_subcommand("render", "SVG of a 2D scheme");
    add_scheme_options(render, so);
    render->add_option("--viewport", viewport, "x0,y0,x1,y1");
    render->add_option("--inflate", inflate, "inflation radius");
    render->add_option("--color", color, "color whose inflation is drawn");
    render->add_option("--out", out_path, "output file");

    auto* demo = app.add_subcommand("demo-hash", "hashed rounding of a measurement and its noisy copy");
    add_scheme_options(demo, so);
    demo->add_option("--point", points, "first measurement")->required();
    demo->add_option("--second", second, "second measurement")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (bounds->parsed()) {
            char buf[256];
            if (table1) {
                out << "scenario,scale,lb_ft,ub_ft,lb_source,ub_source\n";
                for (const auto& r : table1_report()) {
                    std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%s,%s\n", r.scenario.c_str(), r.scale.c_str(),
                                  r.lb_ft, r.ub_ft, r.lb_source.c_str(), r.ub_source.c_str());
                    out << buf;
                }
                return 0;
            }
            if (technique.empty() || !so.k) throw UsageError("need --table1 or --technique with --k");
            Technique tech = technique_from_string(technique);
            int d = so.d.value_or(2);
            BoundReport r = upper_bound(tech, d, *so.k, l);
            std::snprintf(buf, sizeof buf, "technique=%s d=%d k=%d t<=%.9f ft<=%.9f%s\n", to_string(tech).c_str(), d,
                          *so.k, r.t_bound, r.ft_bound, r.asymptotic ? " asymptotic" : "");
            out << buf;
            return 0;
        }

        SchemeConfig cfg = resolve(so);
        Scheme scheme = build_scheme(cfg.descriptor);

        if (build->parsed()) {
            const auto& d = scheme.descriptor();
            double vmax = 0;
            for (const auto& t : scheme.fundamental_tiles()) vmax = std::max(vmax, t.geometry.volume);
            out << "scheme=" << scheme.name() << "\n"
                << "family=" << to_string(d.family) << "\nd=" << d.d << "\nk=" << d.k << "\n";
            if (d.m) out << "m=" << d.m << "\n";
            out << "metric=" << to_string(scheme.metric()) << "\n"
                << "tiles_per_domain=" << scheme.tiles_per_domain() << "\n"
                << "t=" << fmt(scheme.nominal_min_distance()) << "\n"
                << "ft=" << fmt(scheme.fault_tolerance()) << "\n"
                << "tile_diameter=" << fmt(scheme.tile_diameter()) << "\n"
                << "max_tile_volume=" << fmt(vmax) << "\n"
                << "side_info_bits=" << fmt(scheme.side_info_bits()) << "\n";
            for (const auto& [key, v] : d.params) out << "param." << key << "=" << fmt(v) << "\n";
            for (const auto& p : scheme.periods()) out << "period=" << fmt_point(p) << "\n";
            return 0;
        }
        if (encode->parsed() || decode->parsed()) {
            for (const auto& p : gather_points(points, in)) {
                RoundResult r = encode->parsed() ? scheme.encode(p) : scheme.decode(p, Color{color});
                out << "center=" << fmt_point(r.center) << " color=" << r.color.index << "\n";
            }
            return 0;
        }
        if (verify->parsed()) {
            const std::uint64_t s = cfg.seed.value_or(seed);
            if (mode == "consistency") {
                double r = radius.value_or(0.99 * scheme.fault_tolerance());
                auto rep = consistency_test(scheme, r, trials, s, workers);
                char buf[256];
                std::snprintf(buf, sizeof buf, "r=%.9f trials=%lld failures=%lld %s\n", r,
                              static_cast<long long>(rep.trials_run), static_cast<long long>(rep.failures),
                              rep.passed ? "passed" : "failed");
                out << buf;
                if (rep.witness)
                    out << "witness x=" << fmt_point(rep.witness->x) << " y=" << fmt_point(rep.witness->y) << "\n";
                return 0;
            }
            VerificationReport rep = mode == "exact" ? exact_min_distance(scheme, cfg.metric)
                                                     : empirical_min_distance(scheme, trials, s, workers);
            char buf[64];
            std::snprintf(buf, sizeof buf, "t=%.9f\n", rep.t_measured);
            out << buf;
            if (!out_path.empty()) write_text(out_path, csv_header() + "\n" + csv_row(rep) + "\n", out);
            return 0;
        }
        if (render->parsed()) {
            std::optional<Color> hl;
            if (color >= 0) hl = Color{color};
            if (inflate && !hl) hl = Color{0};
            write_text(out_path, render_svg(scheme, parse_viewport(viewport), inflate, hl), out);
            return 0;
        }
        if (demo->parsed()) {
            Point x = parse_point(points.front());
            Point y = parse_point(second);
            HashedRound a = hash_round(scheme, x);
            HashedRound b = hash_decoded(scheme, y, a.color);
            out << "color=" << a.color.index << "\n"
                << "digest_first=" << to_hex(a.digest) << "\n"
                << "digest_second=" << to_hex(b.digest) << "\n"
                << (a.digest == b.digest ? "match" : "mismatch") << "\n";
            return 0;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace cround
