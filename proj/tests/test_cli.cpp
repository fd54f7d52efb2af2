#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cround/cli.hpp"
#include "cround/config.hpp"
#include "cround/hash_round.hpp"
#include "cround/highd_tilings.hpp"
#include "cround/plane_tilings.hpp"
#include "cround/svg.hpp"
#include "cround/verify.hpp"
#include "families.hpp"

using namespace cround;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
    args.insert(args.begin(), "cround");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("cround_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

int count_of(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

// ---------------------------------------------------------------- commands

TEST(Cli, EncodeParity) {
    auto r = cli({"encode", "--family", "parity1d", "--point", "0.49999"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "center=0 color=0\n");
}

TEST(Cli, EncodeFromStdin) {
    auto r = cli({"encode", "--family", "parity1d"}, "0.49999\n\n1.2\n-0.7\n");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "center=0 color=0\ncenter=1 color=1\ncenter=-1 color=1\n");
}

TEST(Cli, DecodeParity) {
    auto r = cli({"decode", "--family", "parity1d", "--color", "0", "--point", "0.50001"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "center=0 color=0\n");
}

TEST(Cli, VerifyExactBrick) {
    auto r = cli({"verify", "--family", "brick_wall", "--k", "4", "--mode", "exact"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "t=1.000000000\n");
}

TEST(Cli, VerifyConsistency) {
    auto r = cli({"verify", "--family", "hex3", "--mode", "consistency", "--trials", "5000"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("failures=0 passed"), std::string::npos) << r.out;
}

TEST(Cli, VerifyWritesCsv) {
    auto path = temp_file("verify.csv");
    auto r = cli({"verify", "--family", "cube_linf", "--d", "2", "--m", "3", "--mode", "exact", "--out", path.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    auto text = slurp(path);
    std::filesystem::remove(path);
    EXPECT_EQ(text.rfind(csv_header() + "\ncube_linf/d2/k9/m3,cube_linf,2,9,linf,exact,2.000000000000,", 0), 0u)
        << text;
}

TEST(Cli, Table) {
    auto r = cli({"bounds", "--table1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_of(r.out, "\n"), 8);
    EXPECT_NE(r.out.find("0.353553,0.413"), std::string::npos) << r.out;
}

TEST(Cli, SingleBound) {
    auto r = cli({"bounds", "--technique", "bm2d", "--k", "3"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("t<=0.82603088"), std::string::npos) << r.out;
    r = cli({"bounds", "--technique", "ms_zenodorus", "--k", "4", "--l", "3"});
    EXPECT_NE(r.out.find("t<=0.983"), std::string::npos) << r.out;
}

TEST(Cli, Build) {
    auto r = cli({"build", "--family", "honeycomb_rect", "--m", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("k=16\n"), std::string::npos);
    EXPECT_NE(r.out.find("m=4\n"), std::string::npos);
    EXPECT_NE(r.out.find("max_tile_volume=1\n"), std::string::npos) << r.out;
}

TEST(Cli, DemoHash) {
    auto r = cli({"demo-hash", "--family", "parity1d", "--point", "0.49999", "--second", "0.50001"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("color=0\n"), std::string::npos);
    EXPECT_NE(r.out.find("\nmatch\n"), std::string::npos) << r.out;
    r = cli({"demo-hash", "--family", "parity1d", "--point", "0.2", "--second", "1.6"});
    EXPECT_NE(r.out.find("mismatch"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"encode", "--family", "parity1d", "--bogus", "1"}).code, 2);
    EXPECT_EQ(cli({"verify", "--family", "hex3", "--mode", "guess"}).code, 2);
    EXPECT_EQ(cli({"verify", "--family", "hex3", "--trials", "0"}).code, 2);
    EXPECT_EQ(cli({"decode", "--family", "parity1d", "--point", "0"}).code, 2);
    EXPECT_EQ(cli({"encode", "--point", "0"}).code, 2);
    EXPECT_EQ(cli({"bounds"}).code, 2);
    auto r = cli({"encode", "--point", "0"});
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, DomainErrorsExitOne) {
    EXPECT_EQ(cli({"encode", "--family", "nosuch", "--point", "0"}).code, 1);
    EXPECT_EQ(cli({"build", "--family", "brick_wall", "--k", "2"}).code, 1);
    EXPECT_EQ(cli({"encode", "--family", "brick_wall", "--k", "3", "--point", "1"}).code, 1);
    EXPECT_EQ(cli({"encode", "--family", "parity1d", "--point", "x"}).code, 1);
    EXPECT_EQ(cli({"decode", "--family", "parity1d", "--color", "5", "--point", "0"}).code, 1);
    EXPECT_EQ(cli({"verify", "--family", "dim_reduce", "--d", "4", "--mode", "exact"}).code, 1);
    EXPECT_EQ(cli({"render", "--family", "parity1d"}).code, 1);
    EXPECT_EQ(cli({"bounds", "--technique", "bm2d", "--d", "3", "--k", "4"}).code, 1);
    EXPECT_EQ(cli({"build", "--config", "/nonexistent/cround.json"}).code, 1);
    auto r = cli({"build", "--family", "brick_wall", "--k", "2"});
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(r.err.empty());
}

// ------------------------------------------------------------------ config

TEST(Config, RoundTripEveryFamily) {
    for (const auto& f : cround::testing::all_families()) {
        SchemeConfig c{build_scheme(f.desc).descriptor(), 42, std::nullopt};
        EXPECT_EQ(parse_config(serialize_config(c)), c) << f.label;
    }
}

TEST(Config, RoundTripSweep) {
    std::vector<SchemeDescriptor> sweep;
    for (int k = 3; k <= 12; ++k) sweep.push_back(make_descriptor(Family::brick_wall, std::nullopt, k, std::nullopt));
    for (int m = 3; m <= 10; ++m)
        sweep.push_back(make_descriptor(Family::honeycomb_rect, std::nullopt, std::nullopt, m));
    for (int d = 1; d <= 4; ++d)
        for (int m = 2; m <= 4; ++m) sweep.push_back(make_descriptor(Family::cube_linf, d, std::nullopt, m));
    for (int d = 2; d <= 6; ++d) sweep.push_back(make_descriptor(Family::dim_reduce, d, std::nullopt, std::nullopt));
    for (int m = 3; m <= 6; ++m) sweep.push_back(make_descriptor(Family::cpb, std::nullopt, std::nullopt, m));
    sweep.push_back(make_descriptor(Family::dim_reduce, 3, std::nullopt, std::nullopt,
                                    {{"t", dim_reduce_conservative_t(3)}}));
    for (const auto& desc : sweep) {
        for (auto metric : {std::optional<Metric>{}, std::optional<Metric>{Metric::linf}}) {
            SchemeConfig c{desc, std::nullopt, metric};
            auto back = parse_config(serialize_config(c));
            EXPECT_EQ(back, c) << serialize_config(c);
            EXPECT_EQ(build_scheme(back.descriptor).descriptor(), desc);
        }
    }
}

TEST(Config, RejectsUnknownKeys) {
    EXPECT_THROW(parse_config(R"({"family":"hex3","colour":3})"), InvalidParameters);
    EXPECT_THROW(parse_config(R"({"family":"brick_wall","k":4,"params":{"width":1}})"), InvalidParameters);
    EXPECT_THROW(parse_config(R"({"k":4})"), InvalidParameters);
    EXPECT_THROW(parse_config("[1,2]"), InvalidParameters);
    EXPECT_THROW(parse_config("{nope"), InvalidParameters);
    EXPECT_THROW(parse_config(R"({"family":"hex3","m":3})"), InvalidParameters);
}

TEST(Config, CliReadsConfigFile) {
    auto path = temp_file("cfg.json");
    {
        std::ofstream f(path);
        f << R"({"family": "brick_wall", "k": 4, "seed": 3})";
    }
    auto r = cli({"verify", "--config", path.string(), "--mode", "exact"});
    auto both = cli({"build", "--config", path.string(), "--family", "hex3"});
    std::filesystem::remove(path);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "t=1.000000000\n");
    EXPECT_EQ(both.code, 2);
}

// --------------------------------------------------------------------- svg

namespace {

// bricks of width w, height h, odd rows shifted by w/2, overlapping the box with positive area
int analytic_brick_count(int k, double x0, double y0, double x1, double y1) {
    double w = std::sqrt(2.0 / (k - 2)), h = std::sqrt((k - 2) / 2.0);
    int n = 0;
    for (int row = static_cast<int>(std::floor(y0 / h)) - 1; row * h < y1; ++row) {
        if ((row + 1) * h <= y0) continue;
        double shift = (k % 2 && row % 2 != 0) ? w / 2 : 0;
        for (int i = static_cast<int>(std::floor((x0 - shift) / w)) - 1; shift + i * w < x1; ++i)
            if (shift + (i + 1) * w > x0) ++n;
    }
    return n;
}

}  // namespace

TEST(Svg, BrickWallPolygonCount) {
    auto s = build_scheme(make_brick_wall(3));
    SvgStats st;
    auto svg = render_svg(s, parse_viewport("0,0,8,4"), std::nullopt, std::nullopt, &st);
    EXPECT_EQ(st.polygons, analytic_brick_count(3, 0, 0, 8, 4));
    EXPECT_EQ(st.polygons, 39);
    EXPECT_EQ(count_of(svg, "<polygon"), st.polygons);
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    for (auto [x0, y0, x1, y1] : {std::array{-3.3, -1.1, 5.0, 2.9}, std::array{0.2, 0.3, 0.4, 0.5}}) {
        render_svg(s, {x0, y0, x1, y1}, std::nullopt, std::nullopt, &st);
        EXPECT_EQ(st.polygons, analytic_brick_count(3, x0, y0, x1, y1));
    }
}

TEST(Svg, EmptyViewport) {
    auto s = build_scheme(make_hex3());
    SvgStats st;
    auto svg = render_svg(s, parse_viewport("1,1,1,1"), std::nullopt, std::nullopt, &st);
    EXPECT_EQ(st.polygons, 0);
    EXPECT_EQ(count_of(svg, "<polygon"), 0);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_THROW(parse_viewport("1,2,3"), InvalidParameters);
}

TEST(Svg, Deterministic) {
    auto a = cli({"render", "--family", "hex3", "--viewport", "0,0,6,6", "--inflate", "0.31", "--color", "0"});
    auto b = cli({"render", "--family", "hex3", "--viewport", "0,0,6,6", "--inflate", "0.31", "--color", "0"});
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}

TEST(Svg, HexInflationOutlines) {
    auto s = build_scheme(make_hex3());
    SvgStats st;
    auto svg = render_svg(s, {0, 0, 6, 6}, 0.31, Color{0}, &st);
    EXPECT_GT(st.outlines, 0);
    EXPECT_EQ(count_of(svg, "<path"), st.outlines);
    EXPECT_EQ(count_of(svg, " A0.310000 0.310000 0 0 1 "), 6 * st.outlines);
    // outlines of different tiles never cross: same-colour tiles sit more than 0.62 apart
    EXPECT_GT(exact_min_distance(s).t_measured, 2 * 0.31);
    EXPECT_TRUE(inflation_disjointness_test(s, 0.31, 20000, 1).passed);
}

TEST(Svg, RejectsOtherDimensions) {
    EXPECT_THROW(render_svg(build_scheme(make_cube_linf(3, 2)), {0, 0, 1, 1}), UnsupportedDimension);
}

// -------------------------------------------------------------------- hash

TEST(Hash, ParityExample) {
    auto s = build_scheme(make_parity_1d());
    auto a = hash_round(s, {0.49999});
    EXPECT_EQ(a.color.index, 0);
    EXPECT_EQ(hash_decoded(s, {0.50001}, a.color), a);
    EXPECT_EQ(a.digest, sha256("parity1d|2|0.000000000000"));
    EXPECT_EQ(hash_round(s, {0.49999}), hash_round(s, {0.49999}));
}

TEST(Hash, BrickExample) {
    auto s = build_scheme(make_brick_wall(4));
    auto a = hash_round(s, {0.1, 0.1});
    auto b = hash_decoded(s, {0.45, 0.45}, a.color);
    EXPECT_EQ(a, b);
    EXPECT_EQ(canonical_center(s, {0.5, 0.5}), "brick_wall|4|0.500000000000,0.500000000000");
    EXPECT_EQ(a.digest, sha256("brick_wall|4|0.500000000000,0.500000000000"));
}

TEST(Hash, Sha256KnownVector) {
    EXPECT_EQ(to_hex(sha256("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hash, CanonicalNegativeZero) {
    auto s = build_scheme(make_parity_1d());
    EXPECT_EQ(canonical_center(s, {-0.0}), "parity1d|2|0.000000000000");
    EXPECT_EQ(canonical_center(s, {-1e-15}), "parity1d|2|0.000000000000");
}

TEST(Hash, CustomDigest) {
    auto s = build_scheme(make_parity_1d());
    DigestFn fn = [](std::string_view v) {
        Digest d{};
        d[0] = static_cast<std::uint8_t>(v.size());
        return d;
    };
    EXPECT_EQ(hash_round(s, {3.2}, fn).digest[0], std::string("parity1d|2|3.000000000000").size());
}

TEST(Hash, NearbyPairsAgree) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> g;
    for (const auto& f : cround::testing::all_families()) {
        auto s = build_scheme(f.desc);
        const int d = s.dimension();
        const double r = 0.99 * (d <= 3 ? exact_min_distance(s).t_measured : s.nominal_min_distance()) / 2;
        int mismatches = 0;
        for (int i = 0; i < 10000; ++i) {
            std::vector<double> us(d);
            for (auto& v : us) v = u(rng);
            Point x = s.random_point_in_domain(us.data());
            Point y = x;
            if (s.metric() == Metric::linf) {
                for (int j = 0; j < d; ++j) y[j] += r * (2 * u(rng) - 1);
            } else {
                Point dir(d);
                double n = 0;
                for (auto& v : dir) {
                    v = g(rng);
                    n += v * v;
                }
                double len = r * std::pow(u(rng), 1.0 / d) / std::sqrt(n);
                for (int j = 0; j < d; ++j) y[j] += dir[j] * len;
            }
            auto a = hash_round(s, x);
            if (!(hash_decoded(s, y, a.color) == a)) ++mismatches;
        }
        EXPECT_EQ(mismatches, 0) << f.label;
    }
}
