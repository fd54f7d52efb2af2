#include "cround/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cround {

namespace {

int default_dimension(Family f) {
    switch (f) {
        case Family::parity1d: return 1;
        case Family::brick_wall:
        case Family::hex3:
        case Family::honeycomb_rect: return 2;
        case Family::bricks_balloons:
        case Family::cpb: return 3;
        default: throw InvalidParameters(to_string(f) + " needs d");
    }
}

int ipow(int b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        if (r > (1 << 30)) throw InvalidParameters("k too large");
    }
    return static_cast<int>(r);
}

int integer_root(int k, int e) {
    int m = static_cast<int>(std::lround(std::pow(static_cast<double>(k), 1.0 / e)));
    for (int c = std::max(1, m - 1); c <= m + 1; ++c)
        if (ipow(c, e) == k) return c;
    throw InvalidParameters("k = " + std::to_string(k) + " is not a perfect power");
}

}  // namespace

SchemeDescriptor make_descriptor(Family f, std::optional<int> d, std::optional<int> k, std::optional<int> m,
                                 const std::map<std::string, double>& params) {
    SchemeDescriptor desc;
    desc.family = f;
    desc.d = d ? *d : default_dimension(f);
    desc.params = params;
    switch (f) {
        case Family::parity1d: desc.k = k.value_or(2); break;
        case Family::hex3: desc.k = k.value_or(3); break;
        case Family::bricks_balloons: desc.k = k.value_or(4); break;
        case Family::dim_reduce: desc.k = k.value_or(desc.d + 1); break;
        case Family::brick_wall:
            if (!k) throw InvalidParameters("brick_wall needs k");
            desc.k = *k;
            break;
        case Family::honeycomb_rect:
        case Family::cpb:
        case Family::cube_linf: {
            int e = f == Family::honeycomb_rect ? 2 : f == Family::cpb ? 3 : desc.d;
            if (e < 1) throw InvalidParameters("d must be positive");
            if (!k && !m) throw InvalidParameters(to_string(f) + " needs k or m");
            desc.m = m ? *m : integer_root(*k, e);
            if (desc.m < 1) throw InvalidParameters("m must be positive");
            desc.k = k ? *k : ipow(desc.m, e);
            break;
        }
    }
    if (m && f != Family::honeycomb_rect && f != Family::cpb && f != Family::cube_linf && *m != 0)
        throw InvalidParameters(to_string(f) + " takes no m");
    return build_scheme(desc).descriptor();
}

SchemeConfig parse_config(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidParameters(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParameters("config must be a JSON object");
    static const std::set<std::string> known{"family", "d", "k", "m", "seed", "metric", "params"};
    for (const auto& [key, v] : j.items())
        if (!known.count(key)) throw InvalidParameters("unknown config key '" + key + "'");

    auto get_int = [&](const char* key) -> std::optional<int> {
        if (!j.contains(key)) return std::nullopt;
        if (!j[key].is_number_integer()) throw InvalidParameters(std::string("config key '") + key + "' must be an integer");
        return j[key].get<int>();
    };
    if (!j.contains("family") || !j["family"].is_string()) throw InvalidParameters("config needs a string 'family'");
    std::map<std::string, double> params;
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw InvalidParameters("'params' must be an object");
        for (const auto& [key, v] : j["params"].items()) {
            if (!v.is_number()) throw InvalidParameters("parameter '" + key + "' must be a number");
            params[key] = v.get<double>();
        }
    }
    SchemeConfig c;
    c.descriptor = make_descriptor(family_from_string(j["family"].get<std::string>()), get_int("d"), get_int("k"),
                                   get_int("m"), params);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InvalidParameters("'seed' must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("metric")) {
        if (!j["metric"].is_string()) throw InvalidParameters("'metric' must be a string");
        c.metric = metric_from_string(j["metric"].get<std::string>());
    }
    return c;
}

SchemeConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameters("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const SchemeConfig& c) {
    nlohmann::ordered_json j;
    const auto& d = c.descriptor;
    j["family"] = to_string(d.family);
    j["d"] = d.d;
    j["k"] = d.k;
    if (d.m) j["m"] = d.m;
    if (c.seed) j["seed"] = *c.seed;
    if (c.metric) j["metric"] = to_string(*c.metric);
    if (!d.params.empty()) {
        nlohmann::ordered_json p = nlohmann::ordered_json::object();
        for (const auto& [key, v] : d.params) p[key] = v;
        j["params"] = p;
    }
    return j.dump(2) + "\n";
}

}  // namespace cround
