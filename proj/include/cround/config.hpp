#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cround/scheme.hpp"

namespace cround {

struct SchemeConfig {
    SchemeDescriptor descriptor;
    std::optional<std::uint64_t> seed;
    std::optional<Metric> metric;
    friend bool operator==(const SchemeConfig&, const SchemeConfig&) = default;
};

// Fills in whatever the family determines on its own (d, k from m, m from k)
// and returns the normalized descriptor of the resulting scheme.
SchemeDescriptor make_descriptor(Family family, std::optional<int> d, std::optional<int> k, std::optional<int> m,
                                 const std::map<std::string, double>& params = {});

// JSON object with keys family, d, k, m, seed, metric, params. Unknown keys throw.
SchemeConfig parse_config(const std::string& text);
SchemeConfig load_config(const std::string& path);
std::string serialize_config(const SchemeConfig& config);

}  // namespace cround
