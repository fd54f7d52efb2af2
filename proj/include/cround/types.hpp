#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cround {

using Point = std::vector<double>;

enum class Metric { l2, linf };

struct Color {
    int index = 0;
    friend auto operator<=>(const Color&, const Color&) = default;
};

// Tiles are ordered by cell (lexicographic), then local index. The boundary
// tie-break picks the smallest id.
struct TileId {
    std::vector<std::int64_t> cell;
    int local = 0;
    friend auto operator<=>(const TileId&, const TileId&) = default;
    friend bool operator==(const TileId&, const TileId&) = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
public:
    using Error::Error;
};
class DimensionMismatch : public Error {
public:
    using Error::Error;
};
class InvalidTileId : public Error {
public:
    using Error::Error;
};
class InvalidColor : public Error {
public:
    using Error::Error;
};
class UnsupportedDimension : public Error {
public:
    using Error::Error;
};
class ResourceLimit : public Error {
public:
    using Error::Error;
};

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);
std::string to_string(const TileId& id);

}  // namespace cround
