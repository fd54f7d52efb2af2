#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cround/geometry.hpp"
#include "cround/types.hpp"

namespace cround {

enum class Family { parity1d, brick_wall, hex3, honeycomb_rect, cube_linf, dim_reduce, bricks_balloons, cpb };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct SchemeDescriptor {
    Family family = Family::parity1d;
    int d = 1;
    int k = 2;
    int m = 0;  // 0 when the family has no m
    std::map<std::string, double> params;
    friend bool operator==(const SchemeDescriptor&, const SchemeDescriptor&) = default;
};

struct TileGeometry {
    std::vector<ConvexPiece> pieces;  // empty for d > 3
    Point lo;                         // bounding box
    Point hi;
    double volume = 0;
    Point centroid;
};

struct TileInfo {
    TileId id;
    Color color;
    Point center;
    TileGeometry geometry;
};

struct RoundResult {
    TileId tile;
    Point center;
    Color color;
    double distance = 0;  // set distance from the query point to the tile
};

struct TileDistance {
    double distance;
    TileId tile;
};

namespace detail {

// One per family. Everything is expressed for the tiles of the fundamental
// domain (cell 0); the Scheme handles translation.
class Tiling {
public:
    virtual ~Tiling() = default;

    int d = 0;
    int k = 0;
    Metric metric = Metric::l2;
    double nominal_t = 0;
    std::vector<Point> periods;  // rows are period vectors
    std::vector<Color> colors;   // per local
    std::vector<TileGeometry> geometry;

    // Closed-form point location: any (cell, local) whose closed tile contains x.
    virtual void locate(std::span<const double> x, std::int64_t* cell, int& local) const = 0;

    // Distance from x to the FD tile `local`, writing the closest tile point.
    // x is already shifted into the tile's cell frame.
    virtual double closest_point(int local, std::span<const double> x, Metric metric, double* out) const;

    // Lower bound on the distance from x to the boundary of the tile; <= 0 if outside.
    virtual double interior_depth(int local, std::span<const double> x) const;

    // Points of the FD where several tiles are expected to meet.
    virtual std::vector<Point> witness_candidates() const;

    // Optional closed-form nearest tile of a color, used when cell enumeration
    // is too large (high d). Returns false when not provided.
    virtual bool nearest_of_color(std::span<const double> y, int color, std::int64_t* cell, int& local,
                                  double& dist) const;

protected:
    void finish_geometry();
};

}  // namespace detail

class Scheme {
public:
    Scheme() = default;
    explicit Scheme(SchemeDescriptor desc, std::shared_ptr<const detail::Tiling> tiling);

    const SchemeDescriptor& descriptor() const;
    Family family() const { return descriptor().family; }
    int dimension() const;
    int colors() const;
    Metric metric() const;
    int tiles_per_domain() const;
    double nominal_min_distance() const;
    double fault_tolerance() const { return nominal_min_distance() / 2; }
    double tile_diameter() const;
    double side_info_bits() const;
    const std::vector<Point>& periods() const;
    double period_volume() const;
    const std::vector<TileInfo>& fundamental_tiles() const;
    std::string name() const;

    TileId tile_of(const Point& x) const;
    TileInfo tile_info(const TileId& id) const;
    Color color_of(const TileId& id) const;
    Point center_of(const TileId& id) const;
    RoundResult encode(const Point& x) const;
    RoundResult decode(const Point& y, Color c) const;

    // Nearest `count` tiles of color c to y, sorted by (distance, id).
    // extra_cells widens the candidate search per axis.
    std::vector<TileDistance> nearest_of_color(const Point& y, Color c, int count, int extra_cells = 0) const;

    // All tiles whose closed geometry is within tol of x, sorted.
    std::vector<TileId> tiles_containing(const Point& x, double tol) const;

    double distance_to_tile(const TileId& id, const Point& x, Point* closest = nullptr,
                            Metric metric = Metric::l2) const;
    bool contains(const TileId& id, const Point& x, double tol) const;

    Point translation(std::span<const std::int64_t> cell) const;
    std::vector<std::int64_t> cell_of(const Point& x) const;
    // coordinates of x in the period basis
    Point lattice_coordinates(const Point& x) const;
    Point random_point_in_domain(double u01[]) const;

    const detail::Tiling& tiling() const;

    // per-axis cell radius that provably covers the decode search
    const std::vector<int>& decode_radius() const;

private:
    struct Data;
    std::shared_ptr<const Data> data_;
    void check_dim(const Point& x) const;
    void check_id(const TileId& id) const;
};

Scheme build_scheme(const SchemeDescriptor& desc);

}  // namespace cround
