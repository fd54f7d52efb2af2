#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cround/scheme.hpp"

namespace cround {

enum class Method { exact_enumeration, random_descent };
std::string to_string(Method m);

struct Witness {
    Point a;
    Point b;
    TileId tile_a;
    TileId tile_b;
};

struct VerificationReport {
    std::string scheme;
    Family family = Family::parity1d;
    int d = 0;
    int k = 0;
    Metric metric = Metric::l2;
    Method method = Method::exact_enumeration;
    double t_measured = 0;
    Witness witness;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

// Minimal same-colour distance by enumerating tile pairs over nearby cells.
// d > 3 throws ResourceLimit. Without a metric the scheme's own is used.
VerificationReport exact_min_distance(const Scheme& scheme, std::optional<Metric> metric = std::nullopt);

// Random same-colour pairs refined by alternating projections; never below the
// true t. Deterministic in (trials, seed) for any worker count; workers = 0
// picks the hardware concurrency.
VerificationReport empirical_min_distance(const Scheme& scheme, std::int64_t trials, std::uint64_t seed,
                                          unsigned workers = 0);

struct ConsistencyFailure {
    Point x;
    Point y;
    Point expected_center;
    Point decoded_center;
};

struct ConsistencyReport {
    bool passed = true;
    std::int64_t trials_run = 0;
    std::int64_t failures = 0;
    std::optional<ConsistencyFailure> witness;
};

// decode(x + delta, encode(x).color) must return encode(x)'s centre for |delta| < r.
// With stop_at_first the run ends after the chunk holding the first failure.
ConsistencyReport consistency_test(const Scheme& scheme, double r, std::int64_t trials, std::uint64_t seed,
                                   unsigned workers = 0, bool stop_at_first = false);

struct DisjointnessReport {
    bool passed = true;
    std::int64_t trials_run = 0;
    std::int64_t violations = 0;
    std::optional<Point> witness;
};

// No point may be closer than r to two distinct tiles of the same colour.
DisjointnessReport inflation_disjointness_test(const Scheme& scheme, double r, std::int64_t trials,
                                               std::uint64_t seed, unsigned workers = 0);

struct MultiTileWitness {
    bool found = false;
    Point point;
    std::vector<TileId> tiles;
    std::size_t candidates_checked = 0;
};

MultiTileWitness multi_tile_witness(const Scheme& scheme, int target, double eps, std::uint64_t seed);

std::string csv_header();
std::string csv_row(const VerificationReport& report);

}  // namespace cround
