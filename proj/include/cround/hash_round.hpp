#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "cround/scheme.hpp"

namespace cround {

using Digest = std::array<std::uint8_t, 32>;
using DigestFn = std::function<Digest(std::string_view)>;

Digest sha256(std::string_view data);
std::string to_hex(const Digest& d);

struct HashedRound {
    Digest digest{};
    Color color;
    friend bool operator==(const HashedRound&, const HashedRound&) = default;
};

// "<family>|<k>|c0,c1,..." with every coordinate printed to 12 fractional digits.
std::string canonical_center(const Scheme& scheme, const Point& center);

// Rounds x and hashes the centre; the colour is the side information to publish.
HashedRound hash_round(const Scheme& scheme, const Point& x, const DigestFn& fn = sha256);

// The receiving side: decode y with the published colour, then hash.
HashedRound hash_decoded(const Scheme& scheme, const Point& y, Color c, const DigestFn& fn = sha256);

}  // namespace cround
