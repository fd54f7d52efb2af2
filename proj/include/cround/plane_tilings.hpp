#pragma once

#include "cround/scheme.hpp"

namespace cround {

struct BrickWallParams {
    int k = 3;
    double w = 0;  // brick width
    double h = 0;  // brick height, also the minimal distance
    bool odd = true;  // odd k: second row indented by w/2
};

struct HoneycombParams {
    int m = 3;
    int k = 9;
    double a = 0;  // tiles are a x 1/a
};

BrickWallParams brick_wall_params(int k);
HoneycombParams honeycomb_params(int m);
double hex_side();

// Horizontal and diagonal same-colour distances of the honeycomb layout.
double honeycomb_horizontal_distance(int m);
double honeycomb_diagonal_distance(int m);

SchemeDescriptor make_parity_1d();
SchemeDescriptor make_brick_wall(int k);
SchemeDescriptor make_hex3();
SchemeDescriptor make_honeycomb_rect(int m);

}  // namespace cround
