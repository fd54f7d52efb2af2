#pragma once

#include <cstdint>

#include "cround/scheme.hpp"

namespace cround {

struct DimReduceParams {
    int d = 3;
    double t = 0;  // threshold spacing, equals the minimal distance
    double a = 0;  // cube side, 1 + t
    std::vector<double> thresholds;  // t/2 + j t/sqrt(2), j = 0..d-1
};

struct BnBParams {
    double a = 0;
    double z = 0;        // slab height
    double H = 0;        // (2 + sqrt 2) a, brick height and octagon width
    double offset_x = 0; // balloon layer offset relative to the brick layer
    double offset_y = 0;
};

struct CpbParams {
    int m = 3;
    int k = 27;
    double a = 0, b = 0, c = 0;
    double shift_x = 0, shift_y = 0;  // in-plane shift of the second layer
};

// Per-axis distance to the nearest multiple of a, sorted ascending.
Point sorted_wall_distances(const Point& x, double a);

// Largest spacing for which the corner tiles stay t apart.
double dim_reduce_optimal_t(int d);
// 1/(1 + 2(d-1)sqrt 2), a smaller admissible spacing
double dim_reduce_conservative_t(int d);
DimReduceParams dim_reduce_params(int d, double t);

BnBParams bnb_params();
CpbParams cpb_params(int m);

SchemeDescriptor make_cube_linf(int d, int m);
SchemeDescriptor make_dimension_reducing(int d);
SchemeDescriptor make_dimension_reducing(int d, double t);
SchemeDescriptor make_bricks_balloons();
SchemeDescriptor make_bricks_balloons(double offset_x, double offset_y);
SchemeDescriptor make_cpb(int m);

struct BnBCalibration {
    double offset_x = 0;
    double offset_y = 0;
    double cross_layer_distance = 0;  // best value found on the grid
    int grid = 0;
    int optimal_cells = 0;            // grid points attaining the best value
};

// Grid search over the balloon-layer offsets maximising the smallest
// same-colour distance between a brick and a balloon.
BnBCalibration calibrate_bricks_balloons(int grid);

// Same-colour brick/balloon distance for a given offset pair.
double bnb_cross_layer_distance(double offset_x, double offset_y);

}  // namespace cround
