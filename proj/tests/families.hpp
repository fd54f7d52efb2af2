#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cround/highd_tilings.hpp"
#include "cround/plane_tilings.hpp"

namespace cround::testing {

struct Named {
    std::string label;
    SchemeDescriptor desc;
};

inline void PrintTo(const Named& n, std::ostream* os) { *os << n.label; }

// one small member of every family with polytope geometry (d <= 3)
inline std::vector<Named> polytope_families() {
    return {
        {"parity1d", make_parity_1d()},
        {"brick_wall3", make_brick_wall(3)},
        {"brick_wall4", make_brick_wall(4)},
        {"brick_wall5", make_brick_wall(5)},
        {"hex3", make_hex3()},
        {"honeycomb3", make_honeycomb_rect(3)},
        {"honeycomb4", make_honeycomb_rect(4)},
        {"cube_linf_2_3", make_cube_linf(2, 3)},
        {"cube_linf_3_2", make_cube_linf(3, 2)},
        {"dim_reduce2", make_dimension_reducing(2)},
        {"dim_reduce3", make_dimension_reducing(3)},
        {"bricks_balloons", make_bricks_balloons()},
        {"cpb3", make_cpb(3)},
    };
}

inline std::vector<Named> all_families() {
    auto v = polytope_families();
    v.push_back({"dim_reduce4", make_dimension_reducing(4)});
    v.push_back({"dim_reduce5", make_dimension_reducing(5)});
    v.push_back({"cube_linf_5_2", make_cube_linf(5, 2)});
    return v;
}

}  // namespace cround::testing
