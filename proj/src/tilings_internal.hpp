#pragma once

#include <memory>

#include "cround/scheme.hpp"

namespace cround::detail {

// Each builder validates the descriptor, fills in derived params and returns the tiling.
std::shared_ptr<const Tiling> build_parity1d(SchemeDescriptor& desc);
std::shared_ptr<const Tiling> build_brick_wall(SchemeDescriptor& desc);
std::shared_ptr<const Tiling> build_hex3(SchemeDescriptor& desc);
std::shared_ptr<const Tiling> build_honeycomb_rect(SchemeDescriptor& desc);
std::shared_ptr<const Tiling> build_cube_linf(SchemeDescriptor& desc);
std::shared_ptr<const Tiling> build_dim_reduce(SchemeDescriptor& desc);
std::shared_ptr<const Tiling> build_bricks_balloons(SchemeDescriptor& desc);
std::shared_ptr<const Tiling> build_cpb(SchemeDescriptor& desc);

// Checks a derived parameter against its closed form, or inserts it when absent.
void require_param(SchemeDescriptor& desc, const std::string& key, double expected);
double param_or(const SchemeDescriptor& desc, const std::string& key, double fallback);
void reject_unknown_params(const SchemeDescriptor& desc, std::initializer_list<const char*> allowed);

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace cround::detail
