#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cround {

enum class Technique { bm2d, circle_packing, ms_zenodorus, bm_general, sphere_packing, linf };

std::string to_string(Technique t);
Technique technique_from_string(const std::string& s);

struct BoundReport {
    Technique technique = Technique::bm2d;
    int d = 2;
    double k = 0;
    std::optional<int> extra;  // polygon vertex count for ms_zenodorus
    double t_bound = 0;
    double ft_bound = 0;  // t_bound / 2
    bool asymptotic = false;
};

// k is real-valued so that asymptotic regimes (huge k) can be evaluated.
BoundReport upper_bound(Technique technique, int d, double k, std::optional<int> l = std::nullopt);

struct PackingDensity {
    static double delta(int d);  // d in {3, 8, 24}
    static double unit_ball_volume(int d);
};

// limit constant C with t <= (C + o(1)) k^{1/d}
double sphere_packing_coefficient(int d);

struct Table1Row {
    std::string scenario;
    std::string scale;  // "1", "sqrt(k)", "k^(1/3)", ...
    double lb_ft = 0;   // fault tolerance of the best construction
    double ub_ft = 0;
    std::string lb_source;
    std::string ub_source;
    bool asymptotic = false;
};

std::vector<Table1Row> table1_report();

}  // namespace cround
