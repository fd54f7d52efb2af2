#pragma once

#include <array>
#include <span>
#include <vector>

namespace cround {

// Tile pieces live in R^1..R^3; lower dimensions pad unused coordinates with 0.
using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a);

// n . x <= offset, |n| = 1
struct HalfSpace {
    Vec3 normal;
    double offset;
};

struct Aabb {
    Vec3 lo{0, 0, 0};
    Vec3 hi{0, 0, 0};
};

class ConvexPiece {
public:
    static ConvexPiece interval(double lo, double hi);
    static ConvexPiece box(const Vec3& lo, const Vec3& hi, int dim);
    // vertices counter-clockwise
    static ConvexPiece polygon(std::span<const Vec2> ccw);
    static ConvexPiece prism(std::span<const Vec2> ccw, double z0, double z1);

    int dim() const { return dim_; }
    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<HalfSpace>& halfspaces() const { return faces_; }
    const Aabb& bounds() const { return bounds_; }
    double volume() const { return volume_; }
    const Vec3& centroid() const { return centroid_; }
    bool is_box() const { return is_box_; }

    ConvexPiece translated(const Vec3& shift) const;
    // max_i (n_i . x - b_i): negative inside, 0 on the boundary
    double max_violation(const Vec3& x) const;

private:
    int dim_ = 0;
    bool is_box_ = false;
    std::vector<Vec3> vertices_;
    std::vector<HalfSpace> faces_;
    Aabb bounds_;
    double volume_ = 0;
    Vec3 centroid_{0, 0, 0};
};

struct ClosestPair {
    double distance = 0;
    Vec3 a{0, 0, 0};
    Vec3 b{0, 0, 0};
};

// GJK on vertex sets; q is shifted by q_shift. Empty inputs throw InvalidParameters.
ClosestPair convex_distance(std::span<const Vec3> p, std::span<const Vec3> q, const Vec3& q_shift = {0, 0, 0});

// Distance between two pieces, the second one translated by q_shift.
// Boxes use a closed form, everything else goes through GJK.
ClosestPair piece_distance(const ConvexPiece& p, const ConvexPiece& q, const Vec3& q_shift);
ClosestPair piece_distance_linf(const ConvexPiece& p, const ConvexPiece& q, const Vec3& q_shift);
ClosestPair box_distance(const Aabb& p, const Aabb& q, int dim);
ClosestPair point_piece_distance(const Vec3& x, const ConvexPiece& piece);

double aabb_distance(const Aabb& p, const Aabb& q);
double aabb_distance_linf(const Aabb& p, const Aabb& q);

}  // namespace cround
