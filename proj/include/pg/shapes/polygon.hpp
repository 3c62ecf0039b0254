#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace pg::shapes {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
    Vec2 rotated(double theta) const {
        const double c = std::cos(theta), s = std::sin(theta);
        return {c * x - s * y, s * x + c * y};
    }
};

using Polygon = std::vector<Vec2>;

// Signed shoelace area; positive for counterclockwise winding.
double polygon_area(const Polygon& p);
Vec2 polygon_centroid(const Polygon& p);
bool polygon_is_ccw(const Polygon& p);
// Pairwise segment intersection test over non-adjacent edges.
bool polygon_is_simple(const Polygon& p);

bool point_in_polygon(const Polygon& p, Vec2 q);
double distance_to_boundary(const Polygon& p, Vec2 q);  // unsigned
Vec2 closest_boundary_point(const Polygon& p, Vec2 q);

double min_y(const Polygon& p);
double max_y(const Polygon& p);

// All maximal intervals of the polygon's intersection with the horizontal
// line at y, sorted by x.
std::vector<std::pair<double, double>> slice_intervals(const Polygon& p, double y);

struct Incircle {
    Vec2 center;
    double radius = 0.0;
};

// Largest inscribed circle via seeded grid search with local refinement.
Incircle largest_inscribed_circle(const Polygon& p, int coarse = 48, int refine_rounds = 4);

Polygon transformed(const Polygon& p, Vec2 translate, double theta);

}  // namespace pg::shapes
