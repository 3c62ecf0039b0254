#include "pg/tabletop/contact.hpp"

namespace pg::sim {

Penetration disc_polygon_penetration(const Polygon& poly, Vec2 center, double radius) {
    Penetration pen;
    const Vec2 c = shapes::closest_boundary_point(poly, center);
    const Vec2 d = c - center;
    const double dist = d.norm();
    if (shapes::point_in_polygon(poly, center)) {
        pen.contact = true;
        pen.depth = radius + dist;
        // deepest exit is through the closest boundary point
        pen.normal = dist > 1e-12 ? (center - c) * (1.0 / dist) : Vec2{0.0, -1.0};
        pen.point = c;
    } else if (dist < radius) {
        pen.contact = true;
        pen.depth = radius - dist;
        pen.normal = dist > 1e-12 ? d * (1.0 / dist) : Vec2{0.0, -1.0};
        pen.point = c;
    }
    return pen;
}

}  // namespace pg::sim
