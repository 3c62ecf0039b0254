#pragma once

#include "pg/shapes/polygon.hpp"

namespace pg::sim {

using shapes::Polygon;
using shapes::Vec2;

// Disc vs polygon overlap. `normal` points from the gripper into the object:
// translating the object by depth * normal separates the pair. `point` is the
// boundary point used as the contact location.
struct Penetration {
    bool contact = false;
    double depth = 0.0;
    Vec2 normal{0.0, 0.0};
    Vec2 point{0.0, 0.0};
};

Penetration disc_polygon_penetration(const Polygon& poly, Vec2 center, double radius);

}  // namespace pg::sim
