#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pg/shapes/polygon.hpp"

namespace pg::shapes {

enum class Category {
    Triangle,
    Square,
    Parallelogram,
    Rectangle,
    Trapezoid,
    Circle,
    Oval,
    Hexagon,
    Pentagon,
    Notch,
    Irregular,
};

const char* category_name(Category c);
Category category_from_name(const std::string& name);

struct Color {
    double r = 0.8, g = 0.3, b = 0.3;
};

// Planar object footprint. Vertices live in the object frame with the area
// centroid at the origin; com_offset displaces the center of mass from the
// centroid (nonzero only for the non-uniform test objects).
struct ObjectShape {
    Category category = Category::Square;
    std::string name;
    Polygon vertices;
    double incircle_diameter = 0.0;  // meters
    double height = 0.06;            // meters
    bool beveled = false;
    double axial_stretch = 0.0;      // meters added along the major axis
    Vec2 com_offset{0.0, 0.0};
    Color color;
};

// Canonical polygon of the category scaled so its largest inscribed circle
// has the requested diameter. Diameter must lie in [0.165, 0.260].
ObjectShape make_shape(Category category, double incircle_diameter, std::uint64_t seed);

// Fig-style training pool: 10 categories x 8 evenly spaced diameters.
std::vector<ObjectShape> training_set(std::uint64_t seed = 2024);

// One object per category, random diameter, +50 mm axial stretch, beveled.
std::vector<ObjectShape> beveled_test_set(std::uint64_t seed);

// Eleven fixed letter-like / large beveled objects, most with the center of
// mass displaced from the centroid.
std::vector<ObjectShape> irregular_test_set();

struct PolygonProperties {
    double area = 0.0;
    Vec2 centroid;  // of the stored (already centered) polygon
    Incircle incircle;
};

// Exact shoelace area/centroid plus grid-search incircle. Throws on a
// degenerate polygon (area < 1e-6).
PolygonProperties polygon_properties(const ObjectShape& s);

// World-frame center of mass for an object-frame pose (frame origin at
// `frame_pos`, rotated by theta): R(theta) * (centroid + com_offset) + frame_pos.
Vec2 world_com(const ObjectShape& s, Vec2 frame_pos, double theta);

// Line-oriented text serialization.
std::string serialize_shape(const ObjectShape& s);
ObjectShape parse_shape(const std::string& text);
void save_shape(const ObjectShape& s, const std::string& path);
ObjectShape load_shape(const std::string& path);

}  // namespace pg::shapes
