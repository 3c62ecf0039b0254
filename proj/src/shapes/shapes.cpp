#include "pg/shapes/shapes.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pg/gradcore/rng.hpp"

namespace pg::shapes {

namespace {

constexpr double kPi = 3.14159265358979323846;

Polygon regular_polygon(int sides, double apothem, double angle0) {
    const double rc = apothem / std::cos(kPi / sides);
    Polygon p;
    p.reserve(sides);
    for (int k = 0; k < sides; ++k) {
        const double a = angle0 + 2.0 * kPi * k / sides;
        p.push_back({rc * std::cos(a), rc * std::sin(a)});
    }
    return p;
}

void center_at_centroid(Polygon& p) {
    const Vec2 c = polygon_centroid(p);
    for (auto& v : p) v = v - c;
}

// Canonical footprints have a largest inscribed circle of diameter 1 (the
// oval's 32-gon approximation is within a fraction of a percent) and their
// major axis along x.
Polygon canonical_polygon(Category cat) {
    switch (cat) {
        case Category::Triangle: {
            // equilateral, inradius 1/2, circumradius 1
            Polygon p;
            for (int k = 0; k < 3; ++k) {
                const double a = kPi / 2.0 + 2.0 * kPi * k / 3.0;
                p.push_back({std::cos(a), std::sin(a)});
            }
            return p;
        }
        case Category::Square:
            return {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
        case Category::Parallelogram: {
            const double side = 1.0 / std::sin(kPi / 3.0);
            const double base = 1.5 * side;
            const double ox = side * std::cos(kPi / 3.0);
            Polygon p{{0, 0}, {base, 0}, {base + ox, 1.0}, {ox, 1.0}};
            center_at_centroid(p);
            return p;
        }
        case Category::Rectangle:
            return {{-0.8, -0.5}, {0.8, -0.5}, {0.8, 0.5}, {-0.8, 0.5}};
        case Category::Trapezoid: {
            // tangential isosceles trapezoid: top = bottom/2, height 1
            const double b = std::sqrt(2.0), a = b / 2.0;
            Polygon p{{-b / 2, 0}, {b / 2, 0}, {a / 2, 1.0}, {-a / 2, 1.0}};
            center_at_centroid(p);
            return p;
        }
        case Category::Circle:
            return regular_polygon(32, 0.5, 0.0);
        case Category::Oval: {
            // 2:1 ellipse; minor axis inflated so the polygon's inscribed
            // circle stays at diameter ~1
            const double b = 0.5 / std::cos(kPi / 32.0);
            Polygon p;
            for (int k = 0; k < 32; ++k) {
                const double t = 2.0 * kPi * k / 32.0;
                p.push_back({std::cos(t), b * std::sin(t)});
            }
            return p;
        }
        case Category::Hexagon:
            return regular_polygon(6, 0.5, 0.0);
        case Category::Pentagon:
            return regular_polygon(5, 0.5, kPi / 2.0);
        case Category::Notch: {
            // 1.6 x 1 bar with a quarter-depth bite on one short side
            Polygon p{{0, 0},          {1.6, 0},    {1.6, 0.375}, {1.35, 0.375},
                      {1.35, 0.625},   {1.6, 0.625}, {1.6, 1.0},  {0, 1.0}};
            center_at_centroid(p);
            return p;
        }
        case Category::Irregular:
            throw std::invalid_argument("make_shape: 'irregular' has no canonical polygon");
    }
    throw std::invalid_argument("make_shape: unknown category");
}

Color random_color(pg::grad::Rng& rng) {
    return {rng.uniform(0.2, 0.95), rng.uniform(0.2, 0.95), rng.uniform(0.2, 0.95)};
}

void validate(const ObjectShape& s) {
    if (!polygon_is_simple(s.vertices))
        throw std::invalid_argument("shape " + s.name + ": polygon is self-intersecting");
    if (!polygon_is_ccw(s.vertices))
        throw std::invalid_argument("shape " + s.name + ": polygon is not counterclockwise");
}

ObjectShape irregular(const std::string& name, Polygon poly, Vec2 com_offset, bool beveled,
                      Color color) {
    center_at_centroid(poly);
    ObjectShape s;
    s.category = Category::Irregular;
    s.name = name;
    s.vertices = std::move(poly);
    s.com_offset = com_offset;
    s.beveled = beveled;
    s.color = color;
    s.incircle_diameter = 2.0 * largest_inscribed_circle(s.vertices).radius;
    validate(s);
    return s;
}

}  // namespace

const char* category_name(Category c) {
    switch (c) {
        case Category::Triangle: return "triangle";
        case Category::Square: return "square";
        case Category::Parallelogram: return "parallelogram";
        case Category::Rectangle: return "rectangle";
        case Category::Trapezoid: return "trapezoid";
        case Category::Circle: return "circle";
        case Category::Oval: return "oval";
        case Category::Hexagon: return "hexagon";
        case Category::Pentagon: return "pentagon";
        case Category::Notch: return "notch";
        case Category::Irregular: return "irregular";
    }
    return "?";
}

Category category_from_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Category::Irregular); ++i) {
        const auto c = static_cast<Category>(i);
        if (name == category_name(c)) return c;
    }
    throw std::invalid_argument("unknown shape category: " + name);
}

ObjectShape make_shape(Category category, double incircle_diameter, std::uint64_t seed) {
    if (category == Category::Irregular)
        throw std::invalid_argument("make_shape: use irregular_test_set() for irregular objects");
    if (incircle_diameter < 0.165 || incircle_diameter > 0.260)
        throw std::invalid_argument("make_shape: diameter " + std::to_string(incircle_diameter) +
                                    " outside [0.165, 0.260]");
    ObjectShape s;
    s.category = category;
    s.name = std::string(category_name(category)) + "_d" +
             std::to_string(static_cast<int>(std::lround(incircle_diameter * 1000.0)));
    s.vertices = canonical_polygon(category);
    for (auto& v : s.vertices) v = v * incircle_diameter;
    s.incircle_diameter = incircle_diameter;
    pg::grad::Rng rng(pg::grad::mix_seed(seed, static_cast<std::uint64_t>(category)));
    s.color = random_color(rng);
    validate(s);
    return s;
}

std::vector<ObjectShape> training_set(std::uint64_t seed) {
    std::vector<ObjectShape> out;
    out.reserve(80);
    for (int c = 0; c < 10; ++c) {
        for (int k = 0; k < 8; ++k) {
            const double d = 0.165 + (0.260 - 0.165) * k / 7.0;
            out.push_back(make_shape(static_cast<Category>(c), d,
                                     pg::grad::mix_seed(seed, c, k)));
        }
    }
    return out;
}

std::vector<ObjectShape> beveled_test_set(std::uint64_t seed) {
    std::vector<ObjectShape> out;
    out.reserve(10);
    pg::grad::Rng rng(pg::grad::mix_seed(seed, 0xbe5e1ed));
    for (int c = 0; c < 10; ++c) {
        const double d = rng.uniform(0.165, 0.260);
        ObjectShape s = make_shape(static_cast<Category>(c), d, pg::grad::mix_seed(seed, 77, c));
        // stretch so the bounding box grows by exactly 50 mm along x
        double xmin = s.vertices[0].x, xmax = s.vertices[0].x;
        for (const auto& v : s.vertices) {
            xmin = std::min(xmin, v.x);
            xmax = std::max(xmax, v.x);
        }
        const double f = (xmax - xmin + 0.05) / (xmax - xmin);
        for (auto& v : s.vertices) v.x *= f;
        center_at_centroid(s.vertices);
        s.axial_stretch = 0.05;
        s.beveled = true;
        s.name += "_bev";
        validate(s);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ObjectShape> irregular_test_set() {
    std::vector<ObjectShape> out;
    out.reserve(11);
    out.push_back(irregular("irr01_L",
                            {{0, 0}, {0.30, 0}, {0.30, 0.11}, {0.11, 0.11}, {0.11, 0.30}, {0, 0.30}},
                            {0.030, -0.022}, false, {0.85, 0.35, 0.25}));
    out.push_back(irregular("irr02_T",
                            {{0.10, 0}, {0.20, 0}, {0.20, 0.19}, {0.30, 0.19}, {0.30, 0.30},
                             {0, 0.30}, {0, 0.19}, {0.10, 0.19}},
                            {0.0, 0.035}, false, {0.30, 0.70, 0.35}));
    out.push_back(irregular("irr03_U",
                            {{0, 0}, {0.28, 0}, {0.28, 0.27}, {0.19, 0.27}, {0.19, 0.09},
                             {0.09, 0.09}, {0.09, 0.27}, {0, 0.27}},
                            {-0.020, -0.040}, false, {0.35, 0.45, 0.85}));
    out.push_back(irregular("irr04_J",
                            {{0, 0}, {0.26, 0}, {0.26, 0.30}, {0.16, 0.30}, {0.16, 0.10}, {0, 0.10}},
                            {0.035, 0.020}, false, {0.80, 0.70, 0.25}));
    out.push_back(irregular("irr05_wedge", {{0, 0}, {0.34, 0}, {0, 0.26}}, {-0.028, -0.020},
                            false, {0.65, 0.30, 0.75}));
    out.push_back(irregular("irr06_C",
                            {{0, 0}, {0.27, 0}, {0.27, 0.09}, {0.10, 0.09}, {0.10, 0.19},
                             {0.27, 0.19}, {0.27, 0.28}, {0, 0.28}},
                            {-0.030, 0.0}, false, {0.30, 0.75, 0.75}));
    out.push_back(irregular("irr07_E",
                            {{0, 0}, {0.26, 0}, {0.26, 0.08}, {0.10, 0.08}, {0.10, 0.125},
                             {0.22, 0.125}, {0.22, 0.185}, {0.10, 0.185}, {0.10, 0.23},
                             {0.26, 0.23}, {0.26, 0.31}, {0, 0.31}},
                            {-0.025, 0.015}, false, {0.85, 0.45, 0.60}));
    out.push_back(irregular("irr08_H",
                            {{0, 0}, {0.09, 0}, {0.09, 0.10}, {0.19, 0.10}, {0.19, 0},
                             {0.28, 0}, {0.28, 0.28}, {0.19, 0.28}, {0.19, 0.18}, {0.09, 0.18},
                             {0.09, 0.28}, {0, 0.28}},
                            {0.020, -0.030}, false, {0.55, 0.55, 0.30}));
    out.push_back(irregular("irr09_Z",
                            {{0, 0}, {0.28, 0}, {0.28, 0.08}, {0.115, 0.08}, {0.28, 0.215},
                             {0.28, 0.30}, {0, 0.30}, {0, 0.22}, {0.165, 0.22}, {0, 0.085}},
                            {0.0, 0.0}, false, {0.40, 0.60, 0.85}));
    out.push_back(irregular("irr10_bevel_bar",
                            {{-0.18, -0.09}, {0.18, -0.09}, {0.18, 0.09}, {-0.18, 0.09}},
                            {0.040, 0.0}, true, {0.75, 0.55, 0.35}));
    {
        Polygon disc = regular_polygon(32, 0.15, 0.0);
        out.push_back(irregular("irr11_bevel_disc", std::move(disc), {0.0, 0.0}, true,
                                {0.45, 0.80, 0.45}));
    }
    return out;
}

PolygonProperties polygon_properties(const ObjectShape& s) {
    PolygonProperties p;
    p.area = polygon_area(s.vertices);
    if (p.area < 1e-6)
        throw std::invalid_argument("polygon_properties: degenerate polygon in " + s.name);
    p.centroid = polygon_centroid(s.vertices);
    p.incircle = largest_inscribed_circle(s.vertices);
    return p;
}

Vec2 world_com(const ObjectShape& s, Vec2 frame_pos, double theta) {
    const Vec2 local = polygon_centroid(s.vertices) + s.com_offset;
    return local.rotated(theta) + frame_pos;
}

std::string serialize_shape(const ObjectShape& s) {
    std::ostringstream os;
    char buf[256];
    os << "# pushgrasp shape v1\n";
    os << "name " << s.name << "\n";
    os << "category " << category_name(s.category) << "\n";
    std::snprintf(buf, sizeof(buf), "incircle_diameter %.17g\n", s.incircle_diameter);
    os << buf;
    std::snprintf(buf, sizeof(buf), "height %.17g\n", s.height);
    os << buf;
    os << "beveled " << (s.beveled ? 1 : 0) << "\n";
    std::snprintf(buf, sizeof(buf), "axial_stretch %.17g\n", s.axial_stretch);
    os << buf;
    std::snprintf(buf, sizeof(buf), "com_offset %.17g %.17g\n", s.com_offset.x, s.com_offset.y);
    os << buf;
    std::snprintf(buf, sizeof(buf), "color %.17g %.17g %.17g\n", s.color.r, s.color.g, s.color.b);
    os << buf;
    os << "vertices " << s.vertices.size() << "\n";
    for (const auto& v : s.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x, v.y);
        os << buf;
    }
    return os.str();
}

ObjectShape parse_shape(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    ObjectShape s;
    std::size_t expected_vertices = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "name") {
            ls >> s.name;
        } else if (key == "category") {
            std::string v;
            ls >> v;
            s.category = category_from_name(v);
        } else if (key == "incircle_diameter") {
            ls >> s.incircle_diameter;
        } else if (key == "height") {
            ls >> s.height;
        } else if (key == "beveled") {
            int v;
            ls >> v;
            s.beveled = v != 0;
        } else if (key == "axial_stretch") {
            ls >> s.axial_stretch;
        } else if (key == "com_offset") {
            ls >> s.com_offset.x >> s.com_offset.y;
        } else if (key == "color") {
            ls >> s.color.r >> s.color.g >> s.color.b;
        } else if (key == "vertices") {
            ls >> expected_vertices;
            s.vertices.clear();
            while (s.vertices.size() < expected_vertices && std::getline(is, line)) {
                std::istringstream vs(line);
                Vec2 v;
                if (!(vs >> v.x >> v.y))
                    throw std::invalid_argument("parse_shape: bad vertex line: " + line);
                s.vertices.push_back(v);
            }
        } else {
            throw std::invalid_argument("parse_shape: unknown key: " + key);
        }
        if (ls.fail()) throw std::invalid_argument("parse_shape: bad line: " + line);
    }
    if (s.vertices.size() != expected_vertices || s.vertices.size() < 3)
        throw std::invalid_argument("parse_shape: vertex count mismatch");
    return s;
}

void save_shape(const ObjectShape& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_shape: cannot open " + path);
    f << serialize_shape(s);
}

ObjectShape load_shape(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_shape: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_shape(ss.str());
}

}  // namespace pg::shapes
