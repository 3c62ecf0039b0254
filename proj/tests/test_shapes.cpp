#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pg/gradcore/rng.hpp"
#include "pg/shapes/shapes.hpp"

using namespace pg::shapes;

TEST_CASE("square incircle equals its side") {
    const ObjectShape s = make_shape(Category::Square, 0.2, 1);
    double xmin = 1e9, xmax = -1e9;
    for (const auto& v : s.vertices) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
    }
    CHECK(xmax - xmin == doctest::Approx(0.2));
    CHECK(s.vertices.size() == 4);
}

TEST_CASE("circle is a 32-gon with apothem half the diameter") {
    const ObjectShape s = make_shape(Category::Circle, 0.2, 1);
    REQUIRE(s.vertices.size() == 32);
    // apothem = distance from center to an edge midpoint
    const Vec2 mid = (s.vertices[0] + s.vertices[1]) * 0.5;
    CHECK(mid.norm() == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("every category at the smallest size passes the incircle oracle") {
    for (int c = 0; c < 10; ++c) {
        const ObjectShape s = make_shape(static_cast<Category>(c), 0.165, 3);
        const double oracle_d = oracle::raster_incircle_diameter(s.vertices, 1e-3);
        CHECK_MESSAGE(std::fabs(oracle_d - s.incircle_diameter) / s.incircle_diameter < 0.02,
                      s.name, " oracle=", oracle_d);
    }
}

TEST_CASE("centroid keeps clearance from the boundary on all training shapes") {
    // Pushing through the centroid must leave enough support for an
    // overhang before tipping; see the simulator solvability tests.
    for (const auto& s : training_set()) {
        const double clearance = distance_to_boundary(s.vertices, polygon_centroid(s.vertices));
        CHECK_MESSAGE(clearance >= 0.40 * s.incircle_diameter, s.name,
                      " clearance=", clearance);
    }
}

TEST_CASE("training set layout") {
    const auto set = training_set();
    CHECK(set.size() == 80);
    std::set<std::string> cats;
    int per_cat = 0;
    for (const auto& s : set) {
        cats.insert(category_name(s.category));
        if (s.category == Category::Hexagon) ++per_cat;
        CHECK(s.height == doctest::Approx(0.06));
        CHECK(s.incircle_diameter >= 0.165);
        CHECK(s.incircle_diameter <= 0.260);
        CHECK(polygon_is_simple(s.vertices));
        CHECK(polygon_is_ccw(s.vertices));
    }
    CHECK(cats.size() == 10);
    CHECK(per_cat == 8);

    // deterministic given the seed
    const auto again = training_set();
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(set[i].name == again[i].name);
        CHECK(set[i].color.r == again[i].color.r);
        CHECK(set[i].vertices[0].x == again[i].vertices[0].x);
    }
}

TEST_CASE("beveled test set") {
    const auto set = beveled_test_set(5);
    CHECK(set.size() == 10);
    std::set<std::string> cats;
    for (const auto& s : set) {
        CHECK(s.beveled);
        CHECK(s.axial_stretch == doctest::Approx(0.05));
        cats.insert(s.name);
    }
    CHECK(cats.size() == 10);

    // stretched square: bounding-box long side minus short side is the stretch
    for (const auto& s : set) {
        if (s.category != Category::Square) continue;
        double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
        for (const auto& v : s.vertices) {
            xmin = std::min(xmin, v.x);
            xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y);
            ymax = std::max(ymax, v.y);
        }
        CHECK((xmax - xmin) - (ymax - ymin) == doctest::Approx(0.05).epsilon(1e-9));
    }
}

TEST_CASE("irregular test set") {
    const auto set = irregular_test_set();
    CHECK(set.size() == 11);
    int offset_count = 0;
    for (const auto& s : set) {
        CHECK(polygon_is_simple(s.vertices));
        CHECK(polygon_is_ccw(s.vertices));
        CHECK(s.height == doctest::Approx(0.06));
        const double off = s.com_offset.norm();
        if (off > 0.0) {
            ++offset_count;
            CHECK(off >= 0.02);
            CHECK(off <= 0.05);
        }
        // the displaced center of mass stays inside the footprint
        const Vec2 com = polygon_centroid(s.vertices) + s.com_offset;
        CHECK_MESSAGE(point_in_polygon(s.vertices, com), s.name);

        // triangulated centroid against the 1 mm rasterization centroid
        const Vec2 c = polygon_centroid(s.vertices);
        const auto st = oracle::rasterize(s.vertices, 1e-3);
        CHECK_MESSAGE(std::fabs(c.x - st.cx) < 2e-3, s.name, " cx=", c.x, " raster=", st.cx);
        CHECK_MESSAGE(std::fabs(c.y - st.cy) < 2e-3, s.name, " cy=", c.y, " raster=", st.cy);
    }
    CHECK(offset_count >= 7);
}

TEST_CASE("polygon properties on textbook shapes") {
    ObjectShape unit_square;
    unit_square.name = "unit_square";
    unit_square.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto p = polygon_properties(unit_square);
    CHECK(p.area == doctest::Approx(1.0));
    CHECK(p.centroid.x == doctest::Approx(0.5));
    CHECK(p.centroid.y == doctest::Approx(0.5));

    ObjectShape tri;
    tri.name = "tri";
    tri.vertices = {{0, 0}, {1, 0}, {0, 1}};
    const auto pt = polygon_properties(tri);
    CHECK(pt.area == doctest::Approx(0.5));
    CHECK(pt.centroid.x == doctest::Approx(1.0 / 3.0));
    CHECK(pt.centroid.y == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("random decagon area matches the 0.5 mm rasterization") {
    pg::grad::Rng rng(17);
    for (int rep = 0; rep < 3; ++rep) {
        Polygon p;
        for (int k = 0; k < 10; ++k) {
            const double a = 2.0 * 3.14159265358979 * k / 10.0;
            const double r = rng.uniform(0.08, 0.16);
            p.push_back({r * std::cos(a), r * std::sin(a)});
        }
        const double shoelace = polygon_area(p);
        const auto st = oracle::rasterize(p, 0.5e-3);
        CHECK(std::fabs(shoelace - st.area) / shoelace < 0.005);
    }
}

TEST_CASE("scaling invariance across diameters") {
    for (int c = 0; c < 10; ++c) {
        const auto s1 = make_shape(static_cast<Category>(c), 0.18, 9);
        const auto s2 = make_shape(static_cast<Category>(c), 0.24, 9);
        const double f = 0.24 / 0.18;
        for (std::size_t i = 0; i < s1.vertices.size(); ++i) {
            CHECK(s2.vertices[i].x == doctest::Approx(f * s1.vertices[i].x).epsilon(1e-9));
            CHECK(s2.vertices[i].y == doctest::Approx(f * s1.vertices[i].y).epsilon(1e-9));
        }
    }
}

TEST_CASE("rejects bad construction requests") {
    CHECK_THROWS_AS((void)make_shape(Category::Square, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)make_shape(Category::Square, 0.3, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)make_shape(Category::Irregular, 0.2, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)category_from_name("blob"), std::invalid_argument);
    ObjectShape degenerate;
    degenerate.vertices = {{0, 0}, {1e-4, 0}, {0, 1e-4}};
    CHECK_THROWS_AS((void)polygon_properties(degenerate), std::invalid_argument);
}

TEST_CASE("shape serialization round-trips losslessly") {
    const auto set = irregular_test_set();
    for (const auto& s : set) {
        const ObjectShape r = parse_shape(serialize_shape(s));
        CHECK(r.name == s.name);
        CHECK(r.category == s.category);
        CHECK(r.incircle_diameter == s.incircle_diameter);
        CHECK(r.beveled == s.beveled);
        CHECK(r.com_offset.x == s.com_offset.x);
        CHECK(r.com_offset.y == s.com_offset.y);
        REQUIRE(r.vertices.size() == s.vertices.size());
        for (std::size_t i = 0; i < s.vertices.size(); ++i) {
            CHECK(r.vertices[i].x == s.vertices[i].x);
            CHECK(r.vertices[i].y == s.vertices[i].y);
        }
    }
    CHECK_THROWS_AS((void)parse_shape("wobble 3\n"), std::invalid_argument);
}

TEST_CASE("world com applies rotation to centroid plus offset") {
    ObjectShape s;
    s.vertices = {{-0.1, -0.1}, {0.1, -0.1}, {0.1, 0.1}, {-0.1, 0.1}};
    s.com_offset = {0.04, 0.0};
    // rotate 90 degrees: offset (0.04, 0) -> (0, 0.04)
    const Vec2 com = world_com(s, {0.5, 0.9}, 3.14159265358979 / 2.0);
    CHECK(com.x == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(com.y == doctest::Approx(0.94).epsilon(1e-9));
}
