#include "pg/shapes/polygon.hpp"

#include <algorithm>
#include <stdexcept>

namespace pg::shapes {

double polygon_area(const Polygon& p) {
    double acc = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    return 0.5 * acc;
}

Vec2 polygon_centroid(const Polygon& p) {
    double ax = 0.0, ay = 0.0, area = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % n];
        const double w = a.x * b.y - b.x * a.y;
        area += w;
        ax += (a.x + b.x) * w;
        ay += (a.y + b.y) * w;
    }
    area *= 0.5;
    if (std::fabs(area) < 1e-12) throw std::invalid_argument("polygon_centroid: degenerate polygon");
    return {ax / (6.0 * area), ay / (6.0 * area)};
}

bool polygon_is_ccw(const Polygon& p) { return polygon_area(p) > 0.0; }

namespace {

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const auto orient = [](Vec2 p0, Vec2 p1, Vec2 p2) {
        const double v = (p1 - p0).cross(p2 - p0);
        if (v > 1e-12) return 1;
        if (v < -1e-12) return -1;
        return 0;
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    const auto on_segment = [](Vec2 p0, Vec2 p1, Vec2 q) {
        return std::min(p0.x, p1.x) - 1e-12 <= q.x && q.x <= std::max(p0.x, p1.x) + 1e-12 &&
               std::min(p0.y, p1.y) - 1e-12 <= q.y && q.y <= std::max(p0.y, p1.y) + 1e-12;
    };
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

bool polygon_is_simple(const Polygon& p) {
    const std::size_t n = p.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (they share an endpoint)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool point_in_polygon(const Polygon& p, Vec2 q) {
    bool inside = false;
    const std::size_t n = p.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = p[i];
        const Vec2& b = p[j];
        if ((a.y > q.y) != (b.y > q.y)) {
            const double xint = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (q.x < xint) inside = !inside;
        }
    }
    return inside;
}

namespace {

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 q) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 < 1e-18) return a;
    double t = (q - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return a + ab * t;
}

}  // namespace

Vec2 closest_boundary_point(const Polygon& p, Vec2 q) {
    const std::size_t n = p.size();
    Vec2 best = p[0];
    double best_d2 = (q - best).dot(q - best);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 c = closest_point_on_segment(p[i], p[(i + 1) % n], q);
        const double d2 = (q - c).dot(q - c);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

double distance_to_boundary(const Polygon& p, Vec2 q) {
    return (q - closest_boundary_point(p, q)).norm();
}

double min_y(const Polygon& p) {
    double m = p[0].y;
    for (const auto& v : p) m = std::min(m, v.y);
    return m;
}

double max_y(const Polygon& p) {
    double m = p[0].y;
    for (const auto& v : p) m = std::max(m, v.y);
    return m;
}

std::vector<std::pair<double, double>> slice_intervals(const Polygon& p, double y) {
    std::vector<double> xs;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % n];
        // half-open rule keeps the crossing count even at vertices
        if ((a.y <= y && b.y > y) || (b.y <= y && a.y > y)) {
            const double t = (y - a.y) / (b.y - a.y);
            xs.push_back(a.x + t * (b.x - a.x));
        }
    }
    std::sort(xs.begin(), xs.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) out.emplace_back(xs[i], xs[i + 1]);
    return out;
}

Incircle largest_inscribed_circle(const Polygon& p, int coarse, int refine_rounds) {
    double xmin = p[0].x, xmax = p[0].x, ymin = p[0].y, ymax = p[0].y;
    for (const auto& v : p) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    Incircle best;
    auto consider = [&](Vec2 c) {
        if (!point_in_polygon(p, c)) return;
        const double r = distance_to_boundary(p, c);
        if (r > best.radius) {
            best.radius = r;
            best.center = c;
        }
    };
    const double dx = (xmax - xmin) / coarse;
    const double dy = (ymax - ymin) / coarse;
    for (int i = 0; i <= coarse; ++i)
        for (int j = 0; j <= coarse; ++j)
            consider({xmin + dx * i, ymin + dy * j});
    double step = std::max(dx, dy);
    for (int round = 0; round < refine_rounds; ++round) {
        const Vec2 c0 = best.center;
        const double s = step / 4.0;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j)
                consider({c0.x + s * i, c0.y + s * j});
        step = s;
    }
    return best;
}

Polygon transformed(const Polygon& p, Vec2 translate, double theta) {
    Polygon out;
    out.reserve(p.size());
    for (const auto& v : p) out.push_back(v.rotated(theta) + translate);
    return out;
}

}  // namespace pg::shapes
