#include "pg/tabletop/render.hpp"

#include <stdexcept>

namespace pg::sim {

namespace {

struct Rgb {
    double r, g, b;
};

constexpr Rgb kFloor{0.12, 0.12, 0.14};
constexpr Rgb kTable{0.58, 0.47, 0.34};
constexpr Rgb kGripper{0.96, 0.96, 0.98};

double luma(Rgb c) { return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b; }

}  // namespace

Image render(const EnvConfig& cfg, const ObjectShape& shape, const EnvState& state, int size,
             int channels) {
    if (channels != 1 && channels != 3)
        throw std::invalid_argument("render: channels must be 1 or 3");
    Image im = Image::zeros(size, size, channels);

    const Polygon poly = world_polygon(shape, state.object);
    const Rgb obj_color{shape.color.r, shape.color.g, shape.color.b};
    const Vec2 grip{state.gripper.x, state.gripper.y};
    const double r2 = cfg.gripper_radius * cfg.gripper_radius;

    const double sx = (cfg.view_x_hi - cfg.view_x_lo) / size;
    const double sy = (cfg.view_y_hi - cfg.view_y_lo) / size;
    for (int row = 0; row < size; ++row) {
        // row 0 is the far side of the table (large y)
        const double y = cfg.view_y_hi - (row + 0.5) * sy;
        for (int col = 0; col < size; ++col) {
            const double x = cfg.view_x_lo + (col + 0.5) * sx;
            Rgb c = y >= cfg.table_edge_y ? kTable : kFloor;
            if (shapes::point_in_polygon(poly, {x, y})) c = obj_color;
            const Vec2 d = Vec2{x, y} - grip;
            if (d.dot(d) <= r2) c = kGripper;
            if (channels == 3) {
                im.at(row, col, 0) = c.r;
                im.at(row, col, 1) = c.g;
                im.at(row, col, 2) = c.b;
            } else {
                im.at(row, col, 0) = luma(c);
            }
        }
    }
    return im;
}

}  // namespace pg::sim
