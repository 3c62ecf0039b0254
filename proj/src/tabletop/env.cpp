#include "pg/tabletop/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pg::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
}

// z ramp once the COM passes the edge; the last entry is below fallen_z
constexpr std::array<double, 4> kFallZ = {0.78, 0.74, 0.71, 0.66};

Vec2 com_local(const ObjectShape& shape) {
    return shapes::polygon_centroid(shape.vertices) + shape.com_offset;
}

}  // namespace

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Push: return "push";
        case Stage::Transit: return "transit";
        case Stage::Grasp: return "grasp";
        case Stage::Lift: return "lift";
    }
    return "?";
}

Polygon world_polygon(const ObjectShape& shape, const ObjectState& obj) {
    const Vec2 pivot = com_local(shape);
    Polygon out;
    out.reserve(shape.vertices.size());
    for (const auto& v : shape.vertices)
        out.push_back((v - pivot).rotated(obj.theta) + Vec2{obj.x, obj.y});
    return out;
}

void apply_push(const EnvConfig& cfg, const ObjectShape& shape, Vec2 disp, ObjectState& obj,
                GripperState& grip) {
    if (disp.norm() > cfg.action_scale * std::sqrt(2.0) + 1e-12)
        throw std::invalid_argument("apply_push: displacement exceeds the per-step bound");
    grip.x += disp.x;
    grip.y += disp.y;

    Polygon poly = world_polygon(shape, obj);
    const Penetration pen = disc_polygon_penetration(poly, {grip.x, grip.y}, cfg.gripper_radius);
    if (pen.contact) {
        const double slip = shape.beveled ? cfg.bevel_slip : 0.0;
        const Vec2 com{obj.x, obj.y};
        const Vec2 t = pen.normal * (pen.depth * (1.0 - slip));
        obj.x += t.x;
        obj.y += t.y;
        const Vec2 arm = pen.point - com;
        const double arm_len = std::max(arm.norm(), 1e-6);
        obj.theta = wrap_angle(obj.theta + cfg.rotation_gain * pen.depth * arm.cross(pen.normal) /
                                               arm_len);
    }

    // Resolve any remaining overlap by backing the gripper out.
    for (int iter = 0; iter < 8; ++iter) {
        poly = world_polygon(shape, obj);
        const Penetration p = disc_polygon_penetration(poly, {grip.x, grip.y},
                                                       cfg.gripper_radius);
        if (!p.contact || p.depth <= 1e-9) break;
        grip.x -= p.normal.x * p.depth;
        grip.y -= p.normal.y * p.depth;
    }
}

OverhangInfo compute_overhang(const EnvConfig& cfg, const ObjectShape& shape,
                              const ObjectState& obj) {
    OverhangInfo info;
    const Polygon poly = world_polygon(shape, obj);
    info.depth = std::max(0.0, cfg.table_edge_y - shapes::min_y(poly));
    const double slice_y = cfg.table_edge_y - cfg.overhang_min / 2.0;
    const auto intervals = shapes::slice_intervals(poly, slice_y);
    for (const auto& [lo, hi] : intervals) {
        if (!info.has_slice || hi - lo > info.x_hi - info.x_lo) {
            info.has_slice = true;
            info.x_lo = lo;
            info.x_hi = hi;
        }
    }
    return info;
}

bool check_tip(const EnvConfig& cfg, const ObjectState& obj) {
    return obj.y < cfg.table_edge_y;
}

bool check_grasp(const EnvConfig& cfg, const ObjectShape& shape, const ObjectState& obj,
                 const GripperState& grip) {
    const OverhangInfo ov = compute_overhang(cfg, shape, obj);
    if (ov.depth < cfg.overhang_min) return false;
    if (!ov.has_slice) return false;
    const double gx = grip.x;
    if (gx < ov.x_lo + cfg.grasp_margin || gx > ov.x_hi - cfg.grasp_margin) return false;
    const double half_width = (ov.x_hi - ov.x_lo) / 2.0;
    if (std::fabs(gx - obj.x) > cfg.com_grasp_tolerance * half_width) return false;
    return true;
}

TabletopEnv::TabletopEnv(EnvConfig cfg, const ObjectShape& shape, std::uint64_t seed)
    : cfg_(cfg), shape_(shape), rng_(seed) {
    reset(seed, shape);
}

void TabletopEnv::reset(std::uint64_t seed) { reset(seed, shape_); }

void TabletopEnv::reset(std::uint64_t seed, const ObjectShape& shape) {
    shape_ = shape;
    rng_.reseed(seed);
    state_ = EnvState{};

    const Vec2 pivot = com_local(shape_);
    double max_radius = 0.0;
    for (const auto& v : shape_.vertices)
        max_radius = std::max(max_radius, (v - pivot).norm());
    if (max_radius > 0.30)
        throw std::invalid_argument("reset: shape " + shape_.name +
                                    " is too large for the spawn region");

    ObjectState obj;
    obj.z = cfg_.object_rest_z;
    bool placed = false;
    for (int tries = 0; tries < 1000 && !placed; ++tries) {
        obj.x = rng_.uniform(cfg_.spawn_x_lo, cfg_.spawn_x_hi);
        obj.y = rng_.uniform(cfg_.spawn_y_lo, cfg_.spawn_y_hi);
        obj.theta = rng_.uniform(-kPi, kPi);
        const Polygon poly = world_polygon(shape_, obj);
        placed = true;
        for (const auto& v : poly) {
            if (v.y < cfg_.table_edge_y + cfg_.spawn_margin ||
                v.y > cfg_.table_back_y - cfg_.spawn_margin ||
                v.x < cfg_.table_x_lo + cfg_.spawn_margin ||
                v.x > cfg_.table_x_hi - cfg_.spawn_margin) {
                placed = false;
                break;
            }
        }
    }
    if (!placed)
        throw std::invalid_argument("reset: could not place shape " + shape_.name +
                                    " inside the table bounds");
    state_.object = obj;

    const Polygon poly = world_polygon(shape_, obj);
    GripperState grip;
    grip.x = obj.x;
    grip.y = shapes::max_y(poly) + 0.05;
    grip.z = cfg_.object_rest_z;
    state_.gripper = grip;
}

RewardBreakdown TabletopEnv::score_step(Stage stage, int t_of_step, bool fell_this_step) {
    RewardBreakdown rb;
    const ObjectState& obj = state_.object;
    if (stage == Stage::Push || stage == Stage::Grasp)
        rb.r_c = -2.5 * std::fabs(obj.x - state_.gripper.x);

    const bool on_table = state_.tip_phase < 0 && !obj.fallen && !obj.lifted;
    if (fell_this_step) {
        rb.r_p = -1.0;
    } else if (on_table && obj.y < cfg_.danger_y && !state_.danger_consumed) {
        rb.r_p = -1.0;
        state_.danger_consumed = true;
        rb.danger_flag_consumed = true;
    } else if (t_of_step == cfg_.push_steps - 1 && on_table && obj.y > cfg_.good_zone_lo &&
               obj.y < cfg_.good_zone_hi) {
        rb.r_p = 1.0;
        state_.zone_awarded = true;
    }

    const bool episode_end = state_.done;
    if (episode_end && obj.z > cfg_.lifted_z) rb.r_g = 5.0;

    rb.total = rb.r_p + rb.r_g + rb.r_c;
    return rb;
}

StepResult TabletopEnv::step(const Action3& action) {
    if (state_.done) throw std::logic_error("TabletopEnv::step called after the episode ended");

    const int t = state_.clock.t;
    const Stage stage = state_.clock.stage(cfg_);
    ObjectState& obj = state_.object;
    GripperState& grip = state_.gripper;

    const auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
    const bool tipping = state_.tip_phase >= 0;

    switch (stage) {
        case Stage::Push: {
            if (!tipping && !obj.fallen) {
                const Vec2 disp{clamp1(action[0]) * cfg_.action_scale,
                                clamp1(action[1]) * cfg_.action_scale};
                apply_push(cfg_, shape_, disp, obj, grip);
                if (state_.tip_phase < 0 && check_tip(cfg_, obj)) {
                    state_.tip_phase = 0;
                    obj.z = kFallZ[0];
                }
            }
            break;
        }
        case Stage::Transit: {
            const int into = t - cfg_.push_steps;
            if (into == 0) {
                state_.transit_from = {grip.x, grip.y};
                state_.transit_from_z = grip.z;
            }
            const double f = static_cast<double>(into + 1) / cfg_.transit_steps;
            const Vec2 target = cfg_.grasp_start_xy();
            grip.x = state_.transit_from.x + f * (target.x - state_.transit_from.x);
            grip.y = state_.transit_from.y + f * (target.y - state_.transit_from.y);
            grip.z = state_.transit_from_z + f * (cfg_.table_height - state_.transit_from_z);
            break;
        }
        case Stage::Grasp: {
            grip.x += clamp1(action[2]) * cfg_.action_scale;
            break;
        }
        case Stage::Lift: {
            const int into = t - cfg_.push_steps - cfg_.transit_steps - cfg_.grasp_steps;
            if (into == 0) {
                grip.fingers_closed = true;
                if (!tipping && !obj.fallen)
                    state_.grasped = check_grasp(cfg_, shape_, obj, grip);
                if (state_.grasped) obj.lifted = true;
            } else {
                const double rise = cfg_.lift_rise / (cfg_.lift_steps - 1);
                grip.z += rise;
                if (obj.lifted) obj.z += rise;
            }
            break;
        }
    }

    // Fall ramp advances every step once tipping has begun.
    bool fell_this_step = false;
    if (state_.tip_phase >= 0 && !obj.fallen) {
        if (tipping) {
            ++state_.tip_phase;
            obj.z = kFallZ[std::min<std::size_t>(state_.tip_phase, kFallZ.size() - 1)];
        }
        if (obj.z < cfg_.fallen_z) {
            obj.fallen = true;
            fell_this_step = true;
        }
    }

    state_.clock.t = t + 1;
    state_.done = obj.fallen || state_.clock.t >= cfg_.total_steps();

    StepResult res;
    res.reward = score_step(stage, t, fell_this_step);
    res.done = state_.done;
    res.info.o_x = obj.x;
    res.info.o_y = obj.y;
    res.info.o_z = obj.z;
    res.info.overhang = compute_overhang(cfg_, shape_, obj).depth;
    res.info.stage = stage;
    res.info.zone_hit = state_.zone_awarded;
    res.info.danger_fired = state_.danger_consumed;
    res.info.fallen = obj.fallen;
    res.info.lifted = obj.lifted;
    return res;
}

}  // namespace pg::sim
