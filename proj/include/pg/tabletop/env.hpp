#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "pg/gradcore/rng.hpp"
#include "pg/shapes/shapes.hpp"
#include "pg/tabletop/contact.hpp"

namespace pg::sim {

using shapes::ObjectShape;

// All thresholds live here. Pushing proceeds toward -y; the table surface is
// the band y in [table_edge_y, table_back_y] and everything below the edge is
// air over the floor.
struct EnvConfig {
    double table_edge_y = 0.83;
    double good_zone_lo = 0.85;
    double good_zone_hi = 0.90;
    double danger_y = 0.84;
    double fallen_z = 0.70;
    double lifted_z = 0.83;
    double table_height = 0.78;
    double gripper_radius = 0.02;
    double action_scale = 0.01;        // meters per unit action
    double rotation_gain = 0.3;        // rad per meter of push depth
    double bevel_slip = 0.35;
    double spawn_x_lo = 0.30, spawn_x_hi = 0.70;
    double spawn_y_lo = 1.00, spawn_y_hi = 1.30;
    double overhang_min = 0.03;
    double grasp_margin = 0.01;
    double com_grasp_tolerance = 0.6;

    int push_steps = 144, transit_steps = 48, grasp_steps = 84, lift_steps = 44;

    double object_rest_z = 0.81;       // table height + half object height
    double lift_rise = 0.08;
    double table_back_y = 1.60;
    double table_x_lo = 0.0, table_x_hi = 1.0;
    double view_x_lo = 0.0, view_x_hi = 1.0;
    double view_y_lo = 0.5, view_y_hi = 1.5;
    double spawn_margin = 0.002;       // clearance kept inside table bounds at reset

    int total_steps() const { return push_steps + transit_steps + grasp_steps + lift_steps; }
    Vec2 grasp_start_xy() const { return {0.5, table_edge_y - 0.05}; }
};

enum class Stage { Push, Transit, Grasp, Lift };

const char* stage_name(Stage s);

struct StageClock {
    int t = 0;

    Stage stage(const EnvConfig& cfg) const {
        if (t < cfg.push_steps) return Stage::Push;
        if (t < cfg.push_steps + cfg.transit_steps) return Stage::Transit;
        if (t < cfg.push_steps + cfg.transit_steps + cfg.grasp_steps) return Stage::Grasp;
        return Stage::Lift;
    }
};

// x,y track the world center of mass; theta is the rotation about it.
struct ObjectState {
    double x = 0.0, y = 0.0, z = 0.0, theta = 0.0;
    bool fallen = false;
    bool lifted = false;
};

struct GripperState {
    double x = 0.0, y = 0.0, z = 0.0;
    double qw = 1.0, qx = 0.0, qy = 0.0, qz = 0.0;
    bool fingers_closed = false;

    std::array<double, 7> pose() const { return {x, y, z, qw, qx, qy, qz}; }
};

struct RewardBreakdown {
    double r_p = 0.0, r_g = 0.0, r_c = 0.0;
    double total = 0.0;
    bool danger_flag_consumed = false;
};

struct StepInfo {
    double o_x = 0.0, o_y = 0.0, o_z = 0.0;
    double overhang = 0.0;
    Stage stage = Stage::Push;
    bool zone_hit = false;
    bool danger_fired = false;
    bool fallen = false;
    bool lifted = false;
};

struct EnvState {
    ObjectState object;
    GripperState gripper;
    StageClock clock;
    bool danger_consumed = false;
    bool zone_awarded = false;
    int tip_phase = -1;        // -1 idle, otherwise index into the fall z ramp
    bool done = false;
    bool grasped = false;
    Vec2 transit_from{0.0, 0.0};
    double transit_from_z = 0.0;
};

struct OverhangInfo {
    double depth = 0.0;
    bool has_slice = false;
    double x_lo = 0.0, x_hi = 0.0;
};

using Action3 = std::array<double, 3>;  // [dpx, dpy, dgx], each in [-1, 1]

struct StepResult {
    RewardBreakdown reward;
    bool done = false;
    StepInfo info;
};

// World-frame footprint for an object whose COM sits at (obj.x, obj.y).
Polygon world_polygon(const ObjectShape& shape, const ObjectState& obj);

// Quasi-static push resolution: moves the gripper by `disp`, transfers
// (1-slip) of any penetration into object translation plus a torque-arm
// rotation, then projects the gripper out of the remaining overlap.
void apply_push(const EnvConfig& cfg, const ObjectShape& shape, Vec2 disp, ObjectState& obj,
                GripperState& grip);

OverhangInfo compute_overhang(const EnvConfig& cfg, const ObjectShape& shape,
                              const ObjectState& obj);

bool check_tip(const EnvConfig& cfg, const ObjectState& obj);

bool check_grasp(const EnvConfig& cfg, const ObjectShape& shape, const ObjectState& obj,
                 const GripperState& grip);

class TabletopEnv {
   public:
    TabletopEnv(EnvConfig cfg, const ObjectShape& shape, std::uint64_t seed);

    void reset(std::uint64_t seed);
    void reset(std::uint64_t seed, const ObjectShape& shape);
    StepResult step(const Action3& action);

    bool done() const { return state_.done; }
    const EnvState& state() const { return state_; }
    const ObjectShape& shape() const { return shape_; }
    const EnvConfig& config() const { return cfg_; }
    OverhangInfo overhang() const { return compute_overhang(cfg_, shape_, state_.object); }
    bool episode_success() const { return state_.object.lifted && state_.object.z > cfg_.lifted_z; }
    bool zone_awarded() const { return state_.zone_awarded; }
    bool fell() const { return state_.object.fallen; }

    // Checkpoint support: the environment is fully described by its state,
    // shape and RNG words.
    EnvState& mutable_state() { return state_; }
    grad::Rng& rng() { return rng_; }

   private:
    RewardBreakdown score_step(Stage stage, int t_of_step, bool fell_this_step);

    EnvConfig cfg_;
    ObjectShape shape_;
    EnvState state_;
    grad::Rng rng_;
};

}  // namespace pg::sim
