#pragma once

#include "pg/tabletop/env.hpp"

namespace pg::sim {

// Scripted full-state controller: pushes along the COM column until the
// overhang admits a grasp with margin, then tracks a feasible grasp x.
// Solves every uniform training shape; used as the environment-solvability
// reference and as a behavior floor in tests.
class OracleController {
   public:
    explicit OracleController(double margin = 0.006) : margin_(margin) {}

    Action3 act(const TabletopEnv& env) const;

    // True when the current pose already admits a grasp with margin.
    bool feasible(const TabletopEnv& env) const;

   private:
    double target_grasp_x(const TabletopEnv& env, bool* ok) const;

    double margin_;
};

}  // namespace pg::sim
