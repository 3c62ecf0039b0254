#pragma once

#include "pg/image.hpp"
#include "pg/tabletop/env.hpp"

namespace pg::sim {

// Orthographic top-down raster of the scene over the config's view window:
// floor, table band, object footprint in its own color, gripper disc on top.
// channels must be 1 (luma) or 3.
Image render(const EnvConfig& cfg, const ObjectShape& shape, const EnvState& state, int size,
             int channels);

}  // namespace pg::sim
