#pragma once

#include <vector>

#include "pg/encoder/vae.hpp"
#include "pg/tabletop/env.hpp"
#include "pg/tabletop/render.hpp"

namespace pg::sim {

enum class ObsMode { Oracle, Latent };

// Oracle features: [o_x, o_y, o_z, sin theta, cos theta, overhang, slice x_lo,
// slice x_hi, slice_valid]. An empty slice reports (0, 0, 0).
constexpr int kOracleFeatures = 9;
constexpr int kGripperPoseDim = 7;

int observation_dim(ObsMode mode, const vae::VaeConfig* enc_cfg);

std::vector<double> oracle_features(const EnvConfig& cfg, const ObjectShape& shape,
                                    const EnvState& state);

// Policy state: encoder mean (latent mode) or geometric features (oracle
// mode), concatenated with the 7 gripper pose components.
std::vector<double> observe(const EnvConfig& cfg, const ObjectShape& shape, const EnvState& state,
                            ObsMode mode, const vae::Vae* encoder);

}  // namespace pg::sim
