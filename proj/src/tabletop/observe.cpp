#include "pg/tabletop/observe.hpp"

#include <cmath>
#include <stdexcept>

namespace pg::sim {

int observation_dim(ObsMode mode, const vae::VaeConfig* enc_cfg) {
    if (mode == ObsMode::Oracle) return kOracleFeatures + kGripperPoseDim;
    if (!enc_cfg) throw std::invalid_argument("observation_dim: latent mode needs an encoder");
    return enc_cfg->latent_dim + kGripperPoseDim;
}

std::vector<double> oracle_features(const EnvConfig& cfg, const ObjectShape& shape,
                                    const EnvState& state) {
    const OverhangInfo ov = compute_overhang(cfg, shape, state.object);
    return {
        state.object.x,
        state.object.y,
        state.object.z,
        std::sin(state.object.theta),
        std::cos(state.object.theta),
        ov.depth,
        ov.has_slice ? ov.x_lo : 0.0,
        ov.has_slice ? ov.x_hi : 0.0,
        ov.has_slice ? 1.0 : 0.0,
    };
}

std::vector<double> observe(const EnvConfig& cfg, const ObjectShape& shape, const EnvState& state,
                            ObsMode mode, const vae::Vae* encoder) {
    std::vector<double> out;
    if (mode == ObsMode::Oracle) {
        out = oracle_features(cfg, shape, state);
    } else {
        if (!encoder) throw std::invalid_argument("observe: latent mode needs an encoder");
        const Image im = render(cfg, shape, state, encoder->config().image_size,
                                encoder->config().channels);
        out = encoder->encode(im).mu;
    }
    const auto pose = state.gripper.pose();
    out.insert(out.end(), pose.begin(), pose.end());
    return out;
}

}  // namespace pg::sim
