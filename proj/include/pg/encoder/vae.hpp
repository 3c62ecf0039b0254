#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pg/gradcore/adam.hpp"
#include "pg/gradcore/params.hpp"
#include "pg/gradcore/tape.hpp"
#include "pg/image.hpp"

namespace pg::vae {

struct VaeConfig {
    int image_size = 64;   // power of two >= 32
    int channels = 3;      // 3 (RGB) or 1 (luma)
    int latent_dim = 128;
    std::array<int, 5> conv_channels{16, 32, 64, 128, 256};
    double logstd_min = -6.0, logstd_max = 3.0;

    void validate() const;
    int bottleneck_spatial() const { return image_size / 32; }
    int flat_dim() const {
        const int s = bottleneck_spatial();
        return conv_channels[4] * s * s;
    }
};

struct LatentStats {
    std::vector<double> mu;
    std::vector<double> log_std;  // clamped to [logstd_min, logstd_max]
};

struct TrainReport {
    std::vector<double> epoch_loss;
    double final_loss = 0.0;
};

// Convolutional VAE: five stride-2 encoder convolutions, a mirrored
// upsample-convolution decoder plus one stride-1 output convolution squashed
// to [0, 1].
class Vae {
   public:
    Vae(VaeConfig cfg, std::uint64_t seed);

    const VaeConfig& config() const { return cfg_; }
    grad::ParamSet& params() { return params_; }
    const grad::ParamSet& params() const { return params_; }

    LatentStats encode(const Image& im) const;
    Image decode(const std::vector<double>& z) const;

    // Differentiable loss over a minibatch: mean over images of
    // mse(recon, image) + beta * KL(q || N(0, I)). eps holds the
    // reparameterization noise, shape (N, latent_dim).
    int build_loss(grad::Tape& tape, const grad::Tensor& images, const grad::Tensor& eps,
                   double beta);

    // Adam training over a corpus; deterministic for a fixed seed.
    TrainReport train(const std::vector<Image>& corpus, int epochs, double learning_rate,
                      double beta, int batch_size, std::uint64_t seed);

    static grad::Tensor batch_tensor(const std::vector<Image>& images, const VaeConfig& cfg,
                                     const std::vector<int>& indices);

   private:
    VaeConfig cfg_;
    grad::ParamSet params_;
};

// Plain evaluation form of the training objective.
double vae_loss(const Image& image, const LatentStats& stats, const Image& reconstruction,
                double beta);

}  // namespace pg::vae
