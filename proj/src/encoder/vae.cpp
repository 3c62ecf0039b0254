#include "pg/encoder/vae.hpp"

#include <cmath>
#include <stdexcept>

#include "pg/gradcore/kernels.hpp"
#include "pg/gradcore/rng.hpp"

namespace pg::vae {

using grad::Tape;
using grad::Tensor;

void VaeConfig::validate() const {
    if (image_size < 32 || (image_size & (image_size - 1)) != 0)
        throw std::invalid_argument("VaeConfig: image_size must be a power of two >= 32");
    if (channels != 1 && channels != 3)
        throw std::invalid_argument("VaeConfig: channels must be 1 or 3");
    if (latent_dim <= 0) throw std::invalid_argument("VaeConfig: latent_dim must be positive");
    for (int c : conv_channels)
        if (c <= 0) throw std::invalid_argument("VaeConfig: conv channels must be positive");
}

namespace {

// decoder channel plan mirrors the encoder and finishes with a stride-1
// output convolution
std::array<int, 5> decoder_channels(const VaeConfig& cfg) {
    return {cfg.conv_channels[3], cfg.conv_channels[2], cfg.conv_channels[1],
            cfg.conv_channels[0], cfg.conv_channels[0]};
}

}  // namespace

Vae::Vae(VaeConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    grad::Rng rng(grad::mix_seed(seed, 0x7ae));
    int cin = cfg_.channels;
    for (int i = 0; i < 5; ++i) {
        const int cout = cfg_.conv_channels[i];
        Tensor w = Tensor::zeros({cout, cin, 3, 3});
        grad::fanin_uniform_init(w, rng, cin * 9);
        params_.add("enc.conv" + std::to_string(i) + ".w", std::move(w));
        params_.add("enc.conv" + std::to_string(i) + ".b", Tensor::zeros({cout}));
        cin = cout;
    }
    const int flat = cfg_.flat_dim();
    {
        Tensor w = Tensor::zeros({flat, cfg_.latent_dim});
        grad::orthogonal_init(w, rng, 1.0);
        params_.add("enc.mu.w", std::move(w));
        params_.add("enc.mu.b", Tensor::zeros({cfg_.latent_dim}));
    }
    {
        Tensor w = Tensor::zeros({flat, cfg_.latent_dim});
        grad::orthogonal_init(w, rng, 1.0);
        params_.add("enc.logstd.w", std::move(w));
        params_.add("enc.logstd.b", Tensor::zeros({cfg_.latent_dim}));
    }
    {
        Tensor w = Tensor::zeros({cfg_.latent_dim, flat});
        grad::orthogonal_init(w, rng, 1.0);
        params_.add("dec.fc.w", std::move(w));
        params_.add("dec.fc.b", Tensor::zeros({flat}));
    }
    const auto dch = decoder_channels(cfg_);
    cin = cfg_.conv_channels[4];
    for (int i = 0; i < 5; ++i) {
        const int cout = dch[i];
        Tensor w = Tensor::zeros({cout, cin, 3, 3});
        grad::fanin_uniform_init(w, rng, cin * 9);
        params_.add("dec.conv" + std::to_string(i) + ".w", std::move(w));
        params_.add("dec.conv" + std::to_string(i) + ".b", Tensor::zeros({cout}));
        cin = cout;
    }
    {
        Tensor w = Tensor::zeros({cfg_.channels, cin, 3, 3});
        grad::fanin_uniform_init(w, rng, cin * 9);
        params_.add("dec.out.w", std::move(w));
        params_.add("dec.out.b", Tensor::zeros({cfg_.channels}));
    }
}

Tensor Vae::batch_tensor(const std::vector<Image>& images, const VaeConfig& cfg,
                         const std::vector<int>& indices) {
    const int n = static_cast<int>(indices.size());
    const int hw = cfg.image_size;
    Tensor out = Tensor::zeros({n, cfg.channels, hw, hw});
    for (int b = 0; b < n; ++b) {
        const Image& im = images[static_cast<std::size_t>(indices[b])];
        if (im.h != hw || im.w != hw || im.c != cfg.channels)
            throw std::invalid_argument("batch_tensor: image size does not match the config");
        for (int ch = 0; ch < cfg.channels; ++ch)
            for (int r = 0; r < hw; ++r)
                for (int cidx = 0; cidx < hw; ++cidx)
                    out.data[(((static_cast<std::int64_t>(b) * cfg.channels + ch) * hw) + r) * hw +
                             cidx] = im.at(r, cidx, ch);
    }
    return out;
}

LatentStats Vae::encode(const Image& im) const {
    if (im.h != cfg_.image_size || im.w != cfg_.image_size || im.c != cfg_.channels)
        throw std::invalid_argument("encode: image dimensions do not match the config");
    // fast tape-free forward
    int hw = cfg_.image_size;
    int cin = cfg_.channels;
    std::vector<double> x(static_cast<std::size_t>(cin) * hw * hw);
    for (int ch = 0; ch < cin; ++ch)
        for (int r = 0; r < hw; ++r)
            for (int c = 0; c < hw; ++c)
                x[(static_cast<std::size_t>(ch) * hw + r) * hw + c] = im.at(r, c, ch);

    for (int i = 0; i < 5; ++i) {
        const Tensor& w = *params_.find("enc.conv" + std::to_string(i) + ".w");
        const Tensor& b = *params_.find("enc.conv" + std::to_string(i) + ".b");
        const int cout = w.dim(0);
        const int ho = grad::kern::conv_out_dim(hw, 2);
        std::vector<double> y(static_cast<std::size_t>(cout) * ho * ho);
        grad::kern::conv2d_fwd(x.data(), w.data.data(), b.data.data(), y.data(), 1, cin, hw, hw,
                               cout, 2);
        for (auto& v : y)
            if (v < 0.0) v = 0.0;
        x = std::move(y);
        hw = ho;
        cin = cout;
    }
    const Tensor& wmu = *params_.find("enc.mu.w");
    const Tensor& bmu = *params_.find("enc.mu.b");
    const Tensor& wls = *params_.find("enc.logstd.w");
    const Tensor& bls = *params_.find("enc.logstd.b");
    LatentStats st;
    st.mu.assign(static_cast<std::size_t>(cfg_.latent_dim), 0.0);
    st.log_std.assign(static_cast<std::size_t>(cfg_.latent_dim), 0.0);
    grad::kern::mm_nn(x.data(), wmu.data.data(), st.mu.data(), 1, cfg_.flat_dim(),
                      cfg_.latent_dim, false);
    grad::kern::mm_nn(x.data(), wls.data.data(), st.log_std.data(), 1, cfg_.flat_dim(),
                      cfg_.latent_dim, false);
    for (int i = 0; i < cfg_.latent_dim; ++i) {
        st.mu[i] += bmu.data[i];
        st.log_std[i] =
            std::clamp(st.log_std[i] + bls.data[i], cfg_.logstd_min, cfg_.logstd_max);
    }
    return st;
}

Image Vae::decode(const std::vector<double>& z) const {
    if (static_cast<int>(z.size()) != cfg_.latent_dim)
        throw std::invalid_argument("decode: latent size does not match the config");
    const int flat = cfg_.flat_dim();
    std::vector<double> x(static_cast<std::size_t>(flat), 0.0);
    const Tensor& wfc = *params_.find("dec.fc.w");
    const Tensor& bfc = *params_.find("dec.fc.b");
    grad::kern::mm_nn(z.data(), wfc.data.data(), x.data(), 1, cfg_.latent_dim, flat, false);
    for (int i = 0; i < flat; ++i) {
        x[i] += bfc.data[i];
        if (x[i] < 0.0) x[i] = 0.0;
    }
    int hw = cfg_.bottleneck_spatial();
    int cin = cfg_.conv_channels[4];
    for (int i = 0; i < 5; ++i) {
        std::vector<double> up(static_cast<std::size_t>(cin) * 4 * hw * hw);
        grad::kern::upsample2x_fwd(x.data(), up.data(), 1, cin, hw, hw);
        hw *= 2;
        const Tensor& w = *params_.find("dec.conv" + std::to_string(i) + ".w");
        const Tensor& b = *params_.find("dec.conv" + std::to_string(i) + ".b");
        const int cout = w.dim(0);
        std::vector<double> y(static_cast<std::size_t>(cout) * hw * hw);
        grad::kern::conv2d_fwd(up.data(), w.data.data(), b.data.data(), y.data(), 1, cin, hw, hw,
                               cout, 1);
        for (auto& v : y)
            if (v < 0.0) v = 0.0;
        x = std::move(y);
        cin = cout;
    }
    const Tensor& wout = *params_.find("dec.out.w");
    const Tensor& bout = *params_.find("dec.out.b");
    std::vector<double> y(static_cast<std::size_t>(cfg_.channels) * hw * hw);
    grad::kern::conv2d_fwd(x.data(), wout.data.data(), bout.data.data(), y.data(), 1, cin, hw, hw,
                           cfg_.channels, 1);
    Image im = Image::zeros(hw, hw, cfg_.channels);
    for (int ch = 0; ch < cfg_.channels; ++ch)
        for (int r = 0; r < hw; ++r)
            for (int c = 0; c < hw; ++c)
                im.at(r, c, ch) =
                    0.5 * std::tanh(y[(static_cast<std::size_t>(ch) * hw + r) * hw + c]) + 0.5;
    return im;
}

int Vae::build_loss(Tape& tape, const Tensor& images, const Tensor& eps, double beta) {
    if (images.rank() != 4 || images.dim(1) != cfg_.channels ||
        images.dim(2) != cfg_.image_size || images.dim(3) != cfg_.image_size)
        throw std::invalid_argument("build_loss: image batch shape mismatch");
    const int n = images.dim(0);
    const int x0 = tape.leaf(images, false);
    int x = x0;
    int hw = cfg_.image_size;
    for (int i = 0; i < 5; ++i) {
        const int w = tape.param(*params_.find("enc.conv" + std::to_string(i) + ".w"));
        const int b = tape.param(*params_.find("enc.conv" + std::to_string(i) + ".b"));
        x = tape.relu(tape.conv2d(x, w, b, 2));
        hw /= 2;
    }
    const int flat = cfg_.flat_dim();
    x = tape.reshape(x, {n, flat});
    const int mu = tape.add_bias(tape.matmul(x, tape.param(*params_.find("enc.mu.w"))),
                                 tape.param(*params_.find("enc.mu.b")));
    int logstd = tape.add_bias(tape.matmul(x, tape.param(*params_.find("enc.logstd.w"))),
                               tape.param(*params_.find("enc.logstd.b")));
    logstd = tape.clamp(logstd, cfg_.logstd_min, cfg_.logstd_max);

    const int epsn = tape.leaf(eps, false);
    const int z = tape.add(mu, tape.mul(tape.exp_(logstd), epsn));

    int d = tape.add_bias(tape.matmul(z, tape.param(*params_.find("dec.fc.w"))),
                          tape.param(*params_.find("dec.fc.b")));
    d = tape.relu(d);
    int s = cfg_.bottleneck_spatial();
    d = tape.reshape(d, {n, cfg_.conv_channels[4], s, s});
    for (int i = 0; i < 5; ++i) {
        d = tape.upsample2x(d);
        s *= 2;
        const int w = tape.param(*params_.find("dec.conv" + std::to_string(i) + ".w"));
        const int b = tape.param(*params_.find("dec.conv" + std::to_string(i) + ".b"));
        d = tape.relu(tape.conv2d(d, w, b, 1));
    }
    d = tape.conv2d(d, tape.param(*params_.find("dec.out.w")),
                    tape.param(*params_.find("dec.out.b")), 1);
    const int recon = tape.affine_scalar(tape.tanh_(d), 0.5, 0.5);

    const int rec_loss = tape.mse(recon, x0);
    const int kl = tape.kl_diag_gaussian(tape.reshape(mu, {n * cfg_.latent_dim}),
                                         tape.reshape(logstd, {n * cfg_.latent_dim}));
    return tape.add(rec_loss, tape.scale(kl, beta / n));
}

TrainReport Vae::train(const std::vector<Image>& corpus, int epochs, double learning_rate,
                       double beta, int batch_size, std::uint64_t seed) {
    if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
    grad::Rng rng(grad::mix_seed(seed, 0x7a11));
    grad::AdamState adam(learning_rate);
    TrainReport report;

    std::vector<int> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    for (int epoch = 0; epoch < epochs; ++epoch) {
        // Fisher-Yates from the epoch stream
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.below(i));
            std::swap(order[i - 1], order[j]);
        }
        double loss_acc = 0.0;
        std::int64_t count = 0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            const std::vector<int> idx(order.begin() + start, order.begin() + end);
            const Tensor batch = batch_tensor(corpus, cfg_, idx);
            Tensor eps = Tensor::zeros({static_cast<int>(idx.size()), cfg_.latent_dim});
            for (auto& v : eps.data) v = rng.gaussian();

            Tape tape;
            const int loss = build_loss(tape, batch, eps, beta);
            tape.backward(loss);
            loss_acc += tape.scalar_value(loss) * static_cast<double>(idx.size());
            count += static_cast<std::int64_t>(idx.size());

            // gradients keyed back to ParamSet order
            const auto pg = tape.param_grads();
            std::vector<const Tensor*> gptrs(params_.size(), nullptr);
            std::vector<Tensor> zeros;
            zeros.reserve(params_.size());
            for (std::size_t i = 0; i < params_.size(); ++i) {
                for (const auto& [param, gradient] : pg)
                    if (param == &params_.tensor(i) && gradient) gptrs[i] = gradient;
                if (!gptrs[i]) {
                    zeros.push_back(Tensor::zeros(params_.tensor(i).shape));
                    gptrs[i] = &zeros.back();
                }
            }
            adam.step(params_, gptrs);
        }
        report.epoch_loss.push_back(loss_acc / static_cast<double>(count));
    }
    report.final_loss = report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back();
    return report;
}

double vae_loss(const Image& image, const LatentStats& stats, const Image& reconstruction,
                double beta) {
    if (image.px.size() != reconstruction.px.size())
        throw std::invalid_argument("vae_loss: image/reconstruction shape mismatch");
    double mse = 0.0;
    for (std::size_t i = 0; i < image.px.size(); ++i) {
        const double d = reconstruction.px[i] - image.px[i];
        mse += d * d;
    }
    mse /= static_cast<double>(image.px.size());
    double kl = 0.0;
    for (std::size_t i = 0; i < stats.mu.size(); ++i) {
        const double s2 = std::exp(2.0 * stats.log_std[i]);
        kl += 0.5 * (stats.mu[i] * stats.mu[i] + s2 - 1.0 - 2.0 * stats.log_std[i]);
    }
    return mse + beta * kl;
}

}  // namespace pg::vae
