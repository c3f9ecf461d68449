// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/brdf.h>
#include <nbrdf/image.h>
#include <nbrdf/nn.h>
#include <nbrdf/sampling.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nbrdf {

inline constexpr int kLatentSize = 32;
using LatentCode = std::vector<double>;

/// Parameters of a default-shape NBRDF in their stored layer-major order
/// (see MlpShape). Throws ShapeMismatch for other shapes.
std::vector<double> flatten(const Mlp<float> &nbrdf);
/// Inverse of flatten. Throws ShapeMismatch unless v has 675 entries.
Mlp<float> unflatten(std::span<const double> v);

/// All orderings of (r, g, b); entry p maps output channel c to source
/// channel p[c]. The identity comes first.
inline constexpr std::array<std::array<int, 3>, 6> kRgbPermutations{
    {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}}};

/// Copy of `net` whose output channel c is the input's channel perm[c].
Mlp<float> permute_rgb(const Mlp<float> &net, const std::array<int, 3> &perm);
/// Six permuted copies per network, grouped per input in kRgbPermutations order.
std::vector<Mlp<float>> augment_rgb(std::span<const Mlp<float>> nets);

/// Tone-mapped sphere render of NBRDF parameters given as plain numbers, with
/// the mean squared pixel difference to a target and its gradient.
class SphereImageLoss {
  public:
    explicit SphereImageLoss(int size = 64, double light_theta_deg = 45);

    int size() const { return size_; }
    /// HDR render; matches render_sphere on the same network up to rounding.
    Image render(std::span<const double> params) const;
    Image render_ldr(std::span<const double> params) const { return tone_map(render(params)); }

    /// Mean over all pixels and channels of (tone_map(render(params)) -
    /// target)^2. When `grad` is non-empty, d loss / d params is added to it.
    double loss(std::span<const double> params, const Image &target_ldr, std::span<double> grad = {}) const;

  private:
    int size_;
    MlpShape shape_;
    std::vector<int> pixels_;                 // y * size + x of each lit pixel
    std::vector<std::array<double, 6>> inputs_;
    std::vector<double> cosines_;
};

class Autoencoder {
  public:
    Autoencoder() = default;
    Autoencoder(Mlp<double> encoder, Mlp<double> decoder);
    /// Encoder 675 -> hidden... -> 32; decoder mirrors it. Linear outputs.
    static Autoencoder with_shape(const std::vector<int> &encoder_dims);

    LatentCode encode(const Mlp<float> &nbrdf) const;
    std::vector<double> decode_params(std::span<const double> z) const;
    Mlp<float> decode(std::span<const double> z) const { return unflatten(decode_params(z)); }

    const Mlp<double> &encoder() const { return encoder_; }
    const Mlp<double> &decoder() const { return decoder_; }
    Mlp<double> &encoder() { return encoder_; }
    Mlp<double> &decoder() { return decoder_; }

  private:
    Mlp<double> encoder_;
    Mlp<double> decoder_;
};

struct AutoencoderConfig {
    std::vector<int> encoder_dims{675, 256, 64, 32};
    int epochs = 300;
    int batch_size = 8;
    AdamConfig adam{};
    double train_fraction = 0.8;
    bool augment = true;
    /// Ablation: train on weight-space MSE instead of the image loss.
    bool weight_loss = false;
    int render_size = 64;
    double light_theta_deg = 45;
    /// Scale applied to the decoder's final weights at initialisation.
    double decoder_init_scale = 0.01;
    std::uint64_t seed = 0;
    int jobs = 0;

    void validate() const;
};

struct AutoencoderResult {
    Autoencoder ae;
    std::vector<double> train_loss;  // mean loss over each epoch's mini-batches
    std::vector<double> test_loss;   // held-out image loss after each epoch
    std::vector<std::size_t> train_materials;
    std::vector<std::size_t> test_materials;
};

using AutoencoderCallback = std::function<void(int epoch, double train_loss, double test_loss)>;

/// Splits the corpus by material, augments the training part with RGB
/// permutations and trains with Adam. Throws NonFiniteLoss.
AutoencoderResult train_autoencoder(std::span<const Mlp<float>> corpus, const AutoencoderConfig &cfg,
                                    const AutoencoderCallback &on_epoch = {});

/// decode((1 - t) za + t zb)
Mlp<float> interp_latent(const Autoencoder &ae, std::span<const double> za, std::span<const double> zb, double t);

struct PhongFitConfig {
    int samples = 20000;
    int grid_exponents = 41;  // log-spaced over [1, max_exponent]
    int grid_weights = 21;    // over [0, 1]
    double max_exponent = 1e4;
    std::uint64_t seed = 7;
};

/// Blinn-Phong fit A * ((1 - ws) / pi + ws (n + 8) / (8 pi) cos^n theta_h)
/// to the channel mean of `gt`, minimising the mean absolute log residual
/// over adaptive samples. The scale A is solved exactly (median residual).
PhongSamplingParams fit_phong_oracle(const Brdf &gt, const PhongFitConfig &cfg = {});
/// The objective minimised by fit_phong_oracle on a prepared sample set.
struct PhongFitObjective {
    std::vector<double> cos_theta_h;
    std::vector<double> log_f;
    static PhongFitObjective sample(const Brdf &gt, const PhongFitConfig &cfg);
    double operator()(double exponent, double ws) const;
};

struct PredictorConfig {
    std::vector<int> hidden{16};
    int steps = 4000;
    AdamConfig adam{3e-3};
    double weight_decay = 1e-4;
    std::uint64_t seed = 0;
};

/// Regression targets (log n, logit of the rescaled weight) and back.
std::array<double, 2> phong_to_target(const PhongSamplingParams &p);
PhongSamplingParams target_to_phong(double log_exponent, double weight_logit);

class Predictor {
  public:
    Predictor() = default;
    explicit Predictor(Mlp<double> net);

    /// Always valid: n > 0 and ws in [kMinSpecularWeight, kMaxSpecularWeight].
    PhongSamplingParams predict(std::span<const double> z) const;
    const Mlp<double> &net() const { return net_; }

  private:
    Mlp<double> net_;
};

struct PredictorResult {
    Predictor predictor;
    std::vector<double> loss;  // full-batch MSE per step
};

/// Full-batch Adam on standardised latents; the standardisation is folded
/// into the first layer afterwards. Throws NonFiniteLoss.
PredictorResult train_predictor(std::span<const LatentCode> latents, std::span<const PhongSamplingParams> labels,
                                const PredictorConfig &cfg = {});

PhongSamplingParams predict_params(const Predictor &p, std::span<const double> z);

/// "NBAE": encoder then decoder. "NBPR": one network. "NBLT": u32 count,
/// u32 width, then the codes as f32. All after the usual magic and version.
void save_autoencoder(const std::filesystem::path &path, const Autoencoder &ae);
Autoencoder load_autoencoder(const std::filesystem::path &path);
void save_predictor(const std::filesystem::path &path, const Predictor &p);
Predictor load_predictor(const std::filesystem::path &path);
void save_latents(const std::filesystem::path &path, std::span<const LatentCode> codes);
std::vector<LatentCode> load_latents(const std::filesystem::path &path);

/// Header `material,z0,...,z31`; full double precision.
void write_latent_csv(std::ostream &os, std::span<const std::string> names, std::span<const LatentCode> codes);

}  // namespace nbrdf
