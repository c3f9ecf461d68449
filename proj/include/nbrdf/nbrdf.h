// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/brdf.h>
#include <nbrdf/coords.h>
#include <nbrdf/nn.h>

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbrdf {

/// 6 x 21 x 21 x 3 with exponential output: 675 parameters.
MlpShape default_nbrdf_shape();

class NonFiniteLoss : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SamplingMode { Adaptive, Uniform };

SamplingMode parse_sampling_mode(const std::string &name);
const char *to_string(SamplingMode mode);

struct ReflectanceSample {
    Direction wi;
    Direction wo;
    Rgb f_true;
    double cos_theta_i = 0;
};

struct TrainConfig {
    std::vector<int> layer_dims{6, 21, 21, 3};
    std::int64_t sample_count = 800'000;
    SamplingMode mode = SamplingMode::Adaptive;
    bool anisotropic = false;
    int max_epochs = 100;
    int patience = 10;
    int batch_size = 512;
    double validation_fraction = 0.05;
    AdamConfig adam;
    std::uint64_t seed = 0;

    /// Isotropic defaults, or anisotropic ones with five times the samples.
    static TrainConfig defaults(bool anisotropic);
    void validate() const;
};

struct TrainResult {
    Mlp<float> net;
    std::vector<double> train_loss;       // mean loss per epoch
    std::vector<double> validation_loss;  // held-out loss after each epoch
    int best_epoch = 0;
};

/// Mean over channels of |log(1 + f_true cos) - log(1 + f_pred cos)|.
double nbrdf_loss(const Rgb &f_true, const Rgb &f_pred, double cos_theta_i);

/// Draws `n` training samples with both directions above the horizon and a
/// valid ground-truth value. Adaptive mode draws the half/difference angles
/// uniformly; uniform mode draws wi and wo uniformly over solid angle.
std::vector<ReflectanceSample> sample_batch(const Brdf &gt, std::size_t n, SamplingMode mode, bool anisotropic,
                                            std::mt19937_64 &rng);

/// Network input for a direction pair. Isotropic networks fix phi_h = 0.
std::array<double, 6> nbrdf_input(const Direction &wi, const Direction &wo, bool anisotropic);

using EpochCallback = std::function<void(int epoch, double train_loss, double validation_loss)>;

/// Adam on mini-batches with early stopping on a held-out split. Returns
/// the parameters with the best validation loss. Throws NonFiniteLoss.
TrainResult train_nbrdf(const Brdf &gt, const TrainConfig &cfg, const EpochCallback &on_epoch = {});

/// forward(net, halfdiff(wi, wo)); zero below the horizon.
Rgb eval_nbrdf(const Mlp<float> &net, const Direction &wi, const Direction &wo, bool anisotropic = false);

/// A trained network used as a renderer BRDF.
class NbrdfBrdf final : public Brdf {
  public:
    explicit NbrdfBrdf(Mlp<float> net, bool anisotropic = false);

    Rgb eval(const Direction &wi, const Direction &wo) const override;
    std::size_t memory_bytes() const override { return net_.param_count() * sizeof(float); }

    const Mlp<float> &net() const { return net_; }
    bool anisotropic() const { return anisotropic_; }

  private:
    Mlp<float> net_;
    bool anisotropic_;
};

}  // namespace nbrdf
