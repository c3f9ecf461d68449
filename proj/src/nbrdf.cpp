// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/nbrdf.h>

#include <nbrdf/sampling.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nbrdf {

MlpShape default_nbrdf_shape() { return {{6, 21, 21, 3}, OutputActivation::Exp}; }

SamplingMode parse_sampling_mode(const std::string &name) {
    if (name == "adaptive") return SamplingMode::Adaptive;
    if (name == "uniform") return SamplingMode::Uniform;
    throw std::invalid_argument("sampling mode must be 'adaptive' or 'uniform', got '" + name + "'");
}

const char *to_string(SamplingMode mode) { return mode == SamplingMode::Adaptive ? "adaptive" : "uniform"; }

TrainConfig TrainConfig::defaults(bool anisotropic) {
    TrainConfig cfg;
    cfg.anisotropic = anisotropic;
    if (anisotropic) cfg.sample_count = 5 * cfg.sample_count;
    return cfg;
}

void TrainConfig::validate() const {
    MlpShape{layer_dims, OutputActivation::Exp}.validate();
    if (layer_dims.front() != 6) throw ShapeMismatch("NBRDF input width must be 6");
    if (layer_dims.back() != 3) throw ShapeMismatch("NBRDF output width must be 3");
    if (sample_count <= 0) throw std::invalid_argument("sample count must be positive");
    if (max_epochs <= 0) throw std::invalid_argument("max epochs must be positive");
    if (patience <= 0) throw std::invalid_argument("patience must be positive");
    if (batch_size <= 0) throw std::invalid_argument("batch size must be positive");
    if (!(validation_fraction > 0 && validation_fraction < 0.5))
        throw std::invalid_argument("validation fraction must lie in (0, 0.5)");
    if (!(adam.learning_rate > 0)) throw std::invalid_argument("learning rate must be positive");
}

double nbrdf_loss(const Rgb &f_true, const Rgb &f_pred, double cos_theta_i) {
    double sum = 0;
    for (int c = 0; c < 3; ++c)
        sum += std::abs(std::log1p(f_true[c] * cos_theta_i) - std::log1p(f_pred[c] * cos_theta_i));
    return sum / 3;
}

std::array<double, 6> nbrdf_input(const Direction &wi, const Direction &wo, bool anisotropic) {
    RusinkiewiczCoords c = dirs_to_rusink(wi, wo);
    if (!anisotropic) c.phi_h = 0;
    return halfdiff_cartesian(c);
}

std::vector<ReflectanceSample> sample_batch(const Brdf &gt, std::size_t n, SamplingMode mode, bool anisotropic,
                                            std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<ReflectanceSample> out;
    out.reserve(n);
    while (out.size() < n) {
        Direction wi, wo;
        if (mode == SamplingMode::Adaptive) {
            RusinkiewiczCoords c;
            c.theta_h = uniform(rng) * kHalfPi;
            c.theta_d = uniform(rng) * kHalfPi;
            c.phi_d = uniform(rng) * kTwoPi;
            c.phi_h = anisotropic ? uniform(rng) * kTwoPi : 0.0;
            std::tie(wi, wo) = rusink_to_dirs(c);
        } else {
            wi = uniform_hemisphere(uniform(rng), uniform(rng)).wi;
            wo = uniform_hemisphere(uniform(rng), uniform(rng)).wi;
        }
        if (wi.z <= 0 || wo.z <= 0) continue;
        if (!gt.valid(wi, wo)) continue;
        const Rgb f = gt.eval(wi, wo);
        bool ok = true;
        for (int c = 0; c < 3; ++c) ok = ok && std::isfinite(f[c]) && f[c] >= 0;
        if (!ok) continue;
        out.push_back({wi, wo, f, wi.z});
    }
    return out;
}

namespace {

struct PreparedSet {
    std::vector<double> inputs;   // 6 per sample
    std::vector<double> targets;  // log1p(f_true * cos), 3 per sample
    std::vector<double> cosines;
};

PreparedSet prepare(const std::vector<ReflectanceSample> &samples, bool anisotropic) {
    PreparedSet set;
    set.inputs.reserve(samples.size() * 6);
    set.targets.reserve(samples.size() * 3);
    set.cosines.reserve(samples.size());
    for (const auto &s : samples) {
        const auto x = nbrdf_input(s.wi, s.wo, anisotropic);
        set.inputs.insert(set.inputs.end(), x.begin(), x.end());
        for (int c = 0; c < 3; ++c) set.targets.push_back(std::log1p(s.f_true[c] * s.cos_theta_i));
        set.cosines.push_back(s.cos_theta_i);
    }
    return set;
}

// Loss of one sample; optionally accumulates d loss / d params * scale.
double sample_loss(const MlpShape &shape, std::span<const double> params, const PreparedSet &set, std::size_t i,
                   MlpWorkspace<double> &ws, std::span<double> grad, double scale) {
    const std::span<const double> x(set.inputs.data() + 6 * i, 6);
    const auto f = forward<double>(shape, params, x, ws);
    const double cos = set.cosines[i];
    double loss = 0;
    double upstream[3];
    for (int c = 0; c < 3; ++c) {
        const double pred = std::log1p(f[c] * cos);
        const double diff = set.targets[3 * i + c] - pred;
        loss += std::abs(diff);
        const double sign = diff > 0 ? -1.0 : (diff < 0 ? 1.0 : 0.0);
        upstream[c] = sign * cos / (1 + f[c] * cos) / 3 * scale;
    }
    if (!grad.empty()) backward<double>(shape, params, ws, upstream, {}, grad);
    return loss / 3;
}

}  // namespace

TrainResult train_nbrdf(const Brdf &gt, const TrainConfig &cfg, const EpochCallback &on_epoch) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const auto samples = sample_batch(gt, std::size_t(cfg.sample_count), cfg.mode, cfg.anisotropic, rng);
    const PreparedSet set = prepare(samples, cfg.anisotropic);

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t n_val = std::max<std::size_t>(1, std::size_t(std::llround(cfg.validation_fraction * double(order.size()))));
    if (n_val >= order.size()) throw std::invalid_argument("not enough samples for a validation split");
    std::vector<std::size_t> val(order.end() - std::ptrdiff_t(n_val), order.end());
    std::vector<std::size_t> train(order.begin(), order.end() - std::ptrdiff_t(n_val));

    const MlpShape shape{cfg.layer_dims, OutputActivation::Exp};
    Mlp<double> net(shape);
    net.init_glorot(cfg.seed);

    // Start the output layer at the log of the mean reflectance.
    {
        Rgb mean;
        for (const auto &s : samples) mean += s.f_true;
        mean = mean / double(samples.size());
        double *b = net.params().data() + shape.bias_offset(shape.layer_count() - 1);
        for (int c = 0; c < 3; ++c) b[c] = std::log(std::max(mean[c], 1e-6));
    }

    AdamState adam(net.param_count(), cfg.adam);
    MlpWorkspace<double> ws(shape);
    std::vector<double> grad(net.param_count());

    auto validation_loss = [&](std::span<const double> params) {
        double sum = 0;
        for (std::size_t i : val) sum += sample_loss(shape, params, set, i, ws, {}, 0);
        return sum / double(val.size());
    };

    TrainResult result;
    std::vector<double> best = {net.params().begin(), net.params().end()};
    double best_val = validation_loss(net.params());
    int since_best = 0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(train.begin(), train.end(), rng);
        double epoch_sum = 0;
        for (std::size_t start = 0; start < train.size(); start += std::size_t(cfg.batch_size)) {
            const std::size_t end = std::min(train.size(), start + std::size_t(cfg.batch_size));
            const double scale = 1.0 / double(end - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = start; k < end; ++k)
                epoch_sum += sample_loss(shape, net.params(), set, train[k], ws, grad, scale);
            adam_step<double>(net.params(), grad, adam);
        }
        const double train_loss = epoch_sum / double(train.size());
        const double val_loss = validation_loss(net.params());
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) {
            std::ostringstream msg;
            msg << "non-finite loss at epoch " << epoch << " (train " << train_loss << ", validation " << val_loss
                << ", lr " << cfg.adam.learning_rate << ")";
            throw NonFiniteLoss(msg.str());
        }
        result.train_loss.push_back(train_loss);
        result.validation_loss.push_back(val_loss);
        if (on_epoch) on_epoch(epoch, train_loss, val_loss);

        if (val_loss < best_val) {
            best_val = val_loss;
            best.assign(net.params().begin(), net.params().end());
            result.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    result.net = Mlp<double>(shape, std::move(best)).cast<float>();
    return result;
}

Rgb eval_nbrdf(const Mlp<float> &net, const Direction &wi, const Direction &wo, bool anisotropic) {
    if (wi.z <= 0 || wo.z <= 0) return {};
    const auto x = nbrdf_input(wi, wo, anisotropic);
    const float xf[6] = {float(x[0]), float(x[1]), float(x[2]), float(x[3]), float(x[4]), float(x[5])};
    thread_local MlpWorkspace<float> ws;
    const auto f = forward<float>(net.shape(), net.params(), xf, ws);
    return {f[0], f[1], f[2]};
}

NbrdfBrdf::NbrdfBrdf(Mlp<float> net, bool anisotropic) : net_(std::move(net)), anisotropic_(anisotropic) {
    if (net_.shape().input_size() != 6 || net_.shape().output_size() != 3)
        throw ShapeMismatch("an NBRDF maps 6 inputs to 3 outputs");
}

Rgb NbrdfBrdf::eval(const Direction &wi, const Direction &wo) const { return eval_nbrdf(net_, wi, wo, anisotropic_); }

}  // namespace nbrdf
