// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/latent.h>

#include <nbrdf/brdf_data.h>
#include <nbrdf/nbrdf.h>
#include <nbrdf/render.h>

#include "binary_io.h"
#include "parallel.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace nbrdf {

namespace {

constexpr Vec3 kViewDir{0, 0, 1};

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

double sigmoid(double x) { return 1 / (1 + std::exp(-x)); }

}  // namespace

std::vector<double> flatten(const Mlp<float> &nbrdf) {
    if (!(nbrdf.shape() == default_nbrdf_shape())) throw ShapeMismatch("flatten expects a 6x21x21x3 NBRDF");
    return {nbrdf.params().begin(), nbrdf.params().end()};
}

Mlp<float> unflatten(std::span<const double> v) {
    MlpShape shape = default_nbrdf_shape();
    if (v.size() != shape.param_count())
        throw ShapeMismatch("expected " + std::to_string(shape.param_count()) + " values, got " +
                            std::to_string(v.size()));
    return Mlp<float>(std::move(shape), std::vector<float>(v.begin(), v.end()));
}

Mlp<float> permute_rgb(const Mlp<float> &net, const std::array<int, 3> &perm) {
    const MlpShape &shape = net.shape();
    if (shape.output_size() != 3) throw ShapeMismatch("RGB permutation needs 3 outputs");
    std::vector<float> params(net.params().begin(), net.params().end());
    const int last = shape.layer_count() - 1;
    const int din = shape.dims[last];
    const std::size_t woff = shape.weight_offset(last), boff = shape.bias_offset(last);
    for (int c = 0; c < 3; ++c) {
        const auto src = net.params().begin();
        std::copy_n(src + std::ptrdiff_t(woff + std::size_t(perm[c]) * din), din,
                    params.begin() + std::ptrdiff_t(woff + std::size_t(c) * din));
        params[boff + c] = net.params()[boff + perm[c]];
    }
    return Mlp<float>(shape, std::move(params));
}

std::vector<Mlp<float>> augment_rgb(std::span<const Mlp<float>> nets) {
    std::vector<Mlp<float>> out;
    out.reserve(nets.size() * kRgbPermutations.size());
    for (const auto &net : nets)
        for (const auto &perm : kRgbPermutations) out.push_back(permute_rgb(net, perm));
    return out;
}

SphereImageLoss::SphereImageLoss(int size, double light_theta_deg) : size_(size), shape_(default_nbrdf_shape()) {
    if (size < 1) throw std::invalid_argument("render size must be >= 1");
    SceneSpec scene;
    scene.light_theta_deg = light_theta_deg;
    const Vec3 light = scene.light_direction();
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const auto n = sphere_normal(x, y, size);
            if (!n) continue;
            const Frame frame = Frame::from_normal(*n);
            const Vec3 wi = frame.to_local(light);
            const Vec3 wo = frame.to_local(kViewDir);
            if (wi.z <= 0 || wo.z <= 0) continue;
            pixels_.push_back(y * size + x);
            inputs_.push_back(nbrdf_input(wi, wo, false));
            cosines_.push_back(wi.z);
        }
}

Image SphereImageLoss::render(std::span<const double> params) const {
    if (params.size() != shape_.param_count()) throw ShapeMismatch("render expects default-shape NBRDF parameters");
    Image img(size_, size_);
    MlpWorkspace<double> ws(shape_);
    for (std::size_t i = 0; i < pixels_.size(); ++i) {
        const auto f = forward<double>(shape_, params, inputs_[i], ws);
        img.set_pixel(pixels_[i] % size_, pixels_[i] / size_, Rgb(f[0], f[1], f[2]) * cosines_[i]);
    }
    return img;
}

double SphereImageLoss::loss(std::span<const double> params, const Image &target_ldr, std::span<double> grad) const {
    if (params.size() != shape_.param_count()) throw ShapeMismatch("loss expects default-shape NBRDF parameters");
    if (target_ldr.width() != size_ || target_ldr.height() != size_) throw ShapeMismatch("target image size mismatch");
    if (!grad.empty() && grad.size() != params.size()) throw ShapeMismatch("gradient size mismatch");

    const double n = double(size_) * size_ * 3;
    const double dark = tone_map_value(0);
    std::vector<char> lit(std::size_t(size_) * size_, 0);
    for (int p : pixels_) lit[std::size_t(p)] = 1;

    double sum = 0;
    for (int p = 0; p < size_ * size_; ++p) {
        if (lit[std::size_t(p)]) continue;
        for (int c = 0; c < 3; ++c) {
            const double d = dark - target_ldr.at(p % size_, p / size_, c);
            sum += d * d;
        }
    }
    MlpWorkspace<double> ws(shape_);
    for (std::size_t i = 0; i < pixels_.size(); ++i) {
        const int x = pixels_[i] % size_, y = pixels_[i] / size_;
        const auto f = forward<double>(shape_, params, inputs_[i], ws);
        double upstream[3];
        bool any = false;
        for (int c = 0; c < 3; ++c) {
            const double radiance = f[c] * cosines_[i];
            const double d = tone_map_value(radiance) - target_ldr.at(x, y, c);
            sum += d * d;
            upstream[c] = 2 * d / n * tone_map_derivative(radiance) * cosines_[i];
            any = any || upstream[c] != 0;
        }
        if (!grad.empty() && any) backward<double>(shape_, params, ws, upstream, {}, grad);
    }
    return sum / n;
}

Autoencoder::Autoencoder(Mlp<double> encoder, Mlp<double> decoder)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)) {
    if (encoder_.shape().output_size() != decoder_.shape().input_size() ||
        encoder_.shape().input_size() != decoder_.shape().output_size())
        throw ShapeMismatch("encoder and decoder widths do not match");
    if (decoder_.shape().output_size() != int(default_nbrdf_shape().param_count()))
        throw ShapeMismatch("decoder must emit 675 NBRDF parameters");
}

Autoencoder Autoencoder::with_shape(const std::vector<int> &encoder_dims) {
    MlpShape enc{encoder_dims, OutputActivation::Linear};
    enc.validate();
    MlpShape dec{{encoder_dims.rbegin(), encoder_dims.rend()}, OutputActivation::Linear};
    return Autoencoder(Mlp<double>(std::move(enc)), Mlp<double>(std::move(dec)));
}

LatentCode Autoencoder::encode(const Mlp<float> &nbrdf) const {
    const auto x = flatten(nbrdf);
    const auto z = encoder_.forward(x);
    return {z.begin(), z.end()};
}

std::vector<double> Autoencoder::decode_params(std::span<const double> z) const {
    if (z.size() != std::size_t(decoder_.shape().input_size()))
        throw ShapeMismatch("latent code has " + std::to_string(z.size()) + " values, expected " +
                            std::to_string(decoder_.shape().input_size()));
    return decoder_.forward(z);
}

void AutoencoderConfig::validate() const {
    if (encoder_dims.size() < 2 || encoder_dims.front() != int(default_nbrdf_shape().param_count()))
        throw std::invalid_argument("encoder must start at 675 inputs");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    if (!(train_fraction > 0 && train_fraction < 1)) throw std::invalid_argument("train fraction must be in (0, 1)");
    if (render_size < 1) throw std::invalid_argument("render size must be >= 1");
    if (!(adam.learning_rate > 0)) throw std::invalid_argument("learning rate must be positive");
}

AutoencoderResult train_autoencoder(std::span<const Mlp<float>> corpus, const AutoencoderConfig &cfg,
                                    const AutoencoderCallback &on_epoch) {
    cfg.validate();
    if (corpus.size() < 2) throw std::invalid_argument("autoencoder training needs at least 2 materials");
    for (const auto &net : corpus)
        if (!(net.shape() == default_nbrdf_shape())) throw ShapeMismatch("corpus networks must be 6x21x21x3");

    AutoencoderResult result;
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t n_train =
        std::clamp<std::size_t>(std::size_t(std::lround(cfg.train_fraction * double(corpus.size()))), 1,
                                corpus.size() - 1);
    result.train_materials.assign(order.begin(), order.begin() + std::ptrdiff_t(n_train));
    result.test_materials.assign(order.begin() + std::ptrdiff_t(n_train), order.end());
    std::sort(result.train_materials.begin(), result.train_materials.end());
    std::sort(result.test_materials.begin(), result.test_materials.end());

    std::vector<Mlp<float>> train_nets, test_nets;
    for (auto i : result.train_materials) train_nets.push_back(corpus[i]);
    for (auto i : result.test_materials) test_nets.push_back(corpus[i]);
    if (cfg.augment) train_nets = augment_rgb(train_nets);

    const SphereImageLoss image_loss(cfg.render_size, cfg.light_theta_deg);
    auto prepare = [&](const std::vector<Mlp<float>> &nets, std::vector<std::vector<double>> &x,
                       std::vector<Image> &targets) {
        x.resize(nets.size());
        targets.resize(nets.size());
        detail::parallel_for(int(nets.size()), cfg.jobs, [&](int i) {
            x[std::size_t(i)] = flatten(nets[std::size_t(i)]);
            targets[std::size_t(i)] = image_loss.render_ldr(x[std::size_t(i)]);
        });
    };
    std::vector<std::vector<double>> x_train, x_test;
    std::vector<Image> t_train, t_test;
    prepare(train_nets, x_train, t_train);
    prepare(test_nets, x_test, t_test);

    const std::size_t dim = x_train.front().size();
    std::vector<double> mean(dim, 0.0);
    for (const auto &x : x_train)
        for (std::size_t j = 0; j < dim; ++j) mean[j] += x[j] / double(x_train.size());

    Autoencoder ae = Autoencoder::with_shape(cfg.encoder_dims);
    Mlp<double> &enc = ae.encoder();
    Mlp<double> &dec = ae.decoder();
    enc.init_glorot(cfg.seed);
    dec.init_glorot(mix_seed(cfg.seed, 1));
    {
        // Centre the encoder input on the corpus mean and start the decoder there.
        const MlpShape &es = enc.shape();
        auto p = enc.params();
        for (int o = 0; o < es.dims[1]; ++o) {
            double s = 0;
            for (std::size_t j = 0; j < dim; ++j) s += p[es.weight_offset(0) + std::size_t(o) * dim + j] * mean[j];
            p[es.bias_offset(0) + std::size_t(o)] = -s;
        }
        const MlpShape &ds = dec.shape();
        const int last = ds.layer_count() - 1;
        auto q = dec.params();
        for (std::size_t i = ds.weight_offset(last); i < ds.bias_offset(last); ++i) q[i] *= cfg.decoder_init_scale;
        std::copy(mean.begin(), mean.end(), q.begin() + std::ptrdiff_t(ds.bias_offset(last)));
    }

    AdamState enc_adam(enc.param_count(), cfg.adam), dec_adam(dec.param_count(), cfg.adam);
    const std::size_t batch = std::size_t(cfg.batch_size);
    std::vector<std::vector<double>> enc_grads(batch, std::vector<double>(enc.param_count()));
    std::vector<std::vector<double>> dec_grads(batch, std::vector<double>(dec.param_count()));
    std::vector<double> batch_loss(batch);
    std::vector<double> enc_sum(enc.param_count()), dec_sum(dec.param_count());

    auto example = [&](const std::vector<double> &x, const Image &target, std::vector<double> *enc_grad,
                       std::vector<double> *dec_grad, bool image_only) {
        thread_local MlpWorkspace<double> ws_enc, ws_dec;
        const auto zs = forward<double>(enc.shape(), enc.params(), x, ws_enc);
        const std::vector<double> z(zs.begin(), zs.end());
        const auto ps = forward<double>(dec.shape(), dec.params(), z, ws_dec);
        const std::vector<double> p(ps.begin(), ps.end());
        std::vector<double> g(p.size(), 0.0);
        double loss = 0;
        if (cfg.weight_loss && !image_only) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                loss += (p[j] - x[j]) * (p[j] - x[j]) / double(p.size());
                g[j] = 2 * (p[j] - x[j]) / double(p.size());
            }
        } else {
            loss = image_loss.loss(p, target, enc_grad ? std::span<double>(g) : std::span<double>());
        }
        if (enc_grad) {
            std::fill(enc_grad->begin(), enc_grad->end(), 0.0);
            std::fill(dec_grad->begin(), dec_grad->end(), 0.0);
            std::vector<double> gz(z.size());
            backward<double>(dec.shape(), dec.params(), ws_dec, g, gz, *dec_grad);
            backward<double>(enc.shape(), enc.params(), ws_enc, gz, {}, *enc_grad);
        }
        return loss;
    };

    std::vector<std::size_t> idx(x_train.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(idx.begin(), idx.end(), rng);
        double epoch_loss = 0;
        for (std::size_t start = 0; start < idx.size(); start += batch) {
            const std::size_t count = std::min(batch, idx.size() - start);
            detail::parallel_for(int(count), cfg.jobs, [&](int k) {
                const std::size_t e = idx[start + std::size_t(k)];
                batch_loss[std::size_t(k)] = example(x_train[e], t_train[e], &enc_grads[std::size_t(k)],
                                                     &dec_grads[std::size_t(k)], false);
            });
            std::fill(enc_sum.begin(), enc_sum.end(), 0.0);
            std::fill(dec_sum.begin(), dec_sum.end(), 0.0);
            for (std::size_t k = 0; k < count; ++k) {
                if (!std::isfinite(batch_loss[k])) throw NonFiniteLoss("autoencoder loss is not finite");
                epoch_loss += batch_loss[k];
                for (std::size_t j = 0; j < enc_sum.size(); ++j) enc_sum[j] += enc_grads[k][j] / double(count);
                for (std::size_t j = 0; j < dec_sum.size(); ++j) dec_sum[j] += dec_grads[k][j] / double(count);
            }
            if (!all_finite(enc_sum) || !all_finite(dec_sum)) throw NonFiniteLoss("autoencoder gradient is not finite");
            adam_step<double>(enc.params(), enc_sum, enc_adam);
            adam_step<double>(dec.params(), dec_sum, dec_adam);
        }
        epoch_loss /= double(idx.size());

        std::vector<double> test_losses(x_test.size());
        detail::parallel_for(int(x_test.size()), cfg.jobs, [&](int i) {
            test_losses[std::size_t(i)] = example(x_test[std::size_t(i)], t_test[std::size_t(i)], nullptr, nullptr, true);
        });
        const double test_loss =
            test_losses.empty() ? 0.0 : std::accumulate(test_losses.begin(), test_losses.end(), 0.0) / double(test_losses.size());
        result.train_loss.push_back(epoch_loss);
        result.test_loss.push_back(test_loss);
        if (on_epoch) on_epoch(epoch, epoch_loss, test_loss);
    }
    result.ae = std::move(ae);
    return result;
}

Mlp<float> interp_latent(const Autoencoder &ae, std::span<const double> za, std::span<const double> zb, double t) {
    if (za.size() != zb.size()) throw ShapeMismatch("latent codes differ in length");
    std::vector<double> z(za.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1 - t) * za[i] + t * zb[i];
    return ae.decode(z);
}

PhongFitObjective PhongFitObjective::sample(const Brdf &gt, const PhongFitConfig &cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("fit needs at least one sample");
    std::mt19937_64 rng(cfg.seed);
    const auto samples = sample_batch(gt, std::size_t(cfg.samples), SamplingMode::Adaptive, false, rng);
    PhongFitObjective obj;
    for (const auto &s : samples) {
        obj.cos_theta_h.push_back(normalize(s.wi + s.wo).z);
        obj.log_f.push_back(std::log(std::max(s.f_true.mean(), 1e-12)));
    }
    return obj;
}

double PhongFitObjective::operator()(double exponent, double ws) const {
    const double log_diffuse = ws < 1 ? std::log((1 - ws) * kInvPi) : -std::numeric_limits<double>::infinity();
    const double log_spec_scale =
        ws > 0 ? std::log(ws * (exponent + 8) / (8 * kPi)) : -std::numeric_limits<double>::infinity();
    std::vector<double> r(log_f.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = log_f[i] - log_add_exp(log_diffuse, log_spec_scale + exponent * std::log(cos_theta_h[i]));
    std::vector<double> tmp = r;
    auto mid = tmp.begin() + std::ptrdiff_t(tmp.size() / 2);
    std::nth_element(tmp.begin(), mid, tmp.end());
    const double median = *mid;
    double sum = 0;
    for (double v : r) sum += std::abs(v - median);
    return sum / double(r.size());
}

PhongSamplingParams fit_phong_oracle(const Brdf &gt, const PhongFitConfig &cfg) {
    if (cfg.grid_exponents < 2 || cfg.grid_weights < 2 || !(cfg.max_exponent > 1))
        throw std::invalid_argument("fit grid needs at least 2 points per axis and max exponent > 1");
    const PhongFitObjective obj = PhongFitObjective::sample(gt, cfg);
    const double u_max = std::log(cfg.max_exponent);
    const double du = u_max / (cfg.grid_exponents - 1);
    const double dw = 1.0 / (cfg.grid_weights - 1);

    double best_u = 0, best_w = 0, best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < cfg.grid_weights; ++j)
        for (int i = 0; i < cfg.grid_exponents; ++i) {
            const double u = i * du, w = j * dw;
            const double v = obj(std::exp(u), w);
            if (v < best) {
                best = v;
                best_u = u;
                best_w = w;
            }
        }

    // compass search
    double su = du / 2, sw = dw / 2;
    for (int iter = 0; iter < 400 && (su > 1e-5 || sw > 1e-6); ++iter) {
        bool improved = false;
        const double cand[4][2] = {{best_u + su, best_w}, {best_u - su, best_w}, {best_u, best_w + sw}, {best_u, best_w - sw}};
        for (const auto &c : cand) {
            const double u = std::clamp(c[0], 0.0, u_max), w = std::clamp(c[1], 0.0, 1.0);
            const double v = obj(std::exp(u), w);
            if (v < best) {
                best = v;
                best_u = u;
                best_w = w;
                improved = true;
            }
        }
        if (!improved) {
            su /= 2;
            sw /= 2;
        }
    }
    return {std::exp(best_u), best_w};
}

std::array<double, 2> phong_to_target(const PhongSamplingParams &p) {
    constexpr double kEdge = 2.5e-3;
    const double ws = std::clamp(p.ws, kMinSpecularWeight, kMaxSpecularWeight);
    const double s = std::clamp((ws - kMinSpecularWeight) / (kMaxSpecularWeight - kMinSpecularWeight), kEdge, 1 - kEdge);
    return {std::log(std::max(p.exponent, 1e-3)), std::log(s / (1 - s))};
}

PhongSamplingParams target_to_phong(double log_exponent, double weight_logit) {
    if (!std::isfinite(log_exponent)) log_exponent = 0;
    if (std::isnan(weight_logit)) weight_logit = 0;
    const double n = std::exp(std::clamp(log_exponent, -20.0, 20.0));
    const double ws = std::clamp(kMinSpecularWeight + (kMaxSpecularWeight - kMinSpecularWeight) * sigmoid(weight_logit),
                                 kMinSpecularWeight, kMaxSpecularWeight);
    return {n, ws};
}

Predictor::Predictor(Mlp<double> net) : net_(std::move(net)) {
    if (net_.shape().output_size() != 2) throw ShapeMismatch("predictor must have 2 outputs");
}

PhongSamplingParams Predictor::predict(std::span<const double> z) const {
    if (z.size() != std::size_t(net_.shape().input_size())) throw ShapeMismatch("latent width mismatch");
    const auto o = net_.forward(z);
    return target_to_phong(o[0], o[1]);
}

PhongSamplingParams predict_params(const Predictor &p, std::span<const double> z) { return p.predict(z); }

PredictorResult train_predictor(std::span<const LatentCode> latents, std::span<const PhongSamplingParams> labels,
                                const PredictorConfig &cfg) {
    if (latents.size() != labels.size()) throw std::invalid_argument("latents and labels differ in count");
    if (latents.size() < 2) throw std::invalid_argument("predictor training needs at least 2 examples");
    if (cfg.steps < 1) throw std::invalid_argument("steps must be >= 1");
    const std::size_t dim = latents.front().size(), m = latents.size();
    for (const auto &z : latents)
        if (z.size() != dim || !all_finite(z)) throw ShapeMismatch("latent codes must share a width and be finite");

    std::vector<double> mu(dim, 0.0), sigma(dim, 0.0);
    for (const auto &z : latents)
        for (std::size_t j = 0; j < dim; ++j) mu[j] += z[j] / double(m);
    for (const auto &z : latents)
        for (std::size_t j = 0; j < dim; ++j) sigma[j] += (z[j] - mu[j]) * (z[j] - mu[j]) / double(m);
    for (double &s : sigma) s = s > 1e-16 ? std::sqrt(s) : 1.0;

    std::vector<std::vector<double>> x(m, std::vector<double>(dim));
    std::vector<std::array<double, 2>> t(m);
    std::array<double, 2> t_mean{0, 0};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < dim; ++j) x[i][j] = (latents[i][j] - mu[j]) / sigma[j];
        t[i] = phong_to_target(labels[i]);
        t_mean[0] += t[i][0] / double(m);
        t_mean[1] += t[i][1] / double(m);
    }

    MlpShape shape{{int(dim)}, OutputActivation::Linear};
    for (int h : cfg.hidden) shape.dims.push_back(h);
    shape.dims.push_back(2);
    Mlp<double> net(shape);
    net.init_glorot(cfg.seed);
    const int last = shape.layer_count() - 1;
    net.params()[shape.bias_offset(last)] = t_mean[0];
    net.params()[shape.bias_offset(last) + 1] = t_mean[1];

    PredictorResult result;
    AdamState adam(net.param_count(), cfg.adam);
    MlpWorkspace<double> ws(shape);
    std::vector<double> grad(net.param_count());
    for (int step = 0; step < cfg.steps; ++step) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto o = forward<double>(shape, net.params(), x[i], ws);
            double up[2];
            for (int k = 0; k < 2; ++k) {
                const double d = o[std::size_t(k)] - t[i][std::size_t(k)];
                loss += d * d / double(2 * m);
                up[k] = d / double(m);
            }
            backward<double>(shape, net.params(), ws, up, {}, grad);
        }
        if (!std::isfinite(loss)) throw NonFiniteLoss("predictor loss is not finite");
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += cfg.weight_decay * net.params()[j];
        result.loss.push_back(loss);
        adam_step<double>(net.params(), grad, adam);
    }

    // Fold the input standardisation into the first layer.
    auto p = net.params();
    const int h0 = shape.dims[1];
    for (int o = 0; o < h0; ++o) {
        double shift = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            double &w = p[shape.weight_offset(0) + std::size_t(o) * dim + j];
            w /= sigma[j];
            shift += w * mu[j];
        }
        p[shape.bias_offset(0) + std::size_t(o)] -= shift;
    }
    result.predictor = Predictor(std::move(net));
    return result;
}

namespace {

void save_container(const std::filesystem::path &path, std::string_view magic, std::span<const Mlp<float>> nets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path.string());
    write_mlp_container(out, magic, nets);
    if (!out) throw IOError("write failed: " + path.string());
}

std::vector<Mlp<float>> load_container(const std::filesystem::path &path, std::string_view magic,
                                       std::span<const OutputActivation> acts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path.string());
    return read_mlp_container(in, magic, acts);
}

}  // namespace

void save_autoencoder(const std::filesystem::path &path, const Autoencoder &ae) {
    const Mlp<float> nets[2] = {ae.encoder().cast<float>(), ae.decoder().cast<float>()};
    save_container(path, "NBAE", nets);
}

Autoencoder load_autoencoder(const std::filesystem::path &path) {
    const OutputActivation acts[2] = {OutputActivation::Linear, OutputActivation::Linear};
    auto nets = load_container(path, "NBAE", acts);
    return Autoencoder(nets[0].cast<double>(), nets[1].cast<double>());
}

void save_predictor(const std::filesystem::path &path, const Predictor &p) {
    const Mlp<float> net = p.net().cast<float>();
    save_container(path, "NBPR", {&net, 1});
}

Predictor load_predictor(const std::filesystem::path &path) {
    const OutputActivation act = OutputActivation::Linear;
    return Predictor(load_container(path, "NBPR", {&act, 1}).front().cast<double>());
}

void save_latents(const std::filesystem::path &path, std::span<const LatentCode> codes) {
    const std::uint32_t width = codes.empty() ? 0 : std::uint32_t(codes.front().size());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path.string());
    out.write("NBLT", 4);
    detail::write_le(out, kContainerVersion);
    detail::write_le(out, std::uint32_t(codes.size()));
    detail::write_le(out, width);
    for (const auto &z : codes) {
        if (z.size() != width) throw ShapeMismatch("latent codes must share a width");
        const std::vector<float> f(z.begin(), z.end());
        detail::write_le(out, std::span<const float>(f));
    }
    if (!out) throw IOError("write failed: " + path.string());
}

std::vector<LatentCode> load_latents(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path.string());
    char tag[4];
    std::uint32_t version = 0, count = 0, width = 0;
    if (!in.read(tag, 4) || !detail::read_le(in, version) || !detail::read_le(in, count) || !detail::read_le(in, width))
        throw IOError("truncated latent file: " + path.string());
    if (std::string_view(tag, 4) != "NBLT") throw FormatError("bad magic in " + path.string());
    if (version != kContainerVersion) throw FormatError("unsupported latent file version");
    if (width > (1u << 16) || count > (1u << 24)) throw FormatError("implausible latent file dimensions");
    std::vector<LatentCode> codes;
    std::vector<float> f(width);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!detail::read_le(in, std::span<float>(f))) throw IOError("truncated latent file: " + path.string());
        codes.emplace_back(f.begin(), f.end());
    }
    return codes;
}

void write_latent_csv(std::ostream &os, std::span<const std::string> names, std::span<const LatentCode> codes) {
    if (names.size() != codes.size()) throw std::invalid_argument("one name per latent code required");
    const std::size_t width = codes.empty() ? std::size_t(kLatentSize) : codes.front().size();
    const auto old_precision = os.precision(17);
    os << "material";
    for (std::size_t j = 0; j < width; ++j) os << ",z" << j;
    os << '\n';
    for (std::size_t i = 0; i < codes.size(); ++i) {
        os << names[i];
        for (double v : codes[i]) os << ',' << v;
        os << '\n';
    }
    os.precision(old_precision);
}

}  // namespace nbrdf
