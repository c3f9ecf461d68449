// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/nn.h>

#include <nbrdf/brdf_data.h>

#include "binary_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

namespace nbrdf {

std::size_t MlpShape::param_count() const {
    std::size_t n = 0;
    for (int l = 0; l < layer_count(); ++l) n += std::size_t(dims[l]) * dims[l + 1] + dims[l + 1];
    return n;
}

std::size_t MlpShape::weight_offset(int layer) const {
    std::size_t n = 0;
    for (int l = 0; l < layer; ++l) n += std::size_t(dims[l]) * dims[l + 1] + dims[l + 1];
    return n;
}

std::size_t MlpShape::activation_count() const {
    std::size_t n = 0;
    for (int d : dims) n += std::size_t(d);
    return n;
}

int MlpShape::max_width() const { return *std::max_element(dims.begin(), dims.end()); }

void MlpShape::validate() const {
    if (dims.size() < 2) throw ShapeMismatch("network needs at least an input and an output width");
    for (int d : dims)
        if (d <= 0) throw ShapeMismatch("layer widths must be positive");
}

template <std::floating_point T>
MlpWorkspace<T>::MlpWorkspace(const MlpShape &shape)
    : dims(shape.dims), values(shape.activation_count()), offsets(shape.dims.size()), delta(std::size_t(shape.max_width())),
      delta_prev(std::size_t(shape.max_width())) {
    std::size_t off = 0;
    for (std::size_t l = 0; l < shape.dims.size(); ++l) {
        offsets[l] = off;
        off += std::size_t(shape.dims[l]);
    }
}

template <std::floating_point T>
std::span<const T> forward(const MlpShape &shape, std::span<const T> params, std::span<const T> input,
                           MlpWorkspace<T> &ws) {
    if (input.size() != std::size_t(shape.input_size()))
        throw ShapeMismatch("input width " + std::to_string(input.size()) + " != " +
                            std::to_string(shape.input_size()));
    if (params.size() != shape.param_count()) throw ShapeMismatch("parameter count does not match network shape");
    if (ws.dims != shape.dims) ws = MlpWorkspace<T>(shape);

    std::copy(input.begin(), input.end(), ws.values.begin());
    const int layers = shape.layer_count();
    for (int l = 0; l < layers; ++l) {
        const int din = shape.dims[l], dout = shape.dims[l + 1];
        const T *in = ws.values.data() + ws.offsets[l];
        T *out = ws.values.data() + ws.offsets[l + 1];
        const T *w = params.data() + shape.weight_offset(l);
        const T *b = w + std::size_t(din) * dout;
        const bool last = l == layers - 1;
        for (int o = 0; o < dout; ++o) {
            const T *row = w + std::size_t(o) * din;
            T z = b[o];
            for (int i = 0; i < din; ++i) z += row[i] * in[i];
            if (!last)
                out[o] = z > T(0) ? z : T(0);
            else
                out[o] = shape.output == OutputActivation::Exp ? std::exp(z) : z;
        }
    }
    return {ws.values.data() + ws.offsets.back(), std::size_t(shape.output_size())};
}

template <std::floating_point T>
void backward(const MlpShape &shape, std::span<const T> params, MlpWorkspace<T> &ws, std::span<const T> upstream,
              std::span<T> input_grad, std::span<T> param_grad) {
    const int layers = shape.layer_count();
    if (upstream.size() != std::size_t(shape.output_size())) throw ShapeMismatch("upstream gradient width mismatch");
    if (!param_grad.empty() && param_grad.size() != shape.param_count())
        throw ShapeMismatch("parameter gradient size mismatch");
    if (!input_grad.empty() && input_grad.size() != std::size_t(shape.input_size()))
        throw ShapeMismatch("input gradient size mismatch");

    T *delta = ws.delta.data();
    T *prev = ws.delta_prev.data();
    const T *out = ws.values.data() + ws.offsets.back();
    for (int o = 0; o < shape.output_size(); ++o)
        delta[o] = shape.output == OutputActivation::Exp && upstream[o] != T(0) ? upstream[o] * out[o] : upstream[o];

    for (int l = layers - 1; l >= 0; --l) {
        const int din = shape.dims[l], dout = shape.dims[l + 1];
        const T *in = ws.values.data() + ws.offsets[l];
        const std::size_t woff = shape.weight_offset(l);
        const T *w = params.data() + woff;

        if (!param_grad.empty()) {
            T *gw = param_grad.data() + woff;
            T *gb = gw + std::size_t(din) * dout;
            for (int o = 0; o < dout; ++o) {
                const T d = delta[o];
                if (d == T(0)) continue;
                T *grow = gw + std::size_t(o) * din;
                for (int i = 0; i < din; ++i) grow[i] += d * in[i];
                gb[o] += d;
            }
        }

        if (l == 0 && input_grad.empty()) break;
        std::fill(prev, prev + din, T(0));
        for (int o = 0; o < dout; ++o) {
            const T d = delta[o];
            if (d == T(0)) continue;
            const T *row = w + std::size_t(o) * din;
            for (int i = 0; i < din; ++i) prev[i] += row[i] * d;
        }
        if (l == 0) {
            std::copy(prev, prev + din, input_grad.begin());
            break;
        }
        // ReLU: subgradient 0 at the kink
        for (int i = 0; i < din; ++i)
            if (!(in[i] > T(0))) prev[i] = T(0);
        std::swap(delta, prev);
    }
}

template <std::floating_point T>
Mlp<T>::Mlp(MlpShape shape) : shape_(std::move(shape)) {
    shape_.validate();
    params_.assign(shape_.param_count(), T(0));
}

template <std::floating_point T>
Mlp<T>::Mlp(MlpShape shape, std::vector<T> params) : shape_(std::move(shape)), params_(std::move(params)) {
    shape_.validate();
    if (params_.size() != shape_.param_count())
        throw ShapeMismatch("expected " + std::to_string(shape_.param_count()) + " parameters, got " +
                            std::to_string(params_.size()));
}

template <std::floating_point T>
void Mlp<T>::init_glorot(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int l = 0; l < shape_.layer_count(); ++l) {
        const int din = shape_.dims[l], dout = shape_.dims[l + 1];
        const double limit = std::sqrt(6.0 / double(din + dout));
        std::uniform_real_distribution<double> dist(-limit, limit);
        T *w = params_.data() + shape_.weight_offset(l);
        for (std::size_t i = 0; i < std::size_t(din) * dout; ++i) w[i] = T(dist(rng));
        std::fill(w + std::size_t(din) * dout, w + std::size_t(din) * dout + dout, T(0));
    }
}

template <std::floating_point T>
std::vector<T> Mlp<T>::forward(std::span<const T> input) const {
    MlpWorkspace<T> ws(shape_);
    auto out = nbrdf::forward<T>(shape_, params_, input, ws);
    return {out.begin(), out.end()};
}

AdamState::AdamState(std::size_t param_count, AdamConfig config)
    : config_(config), m_(param_count, 0.0), v_(param_count, 0.0) {}

template <std::floating_point T>
void adam_step(std::span<T> params, std::span<const double> grad, AdamState &s) {
    if (params.size() != grad.size() || params.size() != s.m_.size())
        throw ShapeMismatch("adam_step: parameter, gradient and state sizes differ");
    const AdamConfig &c = s.config_;
    ++s.step_;
    const double bc1 = 1 - std::pow(c.beta1, double(s.step_));
    const double bc2 = 1 - std::pow(c.beta2, double(s.step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i];
        s.m_[i] = c.beta1 * s.m_[i] + (1 - c.beta1) * g;
        s.v_[i] = c.beta2 * s.v_[i] + (1 - c.beta2) * g * g;
        const double mhat = s.m_[i] / bc1;
        const double vhat = s.v_[i] / bc2;
        params[i] = T(double(params[i]) - c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon));
    }
}

void write_mlp_container(std::ostream &os, std::string_view magic, std::span<const Mlp<float>> nets) {
    if (magic.size() != 4) throw std::invalid_argument("container magic must be 4 bytes");
    os.write(magic.data(), 4);
    detail::write_le(os, kContainerVersion);
    for (const auto &net : nets) {
        const auto &dims = net.shape().dims;
        detail::write_le(os, std::uint32_t(dims.size()));
        for (int d : dims) detail::write_le(os, std::uint32_t(d));
        detail::write_le(os, net.params());
    }
}

std::vector<Mlp<float>> read_mlp_container(std::istream &is, std::string_view magic,
                                           std::span<const OutputActivation> activations) {
    char tag[4];
    if (!is.read(tag, 4)) throw IOError("truncated container header");
    if (std::string_view(tag, 4) != magic)
        throw FormatError("bad magic '" + std::string(tag, 4) + "', expected '" + std::string(magic) + "'");
    std::uint32_t version = 0;
    if (!detail::read_le(is, version)) throw IOError("truncated container header");
    if (version != kContainerVersion) throw FormatError("unsupported container version " + std::to_string(version));

    std::vector<Mlp<float>> nets;
    for (OutputActivation act : activations) {
        std::uint32_t count = 0;
        if (!detail::read_le(is, count)) throw IOError("truncated network header");
        if (count < 2 || count > 64) throw FormatError("implausible layer count " + std::to_string(count));
        MlpShape shape;
        shape.output = act;
        for (std::uint32_t i = 0; i < count; ++i) {
            std::uint32_t d = 0;
            if (!detail::read_le(is, d)) throw IOError("truncated layer widths");
            if (d == 0 || d > (1u << 20)) throw FormatError("implausible layer width " + std::to_string(d));
            shape.dims.push_back(int(d));
        }
        std::vector<float> params(shape.param_count());
        if (!detail::read_le(is, std::span<float>(params))) throw IOError("truncated network parameters");
        nets.emplace_back(std::move(shape), std::move(params));
    }
    return nets;
}

void write_nbrd(std::ostream &os, const Mlp<float> &net) { write_mlp_container(os, "NBRD", {&net, 1}); }

Mlp<float> read_nbrd(std::istream &is) {
    const OutputActivation act = OutputActivation::Exp;
    return std::move(read_mlp_container(is, "NBRD", {&act, 1}).front());
}

void save_nbrd(const std::filesystem::path &path, const Mlp<float> &net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path.string());
    write_nbrd(out, net);
    if (!out) throw IOError("write failed: " + path.string());
}

Mlp<float> load_nbrd(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path.string());
    return read_nbrd(in);
}

template class MlpWorkspace<float>;
template class MlpWorkspace<double>;
template class Mlp<float>;
template class Mlp<double>;
template std::span<const float> forward(const MlpShape &, std::span<const float>, std::span<const float>,
                                        MlpWorkspace<float> &);
template std::span<const double> forward(const MlpShape &, std::span<const double>, std::span<const double>,
                                         MlpWorkspace<double> &);
template void backward(const MlpShape &, std::span<const float>, MlpWorkspace<float> &, std::span<const float>,
                       std::span<float>, std::span<float>);
template void backward(const MlpShape &, std::span<const double>, MlpWorkspace<double> &, std::span<const double>,
                       std::span<double>, std::span<double>);
template void adam_step(std::span<float>, std::span<const double>, AdamState &);
template void adam_step(std::span<double>, std::span<const double>, AdamState &);

}  // namespace nbrdf
