// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace nbrdf {

class ShapeMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Activation of the final layer. Hidden layers always use ReLU.
enum class OutputActivation : std::uint8_t { Exp, Linear };

/// Layer widths of a dense network. Parameters are stored flat, layer by
/// layer: the d_out x d_in row-major weight matrix followed by d_out biases.
struct MlpShape {
    std::vector<int> dims;
    OutputActivation output = OutputActivation::Exp;

    int layer_count() const { return int(dims.size()) - 1; }
    int input_size() const { return dims.front(); }
    int output_size() const { return dims.back(); }
    std::size_t param_count() const;
    std::size_t weight_offset(int layer) const;
    std::size_t bias_offset(int layer) const { return weight_offset(layer) + std::size_t(dims[layer]) * dims[layer + 1]; }
    std::size_t activation_count() const;
    int max_width() const;

    /// Throws ShapeMismatch unless there are >= 2 positive widths.
    void validate() const;
    bool operator==(const MlpShape &) const = default;
};

/// Per-thread scratch for forward/backward; holds every layer's output.
template <std::floating_point T>
class MlpWorkspace {
  public:
    MlpWorkspace() = default;
    explicit MlpWorkspace(const MlpShape &shape);

    std::vector<int> dims;
    std::vector<T> values;
    std::vector<std::size_t> offsets;
    std::vector<T> delta, delta_prev;
};

/// Evaluates the network. `params` may come from anywhere (for example the
/// output of another network). Returns a view into `ws`.
template <std::floating_point T>
std::span<const T> forward(const MlpShape &shape, std::span<const T> params, std::span<const T> input,
                           MlpWorkspace<T> &ws);

/// Reverse pass for the most recent `forward` on `ws`. Adds parameter
/// gradients into `param_grad` (skipped when empty) and writes the input
/// gradient into `input_grad` (skipped when empty).
template <std::floating_point T>
void backward(const MlpShape &shape, std::span<const T> params, MlpWorkspace<T> &ws, std::span<const T> upstream,
              std::span<T> input_grad, std::span<T> param_grad);

template <std::floating_point T>
class Mlp {
  public:
    Mlp() = default;
    explicit Mlp(MlpShape shape);
    Mlp(MlpShape shape, std::vector<T> params);

    const MlpShape &shape() const { return shape_; }
    std::span<T> params() { return params_; }
    std::span<const T> params() const { return params_; }
    std::size_t param_count() const { return params_.size(); }

    /// Uniform Glorot init of weights, zero biases.
    void init_glorot(std::uint64_t seed);

    std::vector<T> forward(std::span<const T> input) const;
    std::span<const T> forward(std::span<const T> input, MlpWorkspace<T> &ws) const {
        return nbrdf::forward<T>(shape_, params_, input, ws);
    }

    template <std::floating_point U>
    Mlp<U> cast() const {
        return Mlp<U>(shape_, std::vector<U>(params_.begin(), params_.end()));
    }

    bool operator==(const Mlp &) const = default;

  private:
    MlpShape shape_;
    std::vector<T> params_;
};

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class AdamState {
  public:
    AdamState() = default;
    AdamState(std::size_t param_count, AdamConfig config);

    const AdamConfig &config() const { return config_; }
    AdamConfig &config() { return config_; }
    std::int64_t step_count() const { return step_; }
    std::span<const double> first_moment() const { return m_; }
    std::span<const double> second_moment() const { return v_; }

    template <std::floating_point T>
    friend void adam_step(std::span<T> params, std::span<const double> grad, AdamState &state);

  private:
    AdamConfig config_;
    std::vector<double> m_, v_;
    std::int64_t step_ = 0;
};

/// One bias-corrected Adam update of `params` in place.
template <std::floating_point T>
void adam_step(std::span<T> params, std::span<const double> grad, AdamState &state);

inline constexpr std::uint32_t kContainerVersion = 1;

/// Container: 4-byte magic, u32 version, then per network a u32 count of
/// layer widths, the widths as u32, and the parameters as little-endian f32
/// in the flat layout described on MlpShape.
void write_mlp_container(std::ostream &os, std::string_view magic, std::span<const Mlp<float>> nets);
std::vector<Mlp<float>> read_mlp_container(std::istream &is, std::string_view magic,
                                           std::span<const OutputActivation> activations);

/// NBRD file: a container with magic "NBRD" holding one exp-output network.
void write_nbrd(std::ostream &os, const Mlp<float> &net);
Mlp<float> read_nbrd(std::istream &is);
void save_nbrd(const std::filesystem::path &path, const Mlp<float> &net);
Mlp<float> load_nbrd(const std::filesystem::path &path);

}  // namespace nbrdf
