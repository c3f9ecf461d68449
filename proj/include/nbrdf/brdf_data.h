// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/brdf.h>
#include <nbrdf/coords.h>

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nbrdf {

class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IOError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMerlThetaH = 90;
inline constexpr int kMerlThetaD = 90;
inline constexpr int kMerlPhiD = 180;
inline constexpr std::size_t kMerlChannelSize = std::size_t(kMerlThetaH) * kMerlThetaD * kMerlPhiD;
inline constexpr std::size_t kMerlValueCount = 3 * kMerlChannelSize;

/// Multipliers applied to stored values on read (standard MERL reader).
inline constexpr Rgb kMerlChannelScales{1.0 / 1500.0, 1.15 / 1500.0, 1.66 / 1500.0};

struct MerlIndex {
    int theta_h = 0;
    int theta_d = 0;
    int phi_d = 0;

    bool operator==(const MerlIndex &) const = default;
};

/// Nearest-lower grid cell of the MERL layout. theta_h uses the square-root
/// warp; phi_d is folded into [0, pi) by reciprocity.
MerlIndex merl_index(const RusinkiewiczCoords &c);

/// Angles of grid node (i_h, i_d, i_p); phi_h is 0.
RusinkiewiczCoords merl_node_coords(int i_h, int i_d, int i_p);

/// Dense 90 x 90 x 180 RGB reflectance grid in the MERL layout.
///
/// Evaluation is trilinear in index space: theta_h is interpolated in the
/// warped index coordinate sqrt(theta_h / (pi/2)) * 90, theta_d and phi_d
/// linearly, with phi_d periodic over [0, pi). Negative stored entries mark
/// missing measurements and evaluate as zero.
class TabulatedBrdf final : public Brdf {
  public:
    /// `raw` holds kMerlValueCount values in R, G, B block order.
    explicit TabulatedBrdf(std::vector<double> raw, Rgb channel_scales = kMerlChannelScales);

    static TabulatedBrdf load_merl(const std::filesystem::path &path);
    void save_merl(const std::filesystem::path &path) const;

    Rgb eval(const Direction &wi, const Direction &wo) const override;
    bool valid(const Direction &wi, const Direction &wo) const override;
    std::size_t memory_bytes() const override { return raw_.size() * sizeof(double); }

    Rgb eval_coords(const RusinkiewiczCoords &c) const;
    bool valid_coords(const RusinkiewiczCoords &c) const;

    /// Scaled node value with invalid entries clamped to zero.
    Rgb node(int i_h, int i_d, int i_p) const;
    double raw(int channel, int i_h, int i_d, int i_p) const {
        return raw_[std::size_t(channel) * kMerlChannelSize + offset(i_h, i_d, i_p)];
    }

    std::span<const double> raw_values() const { return raw_; }
    const Rgb &channel_scales() const { return scales_; }

  private:
    static std::size_t offset(int i_h, int i_d, int i_p) {
        return (std::size_t(i_h) * kMerlThetaD + std::size_t(i_d)) * kMerlPhiD + std::size_t(i_p);
    }

    struct Cell {
        int h[2], d[2], p[2];
        double fh, fd, fp;
    };
    static Cell locate(const RusinkiewiczCoords &c);

    std::vector<double> raw_;
    Rgb scales_;
};

struct LambertianParams {
    Rgb albedo{0.5};
};

/// kd / pi + ks * (n + 8) / (8 pi) * cos^n(theta_h)
struct PhongParams {
    Rgb kd{0.25};
    Rgb ks{0.25};
    double exponent = 100;

    /// Splits a total albedo into diffuse and specular parts with weight ws.
    static PhongParams from_weight(Rgb albedo, double exponent, double ws);
};

/// Anisotropic Ward: rd / pi + rs * exp(-tan^2(theta_h) (cos^2(phi_h)/ax^2 +
/// sin^2(phi_h)/ay^2)) / (4 pi ax ay sqrt(cos_i cos_o)).
struct WardParams {
    Rgb rd{0.2};
    Rgb rs{0.1};
    double alpha_x = 0.1;
    double alpha_y = 0.1;
};

/// Analytic BRDF used as ground truth where measured data is absent.
class AnalyticOracle final : public Brdf {
  public:
    using Params = std::variant<LambertianParams, PhongParams, WardParams>;

    explicit AnalyticOracle(Params params) : params_(params) {}

    static AnalyticOracle lambertian(double rho) { return AnalyticOracle(LambertianParams{Rgb(rho)}); }

    /// Parses "lambertian:rho=0.5", "phong:n=100,ws=0.7,albedo=0.8" (or
    /// kd=/ks= instead of albedo/ws), "ward:ax=0.1,ay=0.3,rd=0.2,rs=0.1".
    /// Colour values accept "v" or "r/g/b". Throws std::invalid_argument.
    static AnalyticOracle parse(std::string_view spec);
    std::string describe() const;

    Rgb eval(const Direction &wi, const Direction &wo) const override;
    std::size_t memory_bytes() const override;

    /// Same closed form without the horizon cut-off, so grid nodes whose
    /// directions dip below the horizon still receive a smooth value.
    Rgb eval_extended(const Direction &wi, const Direction &wo) const;

    bool anisotropic() const;
    const Params &params() const { return params_; }

  private:
    Params params_;
};

/// Fills the MERL grid with the oracle evaluated at node angles, stored so
/// that reading back with `scales` reproduces the oracle values.
TabulatedBrdf bake_oracle(const AnalyticOracle &oracle, Rgb scales = kMerlChannelScales);

}  // namespace nbrdf
