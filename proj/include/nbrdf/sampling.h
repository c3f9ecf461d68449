// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/coords.h>

namespace nbrdf {

inline constexpr double kMinSpecularWeight = 1e-3;
inline constexpr double kMaxSpecularWeight = 1 - 1e-3;

/// Two-parameter Blinn-Phong sampling distribution: lobe exponent and the
/// probability of drawing from the specular lobe rather than the cosine lobe.
struct PhongSamplingParams {
    double exponent = 1;
    double ws = 0.5;

    /// Exponent >= 0 and ws within [kMinSpecularWeight, kMaxSpecularWeight].
    PhongSamplingParams clamped() const;
    bool valid() const;
};

struct DirectionSample {
    Direction wi;
    double pdf = 0;
};

DirectionSample uniform_hemisphere(double u1, double u2);
inline constexpr double kUniformHemispherePdf = 1 / kTwoPi;

DirectionSample cosine_hemisphere(double u1, double u2);

/// Half vector with pdf (n+1)/(2 pi) cos^n(theta_h) per solid angle:
/// cos(theta_h) = u1^(1/(n+1)), phi_h = 2 pi u2.
Vec3 sample_blinn_half_vector(double exponent, double u1, double u2);

/// Specular branch only. The half vector is drawn as above and wo is
/// reflected about it (Jacobian 1 / (4 |wo.h|)). A reflection that lands
/// below the horizon is mirrored through the tangent plane, so the returned
/// pdf is the lobe density folded onto the upper hemisphere.
DirectionSample phong_specular_sample(double exponent, const Direction &wo, double u1, double u2);
double phong_specular_pdf(double exponent, const Direction &wo, const Direction &wi);

/// Mixture sampling. u1 first selects the lobe (specular when u1 < ws) and
/// is then rescaled to [0, 1) for the chosen branch. The returned pdf is
/// phong_pdf of the returned direction.
DirectionSample phong_sample(const PhongSamplingParams &p, const Direction &wo, double u1, double u2);

/// (1 - ws) cos(theta_i) / pi + ws * folded specular lobe density; zero
/// below the horizon. ws is capped at kMaxSpecularWeight so the cosine lobe
/// always covers the whole hemisphere.
double phong_pdf(const PhongSamplingParams &p, const Direction &wo, const Direction &wi);

}  // namespace nbrdf
