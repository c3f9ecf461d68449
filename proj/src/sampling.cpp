// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/sampling.h>

#include <algorithm>
#include <cmath>

namespace nbrdf {

namespace {

constexpr double kOneMinusEpsilon = 0x1.fffffffffffffp-1;

double sampling_weight(double ws) { return std::clamp(ws, 0.0, kMaxSpecularWeight); }

Vec3 reflect(const Vec3 &wo, const Vec3 &h) { return 2 * dot(wo, h) * h - wo; }

// Density of reflect(wo, h) over the full sphere of directions, with h drawn
// from the Blinn half-vector distribution on the upper hemisphere.
double reflected_lobe_density(double exponent, const Direction &wo, const Direction &w) {
    Vec3 sum = wo + w;
    const double len = length(sum);
    if (!(len > 1e-12)) return 0;
    Vec3 h = sum / len;
    if (h.z < 0) h = -h;
    const double cos_oh = std::abs(dot(wo, h));
    if (cos_oh <= 0) return 0;
    const double d = (exponent + 1) / kTwoPi * std::pow(h.z, exponent);
    return d / (4 * cos_oh);
}

}  // namespace

PhongSamplingParams PhongSamplingParams::clamped() const {
    return {std::max(0.0, std::isfinite(exponent) ? exponent : 0.0),
            std::clamp(std::isfinite(ws) ? ws : 0.5, kMinSpecularWeight, kMaxSpecularWeight)};
}

bool PhongSamplingParams::valid() const {
    return std::isfinite(exponent) && exponent >= 0 && std::isfinite(ws) && ws >= 0 && ws <= 1;
}

DirectionSample uniform_hemisphere(double u1, double u2) {
    const double z = u1;
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    const double phi = kTwoPi * u2;
    return {{r * std::cos(phi), r * std::sin(phi), z}, kUniformHemispherePdf};
}

DirectionSample cosine_hemisphere(double u1, double u2) {
    const double r = std::sqrt(u1);
    const double phi = kTwoPi * u2;
    const double z = std::sqrt(std::max(0.0, 1 - u1));
    return {{r * std::cos(phi), r * std::sin(phi), z}, z * kInvPi};
}

Vec3 sample_blinn_half_vector(double exponent, double u1, double u2) {
    const double cos_theta = std::pow(u1, 1 / (exponent + 1));
    const double sin_theta = std::sqrt(std::max(0.0, 1 - cos_theta * cos_theta));
    const double phi = kTwoPi * u2;
    return {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
}

double phong_specular_pdf(double exponent, const Direction &wo, const Direction &wi) {
    if (wi.z < 0) return 0;
    const Vec3 mirrored{wi.x, wi.y, -wi.z};
    return reflected_lobe_density(exponent, wo, wi) + reflected_lobe_density(exponent, wo, mirrored);
}

DirectionSample phong_specular_sample(double exponent, const Direction &wo, double u1, double u2) {
    const Vec3 h = sample_blinn_half_vector(exponent, u1, u2);
    Vec3 wi = normalize(reflect(wo, h));
    if (wi.z < 0) wi.z = -wi.z;
    return {wi, phong_specular_pdf(exponent, wo, wi)};
}

double phong_pdf(const PhongSamplingParams &p, const Direction &wo, const Direction &wi) {
    if (wi.z <= 0 || wo.z <= 0) return 0;
    const double ws = sampling_weight(p.ws);
    const double n = std::max(0.0, p.exponent);
    const double diffuse = wi.z * kInvPi;
    return (1 - ws) * diffuse + (ws > 0 ? ws * phong_specular_pdf(n, wo, wi) : 0.0);
}

DirectionSample phong_sample(const PhongSamplingParams &p, const Direction &wo, double u1, double u2) {
    const double ws = sampling_weight(p.ws);
    const double n = std::max(0.0, p.exponent);
    Direction wi;
    if (u1 < ws) {
        const double u = std::min(u1 / ws, kOneMinusEpsilon);
        wi = phong_specular_sample(n, wo, u, u2).wi;
    } else {
        const double u = std::min((u1 - ws) / (1 - ws), kOneMinusEpsilon);
        wi = cosine_hemisphere(u, u2).wi;
    }
    return {wi, phong_pdf(p, wo, wi)};
}

}  // namespace nbrdf
