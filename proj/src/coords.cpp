// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/coords.h>

#include <algorithm>

namespace nbrdf {

namespace {

double safe_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

Vec3 rotate_z(const Vec3 &v, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {v.x * c - v.y * s, v.x * s + v.y * c, v.z};
}

Vec3 rotate_y(const Vec3 &v, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {v.x * c + v.z * s, v.y, -v.x * s + v.z * c};
}

}  // namespace

Frame Frame::from_normal(const Vec3 &n) {
    const double sign = std::copysign(1.0, n.z);
    const double a = -1.0 / (sign + n.z);
    const double b = n.x * n.y * a;
    return {{1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x}, {b, sign + n.y * n.y * a, -n.y}, n};
}

double wrap_two_pi(double phi) {
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0) phi += kTwoPi;
    // fmod can round up to exactly 2pi for tiny negative inputs
    if (phi >= kTwoPi) phi = 0;
    return phi;
}

RusinkiewiczCoords dirs_to_rusink(const Direction &wi, const Direction &wo) {
    const Vec3 sum = wi + wo;
    const double len = length(sum);
    if (!(len > 1e-12)) throw DegenerateInput("half vector undefined for opposite directions");
    const Vec3 h = sum / len;

    RusinkiewiczCoords c;
    c.theta_h = safe_acos(h.z);
    c.phi_h = wrap_two_pi(std::atan2(h.y, h.x));

    const Vec3 d = rotate_y(rotate_z(wi, -c.phi_h), -c.theta_h);
    c.theta_d = safe_acos(d.z);
    c.phi_d = wrap_two_pi(std::atan2(d.y, d.x));
    return c;
}

std::pair<Direction, Direction> rusink_to_dirs(const RusinkiewiczCoords &c) {
    const Vec3 h = spherical_direction(c.theta_h, c.phi_h);
    const Vec3 d = spherical_direction(c.theta_d, c.phi_d);
    const Vec3 wi = normalize(rotate_z(rotate_y(d, c.theta_h), c.phi_h));
    const Vec3 wo = normalize(2 * dot(wi, h) * h - wi);
    return {wi, wo};
}

std::array<double, 6> halfdiff_cartesian(const RusinkiewiczCoords &c) {
    const Vec3 h = spherical_direction(c.theta_h, c.phi_h);
    const Vec3 d = spherical_direction(c.theta_d, c.phi_d);
    return {h.x, h.y, h.z, d.x, d.y, d.z};
}

}  // namespace nbrdf
