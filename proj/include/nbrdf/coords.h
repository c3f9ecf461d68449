// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace nbrdf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;
inline constexpr double kTwoPi = 2 * std::numbers::pi;
inline constexpr double kInvPi = std::numbers::inv_pi;

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : x(x), y(y), z(z) {}

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }
constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(const Vec3 &v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3 &v) { return v / length(v); }

/// Unit direction in the local shading frame; z is the surface normal.
using Direction = Vec3;

inline Vec3 spherical_direction(double theta, double phi) {
    const double s = std::sin(theta);
    return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

/// Orthonormal tangent frame around a unit normal (Duff et al. branchless ONB).
struct Frame {
    Vec3 s, t, n;

    static Frame from_normal(const Vec3 &n);
    Vec3 to_local(const Vec3 &v) const { return {dot(v, s), dot(v, t), dot(v, n)}; }
    Vec3 to_world(const Vec3 &v) const { return s * v.x + t * v.y + n * v.z; }
};

/// Half/difference angles. theta_h, theta_d in [0, pi/2]; phi_d, phi_h in [0, 2pi).
struct RusinkiewiczCoords {
    double theta_h = 0;
    double theta_d = 0;
    double phi_d = 0;
    double phi_h = 0;
};

class DegenerateInput : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Convention: h = normalize(wi + wo); d is wi rotated by -phi_h about the
// normal (0,0,1) and then by -theta_h about the binormal (0,1,0).
RusinkiewiczCoords dirs_to_rusink(const Direction &wi, const Direction &wo);

/// Returns (wi, wo).
std::pair<Direction, Direction> rusink_to_dirs(const RusinkiewiczCoords &c);

/// Cartesian (h.x, h.y, h.z, d.x, d.y, d.z); the network input.
std::array<double, 6> halfdiff_cartesian(const RusinkiewiczCoords &c);

/// Wraps an angle into [0, 2pi).
double wrap_two_pi(double phi);

}  // namespace nbrdf
