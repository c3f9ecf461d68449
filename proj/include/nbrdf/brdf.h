// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/coords.h>

#include <cstddef>

namespace nbrdf {

struct Rgb {
    double r = 0, g = 0, b = 0;

    constexpr Rgb() = default;
    constexpr explicit Rgb(double v) : r(v), g(v), b(v) {}
    constexpr Rgb(double r, double g, double b) : r(r), g(g), b(b) {}

    constexpr double &operator[](int i) { return i == 0 ? r : (i == 1 ? g : b); }
    constexpr double operator[](int i) const { return i == 0 ? r : (i == 1 ? g : b); }

    constexpr Rgb operator+(const Rgb &o) const { return {r + o.r, g + o.g, b + o.b}; }
    constexpr Rgb operator-(const Rgb &o) const { return {r - o.r, g - o.g, b - o.b}; }
    constexpr Rgb operator*(const Rgb &o) const { return {r * o.r, g * o.g, b * o.b}; }
    constexpr Rgb operator*(double s) const { return {r * s, g * s, b * s}; }
    constexpr Rgb operator/(double s) const { return {r / s, g / s, b / s}; }
    constexpr Rgb &operator+=(const Rgb &o) {
        r += o.r;
        g += o.g;
        b += o.b;
        return *this;
    }
    constexpr double mean() const { return (r + g + b) / 3; }
    constexpr bool operator==(const Rgb &) const = default;
};

constexpr Rgb operator*(double s, const Rgb &c) { return c * s; }

/// Reflectance evaluator f_r(wi, wo) in 1/sr. Implementations are immutable
/// after construction and safe to evaluate concurrently.
class Brdf {
  public:
    virtual ~Brdf() = default;

    /// Zero when either direction is at or below the horizon.
    virtual Rgb eval(const Direction &wi, const Direction &wo) const = 0;

    /// False where the underlying data holds no usable measurement.
    virtual bool valid(const Direction & /*wi*/, const Direction & /*wo*/) const { return true; }

    /// Storage footprint of the representation in bytes.
    virtual std::size_t memory_bytes() const { return 0; }
};

}  // namespace nbrdf
