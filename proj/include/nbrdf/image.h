// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/brdf.h>

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace nbrdf {

/// Linear RGB image, row 0 at the top. Used for both HDR radiance and
/// tone-mapped values in [0, 1].
class Image {
  public:
    Image() = default;
    Image(int width, int height) : width_(width), height_(height), data_(std::size_t(width) * height * 3, 0.0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return std::size_t(width_) * height_; }

    double &at(int x, int y, int c) { return data_[(std::size_t(y) * width_ + x) * 3 + c]; }
    double at(int x, int y, int c) const { return data_[(std::size_t(y) * width_ + x) * 3 + c]; }
    Rgb pixel(int x, int y) const { return {at(x, y, 0), at(x, y, 1), at(x, y, 2)}; }
    void set_pixel(int x, int y, const Rgb &v) {
        for (int c = 0; c < 3; ++c) at(x, y, c) = v[c];
    }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool operator==(const Image &) const = default;

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

inline constexpr double kToneGamma = 2.2;
inline constexpr double kToneFloor = 1e-12;

/// clamp(max(x, floor)^(1/gamma), 0, 1)
double tone_map_value(double x, double gamma = kToneGamma, double floor = kToneFloor);
/// Derivative of tone_map_value; zero where either clamp is active.
double tone_map_derivative(double x, double gamma = kToneGamma, double floor = kToneFloor);
Image tone_map(const Image &hdr, double gamma = kToneGamma, double floor = kToneFloor);

/// Little-endian 32-bit colour PFM. Reading accepts either byte order and
/// greyscale ("Pf") files.
void write_pfm(const std::filesystem::path &path, const Image &img);
Image read_pfm(const std::filesystem::path &path);

/// 8-bit RGB PNG of values already in [0, 1] (no further encoding).
void write_png(const std::filesystem::path &path, const Image &ldr);

}  // namespace nbrdf
