// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/image.h>

#include <nbrdf/brdf_data.h>

#include "binary_io.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace nbrdf {

double tone_map_value(double x, double gamma, double floor) {
    return std::min(1.0, std::pow(std::max(x, floor), 1 / gamma));
}

double tone_map_derivative(double x, double gamma, double floor) {
    if (x < floor) return 0;
    const double y = std::pow(x, 1 / gamma);
    if (y >= 1) return 0;
    return y / (gamma * x);
}

Image tone_map(const Image &hdr, double gamma, double floor) {
    Image out(hdr.width(), hdr.height());
    auto src = hdr.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = tone_map_value(src[i], gamma, floor);
    return out;
}

void write_pfm(const std::filesystem::path &path, const Image &img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path.string());
    out << "PF\n" << img.width() << ' ' << img.height() << "\n-1.0\n";
    std::vector<float> row(std::size_t(img.width()) * 3);
    for (int y = img.height() - 1; y >= 0; --y) {
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c) row[std::size_t(x) * 3 + c] = float(img.at(x, y, c));
        detail::write_le(out, std::span<const float>(row));
    }
    if (!out) throw IOError("write failed: " + path.string());
}

Image read_pfm(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path.string());
    std::string magic;
    int width = 0, height = 0;
    double scale = 0;
    in >> magic >> width >> height >> scale;
    if (!in || (magic != "PF" && magic != "Pf")) throw FormatError("not a PFM file: " + path.string());
    if (width <= 0 || height <= 0 || scale == 0) throw FormatError("bad PFM header: " + path.string());
    in.get();  // single whitespace after the scale

    const int channels = magic == "PF" ? 3 : 1;
    const bool little = scale < 0;
    Image img(width, height);
    std::vector<float> row(std::size_t(width) * channels);
    for (int y = height - 1; y >= 0; --y) {
        if (!in.read(reinterpret_cast<char *>(row.data()), std::streamsize(row.size() * sizeof(float))))
            throw IOError("truncated PFM data: " + path.string());
        for (float &v : row) {
            const bool swap = little != (std::endian::native == std::endian::little);
            if (swap) {
                unsigned char b[4];
                std::memcpy(b, &v, 4);
                std::reverse(b, b + 4);
                std::memcpy(&v, b, 4);
            }
        }
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = row[std::size_t(x) * channels + (channels == 3 ? c : 0)];
    }
    return img;
}

void write_png(const std::filesystem::path &path, const Image &ldr) {
    std::unique_ptr<FILE, int (*)(FILE *)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!fp) throw IOError("cannot write " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IOError("libpng initialisation failed");
    }
    std::vector<unsigned char> bytes(ldr.pixel_count() * 3);
    auto src = ldr.data();
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = static_cast<unsigned char>(std::lround(std::clamp(src[i], 0.0, 1.0) * 255.0));
    std::vector<png_bytep> rows(std::size_t(ldr.height()));
    for (int y = 0; y < ldr.height(); ++y) rows[std::size_t(y)] = bytes.data() + std::size_t(y) * ldr.width() * 3;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IOError("PNG encoding failed: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(ldr.width()), png_uint_32(ldr.height()), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace nbrdf
