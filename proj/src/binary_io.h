// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Little-endian scalar I/O shared by the binary formats.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>

namespace nbrdf::detail {

template <typename T>
T byteswap_if_big(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &v, sizeof(T));
        std::reverse(bytes, bytes + sizeof(T));
        std::memcpy(&v, bytes, sizeof(T));
    }
    return v;
}

template <typename T>
void write_le(std::ostream &os, T v) {
    v = byteswap_if_big(v);
    os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
void write_le(std::ostream &os, std::span<const T> values) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char *>(values.data()), std::streamsize(values.size_bytes()));
    } else {
        for (T v : values) write_le(os, v);
    }
}

/// Returns false on short read.
template <typename T>
bool read_le(std::istream &is, T &v) {
    if (!is.read(reinterpret_cast<char *>(&v), sizeof(T))) return false;
    v = byteswap_if_big(v);
    return true;
}

template <typename T>
bool read_le(std::istream &is, std::span<T> values) {
    if (!is.read(reinterpret_cast<char *>(values.data()), std::streamsize(values.size_bytes()))) return false;
    if constexpr (std::endian::native == std::endian::big) {
        for (T &v : values) v = byteswap_if_big(v);
    }
    return true;
}

}  // namespace nbrdf::detail
