// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/image.h>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbrdf {

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kMapeFloor = 1e-4;

struct SsimConfig {
    int window = 11;  // shrunk to the largest odd size that fits smaller images
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double data_range = 1;
};

/// Mean local SSIM over the positions where the whole window fits, averaged
/// over the three channels. Population (biased) local statistics.
double ssim(const Image &a, const Image &b, const SsimConfig &cfg = {});

double rmse(const Image &a, const Image &b);
double mae(const Image &a, const Image &b);
/// Mean |a - ref| / |ref| over entries with |ref| >= kMapeFloor, as a fraction.
/// Zero when no entry qualifies.
double mape(const Image &a, const Image &ref);
/// Peak 1. +infinity for identical images.
double psnr(const Image &a, const Image &b);

struct MetricSummary {
    double mean = 0;
    double stddev = 0;  // population standard deviation
    std::size_t count = 0;
};

class MetricReport {
  public:
    struct Row {
        std::string material;
        std::string metric;
        double value;
    };

    void add(std::string material, std::string metric, double value);
    /// ssim, rmse, mae, mape and psnr of `test` against `reference`.
    void add_all(const std::string &material, const Image &test, const Image &reference);

    const std::vector<Row> &rows() const { return rows_; }
    MetricSummary summary(const std::string &metric) const;
    std::vector<std::string> metrics() const;

    /// Header `material,metric,value`, one row per value, then one
    /// `mean` and `std` row per metric when more than one material is present.
    void write_csv(std::ostream &os, bool with_summary = true) const;

  private:
    std::vector<Row> rows_;
};

}  // namespace nbrdf
