// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/metrics.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

namespace nbrdf {

namespace {

void require_same_size(const Image &a, const Image &b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatch("image sizes differ: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
    if (a.pixel_count() == 0) throw DimensionMismatch("empty images");
}

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const int r = size / 2;
    double sum = 0;
    for (int i = 0; i < size; ++i) {
        k[std::size_t(i)] = std::exp(-double((i - r) * (i - r)) / (2 * sigma * sigma));
        sum += k[std::size_t(i)];
    }
    for (double &v : k) v /= sum;
    return k;
}

// Separable filtering keeping only positions where the window fits.
std::vector<double> filter_valid(const std::vector<double> &src, int w, int h, const std::vector<double> &k) {
    const int n = int(k.size());
    const int ow = w - n + 1, oh = h - n + 1;
    std::vector<double> rows(std::size_t(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += k[std::size_t(i)] * src[std::size_t(y) * w + x + i];
            rows[std::size_t(y) * ow + x] = s;
        }
    std::vector<double> out(std::size_t(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += k[std::size_t(i)] * rows[std::size_t(y + i) * ow + x];
            out[std::size_t(y) * ow + x] = s;
        }
    return out;
}

}  // namespace

double ssim(const Image &a, const Image &b, const SsimConfig &cfg) {
    require_same_size(a, b);
    int win = std::min({cfg.window, a.width(), a.height()});
    if (win % 2 == 0) --win;
    const auto k = gaussian_kernel(win, cfg.sigma);
    const double c1 = std::pow(cfg.k1 * cfg.data_range, 2);
    const double c2 = std::pow(cfg.k2 * cfg.data_range, 2);
    const int w = a.width(), h = a.height();

    double total = 0;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> x(a.pixel_count()), y(a.pixel_count()), xx(x.size()), yy(x.size()), xy(x.size());
        for (int py = 0; py < h; ++py)
            for (int px = 0; px < w; ++px) {
                const std::size_t i = std::size_t(py) * w + px;
                x[i] = a.at(px, py, c);
                y[i] = b.at(px, py, c);
                xx[i] = x[i] * x[i];
                yy[i] = y[i] * y[i];
                xy[i] = x[i] * y[i];
            }
        const auto mx = filter_valid(x, w, h, k), my = filter_valid(y, w, h, k);
        const auto mxx = filter_valid(xx, w, h, k), myy = filter_valid(yy, w, h, k), mxy = filter_valid(xy, w, h, k);
        double sum = 0;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            const double vx = mxx[i] - mx[i] * mx[i];
            const double vy = myy[i] - my[i] * my[i];
            const double cov = mxy[i] - mx[i] * my[i];
            sum += ((2 * mx[i] * my[i] + c1) * (2 * cov + c2)) /
                   ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
        }
        total += sum / double(mx.size());
    }
    return total / 3;
}

double rmse(const Image &a, const Image &b) {
    require_same_size(a, b);
    auto da = a.data(), db = b.data();
    double s = 0;
    for (std::size_t i = 0; i < da.size(); ++i) s += (da[i] - db[i]) * (da[i] - db[i]);
    return std::sqrt(s / double(da.size()));
}

double mae(const Image &a, const Image &b) {
    require_same_size(a, b);
    auto da = a.data(), db = b.data();
    double s = 0;
    for (std::size_t i = 0; i < da.size(); ++i) s += std::abs(da[i] - db[i]);
    return s / double(da.size());
}

double mape(const Image &a, const Image &ref) {
    require_same_size(a, ref);
    auto da = a.data(), dr = ref.data();
    double s = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        if (std::abs(dr[i]) < kMapeFloor) continue;
        s += std::abs(da[i] - dr[i]) / std::abs(dr[i]);
        ++n;
    }
    return n ? s / double(n) : 0.0;
}

double psnr(const Image &a, const Image &b) {
    const double e = rmse(a, b);
    if (e == 0) return std::numeric_limits<double>::infinity();
    return -20 * std::log10(e);
}

void MetricReport::add(std::string material, std::string metric, double value) {
    rows_.push_back({std::move(material), std::move(metric), value});
}

void MetricReport::add_all(const std::string &material, const Image &test, const Image &reference) {
    add(material, "ssim", ssim(test, reference));
    add(material, "rmse", rmse(test, reference));
    add(material, "mae", mae(test, reference));
    add(material, "mape", mape(test, reference));
    add(material, "psnr", psnr(test, reference));
}

std::vector<std::string> MetricReport::metrics() const {
    std::vector<std::string> names;
    for (const auto &r : rows_)
        if (std::find(names.begin(), names.end(), r.metric) == names.end()) names.push_back(r.metric);
    return names;
}

MetricSummary MetricReport::summary(const std::string &metric) const {
    MetricSummary s;
    double sum = 0, sum_sq = 0;
    for (const auto &r : rows_) {
        if (r.metric != metric) continue;
        sum += r.value;
        sum_sq += r.value * r.value;
        ++s.count;
    }
    if (s.count == 0) return s;
    s.mean = sum / double(s.count);
    s.stddev = std::sqrt(std::max(0.0, sum_sq / double(s.count) - s.mean * s.mean));
    return s;
}

void MetricReport::write_csv(std::ostream &os, bool with_summary) const {
    const auto old_precision = os.precision(10);
    os << "material,metric,value\n";
    for (const auto &r : rows_) os << r.material << ',' << r.metric << ',' << r.value << '\n';
    std::set<std::string> materials;
    for (const auto &r : rows_) materials.insert(r.material);
    if (with_summary && materials.size() > 1) {
        for (const auto &m : metrics()) {
            const auto s = summary(m);
            os << "mean," << m << ',' << s.mean << '\n';
            os << "std," << m << ',' << s.stddev << '\n';
        }
    }
    os.precision(old_precision);
}

}  // namespace nbrdf
