// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/brdf_data.h>

#include "binary_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nbrdf {

namespace {

int clamp_index(double u, int n) { return std::clamp(int(std::floor(u)), 0, n - 1); }

// Continuous index coordinates (node i sits at coordinate i).
double theta_h_coord(double theta_h) {
    if (theta_h <= 0) return 0;
    return std::sqrt(theta_h / kHalfPi) * kMerlThetaH;
}
double theta_d_coord(double theta_d) { return theta_d / kHalfPi * kMerlThetaD; }
double phi_d_coord(double phi_d) {
    phi_d = wrap_two_pi(phi_d);
    if (phi_d >= kPi) phi_d -= kPi;
    return phi_d / kPi * kMerlPhiD;
}

}  // namespace

MerlIndex merl_index(const RusinkiewiczCoords &c) {
    return {clamp_index(theta_h_coord(c.theta_h), kMerlThetaH), clamp_index(theta_d_coord(c.theta_d), kMerlThetaD),
            clamp_index(phi_d_coord(c.phi_d), kMerlPhiD)};
}

RusinkiewiczCoords merl_node_coords(int i_h, int i_d, int i_p) {
    const double th = double(i_h) / kMerlThetaH;
    return {th * th * kHalfPi, double(i_d) / kMerlThetaD * kHalfPi, double(i_p) / kMerlPhiD * kPi, 0.0};
}

TabulatedBrdf::TabulatedBrdf(std::vector<double> raw, Rgb channel_scales)
    : raw_(std::move(raw)), scales_(channel_scales) {
    if (raw_.size() != kMerlValueCount)
        throw FormatError("tabulated BRDF needs " + std::to_string(kMerlValueCount) + " values, got " +
                          std::to_string(raw_.size()));
}

TabulatedBrdf TabulatedBrdf::load_merl(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open MERL file: " + path.string());

    std::int32_t dims[3];
    for (auto &d : dims)
        if (!detail::read_le(in, d)) throw IOError("truncated MERL header: " + path.string());
    if (dims[0] != kMerlThetaH || dims[1] != kMerlThetaD || dims[2] != kMerlPhiD) {
        std::ostringstream msg;
        msg << "unexpected MERL dimensions (" << dims[0] << ", " << dims[1] << ", " << dims[2] << ") in "
            << path.string();
        throw FormatError(msg.str());
    }

    std::vector<double> raw(kMerlValueCount);
    if (!detail::read_le(in, std::span<double>(raw))) throw IOError("truncated MERL payload: " + path.string());
    return TabulatedBrdf(std::move(raw));
}

void TabulatedBrdf::save_merl(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write MERL file: " + path.string());
    for (std::int32_t d : {kMerlThetaH, kMerlThetaD, kMerlPhiD}) detail::write_le(out, d);
    detail::write_le(out, std::span<const double>(raw_));
    if (!out) throw IOError("write failed: " + path.string());
}

TabulatedBrdf::Cell TabulatedBrdf::locate(const RusinkiewiczCoords &c) {
    Cell cell{};
    const double uh = std::min(theta_h_coord(c.theta_h), double(kMerlThetaH - 1));
    const double ud = std::clamp(theta_d_coord(c.theta_d), 0.0, double(kMerlThetaD - 1));
    const double up = phi_d_coord(c.phi_d);

    cell.h[0] = clamp_index(uh, kMerlThetaH);
    cell.h[1] = std::min(cell.h[0] + 1, kMerlThetaH - 1);
    cell.fh = uh - cell.h[0];
    cell.d[0] = clamp_index(ud, kMerlThetaD);
    cell.d[1] = std::min(cell.d[0] + 1, kMerlThetaD - 1);
    cell.fd = ud - cell.d[0];
    cell.p[0] = clamp_index(up, kMerlPhiD);
    cell.p[1] = (cell.p[0] + 1) % kMerlPhiD;
    cell.fp = up - cell.p[0];
    return cell;
}

Rgb TabulatedBrdf::node(int i_h, int i_d, int i_p) const {
    Rgb v;
    for (int ch = 0; ch < 3; ++ch) v[ch] = std::max(0.0, raw(ch, i_h, i_d, i_p)) * scales_[ch];
    return v;
}

Rgb TabulatedBrdf::eval_coords(const RusinkiewiczCoords &c) const {
    const Cell cell = locate(c);
    Rgb result;
    for (int a = 0; a < 2; ++a) {
        const double wa = a ? cell.fh : 1 - cell.fh;
        for (int b = 0; b < 2; ++b) {
            const double wb = b ? cell.fd : 1 - cell.fd;
            for (int p = 0; p < 2; ++p) {
                const double w = wa * wb * (p ? cell.fp : 1 - cell.fp);
                if (w == 0) continue;
                result += node(cell.h[a], cell.d[b], cell.p[p]) * w;
            }
        }
    }
    return result;
}

bool TabulatedBrdf::valid_coords(const RusinkiewiczCoords &c) const {
    const Cell cell = locate(c);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int p = 0; p < 2; ++p)
                for (int ch = 0; ch < 3; ++ch) {
                    const double v = raw(ch, cell.h[a], cell.d[b], cell.p[p]);
                    if (!(v >= 0) || !std::isfinite(v)) return false;
                }
    return true;
}

Rgb TabulatedBrdf::eval(const Direction &wi, const Direction &wo) const {
    if (wi.z <= 0 || wo.z <= 0) return {};
    return eval_coords(dirs_to_rusink(wi, wo));
}

bool TabulatedBrdf::valid(const Direction &wi, const Direction &wo) const {
    if (wi.z <= 0 || wo.z <= 0) return false;
    return valid_coords(dirs_to_rusink(wi, wo));
}

PhongParams PhongParams::from_weight(Rgb albedo, double exponent, double ws) {
    return {albedo * (1 - ws), albedo * ws, exponent};
}

namespace {

struct Visitor {
    const Direction &wi;
    const Direction &wo;

    Rgb operator()(const LambertianParams &p) const { return p.albedo * kInvPi; }

    Rgb operator()(const PhongParams &p) const {
        const Vec3 h = normalize(wi + wo);
        const double cos_h = std::max(0.0, h.z);
        const double lobe = (p.exponent + 8) / (8 * kPi) * std::pow(cos_h, p.exponent);
        return p.kd * kInvPi + p.ks * lobe;
    }

    Rgb operator()(const WardParams &p) const {
        const Vec3 h = normalize(wi + wo);
        const double cos_i = std::max(std::abs(wi.z), 1e-3);
        const double cos_o = std::max(std::abs(wo.z), 1e-3);
        Rgb result = p.rd * kInvPi;
        if (h.z <= 0) return result;
        const double hx = h.x / p.alpha_x, hy = h.y / p.alpha_y;
        const double exponent = -(hx * hx + hy * hy) / (h.z * h.z);
        const double spec = std::exp(exponent) / (4 * kPi * p.alpha_x * p.alpha_y * std::sqrt(cos_i * cos_o));
        return result + p.rs * spec;
    }
};

double parse_number(std::string_view text) {
    double v = 0;
    const auto *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument("bad number '" + std::string(text) + "'");
    return v;
}

Rgb parse_rgb(std::string_view text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t slash = text.find('/', start);
        parts.push_back(parse_number(text.substr(start, slash - start)));
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    if (parts.size() == 1) return Rgb(parts[0]);
    if (parts.size() == 3) return {parts[0], parts[1], parts[2]};
    throw std::invalid_argument("colour must be 'v' or 'r/g/b': " + std::string(text));
}

std::string format_rgb(const Rgb &c) {
    std::ostringstream os;
    if (c.r == c.g && c.g == c.b)
        os << c.r;
    else
        os << c.r << '/' << c.g << '/' << c.b;
    return os.str();
}

}  // namespace

AnalyticOracle AnalyticOracle::parse(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    const std::string_view model = spec.substr(0, colon);
    std::map<std::string, std::string, std::less<>> kv;
    if (colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const std::size_t eq = item.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument("oracle parameter needs key=value: " + std::string(item));
            kv.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    auto take = [&](const char *key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto finish = [&](AnalyticOracle o) {
        if (!kv.empty()) throw std::invalid_argument("unknown oracle parameter '" + kv.begin()->first + "'");
        return o;
    };

    if (model == "lambertian") {
        LambertianParams p;
        if (auto v = take("rho")) p.albedo = parse_rgb(*v);
        return finish(AnalyticOracle(p));
    }
    if (model == "phong") {
        const double n = parse_number(take("n").value_or("100"));
        if (!(n >= 0)) throw std::invalid_argument("phong exponent must be >= 0");
        auto kd = take("kd"), ks = take("ks");
        PhongParams p;
        if (kd || ks) {
            p = PhongParams{parse_rgb(kd.value_or("0")), parse_rgb(ks.value_or("0")), n};
        } else {
            const double ws = parse_number(take("ws").value_or("0.5"));
            if (!(ws >= 0 && ws <= 1)) throw std::invalid_argument("phong ws must lie in [0, 1]");
            p = PhongParams::from_weight(parse_rgb(take("albedo").value_or("0.5")), n, ws);
        }
        return finish(AnalyticOracle(p));
    }
    if (model == "ward") {
        WardParams p;
        if (auto v = take("ax")) p.alpha_x = parse_number(*v);
        if (auto v = take("ay")) p.alpha_y = parse_number(*v);
        if (auto v = take("rd")) p.rd = parse_rgb(*v);
        if (auto v = take("rs")) p.rs = parse_rgb(*v);
        if (!(p.alpha_x > 0 && p.alpha_y > 0)) throw std::invalid_argument("ward roughness must be > 0");
        return finish(AnalyticOracle(p));
    }
    throw std::invalid_argument("unknown oracle model '" + std::string(model) + "'");
}

std::string AnalyticOracle::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto &p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LambertianParams>) {
                os << "lambertian:rho=" << format_rgb(p.albedo);
            } else if constexpr (std::is_same_v<P, PhongParams>) {
                os << "phong:n=" << p.exponent << ",kd=" << format_rgb(p.kd) << ",ks=" << format_rgb(p.ks);
            } else {
                os << "ward:ax=" << p.alpha_x << ",ay=" << p.alpha_y << ",rd=" << format_rgb(p.rd)
                   << ",rs=" << format_rgb(p.rs);
            }
        },
        params_);
    return os.str();
}

Rgb AnalyticOracle::eval_extended(const Direction &wi, const Direction &wo) const {
    return std::visit(Visitor{wi, wo}, params_);
}

Rgb AnalyticOracle::eval(const Direction &wi, const Direction &wo) const {
    if (wi.z <= 0 || wo.z <= 0) return {};
    return eval_extended(wi, wo);
}

std::size_t AnalyticOracle::memory_bytes() const {
    // float storage of the model parameters
    return std::visit(
        [](const auto &p) -> std::size_t {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LambertianParams>) return 3 * sizeof(float);
            else if constexpr (std::is_same_v<P, PhongParams>) return 7 * sizeof(float);
            else return 8 * sizeof(float);
        },
        params_);
}

bool AnalyticOracle::anisotropic() const {
    const auto *w = std::get_if<WardParams>(&params_);
    return w && w->alpha_x != w->alpha_y;
}

TabulatedBrdf bake_oracle(const AnalyticOracle &oracle, Rgb scales) {
    if (oracle.anisotropic()) throw std::invalid_argument("the MERL grid cannot hold an anisotropic oracle");
    std::vector<double> raw(kMerlValueCount);
    for (int ih = 0; ih < kMerlThetaH; ++ih)
        for (int id = 0; id < kMerlThetaD; ++id)
            for (int ip = 0; ip < kMerlPhiD; ++ip) {
                const auto [wi, wo] = rusink_to_dirs(merl_node_coords(ih, id, ip));
                const Rgb f = oracle.eval_extended(wi, wo);
                const std::size_t off = (std::size_t(ih) * kMerlThetaD + std::size_t(id)) * kMerlPhiD + std::size_t(ip);
                for (int ch = 0; ch < 3; ++ch) raw[std::size_t(ch) * kMerlChannelSize + off] = f[ch] / scales[ch];
            }
    return TabulatedBrdf(std::move(raw), scales);
}

}  // namespace nbrdf
