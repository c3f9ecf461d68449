// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/render.h>

#include <nbrdf/brdf_data.h>
#include <nbrdf/config.h>

#include "parallel.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace nbrdf {

namespace {

constexpr Vec3 kViewDir{0, 0, 1};

double to_double(const std::string &key, const std::string &value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception &) {
        throw FormatError("scene key '" + key + "' needs a number, got '" + value + "'");
    }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EnvironmentMap::EnvironmentMap(Image radiance) : radiance_(std::move(radiance)) {
    if (radiance_.width() < 1 || radiance_.height() < 1) throw std::invalid_argument("empty environment map");
    for (double v : radiance_.data())
        if (!std::isfinite(v) || v < 0) throw FormatError("environment map needs finite, non-negative radiance");
}

EnvironmentMap EnvironmentMap::load_pfm(const std::filesystem::path &path) { return EnvironmentMap(read_pfm(path)); }

Rgb EnvironmentMap::lookup(const Vec3 &dir) const {
    const double theta = std::acos(std::clamp(dir.y, -1.0, 1.0));
    double u = std::atan2(dir.x, -dir.z) / kTwoPi;
    if (u < 0) u += 1;
    const int w = radiance_.width(), h = radiance_.height();
    const double fx = u * w - 0.5;
    const double fy = std::clamp(theta / kPi * h - 0.5, 0.0, double(h - 1));
    const int x0 = int(std::floor(fx));
    const int y0 = int(std::floor(fy));
    const double tx = fx - x0, ty = fy - y0;
    auto wrap = [w](int x) { return ((x % w) + w) % w; };
    const int y1 = std::min(y0 + 1, h - 1);
    const Rgb a = radiance_.pixel(wrap(x0), y0) * (1 - tx) + radiance_.pixel(wrap(x0 + 1), y0) * tx;
    const Rgb b = radiance_.pixel(wrap(x0), y1) * (1 - tx) + radiance_.pixel(wrap(x0 + 1), y1) * tx;
    return a * (1 - ty) + b * ty;
}

std::optional<SceneSpec> SceneSpec::preset(const std::string &name) {
    SceneSpec s;
    if (name == "sphere-dir45") return s;
    if (name == "sphere-headlight") {
        s.light_theta_deg = 0;
        return s;
    }
    if (name == "sphere-furnace") {
        s.lighting = Lighting::ConstantEnvironment;
        return s;
    }
    return std::nullopt;
}

SceneSpec SceneSpec::load(const std::filesystem::path &path) {
    SceneSpec s;
    for (const auto &[key, value] : read_key_values(path)) {
        if (key == "geometry") {
            if (value != "sphere") throw FormatError("only 'sphere' geometry is supported");
        } else if (key == "lighting") {
            if (value == "directional")
                s.lighting = Lighting::Directional;
            else if (value == "constant")
                s.lighting = Lighting::ConstantEnvironment;
            else if (value == "envmap")
                s.lighting = Lighting::EnvironmentMap;
            else
                throw FormatError("unknown lighting '" + value + "'");
        } else if (key == "theta_l") {
            s.light_theta_deg = to_double(key, value);
        } else if (key == "radiance") {
            s.radiance = to_double(key, value);
        } else if (key == "envmap") {
            std::filesystem::path p(value);
            if (p.is_relative()) p = path.parent_path() / p;
            s.envmap = std::make_shared<EnvironmentMap>(EnvironmentMap::load_pfm(p));
        } else {
            throw FormatError("unknown scene key '" + key + "'");
        }
    }
    if (!(std::isfinite(s.radiance) && s.radiance >= 0)) throw FormatError("radiance must be finite and >= 0");
    if (!std::isfinite(s.light_theta_deg)) throw FormatError("theta_l must be finite");
    if (s.lighting == Lighting::EnvironmentMap && !s.envmap) throw FormatError("lighting = envmap needs an envmap path");
    return s;
}

SceneSpec SceneSpec::resolve(const std::string &name_or_path) {
    if (auto p = preset(name_or_path)) return *p;
    if (std::filesystem::exists(name_or_path)) return load(name_or_path);
    throw IOError("unknown scene preset or missing scene file: " + name_or_path);
}

Vec3 SceneSpec::light_direction() const {
    const double t = light_theta_deg * kPi / 180;
    return {std::sin(t), 0, std::cos(t)};
}

Rgb SceneSpec::environment(const Vec3 &dir) const {
    switch (lighting) {
    case Lighting::ConstantEnvironment:
        return Rgb(radiance);
    case Lighting::EnvironmentMap:
        return envmap->lookup(dir) * radiance;
    case Lighting::Directional:
        break;
    }
    return {};
}

std::optional<Vec3> sphere_normal(int x, int y, int size) {
    const double px = (x + 0.5) / size * 2 - 1;
    const double py = 1 - (y + 0.5) / size * 2;
    const double r2 = px * px + py * py;
    if (r2 >= 1) return std::nullopt;
    return Vec3{px, py, std::sqrt(1 - r2)};
}

Image render_sphere(const Brdf &brdf, const SceneSpec &scene, int size, int jobs) {
    if (size < 1) throw std::invalid_argument("render size must be >= 1");
    if (scene.lighting != SceneSpec::Lighting::Directional)
        throw std::invalid_argument("render_sphere needs a directional light; use render_mc for environments");
    Image img(size, size);
    const Vec3 light = scene.light_direction();
    detail::parallel_for(size, jobs, [&](int y) {
        for (int x = 0; x < size; ++x) {
            const auto n = sphere_normal(x, y, size);
            if (!n) continue;
            const Frame frame = Frame::from_normal(*n);
            const Vec3 wi = frame.to_local(light);
            const Vec3 wo = frame.to_local(kViewDir);
            if (wi.z <= 0 || wo.z <= 0) continue;
            img.set_pixel(x, y, brdf.eval(wi, wo) * wi.z * scene.radiance);
        }
    });
    return img;
}

SamplerSpec SamplerSpec::parse(const std::string &text) {
    if (text == "uniform") return uniform();
    if (text == "cosine") return cosine();
    if (text.rfind("phong", 0) == 0) {
        PhongSamplingParams p{1, 0.5};
        const auto colon = text.find(':');
        if (colon != std::string::npos) {
            std::stringstream ss(text.substr(colon + 1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) throw std::invalid_argument("sampler parameter needs key=value: " + item);
                const std::string key = item.substr(0, eq);
                const double v = std::stod(item.substr(eq + 1));
                if (key == "n")
                    p.exponent = v;
                else if (key == "ws")
                    p.ws = v;
                else
                    throw std::invalid_argument("unknown phong sampler key '" + key + "'");
            }
        }
        if (!p.valid()) throw std::invalid_argument("phong sampler needs n >= 0 and ws in [0, 1]");
        return phong_lobe(p);
    }
    throw std::invalid_argument("sampler must be uniform, cosine or phong:n=..,ws=..; got '" + text + "'");
}

std::string SamplerSpec::describe() const {
    switch (kind) {
    case Kind::Uniform:
        return "uniform";
    case Kind::Cosine:
        return "cosine";
    case Kind::Phong: {
        std::ostringstream os;
        os << "phong:n=" << phong.exponent << ",ws=" << phong.ws;
        return os.str();
    }
    }
    return {};
}

DirectionSample SamplerSpec::sample(const Direction &wo, double u1, double u2) const {
    switch (kind) {
    case Kind::Uniform:
        return uniform_hemisphere(u1, u2);
    case Kind::Cosine:
        return cosine_hemisphere(u1, u2);
    case Kind::Phong:
        return phong_sample(phong, wo, u1, u2);
    }
    return {};
}

McImage render_mc(const Brdf &brdf, const SceneSpec &scene, const SamplerSpec &sampler, int size, int spp,
                  std::uint64_t seed, int jobs) {
    if (size < 1) throw std::invalid_argument("render size must be >= 1");
    if (spp < 1) throw std::invalid_argument("spp must be >= 1");
    if (scene.lighting == SceneSpec::Lighting::Directional)
        throw std::invalid_argument("render_mc needs environment lighting");
    McImage out{Image(size, size), Image(size, size)};
    detail::parallel_for(size, jobs, [&](int y) {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (int x = 0; x < size; ++x) {
            const auto n = sphere_normal(x, y, size);
            if (!n) continue;
            std::mt19937_64 rng(mix_seed(seed, std::uint64_t(y) * std::uint64_t(size) + std::uint64_t(x)));
            const Frame frame = Frame::from_normal(*n);
            const Vec3 wo = frame.to_local(kViewDir);
            Rgb sum, sum_sq;
            for (int s = 0; s < spp; ++s) {
                const double u1 = uniform(rng), u2 = uniform(rng);
                const DirectionSample ds = sampler.sample(wo, u1, u2);
                if (!(ds.pdf > 0) || ds.wi.z <= 0) continue;
                const Rgb contrib = brdf.eval(ds.wi, wo) * scene.environment(frame.to_world(ds.wi)) * (ds.wi.z / ds.pdf);
                sum += contrib;
                sum_sq += contrib * contrib;
            }
            const double inv = 1.0 / spp;
            Rgb mean = sum * inv, se;
            if (spp > 1)
                for (int c = 0; c < 3; ++c) {
                    const double var = std::max(0.0, (sum_sq[c] - sum[c] * sum[c] * inv) / (spp - 1));
                    se[c] = std::sqrt(var * inv);
                }
            out.mean.set_pixel(x, y, mean);
            out.standard_error.set_pixel(x, y, se);
        }
    });
    return out;
}

BenchResult bench_rays(const Brdf &brdf, const SamplerSpec &sampler, double duration_seconds, std::uint64_t seed) {
    if (!(duration_seconds > 0)) throw std::invalid_argument("benchmark duration must be positive");
    using clock = std::chrono::steady_clock;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    SceneSpec scene = *SceneSpec::preset("sphere-furnace");

    BenchResult result;
    result.memory_bytes = brdf.memory_bytes();
    Rgb sink;
    const auto start = clock::now();
    const auto budget = std::chrono::duration<double>(duration_seconds);
    while (true) {
        for (int i = 0; i < 1024; ++i) {
            // random visible point on the sphere
            const double r = std::sqrt(uniform(rng)), phi = kTwoPi * uniform(rng);
            const double px = r * std::cos(phi), py = r * std::sin(phi);
            const Vec3 n{px, py, std::sqrt(std::max(0.0, 1 - px * px - py * py))};
            const Frame frame = Frame::from_normal(n);
            const Vec3 wo = frame.to_local(kViewDir);
            if (wo.z <= 0) continue;
            const DirectionSample ds = sampler.sample(wo, uniform(rng), uniform(rng));
            if (!(ds.pdf > 0)) continue;
            sink += brdf.eval(ds.wi, wo) * scene.environment(frame.to_world(ds.wi)) * (ds.wi.z / ds.pdf);
        }
        result.rays += 1024;
        const auto elapsed = clock::now() - start;
        if (elapsed >= budget) {
            result.seconds = std::chrono::duration<double>(elapsed).count();
            break;
        }
    }
    if (!std::isfinite(sink.mean())) result.rays = 0;
    result.rays_per_second = double(result.rays) / result.seconds;
    return result;
}

}  // namespace nbrdf
