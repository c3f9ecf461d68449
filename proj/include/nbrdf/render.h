// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nbrdf/brdf.h>
#include <nbrdf/image.h>
#include <nbrdf/sampling.h>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace nbrdf {

/// Latitude-longitude radiance map. World +y is up; row 0 is the zenith and
/// column 0 is the -z direction (towards the camera's view), increasing
/// towards +x.
class EnvironmentMap {
  public:
    explicit EnvironmentMap(Image radiance);
    static EnvironmentMap load_pfm(const std::filesystem::path &path);

    /// Bilinear lookup of the radiance arriving from world direction `dir`.
    Rgb lookup(const Vec3 &dir) const;
    const Image &image() const { return radiance_; }

  private:
    Image radiance_;
};

/// Unit sphere at the origin seen by an orthographic camera looking down -z.
struct SceneSpec {
    enum class Lighting { Directional, ConstantEnvironment, EnvironmentMap };

    Lighting lighting = Lighting::Directional;
    double light_theta_deg = 45;  // directional light inclination from the view axis, tilted towards +x
    double radiance = 1;          // irradiance scale (directional) or constant environment radiance
    std::shared_ptr<const EnvironmentMap> envmap;

    /// "sphere-dir45", "sphere-headlight", "sphere-furnace".
    static std::optional<SceneSpec> preset(const std::string &name);
    /// key = value file: lighting (directional | constant | envmap), theta_l,
    /// radiance, envmap (path, relative to the file).
    static SceneSpec load(const std::filesystem::path &path);
    /// Preset name or path to a scene file.
    static SceneSpec resolve(const std::string &name_or_path);

    Vec3 light_direction() const;
    Rgb environment(const Vec3 &dir) const;
};

/// Surface normal under pixel (x, y) of a size x size render, if covered.
std::optional<Vec3> sphere_normal(int x, int y, int size);

/// Directional-light render: f_r(wi, wo) max(0, n.l) * radiance per covered
/// pixel, zero elsewhere. Deterministic.
Image render_sphere(const Brdf &brdf, const SceneSpec &scene, int size, int jobs = 0);

struct SamplerSpec {
    enum class Kind { Uniform, Cosine, Phong };
    Kind kind = Kind::Uniform;
    PhongSamplingParams phong;

    static SamplerSpec uniform() { return {Kind::Uniform, {}}; }
    static SamplerSpec cosine() { return {Kind::Cosine, {}}; }
    static SamplerSpec phong_lobe(PhongSamplingParams p) { return {Kind::Phong, p}; }
    /// "uniform", "cosine" or "phong:n=<exponent>,ws=<weight>".
    static SamplerSpec parse(const std::string &text);
    std::string describe() const;

    DirectionSample sample(const Direction &wo, double u1, double u2) const;
};

struct McImage {
    Image mean;
    Image standard_error;
};

/// Monte Carlo estimate of the reflected radiance under environment light
/// using `sampler`. Every pixel seeds its own generator from (seed, pixel
/// index), so results do not depend on `jobs`.
McImage render_mc(const Brdf &brdf, const SceneSpec &scene, const SamplerSpec &sampler, int size, int spp,
                  std::uint64_t seed, int jobs = 0);

struct BenchResult {
    double rays_per_second = 0;
    std::int64_t rays = 0;
    double seconds = 0;
    std::size_t memory_bytes = 0;
};

/// Throughput of the sample + evaluate inner loop on the furnace sphere.
BenchResult bench_rays(const Brdf &brdf, const SamplerSpec &sampler, double duration_seconds, std::uint64_t seed = 0);

/// SplitMix64 finaliser; derives independent per-pixel seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace nbrdf
