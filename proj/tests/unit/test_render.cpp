// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/brdf_data.h>
#include <nbrdf/render.h>

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

using namespace nbrdf;

namespace {

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::path(testing::TempDir()) / ("nbrdf_render_" + name);
}

SceneSpec furnace(double radiance = 1) {
    SceneSpec s = *SceneSpec::preset("sphere-furnace");
    s.radiance = radiance;
    return s;
}

// World direction through the centre of environment pixel (x, y) of a w x h map.
Vec3 envmap_pixel_direction(int x, int y, int w, int h) {
    const double theta = (y + 0.5) / h * kPi, phi = (x + 0.5) / w * kTwoPi;
    return {std::sin(theta) * std::sin(phi), std::cos(theta), -std::sin(theta) * std::cos(phi)};
}

}  // namespace

TEST(SphereNormal, CoverageAndOrientation) {
    EXPECT_FALSE(sphere_normal(0, 0, 64));
    EXPECT_FALSE(sphere_normal(63, 63, 64));
    const auto c = sphere_normal(32, 32, 65);
    ASSERT_TRUE(c);
    EXPECT_NEAR(c->z, 1.0, 1e-12);
    // right half faces +x, top rows face +y
    EXPECT_GT(sphere_normal(60, 32, 64)->x, 0.5);
    EXPECT_GT(sphere_normal(32, 3, 64)->y, 0.5);
    int covered = 0;
    for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x)
            if (auto n = sphere_normal(x, y, 256)) {
                ++covered;
                EXPECT_NEAR(length(*n), 1.0, 1e-12);
            }
    EXPECT_NEAR(covered / (256.0 * 256.0), kPi / 4, 0.01);
}

TEST(RenderSphere, LambertianMatchesCosineLaw) {
    const auto brdf = AnalyticOracle::parse("lambertian:rho=0.2/0.5/0.8");
    SceneSpec scene;
    scene.light_theta_deg = 30;
    scene.radiance = 2;
    const Image img = render_sphere(brdf, scene, 48);
    const Vec3 l{std::sin(kPi / 6), 0, std::cos(kPi / 6)};
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x) {
            const auto n = sphere_normal(x, y, 48);
            const double cos_l = n ? std::max(0.0, dot(*n, l)) : 0.0;
            const double rho[3] = {0.2, 0.5, 0.8};
            for (int c = 0; c < 3; ++c) EXPECT_NEAR(img.at(x, y, c), rho[c] / kPi * cos_l * 2, 1e-12);
        }
}

TEST(RenderSphere, HeadlightPhongHighlight) {
    const auto brdf = AnalyticOracle::parse("phong:kd=0.1,ks=0.5,n=50");
    const SceneSpec scene = *SceneSpec::preset("sphere-headlight");
    const Image img = render_sphere(brdf, scene, 33);
    for (int x : {16, 20, 25}) {
        const Vec3 n = *sphere_normal(x, 16, 33);
        // headlight: wi = wo = view, so the half vector is the view axis
        const double cos_h = n.z;
        const double f = 0.1 / kPi + 0.5 * 58 / (8 * kPi) * std::pow(cos_h, 50);
        EXPECT_NEAR(img.at(x, 16, 0), f * n.z, 1e-12);
    }
}

TEST(RenderSphere, DeterministicAcrossThreadCounts) {
    const auto brdf = AnalyticOracle::parse("phong:n=80,ws=0.5,albedo=0.6");
    EXPECT_EQ(render_sphere(brdf, SceneSpec{}, 40, 1), render_sphere(brdf, SceneSpec{}, 40, 4));
}

TEST(RenderSphere, RejectsBadArguments) {
    const auto brdf = AnalyticOracle::lambertian(0.5);
    EXPECT_THROW(render_sphere(brdf, SceneSpec{}, 0), std::invalid_argument);
    EXPECT_THROW(render_sphere(brdf, furnace(), 16), std::invalid_argument);
    EXPECT_THROW(render_mc(brdf, SceneSpec{}, SamplerSpec::uniform(), 16, 4, 0), std::invalid_argument);
    EXPECT_THROW(render_mc(brdf, furnace(), SamplerSpec::uniform(), 16, 0, 0), std::invalid_argument);
}

TEST(RenderMc, CosineSamplingOfLambertianIsExact) {
    const auto brdf = AnalyticOracle::lambertian(0.7);
    const auto img = render_mc(brdf, furnace(1.5), SamplerSpec::cosine(), 24, 8, 3);
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 24; ++x) {
            const double expected = sphere_normal(x, y, 24) ? 0.7 * 1.5 : 0.0;
            EXPECT_NEAR(img.mean.at(x, y, 1), expected, 1e-12);
            EXPECT_NEAR(img.standard_error.at(x, y, 1), 0.0, 1e-6);
        }
}

TEST(RenderMc, UniformFurnaceIsUnbiased) {
    const auto brdf = AnalyticOracle::lambertian(0.6);
    const auto img = render_mc(brdf, furnace(), SamplerSpec::uniform(), 16, 256, 5);
    double z_sum = 0;
    int pixels = 0;
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            if (!sphere_normal(x, y, 16)) continue;
            const double se = img.standard_error.at(x, y, 0);
            ASSERT_GT(se, 0);
            z_sum += (img.mean.at(x, y, 0) - 0.6) / se;
            ++pixels;
        }
    // the mean of per-pixel z-scores has standard deviation 1/sqrt(pixels)
    EXPECT_LT(std::abs(z_sum / pixels), 4 / std::sqrt(double(pixels)));
}

TEST(RenderMc, StandardErrorShrinksWithSamples) {
    const auto brdf = AnalyticOracle::parse("phong:n=20,ws=0.5,albedo=0.8");
    auto mean_se = [&](int spp) {
        const auto img = render_mc(brdf, furnace(), SamplerSpec::uniform(), 16, spp, 1);
        double s = 0;
        for (double v : img.standard_error.data()) s += v;
        return s;
    };
    EXPECT_NEAR(mean_se(64) / mean_se(1024), 4.0, 0.4);
}

TEST(RenderMc, SeededAndThreadIndependent) {
    const auto brdf = AnalyticOracle::parse("phong:n=20,ws=0.5,albedo=0.8");
    const auto s = SamplerSpec::parse("phong:n=20,ws=0.5");
    const auto a = render_mc(brdf, furnace(), s, 20, 16, 42, 1);
    const auto b = render_mc(brdf, furnace(), s, 20, 16, 42, 3);
    const auto c = render_mc(brdf, furnace(), s, 20, 16, 43, 1);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.standard_error, b.standard_error);
    EXPECT_NE(a.mean, c.mean);
}

TEST(RenderMc, ConstantEnvironmentMapMatchesFurnace) {
    Image env(8, 4);
    for (double &v : env.data()) v = 0.75;
    SceneSpec scene;
    scene.lighting = SceneSpec::Lighting::EnvironmentMap;
    scene.envmap = std::make_shared<EnvironmentMap>(env);
    const auto brdf = AnalyticOracle::parse("phong:n=20,ws=0.5,albedo=0.8");
    const auto a = render_mc(brdf, scene, SamplerSpec::cosine(), 12, 16, 7);
    const auto b = render_mc(brdf, furnace(0.75), SamplerSpec::cosine(), 12, 16, 7);
    for (std::size_t i = 0; i < a.mean.data().size(); ++i) EXPECT_NEAR(a.mean.data()[i], b.mean.data()[i], 1e-12);
}

TEST(EnvironmentMap, PixelCentresReturnStoredValues) {
    const int w = 16, h = 8;
    Image img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.set_pixel(x, y, Rgb(x, y, x * 100 + y));
    const EnvironmentMap env(img);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const Rgb v = env.lookup(envmap_pixel_direction(x, y, w, h));
            EXPECT_NEAR(v.r, x, 1e-9);
            EXPECT_NEAR(v.g, y, 1e-9);
        }
    // halfway between two columns, and across the seam at -z
    const Vec3 between = normalize(envmap_pixel_direction(3, 4, w, h) + envmap_pixel_direction(4, 4, w, h));
    EXPECT_NEAR(env.lookup(between).r, 3.5, 1e-9);
    EXPECT_NEAR(env.lookup(normalize(Vec3{0, 0.01, -1})).r, 0.5 * (w - 1), 1e-9);
    // poles clamp to the first and last rows
    EXPECT_NEAR(env.lookup({0, 1, 0}).g, 0.0, 1e-12);
    EXPECT_NEAR(env.lookup({0, -1, 0}).g, h - 1, 1e-12);
}

TEST(EnvironmentMap, RejectsInvalidRadiance) {
    Image img(2, 2);
    img.at(0, 0, 0) = -1;
    EXPECT_THROW(EnvironmentMap{img}, FormatError);
    EXPECT_THROW(EnvironmentMap{Image()}, std::invalid_argument);
}

TEST(SceneSpec, PresetsAndFiles) {
    EXPECT_EQ(SceneSpec::preset("sphere-dir45")->light_theta_deg, 45);
    EXPECT_EQ(SceneSpec::preset("sphere-headlight")->light_theta_deg, 0);
    EXPECT_EQ(SceneSpec::preset("sphere-furnace")->lighting, SceneSpec::Lighting::ConstantEnvironment);
    EXPECT_FALSE(SceneSpec::preset("teapot"));
    EXPECT_THROW(SceneSpec::resolve("no-such-scene"), IOError);

    Image env(4, 2);
    for (double &v : env.data()) v = 0.5;
    const auto dir = temp_path("scene");
    std::filesystem::create_directories(dir);
    write_pfm(dir / "sky.pfm", env);
    {
        std::ofstream f(dir / "env.scene");
        f << "# environment test\ngeometry = sphere\nlighting = envmap\nenvmap = sky.pfm\nradiance = 2\n";
    }
    const SceneSpec s = SceneSpec::resolve((dir / "env.scene").string());
    EXPECT_EQ(s.lighting, SceneSpec::Lighting::EnvironmentMap);
    EXPECT_NEAR(s.environment({0, 0, 1}).r, 1.0, 1e-12);

    {
        std::ofstream f(dir / "dir.scene");
        f << "lighting = directional\ntheta_l = 90\n";
    }
    const Vec3 l = SceneSpec::load(dir / "dir.scene").light_direction();
    EXPECT_NEAR(l.x, 1.0, 1e-12);
    EXPECT_NEAR(l.z, 0.0, 1e-12);

    for (const char *bad : {"geometry = plane\n", "lighting = area\n", "theta_l = abc\n", "colour = red\n",
                            "lighting = envmap\n", "radiance = -1\n"}) {
        {
            std::ofstream f(dir / "bad.scene");
            f << bad;
        }
        EXPECT_THROW(SceneSpec::load(dir / "bad.scene"), FormatError) << bad;
    }
    std::filesystem::remove_all(dir);
}

TEST(SamplerSpec, ParseAndDescribe) {
    EXPECT_EQ(SamplerSpec::parse("uniform").kind, SamplerSpec::Kind::Uniform);
    EXPECT_EQ(SamplerSpec::parse("cosine").describe(), "cosine");
    const auto p = SamplerSpec::parse("phong:n=250,ws=0.3");
    EXPECT_EQ(p.kind, SamplerSpec::Kind::Phong);
    EXPECT_EQ(p.phong.exponent, 250);
    EXPECT_EQ(p.phong.ws, 0.3);
    EXPECT_EQ(SamplerSpec::parse(p.describe()).phong.ws, 0.3);
    EXPECT_THROW(SamplerSpec::parse("phong:n=-1"), std::invalid_argument);
    EXPECT_THROW(SamplerSpec::parse("phong:k=1"), std::invalid_argument);
    EXPECT_THROW(SamplerSpec::parse("ggx"), std::invalid_argument);
}

TEST(ToneMap, ValuesAndDerivative) {
    EXPECT_NEAR(tone_map_value(0.25), std::pow(0.25, 1 / 2.2), 1e-15);
    EXPECT_EQ(tone_map_value(4.0), 1.0);
    EXPECT_NEAR(tone_map_value(-1.0), std::pow(1e-12, 1 / 2.2), 1e-15);
    EXPECT_EQ(tone_map_derivative(4.0), 0.0);
    EXPECT_EQ(tone_map_derivative(-1.0), 0.0);
    for (double x : {1e-4, 0.01, 0.3, 0.9}) {
        const double h = 1e-7 * x;
        const double fd = (tone_map_value(x + h) - tone_map_value(x - h)) / (2 * h);
        EXPECT_NEAR(tone_map_derivative(x), fd, 1e-6 * std::abs(fd));
    }
}

TEST(Pfm, RoundtripAndByteOrder) {
    Image img(3, 2);
    for (std::size_t i = 0; i < img.data().size(); ++i) img.data()[i] = 0.25 * double(i);
    const auto path = temp_path("rt.pfm");
    write_pfm(path, img);
    EXPECT_EQ(read_pfm(path), img);

    // big-endian greyscale, rows stored bottom-up
    const auto grey = temp_path("grey.pfm");
    {
        std::ofstream f(grey, std::ios::binary);
        f << "Pf\n2 2\n1.0\n";
        for (float v : {1.0f, 2.0f, 3.0f, 4.0f}) {
            unsigned char b[4];
            std::memcpy(b, &v, 4);
            if constexpr (std::endian::native == std::endian::little) std::reverse(b, b + 4);
            f.write(reinterpret_cast<const char *>(b), 4);
        }
    }
    const Image g = read_pfm(grey);
    EXPECT_EQ(g.at(0, 1, 0), 1.0);
    EXPECT_EQ(g.at(1, 0, 2), 4.0);
    std::filesystem::remove(path);
    std::filesystem::remove(grey);
    EXPECT_THROW(read_pfm("/nonexistent.pfm"), IOError);
}

TEST(Png, WritesSignature) {
    Image img(5, 4);
    img.at(2, 2, 1) = 1.0;
    const auto path = temp_path("out.png");
    write_png(path, img);
    std::ifstream f(path, std::ios::binary);
    char sig[8];
    f.read(sig, 8);
    EXPECT_EQ(std::string(sig + 1, 3), "PNG");
    std::filesystem::remove(path);
}

TEST(Bench, ReportsThroughputAndFootprint) {
    const auto brdf = AnalyticOracle::lambertian(0.5);
    const auto r = bench_rays(brdf, SamplerSpec::cosine(), 0.05, 1);
    EXPECT_GT(r.rays, 0);
    EXPECT_GE(r.seconds, 0.05);
    EXPECT_NEAR(r.rays_per_second, r.rays / r.seconds, 1e-6 * r.rays_per_second);
    EXPECT_EQ(r.memory_bytes, brdf.memory_bytes());
    EXPECT_THROW(bench_rays(brdf, SamplerSpec::cosine(), 0), std::invalid_argument);
}

TEST(MixSeed, DistinctStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s)
        for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix_seed(s, i));
    EXPECT_EQ(seen.size(), 4000u);
}
