// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <nbrdf/brdf_data.h>
#include <nbrdf/cli.h>
#include <nbrdf/latent.h>
#include <nbrdf/metrics.h>
#include <nbrdf/nbrdf.h>
#include <nbrdf/nn.h>
#include <nbrdf/render.h>
#include <nbrdf/sampling.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace nbrdf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Log {
  public:
    template <typename... Args>
    void operator()(const char *fmt, Args... args) {
        std::printf("  ");
        std::printf(fmt, args...);
        std::printf("\n");
        std::fflush(stdout);
    }
};
Log note;

fs::path work_dir() {
    const fs::path p = fs::temp_directory_path() / "nbrdf_acceptance";
    fs::create_directories(p);
    return p;
}

std::vector<fs::path> merl_files() {
    std::vector<fs::path> out;
    if (const char *dir = std::getenv(cli::kDataDirEnv); dir && fs::is_directory(dir))
        for (const auto &e : fs::directory_iterator(dir))
            if (e.path().extension() == ".binary") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

Image directional_ldr(const Brdf &b, int size) { return tone_map(render_sphere(b, SceneSpec{}, size)); }

// Procedural sky with a soft sun; latitude-longitude, 128 x 64.
std::shared_ptr<const EnvironmentMap> sun_sky() {
    Image img(128, 64);
    const Vec3 sun = normalize(Vec3{0.4, 0.7, 0.6});
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 128; ++x) {
            const double th = (y + 0.5) / 64 * kPi, ph = (x + 0.5) / 128 * kTwoPi;
            const Vec3 d{std::sin(th) * std::sin(ph), std::cos(th), -std::sin(th) * std::cos(ph)};
            const double sky = 0.1 + 0.4 * std::max(0.0, d.y);
            const double blob = 5 * std::exp(-(1 - dot(d, sun)) * 30);
            img.set_pixel(x, y, Rgb(sky + blob, sky + 0.8 * blob, sky + 0.6 * blob));
        }
    return std::make_shared<EnvironmentMap>(img);
}

SceneSpec sun_sky_scene() {
    SceneSpec s;
    s.lighting = SceneSpec::Lighting::EnvironmentMap;
    s.envmap = sun_sky();
    return s;
}

// 64-spp tone-mapped RMSE against a 6400-spp reference.
struct VarianceProbe {
    const Brdf &brdf;
    SceneSpec scene;
    Image reference;

    VarianceProbe(const Brdf &b, SceneSpec s, const SamplerSpec &ref_sampler)
        : brdf(b), scene(std::move(s)),
          reference(tone_map(render_mc(brdf, scene, ref_sampler, 64, 6400, 1001).mean)) {}

    double rmse_at_64(const SamplerSpec &sampler) const {
        return rmse(tone_map(render_mc(brdf, scene, sampler, 64, 64, 7).mean), reference);
    }
};

// ---------------------------------------------------------------- corpus

std::vector<std::string> corpus_specs() {
    const char *colours[] = {"0.8/0.6/0.4", "0.4/0.6/0.8", "0.7/0.7/0.7", "0.9/0.3/0.2", "0.3/0.8/0.4", "0.5/0.4/0.6"};
    std::vector<std::string> s{"lambertian:rho=0.6/0.45/0.3", "lambertian:rho=0.25/0.5/0.7"};
    char buf[128];
    for (int k = 0; k < 14; ++k) {
        const double n = 5 * std::pow(600.0, k / 13.0);
        const double ws = 0.05 + 0.9 * ((k * 5) % 14) / 13.0;
        std::snprintf(buf, sizeof buf, "phong:n=%.4g,ws=%.3g,albedo=%s", n, ws, colours[k % 6]);
        s.emplace_back(buf);
    }
    const double a[] = {0.05, 0.1, 0.2, 0.35};
    for (int k = 0; k < 4; ++k) {
        std::snprintf(buf, sizeof buf, "ward:ax=%g,ay=%g,rd=%s,rs=0.%d", a[k], a[k], k % 2 ? "0.2/0.3/0.4" : "0.4/0.3/0.2",
                      2 + k);
        s.emplace_back(buf);
    }
    return s;
}

struct Corpus {
    std::vector<std::string> specs;
    std::vector<Mlp<float>> nets;
    std::vector<fs::path> files;
};

const Corpus &corpus() {
    static const Corpus c = [] {
        Corpus c;
        c.specs = corpus_specs();
        const auto t0 = Clock::now();
        for (std::size_t i = 0; i < c.specs.size(); ++i) {
            const auto table = bake_oracle(AnalyticOracle::parse(c.specs[i]));
            TrainConfig cfg;
            cfg.sample_count = 150'000;
            cfg.max_epochs = 25;
            cfg.seed = 1;
            c.nets.push_back(train_nbrdf(table, cfg).net);
            c.files.push_back(work_dir() / ("corpus_" + std::to_string(i) + ".nbrd"));
            save_nbrd(c.files.back(), c.nets.back());
        }
        note("corpus: %zu NBRDFs trained in %.0f s", c.nets.size(), seconds_since(t0));
        return c;
    }();
    return c;
}

struct LatentModel {
    AutoencoderResult ae;
    std::vector<PhongSamplingParams> labels;  // oracle fits, one per corpus material
    PredictorResult predictor;
    fs::path ae_file, predictor_file;
};

const LatentModel &latent_model() {
    static const LatentModel m = [] {
        const Corpus &c = corpus();
        LatentModel m;
        AutoencoderConfig cfg;
        cfg.epochs = 30;
        cfg.seed = 0;
        const auto t0 = Clock::now();
        m.ae = train_autoencoder(c.nets, cfg);
        note("autoencoder: %d epochs in %.0f s", cfg.epochs, seconds_since(t0));
        for (const auto &s : c.specs) m.labels.push_back(fit_phong_oracle(AnalyticOracle::parse(s)));
        std::vector<LatentCode> z;
        std::vector<PhongSamplingParams> y;
        for (auto i : m.ae.train_materials) {
            z.push_back(m.ae.ae.encode(c.nets[i]));
            y.push_back(m.labels[i]);
        }
        m.predictor = train_predictor(z, y);
        m.ae_file = work_dir() / "model.nbae";
        m.predictor_file = work_dir() / "model.nbpr";
        save_autoencoder(m.ae_file, m.ae.ae);
        save_predictor(m.predictor_file, m.predictor.predictor);
        return m;
    }();
    return m;
}

// ---------------------------------------------------------------- criteria

Outcome criterion1() {
    Outcome o;
    std::vector<std::pair<std::string, TabulatedBrdf>> tables;
    for (const auto &p : merl_files()) {
        if (tables.size() == 3) break;
        tables.emplace_back(p.filename().string(), TabulatedBrdf::load_merl(p));
    }
    if (tables.empty()) {
        for (const char *spec : {"lambertian:rho=0.6/0.5/0.4", "phong:n=100,ws=0.5,albedo=0.8/0.6/0.4",
                                 "phong:n=2000,ws=0.9,albedo=0.9/0.9/0.9"})
            tables.emplace_back(spec, bake_oracle(AnalyticOracle::parse(spec)));
    }
    double worst = 1, slowest = 0;
    for (const auto &[name, table] : tables) {
        TrainConfig cfg;
        cfg.sample_count = 200'000;
        cfg.max_epochs = 30;
        cfg.seed = 1;
        const auto t0 = Clock::now();
        const auto result = train_nbrdf(table, cfg);
        const double secs = seconds_since(t0);
        const double s = ssim(directional_ldr(NbrdfBrdf(result.net), 256), directional_ldr(table, 256));
        note("%s: SSIM %.5f, training %.1f s", name.c_str(), s, secs);
        worst = std::min(worst, s);
        slowest = std::max(slowest, secs);
        if (!(s >= 0.98) || secs > 15 * 60) o.pass = false;
    }
    std::ostringstream d;
    d << tables.size() << " materials, min SSIM " << worst << ", max training " << slowest << " s";
    o.detail = d.str();
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto table = bake_oracle(AnalyticOracle::parse("phong:n=3000,ws=0.7,albedo=0.7"));
    const Image reference = directional_ldr(table, 256);
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        double s[2];
        for (int m = 0; m < 2; ++m) {
            TrainConfig cfg;
            cfg.sample_count = 100'000;
            cfg.max_epochs = 20;
            cfg.seed = seed;
            cfg.mode = m == 0 ? SamplingMode::Adaptive : SamplingMode::Uniform;
            s[m] = ssim(directional_ldr(NbrdfBrdf(train_nbrdf(table, cfg).net), 256), reference);
        }
        note("seed %d: adaptive %.5f, uniform %.5f", int(seed), s[0], s[1]);
        if (s[0] > s[1]) ++wins;
    }
    o.pass = wins == 3;
    o.detail = "phong n=3000: adaptive beats uniform on " + std::to_string(wins) + "/3 seeds";
    return o;
}

// Mean squared log error of a network over a fixed batch, and its gradient.
double msle(const MlpShape &shape, std::span<const double> params, const std::vector<std::array<double, 6>> &x,
            const std::vector<std::array<double, 4>> &t, std::vector<double> *grad) {
    MlpWorkspace<double> ws(shape);
    double loss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto f = forward<double>(shape, params, x[i], ws);
        double up[3];
        const double cos = t[i][3];
        for (int c = 0; c < 3; ++c) {
            const double d = std::log1p(f[c] * cos) - t[i][c];
            loss += d * d / double(x.size());
            up[c] = 2 * d / double(x.size()) * cos / (1 + f[c] * cos);
        }
        if (grad) backward<double>(shape, params, ws, up, {}, *grad);
    }
    return loss;
}

double relative_error(const std::vector<double> &a, const std::vector<double> &b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

Outcome criterion3() {
    Outcome o;
    const auto t0 = Clock::now();
    const MlpShape shape = default_nbrdf_shape();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_net = 0;
    for (int n = 0; n < 20; ++n) {
        Mlp<double> net(shape);
        net.init_glorot(std::uint64_t(100 + n));
        for (double &p : net.params()) p += 0.05 * (u(rng) - 0.5);
        std::vector<std::array<double, 6>> x;
        std::vector<std::array<double, 4>> t;
        for (int i = 0; i < 16; ++i) {
            RusinkiewiczCoords c{u(rng) * kHalfPi, u(rng) * kHalfPi, u(rng) * kTwoPi, u(rng) * kTwoPi};
            x.push_back(halfdiff_cartesian(c));
            t.push_back({u(rng), u(rng), u(rng), 0.1 + 0.9 * u(rng)});
        }
        std::vector<double> g(shape.param_count(), 0.0), fd(shape.param_count());
        msle(shape, net.params(), x, t, &g);
        std::vector<double> p(net.params().begin(), net.params().end());
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double keep = p[i], h = 1e-6;
            p[i] = keep + h;
            const double up = msle(shape, p, x, t, nullptr);
            p[i] = keep - h;
            const double down = msle(shape, p, x, t, nullptr);
            p[i] = keep;
            fd[i] = (up - down) / (2 * h);
        }
        worst_net = std::max(worst_net, relative_error(g, fd));
    }
    note("NBRDF loss gradient: worst relative error %.2e over 20 networks", worst_net);

    // decoder -> NBRDF parameters -> sphere render -> tone map, on a 4x4 image
    Autoencoder ae = Autoencoder::with_shape({675, 64, 32});
    Mlp<double> &dec = ae.decoder();
    dec.init_glorot(7);
    {
        Mlp<float> base(shape);
        base.init_glorot(8);
        const auto &s = dec.shape();
        auto q = dec.params();
        for (std::size_t i = s.weight_offset(1); i < s.bias_offset(1); ++i) q[i] *= 0.05;
        for (std::size_t j = 0; j < 675; ++j) q[s.bias_offset(1) + j] = base.params()[j];
        for (int c = 0; c < 3; ++c) q[s.bias_offset(1) + shape.bias_offset(2) + std::size_t(c)] = std::log(0.5 / kPi);
    }
    const SphereImageLoss image_loss(4, 45);
    Image target(4, 4);
    for (double &v : target.data()) v = 0.3 + 0.4 * u(rng);
    std::vector<double> z(32);
    for (double &v : z) v = u(rng) - 0.5;
    auto composed = [&](std::span<const double> dec_params, std::span<const double> zz, std::vector<double> *gd,
                        std::vector<double> *gz) {
        MlpWorkspace<double> ws(dec.shape());
        const auto ps = forward<double>(dec.shape(), dec_params, zz, ws);
        const std::vector<double> p(ps.begin(), ps.end());
        std::vector<double> gp(p.size(), 0.0);
        const double l = image_loss.loss(p, target, gd ? std::span<double>(gp) : std::span<double>());
        if (gd) backward<double>(dec.shape(), dec_params, ws, gp, *gz, *gd);
        return l;
    };
    std::vector<double> gd(dec.param_count(), 0.0), gz(32, 0.0);
    composed(dec.params(), z, &gd, &gz);
    std::vector<double> params(dec.params().begin(), dec.params().end());
    std::vector<double> fd_d(params.size()), fd_z(z.size());
    const double h = 1e-6;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        const double up = composed(params, z, nullptr, nullptr);
        params[i] = keep - h;
        const double down = composed(params, z, nullptr, nullptr);
        params[i] = keep;
        fd_d[i] = (up - down) / (2 * h);
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        auto zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        fd_z[i] = (composed(params, zp, nullptr, nullptr) - composed(params, zm, nullptr, nullptr)) / (2 * h);
    }
    const double err_d = relative_error(gd, fd_d), err_z = relative_error(gz, fd_z);
    note("decoder->render->tone-map: relative error %.2e (decoder weights), %.2e (latent)", err_d, err_z);
    o.pass = worst_net < 1e-4 && err_d < 1e-3 && err_z < 1e-3;
    std::ostringstream d;
    d << "NBRDF " << worst_net << " (< 1e-4), composed path " << std::max(err_d, err_z) << " (< 1e-3), "
      << seconds_since(t0) << " s";
    o.detail = d.str();
    return o;
}

double chi_square_p_value(double x, double dof) {
    const double v = 2 / (9 * dof);
    const double z = (std::cbrt(x / dof) - (1 - v)) / std::sqrt(v);
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

Outcome criterion4() {
    Outcome o;
    std::ostringstream d;
    // (a) jittered-stratified Monte Carlo integral of the pdf over the hemisphere
    struct Setting {
        PhongSamplingParams p;
        double theta_o;
    };
    const Setting settings[] = {{{1, 0.5}, 0.3}, {{20, 0.3}, 1.2}, {{100, 0.9}, 0.6}, {{500, 0.7}, 1.0}};
    double worst_integral = 0;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto &s : settings) {
        const Direction wo = spherical_direction(s.theta_o, 0.3);
        const int n = 2048;
        double sum = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto ds = uniform_hemisphere((i + u(rng)) / n, (j + u(rng)) / n);
                sum += phong_pdf(s.p, wo, ds.wi) / ds.pdf;
            }
        const double integral = sum / (double(n) * n);
        note("(a) n=%g ws=%g theta_o=%g: integral %.5f", s.p.exponent, s.p.ws, s.theta_o, integral);
        worst_integral = std::max(worst_integral, std::abs(integral - 1));
    }
    const bool a = worst_integral < 0.01;

    // (b) chi-square of sampled directions against the pdf on a (cos theta, phi) grid
    double worst_p = 1;
    for (const auto &s : {settings[1], settings[3]}) {
        const Direction wo = spherical_direction(s.theta_o, 0.0);
        const int n_mu = 10, n_phi = 20, samples = 1'000'000, sub = 96;
        std::vector<double> counts(n_mu * n_phi, 0.0), expected(n_mu * n_phi, 0.0);
        for (int i = 0; i < samples; ++i) {
            const auto ds = phong_sample(s.p, wo, u(rng), u(rng));
            const int bm = std::min(n_mu - 1, int(ds.wi.z * n_mu));
            const int bp = std::min(n_phi - 1, int(wrap_two_pi(std::atan2(ds.wi.y, ds.wi.x)) / kTwoPi * n_phi));
            counts[std::size_t(bm * n_phi + bp)] += 1;
        }
        for (int bm = 0; bm < n_mu; ++bm)
            for (int bp = 0; bp < n_phi; ++bp) {
                double sum = 0;
                for (int i = 0; i < sub; ++i)
                    for (int j = 0; j < sub; ++j) {
                        const double mu = (bm + (i + 0.5) / sub) / n_mu;
                        const double phi = (bp + (j + 0.5) / sub) / n_phi * kTwoPi;
                        const double r = std::sqrt(1 - mu * mu);
                        sum += phong_pdf(s.p, wo, {r * std::cos(phi), r * std::sin(phi), mu});
                    }
                expected[std::size_t(bm * n_phi + bp)] = sum / (sub * sub) * (1.0 / n_mu) * (kTwoPi / n_phi) * samples;
            }
        double chi2 = 0;
        int dof = -1;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (expected[k] < 5) continue;
            chi2 += (counts[k] - expected[k]) * (counts[k] - expected[k]) / expected[k];
            ++dof;
        }
        const double p = chi_square_p_value(chi2, dof);
        note("(b) n=%g ws=%g theta_o=%g: chi2 %.1f, dof %d, p %.3f", s.p.exponent, s.p.ws, s.theta_o, chi2, dof, p);
        worst_p = std::min(worst_p, p);
    }
    const bool b = worst_p > 0.01;

    // (c) furnace: a Lambertian sphere under unit radiance reflects exactly its albedo
    const double rho = 0.8;
    const auto lambert = AnalyticOracle::lambertian(rho);
    const SceneSpec furnace = *SceneSpec::preset("sphere-furnace");
    double worst_z = 0;
    for (const auto &sampler : {SamplerSpec::uniform(), SamplerSpec::phong_lobe({500, 0.9}),
                                SamplerSpec::phong_lobe({5, 0.5})}) {
        const int size = 16;
        const auto img = render_mc(lambert, furnace, sampler, size, 4096, 11);
        double sum = 0, var = 0;
        int pixels = 0, within = 0;
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                if (!sphere_normal(x, y, size)) continue;
                const double m = img.mean.at(x, y, 0), se = img.standard_error.at(x, y, 0);
                sum += m;
                var += se * se;
                ++pixels;
                if (std::abs(m - rho) <= 3 * se) ++within;
            }
        const double z = (sum / pixels - rho) / (std::sqrt(var) / pixels);
        note("(c) %s: mean %.5f (albedo %.2f), z %.2f, %d/%d pixels within 3 SE", sampler.describe().c_str(),
             sum / pixels, rho, z, within, pixels);
        worst_z = std::max(worst_z, std::abs(z));
    }
    const bool c = worst_z < 3;
    o.pass = a && b && c;
    d << "(a) max |integral-1| " << worst_integral << ", (b) min p " << worst_p << ", (c) max |z| " << worst_z;
    o.detail = d.str();
    return o;
}

Outcome criterion5() {
    Outcome o;
    const auto oracle = AnalyticOracle::parse("phong:n=500,ws=0.7,albedo=0.8/0.6/0.4");
    const auto fit = fit_phong_oracle(oracle).clamped();
    const VarianceProbe probe(oracle, sun_sky_scene(), SamplerSpec::phong_lobe(fit));
    const double phong = probe.rmse_at_64(SamplerSpec::phong_lobe(fit));
    const double uniform = probe.rmse_at_64(SamplerSpec::uniform());
    note("fitted sampler n=%.1f ws=%.3f; RMSE phong %.4f, uniform %.4f", fit.exponent, fit.ws, phong, uniform);
    o.pass = phong <= 0.5 * uniform;
    std::ostringstream d;
    d << "phong/uniform RMSE ratio " << phong / uniform << " (<= 0.5)";
    o.detail = d.str();
    return o;
}

Outcome criterion6() {
    Outcome o;
    const Corpus &c = corpus();
    const LatentModel &m = latent_model();
    const auto &r = m.ae;
    const double drop = 1 - r.train_loss.back() / r.train_loss.front();
    note("image loss %.3e -> %.3e (drop %.1f%%), held-out loss %.3e", r.train_loss.front(), r.train_loss.back(),
         100 * drop, r.test_loss.back());

    double sum = 0, lowest = 1;
    for (auto i : r.train_materials) {
        const auto decoded = r.ae.decode(r.ae.encode(c.nets[i]));
        const double s = ssim(directional_ldr(NbrdfBrdf(decoded), 64), directional_ldr(NbrdfBrdf(c.nets[i]), 64));
        sum += s;
        lowest = std::min(lowest, s);
    }
    const double mean_ssim = sum / double(r.train_materials.size());
    note("decoded train renders: mean SSIM %.4f, lowest %.4f (%zu materials)", mean_ssim, lowest,
         r.train_materials.size());

    bool interp_ok = true, endpoints_ok = true;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<Direction, Direction>> dirs;
    for (int i = 0; i < 5000; ++i)
        dirs.emplace_back(cosine_hemisphere(u(rng), u(rng)).wi, cosine_hemisphere(u(rng), u(rng)).wi);
    const std::pair<std::size_t, std::size_t> pairs[] = {{0, 15}, {3, 16}, {8, 19}};
    for (const auto &[a, b] : pairs) {
        const auto za = r.ae.encode(c.nets[a]), zb = r.ae.encode(c.nets[b]);
        for (int k = 0; k <= 10; ++k) {
            const NbrdfBrdf net(interp_latent(r.ae, za, zb, k / 10.0));
            for (const auto &[wi, wo] : dirs) {
                const Rgb f = net.eval(wi, wo);
                for (int ch = 0; ch < 3; ++ch)
                    if (!(std::isfinite(f[ch]) && f[ch] > 0)) interp_ok = false;
            }
        }
        endpoints_ok = endpoints_ok && interp_latent(r.ae, za, zb, 0) == r.ae.decode(za) &&
                       interp_latent(r.ae, za, zb, 1) == r.ae.decode(zb);
    }
    note("interpolation: finite and positive %s, endpoints exact %s", interp_ok ? "yes" : "no",
         endpoints_ok ? "yes" : "no");
    o.pass = drop >= 0.5 && mean_ssim >= 0.9 && interp_ok && endpoints_ok;
    std::ostringstream d;
    d << c.nets.size() << " materials x6 augmentation: loss drop " << 100 * drop << "%, train SSIM " << mean_ssim
      << ", interpolation " << (interp_ok && endpoints_ok ? "ok" : "failed");
    o.detail = d.str();
    return o;
}

Outcome criterion7() {
    Outcome o;
    const Corpus &c = corpus();
    const LatentModel &m = latent_model();
    std::size_t held_out = m.ae.test_materials.front();
    for (auto i : m.ae.test_materials)
        if (m.labels[i].exponent > m.labels[held_out].exponent) held_out = i;
    const NbrdfBrdf brdf(c.nets[held_out]);
    const auto fitted = m.labels[held_out].clamped();
    const auto predicted = m.predictor.predictor.predict(m.ae.ae.encode(c.nets[held_out]));
    const VarianceProbe probe(brdf, sun_sky_scene(), SamplerSpec::phong_lobe(fitted));
    const double e_pred = probe.rmse_at_64(SamplerSpec::phong_lobe(predicted));
    const double e_fit = probe.rmse_at_64(SamplerSpec::phong_lobe(fitted));
    const double e_uni = probe.rmse_at_64(SamplerSpec::uniform());
    note("held-out %s: fitted n=%.1f ws=%.3f, predicted n=%.1f ws=%.3f", c.specs[held_out].c_str(), fitted.exponent,
         fitted.ws, predicted.exponent, predicted.ws);
    note("RMSE predicted %.4f, fitted %.4f, uniform %.4f", e_pred, e_fit, e_uni);
    o.pass = e_pred <= 1.5 * e_fit && e_pred < e_uni;
    std::ostringstream d;
    d << "predicted/fitted RMSE " << e_pred / e_fit << " (<= 1.5), predicted/uniform " << e_pred / e_uni << " (< 1)";
    o.detail = d.str();
    return o;
}

bool files_equal(const fs::path &a, const fs::path &b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    return sa == sb;
}

Outcome criterion8() {
    Outcome o;
    const fs::path dir = work_dir();
    bool ok = true;
    const fs::path baked = dir / "baked.binary";
    bake_oracle(AnalyticOracle::parse("phong:n=50,ws=0.5,albedo=0.7")).save_merl(baked);
    try {
        const auto t = TabulatedBrdf::load_merl(baked);
        ok = ok && t.raw_values().size() == kMerlValueCount;
    } catch (const std::exception &e) {
        note("baked file rejected: %s", e.what());
        ok = false;
    }
    const auto real = merl_files();
    for (const auto &p : real) {
        try {
            TabulatedBrdf::load_merl(p);
        } catch (const std::exception &e) {
            note("MERL file %s rejected: %s", p.string().c_str(), e.what());
            ok = false;
        }
    }
    note("baked MERL accepted; %zu real MERL files found", real.size());

    // corrupt the header dimensions, then truncate the payload
    auto expect_reject = [&](const fs::path &p, const char *what) {
        try {
            TabulatedBrdf::load_merl(p);
            note("%s accepted", what);
            ok = false;
        } catch (const FormatError &) {
        } catch (const IOError &) {
        }
    };
    const fs::path bad = dir / "bad_header.binary";
    fs::copy_file(baked, bad, fs::copy_options::overwrite_existing);
    {
        std::fstream f(bad, std::ios::in | std::ios::out | std::ios::binary);
        const std::int32_t wrong = 91;
        f.write(reinterpret_cast<const char *>(&wrong), 4);
    }
    expect_reject(bad, "corrupted header");
    const fs::path short_file = dir / "short.binary";
    fs::copy_file(baked, short_file, fs::copy_options::overwrite_existing);
    fs::resize_file(short_file, 12 + 1000);
    expect_reject(short_file, "truncated file");

    Mlp<float> net(default_nbrdf_shape());
    net.init_glorot(3);
    const fs::path a = dir / "a.nbrd", b = dir / "b.nbrd";
    save_nbrd(a, net);
    save_nbrd(b, load_nbrd(a));
    const bool identical = files_equal(a, b);
    const std::size_t payload = NbrdfBrdf(load_nbrd(a)).memory_bytes();
    note("NBRD roundtrip byte-identical %s; payload %zu bytes; file %ju bytes", identical ? "yes" : "no", payload,
         std::uintmax_t(fs::file_size(a)));
    o.pass = ok && identical && payload == 2700;
    std::ostringstream d;
    d << "MERL accept/reject " << (ok ? "ok" : "failed") << ", NBRD roundtrip " << (identical ? "identical" : "differs")
      << ", payload " << payload / 1000.0 << " KB";
    o.detail = d.str();
    return o;
}

Outcome criterion9() {
    Outcome o;
    const Corpus &c = corpus();
    const LatentModel &m = latent_model();
    const std::string glossy = c.files[15].string();  // phong n=3000
    std::vector<std::string> args{"nbrdf",        "sample-bench", "--nbrdf",    glossy,
                                  "--ae",         m.ae_file.string(), "--predictor", m.predictor_file.string(),
                                  "--duration",   "1.5",          "--runs",     "3"};
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    std::string csv = out.str();
    std::ostringstream base_out, base_err;
    code = std::max(code, cli::run({"nbrdf", "sample-bench", "--oracle", "lambertian:rho=0.5", "--sampler", "cosine",
                                    "--duration", "1.5", "--runs", "3"},
                                   base_out, base_err));
    {
        std::istringstream lines(base_out.str());
        std::string line;
        std::getline(lines, line);  // header already present
        while (std::getline(lines, line)) csv += line + '\n';
    }
    std::ofstream(work_dir() / "sample_bench.csv") << csv;
    std::printf("%s", csv.c_str());

    std::map<std::string, std::vector<double>> rates;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const auto last = line.rfind(','), prev = line.rfind(',', last - 1);
        const auto name = line.substr(0, line.find(','));
        rates[name].push_back(std::stod(line.substr(prev + 1, last - prev - 1)));
    }
    bool stable = code == 0 && rates.size() == 2;
    std::ostringstream d;
    for (auto &[name, v] : rates) {
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        double spread = 0;
        for (double r : v) spread = std::max(spread, std::abs(r / median - 1));
        stable = stable && v.size() == 3 && spread <= 0.2;
        d << name << " " << median / 1e6 << " M rays/s (max deviation " << 100 * spread << "%); ";
    }
    o.pass = stable;
    o.detail = d.str();
    if (o.detail.size() >= 2) o.detail.resize(o.detail.size() - 2);
    return o;
}

}  // namespace

int main(int argc, char **argv) {
    // optional: run a subset, e.g. "acceptance 3 4"
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                               criterion6, criterion7, criterion8, criterion9};
    const char *titles[] = {"NBRDF reconstruction SSIM >= 0.98",
                            "adaptive sampling beats uniform",
                            "gradient correctness",
                            "sampler correctness",
                            "variance reduction under environment light",
                            "autoencoder properties",
                            "predictor pipeline",
                            "format fidelity",
                            "throughput harness"};
    int failures = 0;
    std::vector<std::string> summary;
    for (int k = 1; k <= 9; ++k) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), k) == selected.end()) continue;
        std::printf("criterion %d: %s\n", k, titles[k - 1]);
        std::fflush(stdout);
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        char line[1024];
        std::snprintf(line, sizeof line, "%s criterion %d (%s): %s [%.0f s]", o.pass ? "PASS" : "FAIL", k,
                      titles[k - 1], o.detail.c_str(), seconds_since(t0));
        std::printf("%s\n", line);
        std::fflush(stdout);
        summary.emplace_back(line);
        if (!o.pass) ++failures;
    }
    std::printf("\nsummary\n");
    for (const auto &s : summary) std::printf("%s\n", s.c_str());
    return failures == 0 ? 0 : 1;
}
