// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/cli.h>

#include <nbrdf/brdf_data.h>
#include <nbrdf/latent.h>
#include <nbrdf/metrics.h>
#include <nbrdf/nbrdf.h>
#include <nbrdf/render.h>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace nbrdf::cli {

namespace {

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace fs = std::filesystem;

fs::path resolve_input(const std::string &name) {
    fs::path path(name);
    if (path.is_relative() && !fs::exists(path)) {
        if (const char *dir = std::getenv(kDataDirEnv); dir && *dir) {
            fs::path alt = fs::path(dir) / path;
            if (fs::exists(alt)) return alt;
        }
    }
    return path;
}

std::string stem_of(const std::string &path) { return fs::path(path).stem().string(); }

struct BrdfSource {
    std::string merl;
    std::string oracle;
    std::string nbrdf;
    bool anisotropic = false;
};

void add_brdf_options(CLI::App *cmd, BrdfSource &src, bool with_nbrdf, const std::string &role = "") {
    cmd->add_option("--merl", src.merl, "MERL binary file" + role);
    cmd->add_option("--oracle", src.oracle, "analytic BRDF, e.g. phong:n=100,ws=0.5,albedo=0.8" + role);
    if (with_nbrdf) {
        cmd->add_option("--nbrdf", src.nbrdf, "trained NBRD network" + role);
        cmd->add_flag("--anisotropic", src.anisotropic, "the network takes an azimuth-dependent input");
    }
}

std::unique_ptr<Brdf> load_brdf(const BrdfSource &src) {
    const int given = int(!src.merl.empty()) + int(!src.oracle.empty()) + int(!src.nbrdf.empty());
    if (given != 1) throw UsageError("give exactly one of --merl, --oracle" + std::string(src.nbrdf.empty() ? "" : ", --nbrdf"));
    if (!src.merl.empty()) return std::make_unique<TabulatedBrdf>(TabulatedBrdf::load_merl(resolve_input(src.merl)));
    if (!src.oracle.empty()) return std::make_unique<AnalyticOracle>(AnalyticOracle::parse(src.oracle));
    return std::make_unique<NbrdfBrdf>(load_nbrd(resolve_input(src.nbrdf)), src.anisotropic);
}

std::string brdf_name(const BrdfSource &src) {
    if (!src.merl.empty()) return stem_of(src.merl);
    if (!src.nbrdf.empty()) return stem_of(src.nbrdf);
    return src.oracle;
}

bool source_is_anisotropic(const Brdf &brdf) {
    const auto *oracle = dynamic_cast<const AnalyticOracle *>(&brdf);
    return oracle && oracle->anisotropic();
}

void write_image(const std::string &path, const Image &hdr) {
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".pfm")
        write_pfm(path, hdr);
    else if (ext == ".png")
        write_png(path, tone_map(hdr));
    else
        throw UsageError("output image must end in .pfm or .png: " + path);
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::vector<int> parse_widths(const std::string &text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const int v = std::stoi(item);
        if (v < 1) throw UsageError("layer widths must be positive: " + text);
        out.push_back(v);
    }
    return out;
}

std::vector<Mlp<float>> load_nets(const std::vector<std::string> &paths) {
    std::vector<Mlp<float>> nets;
    for (const auto &p : paths) nets.push_back(load_nbrd(resolve_input(p)));
    return nets;
}

std::string with_suffix(const std::string &path, const std::string &suffix) {
    fs::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Neural BRDF toolkit: compression, latent space and importance sampling", "nbrdf"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value configuration file (flags take precedence)");
    std::uint64_t seed = 0;
    int jobs = 0;
    app.add_option("--seed", seed, "random seed for every stochastic step")->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads (0: all cores)")->capture_default_str();

    // train
    auto *train = app.add_subcommand("train", "fit an NBRDF to a tabulated or analytic BRDF");
    BrdfSource train_src;
    add_brdf_options(train, train_src, false);
    std::string train_out;
    TrainConfig train_cfg;
    train_cfg.sample_count = 0;
    std::string train_mode = "adaptive";
    bool train_verbose = false;
    train->add_option("--out", train_out, "output NBRD file")->required();
    train->add_option("--samples", train_cfg.sample_count, "training samples (0: 800000, five times that for anisotropic data)")
        ->capture_default_str();
    train->add_option("--mode", train_mode, "angular sampling: adaptive or uniform")->capture_default_str();
    train->add_option("--epochs", train_cfg.max_epochs, "maximum epochs")->capture_default_str();
    train->add_option("--patience", train_cfg.patience, "early-stopping patience in epochs")->capture_default_str();
    train->add_option("--batch", train_cfg.batch_size, "mini-batch size")->capture_default_str();
    train->add_option("--lr", train_cfg.adam.learning_rate, "Adam learning rate")->capture_default_str();
    train->add_option("--validation", train_cfg.validation_fraction, "held-out fraction")->capture_default_str();
    train->add_flag("--verbose", train_verbose, "print every epoch");

    // eval
    auto *eval = app.add_subcommand("eval", "compare an NBRDF against its ground truth");
    BrdfSource eval_src;
    add_brdf_options(eval, eval_src, false, " (ground truth)");
    std::string eval_nbrdf, eval_scene = "sphere-dir45", eval_material;
    bool eval_aniso = false;
    int eval_size = 256;
    std::int64_t eval_samples = 100000;
    eval->add_option("--nbrdf", eval_nbrdf, "trained NBRD network")->required();
    eval->add_flag("--anisotropic", eval_aniso, "the network takes an azimuth-dependent input");
    eval->add_option("--samples", eval_samples, "adaptive samples for the reflectance loss")->capture_default_str();
    eval->add_option("--size", eval_size, "render size for image metrics")->capture_default_str();
    eval->add_option("--scene", eval_scene, "directional scene preset or file")->capture_default_str();
    eval->add_option("--material", eval_material, "material label in the CSV (default: file stem)");

    // render
    auto *render = app.add_subcommand("render", "render a sphere");
    BrdfSource render_src;
    add_brdf_options(render, render_src, true);
    std::string render_scene = "sphere-dir45", render_out, render_sampler = "uniform";
    int render_size = 64, render_spp = 64;
    render->add_option("--scene", render_scene, "preset (sphere-dir45, sphere-headlight, sphere-furnace) or scene file")
        ->capture_default_str();
    render->add_option("--size", render_size, "image width and height")->capture_default_str();
    render->add_option("--out", render_out, "output .pfm (HDR) or .png (tone mapped)")->required();
    render->add_option("--spp", render_spp, "samples per pixel for environment lighting")->capture_default_str();
    render->add_option("--sampler", render_sampler, "uniform, cosine or phong:n=..,ws=..")->capture_default_str();

    // metrics
    auto *metrics = app.add_subcommand("metrics", "image metrics as CSV");
    std::vector<std::string> m_test, m_ref, m_names;
    std::string m_out;
    bool m_linear = false;
    metrics->add_option("--test", m_test, "test images (PFM)")->required();
    metrics->add_option("--reference", m_ref, "reference images (PFM), one per test image")->required();
    metrics->add_option("--material", m_names, "labels, one per pair (default: test file stem)");
    metrics->add_flag("--linear", m_linear, "compare radiance directly instead of tone-mapped values");
    metrics->add_option("--out", m_out, "CSV file (default: standard output)");

    // encode
    auto *encode = app.add_subcommand("encode", "latent codes of NBRDFs");
    std::string enc_ae, enc_out;
    std::vector<std::string> enc_nets;
    encode->add_option("--ae", enc_ae, "autoencoder (NBAE)")->required();
    encode->add_option("--nbrdf", enc_nets, "NBRD networks")->required();
    encode->add_option("--out", enc_out, ".csv or .nblt (default: CSV on standard output)");

    // interp
    auto *interp = app.add_subcommand("interp", "decode latent interpolations between two NBRDFs");
    std::string int_ae, int_from, int_to, int_out;
    std::vector<double> int_t{0.5};
    interp->add_option("--ae", int_ae, "autoencoder (NBAE)")->required();
    interp->add_option("--from", int_from, "NBRD at t = 0")->required();
    interp->add_option("--to", int_to, "NBRD at t = 1")->required();
    interp->add_option("--t", int_t, "interpolation parameters")->capture_default_str();
    interp->add_option("--out", int_out, "output NBRD (suffixed with _t<value> when several t are given)")->required();

    // fit-phong
    auto *fit = app.add_subcommand("fit-phong", "fit Blinn-Phong sampling parameters to a BRDF");
    BrdfSource fit_src;
    add_brdf_options(fit, fit_src, true);
    PhongFitConfig fit_cfg;
    fit->add_option("--samples", fit_cfg.samples, "adaptive samples in the fit")->capture_default_str();

    // predict
    auto *predict = app.add_subcommand("predict", "predict Blinn-Phong sampling parameters from latent codes");
    std::string pred_ae, pred_model;
    std::vector<std::string> pred_nets;
    predict->add_option("--ae", pred_ae, "autoencoder (NBAE)")->required();
    predict->add_option("--predictor", pred_model, "predictor (NBPR)")->required();
    predict->add_option("--nbrdf", pred_nets, "NBRD networks")->required();

    // sample-bench
    auto *bench = app.add_subcommand("sample-bench", "sample + evaluate throughput as CSV");
    std::vector<std::string> b_nets, b_merl, b_oracles;
    std::string b_sampler = "phong:n=100,ws=0.5", b_ae, b_pred;
    double b_duration = 1;
    int b_runs = 3;
    bench->add_option("--nbrdf", b_nets, "NBRD networks");
    bench->add_option("--merl", b_merl, "MERL files");
    bench->add_option("--oracle", b_oracles, "analytic BRDFs");
    bench->add_option("--sampler", b_sampler, "sampler for every BRDF")->capture_default_str();
    bench->add_option("--ae", b_ae, "with --predictor: sample NBRDFs with predicted parameters");
    bench->add_option("--predictor", b_pred, "predictor (NBPR)");
    bench->add_option("--duration", b_duration, "seconds per run")->capture_default_str();
    bench->add_option("--runs", b_runs, "runs per BRDF")->capture_default_str();

    // bake-oracle
    auto *bake = app.add_subcommand("bake-oracle", "tabulate an analytic BRDF in MERL format");
    std::string bake_spec, bake_out;
    bake->add_option("--oracle", bake_spec, "isotropic analytic BRDF")->required();
    bake->add_option("--out", bake_out, "output MERL binary")->required();

    // train-ae
    auto *train_ae = app.add_subcommand("train-ae", "train the weights autoencoder on NBRDFs");
    std::vector<std::string> ae_nets;
    std::string ae_out, ae_hidden = "256,64";
    AutoencoderConfig ae_cfg;
    int ae_latent = kLatentSize;
    bool ae_no_augment = false, ae_verbose = false;
    train_ae->add_option("--nbrdf", ae_nets, "corpus of NBRD networks")->required();
    train_ae->add_option("--out", ae_out, "output autoencoder (NBAE)")->required();
    train_ae->add_option("--hidden", ae_hidden, "encoder hidden widths; the decoder mirrors them")->capture_default_str();
    train_ae->add_option("--latent", ae_latent, "latent width")->capture_default_str();
    train_ae->add_option("--epochs", ae_cfg.epochs, "epochs")->capture_default_str();
    train_ae->add_option("--batch", ae_cfg.batch_size, "mini-batch size")->capture_default_str();
    train_ae->add_option("--lr", ae_cfg.adam.learning_rate, "Adam learning rate")->capture_default_str();
    train_ae->add_option("--train-fraction", ae_cfg.train_fraction, "materials used for training")->capture_default_str();
    train_ae->add_option("--render-size", ae_cfg.render_size, "loss render size")->capture_default_str();
    train_ae->add_flag("--no-augment", ae_no_augment, "skip RGB permutation augmentation");
    train_ae->add_flag("--weight-loss", ae_cfg.weight_loss, "ablation: weight-space MSE instead of the image loss");
    train_ae->add_flag("--verbose", ae_verbose, "print every epoch");

    // train-predictor
    auto *train_pred = app.add_subcommand("train-predictor", "train the latent to sampling-parameter predictor");
    std::string tp_ae, tp_labels, tp_out, tp_hidden = "16";
    std::vector<std::string> tp_nets;
    PredictorConfig tp_cfg;
    train_pred->add_option("--ae", tp_ae, "autoencoder (NBAE)")->required();
    train_pred->add_option("--nbrdf", tp_nets, "training NBRD networks")->required();
    train_pred->add_option("--labels", tp_labels, "CSV material,n,ws as written by fit-phong (default: fit each network)");
    train_pred->add_option("--out", tp_out, "output predictor (NBPR)")->required();
    train_pred->add_option("--hidden", tp_hidden, "hidden widths")->capture_default_str();
    train_pred->add_option("--steps", tp_cfg.steps, "full-batch Adam steps")->capture_default_str();
    train_pred->add_option("--lr", tp_cfg.adam.learning_rate, "Adam learning rate")->capture_default_str();
    train_pred->add_option("--weight-decay", tp_cfg.weight_decay, "L2 penalty")->capture_default_str();

    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    err << "# effective configuration\nseed=" << seed << "\njobs=" << jobs << '\n';
    for (const auto *sub : app.get_subcommands()) err << '[' << sub->get_name() << "]\n" << sub->config_to_str(true, false);
    err << std::flush;

    try {
        if (train->parsed()) {
            auto gt = load_brdf(train_src);
            const bool aniso = source_is_anisotropic(*gt);
            TrainConfig cfg = train_cfg;
            cfg.anisotropic = aniso;
            cfg.mode = parse_sampling_mode(train_mode);
            if (cfg.sample_count == 0) cfg.sample_count = TrainConfig::defaults(aniso).sample_count;
            cfg.seed = seed;
            cfg.validate();
            const auto result = train_nbrdf(*gt, cfg, [&](int epoch, double tl, double vl) {
                if (train_verbose) err << "epoch " << epoch << " train " << tl << " validation " << vl << '\n';
            });
            save_nbrd(train_out, result.net);
            out << std::setprecision(8) << "final_loss=" << result.validation_loss[std::size_t(result.best_epoch - 1)]
                << " train_loss=" << result.train_loss[std::size_t(result.best_epoch - 1)]
                << " best_epoch=" << result.best_epoch << " epochs=" << result.train_loss.size()
                << (aniso ? " anisotropic" : "") << '\n';
        } else if (eval->parsed()) {
            auto gt = load_brdf(eval_src);
            NbrdfBrdf net(load_nbrd(resolve_input(eval_nbrdf)), eval_aniso);
            const SceneSpec scene = SceneSpec::resolve(eval_scene);
            if (scene.lighting != SceneSpec::Lighting::Directional) throw UsageError("eval needs a directional scene");
            if (eval_samples < 1) throw UsageError("--samples must be >= 1");
            std::mt19937_64 rng(seed);
            const auto samples = sample_batch(*gt, std::size_t(eval_samples), SamplingMode::Adaptive, eval_aniso, rng);
            double loss = 0;
            for (const auto &s : samples) loss += nbrdf_loss(s.f_true, net.eval(s.wi, s.wo), s.cos_theta_i);
            MetricReport report;
            const std::string name = eval_material.empty() ? stem_of(eval_nbrdf) : eval_material;
            report.add(name, "log_l1", loss / double(samples.size()));
            report.add_all(name, tone_map(render_sphere(net, scene, eval_size, jobs)),
                           tone_map(render_sphere(*gt, scene, eval_size, jobs)));
            report.write_csv(out);
        } else if (render->parsed()) {
            auto brdf = load_brdf(render_src);
            const SceneSpec scene = SceneSpec::resolve(render_scene);
            Image img;
            if (scene.lighting == SceneSpec::Lighting::Directional)
                img = render_sphere(*brdf, scene, render_size, jobs);
            else
                img = render_mc(*brdf, scene, SamplerSpec::parse(render_sampler), render_size, render_spp, seed, jobs).mean;
            write_image(render_out, img);
        } else if (metrics->parsed()) {
            if (m_test.size() != m_ref.size()) throw UsageError("--test and --reference need the same number of images");
            if (!m_names.empty() && m_names.size() != m_test.size()) throw UsageError("give one --material per image pair");
            MetricReport report;
            for (std::size_t i = 0; i < m_test.size(); ++i) {
                Image a = read_pfm(resolve_input(m_test[i])), b = read_pfm(resolve_input(m_ref[i]));
                if (!m_linear) {
                    a = tone_map(a);
                    b = tone_map(b);
                }
                report.add_all(csv_field(m_names.empty() ? stem_of(m_test[i]) : m_names[i]), a, b);
            }
            if (m_out.empty()) {
                report.write_csv(out);
            } else {
                std::ofstream f(m_out);
                if (!f) throw IOError("cannot write " + m_out);
                report.write_csv(f);
            }
        } else if (encode->parsed()) {
            const Autoencoder ae = load_autoencoder(resolve_input(enc_ae));
            std::vector<LatentCode> codes;
            std::vector<std::string> names;
            for (const auto &p : enc_nets) {
                codes.push_back(ae.encode(load_nbrd(resolve_input(p))));
                names.push_back(csv_field(stem_of(p)));
            }
            if (enc_out.empty()) {
                write_latent_csv(out, names, codes);
            } else if (fs::path(enc_out).extension() == ".nblt") {
                save_latents(enc_out, codes);
            } else if (fs::path(enc_out).extension() == ".csv") {
                std::ofstream f(enc_out);
                if (!f) throw IOError("cannot write " + enc_out);
                write_latent_csv(f, names, codes);
            } else {
                throw UsageError("--out must end in .csv or .nblt");
            }
        } else if (interp->parsed()) {
            const Autoencoder ae = load_autoencoder(resolve_input(int_ae));
            const LatentCode za = ae.encode(load_nbrd(resolve_input(int_from)));
            const LatentCode zb = ae.encode(load_nbrd(resolve_input(int_to)));
            for (double t : int_t) {
                if (!(t >= 0 && t <= 1)) throw UsageError("--t values must lie in [0, 1]");
                std::ostringstream suffix;
                suffix << "_t" << t;
                const std::string path = int_t.size() == 1 ? int_out : with_suffix(int_out, suffix.str());
                save_nbrd(path, interp_latent(ae, za, zb, t));
                out << path << '\n';
            }
        } else if (fit->parsed()) {
            auto brdf = load_brdf(fit_src);
            PhongFitConfig cfg = fit_cfg;
            cfg.seed = seed;
            const auto p = fit_phong_oracle(*brdf, cfg);
            out << std::setprecision(10) << "material,n,ws\n" << csv_field(brdf_name(fit_src)) << ',' << p.exponent << ','
                << p.ws << '\n';
        } else if (predict->parsed()) {
            const Autoencoder ae = load_autoencoder(resolve_input(pred_ae));
            const Predictor pr = load_predictor(resolve_input(pred_model));
            out << std::setprecision(10) << "material,n,ws\n";
            for (const auto &p : pred_nets) {
                const auto params = pr.predict(ae.encode(load_nbrd(resolve_input(p))));
                out << csv_field(stem_of(p)) << ',' << params.exponent << ',' << params.ws << '\n';
            }
        } else if (bench->parsed()) {
            if (b_nets.empty() && b_merl.empty() && b_oracles.empty())
                throw UsageError("give at least one --nbrdf, --merl or --oracle");
            if (b_ae.empty() != b_pred.empty()) throw UsageError("--ae and --predictor go together");
            if (b_runs < 1) throw UsageError("--runs must be >= 1");
            const SamplerSpec sampler = SamplerSpec::parse(b_sampler);
            std::optional<Autoencoder> ae;
            std::optional<Predictor> pr;
            if (!b_ae.empty()) {
                ae = load_autoencoder(resolve_input(b_ae));
                pr = load_predictor(resolve_input(b_pred));
            }
            struct Entry {
                std::string name;
                std::unique_ptr<Brdf> brdf;
                SamplerSpec sampler;
            };
            std::vector<Entry> entries;
            for (const auto &p : b_nets) {
                auto net = load_nbrd(resolve_input(p));
                SamplerSpec s = sampler;
                if (pr) s = SamplerSpec::phong_lobe(pr->predict(ae->encode(net)));
                entries.push_back({"nbrdf:" + stem_of(p), std::make_unique<NbrdfBrdf>(std::move(net)), s});
            }
            for (const auto &p : b_merl)
                entries.push_back({"merl:" + stem_of(p),
                                   std::make_unique<TabulatedBrdf>(TabulatedBrdf::load_merl(resolve_input(p))), sampler});
            for (const auto &s : b_oracles)
                entries.push_back({"oracle:" + s, std::make_unique<AnalyticOracle>(AnalyticOracle::parse(s)), sampler});
            out << "brdf,sampler,run,rays_per_second,memory_bytes\n";
            for (const auto &e : entries)
                for (int r = 0; r < b_runs; ++r) {
                    const auto res = bench_rays(*e.brdf, e.sampler, b_duration, mix_seed(seed, std::uint64_t(r)));
                    out << csv_field(e.name) << ',' << csv_field(e.sampler.describe()) << ',' << r << ','
                        << std::setprecision(8) << res.rays_per_second << ',' << res.memory_bytes << '\n';
                }
        } else if (bake->parsed()) {
            bake_oracle(AnalyticOracle::parse(bake_spec)).save_merl(bake_out);
        } else if (train_ae->parsed()) {
            AutoencoderConfig cfg = ae_cfg;
            cfg.encoder_dims = {int(default_nbrdf_shape().param_count())};
            for (int w : parse_widths(ae_hidden)) cfg.encoder_dims.push_back(w);
            cfg.encoder_dims.push_back(ae_latent);
            cfg.augment = !ae_no_augment;
            cfg.seed = seed;
            cfg.jobs = jobs;
            cfg.validate();
            const auto corpus = load_nets(ae_nets);
            const auto result = train_autoencoder(corpus, cfg, [&](int epoch, double tl, double vl) {
                if (ae_verbose) err << "epoch " << epoch << " train " << tl << " test " << vl << '\n';
            });
            save_autoencoder(ae_out, result.ae);
            out << std::setprecision(8) << "first_loss=" << result.train_loss.front()
                << " final_loss=" << result.train_loss.back() << " test_loss=" << result.test_loss.back() << '\n';
            out << "test_materials=";
            for (std::size_t i = 0; i < result.test_materials.size(); ++i)
                out << (i ? "," : "") << stem_of(ae_nets[result.test_materials[i]]);
            out << '\n';
        } else if (train_pred->parsed()) {
            const Autoencoder ae = load_autoencoder(resolve_input(tp_ae));
            const auto nets = load_nets(tp_nets);
            std::vector<PhongSamplingParams> labels;
            if (!tp_labels.empty()) {
                std::ifstream f(resolve_input(tp_labels));
                if (!f) throw IOError("cannot open " + tp_labels);
                std::map<std::string, PhongSamplingParams> by_name;
                std::string line;
                while (std::getline(f, line)) {
                    std::stringstream ss(line);
                    std::string name, n, ws;
                    if (!std::getline(ss, name, ',') || !std::getline(ss, n, ',') || !std::getline(ss, ws)) continue;
                    if (name == "material") continue;
                    try {
                        by_name[name] = {std::stod(n), std::stod(ws)};
                    } catch (const std::exception &) {
                        throw FormatError("bad label row: " + line);
                    }
                }
                for (const auto &p : tp_nets) {
                    auto it = by_name.find(stem_of(p));
                    if (it == by_name.end()) throw FormatError("no label for " + stem_of(p));
                    labels.push_back(it->second);
                }
            } else {
                PhongFitConfig fc;
                fc.seed = seed;
                for (const auto &net : nets) labels.push_back(fit_phong_oracle(NbrdfBrdf(net), fc));
            }
            std::vector<LatentCode> z;
            for (const auto &net : nets) z.push_back(ae.encode(net));
            PredictorConfig cfg = tp_cfg;
            cfg.hidden = parse_widths(tp_hidden);
            cfg.seed = seed;
            const auto result = train_predictor(z, labels, cfg);
            save_predictor(tp_out, result.predictor);
            out << std::setprecision(8) << "final_loss=" << result.loss.back() << '\n';
        }
    } catch (const UsageError &e) {
        err << "nbrdf: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IOError &e) {
        err << "nbrdf: " << e.what() << '\n';
        return kExitFailure;
    } catch (const FormatError &e) {
        err << "nbrdf: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::invalid_argument &e) {
        err << "nbrdf: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "nbrdf: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

int run(int argc, const char *const *argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace nbrdf::cli
