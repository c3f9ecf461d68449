// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <nbrdf/brdf_data.h>
#include <nbrdf/cli.h>
#include <nbrdf/latent.h>
#include <nbrdf/metrics.h>
#include <nbrdf/nbrdf.h>
#include <nbrdf/render.h>
#include <nbrdf/sampling.h>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace nbrdf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Vec3 to_vec(const std::array<double, 3> &a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> from_vec(const Vec3 &v) { return {v.x, v.y, v.z}; }
std::array<double, 3> from_rgb(const Rgb &c) { return {c.r, c.g, c.b}; }

Array to_array(const Image &img) {
    Array out({py::ssize_t(img.height()), py::ssize_t(img.width()), py::ssize_t(3)});
    auto src = img.data();
    std::copy(src.begin(), src.end(), out.mutable_data());
    return out;
}

Image to_image(const Array &a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw std::invalid_argument("expected an (height, width, 3) array");
    Image img(int(a.shape(1)), int(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), img.data().begin());
    return img;
}

std::vector<double> to_vector(const Array &a) { return {a.data(), a.data() + a.size()}; }

Array vector_array(const std::vector<double> &v) {
    Array out(py::ssize_t(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_nbrdf, m) {
    m.doc() = "Neural BRDF toolkit bindings";

    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<IOError>(m, "IOError", PyExc_OSError);
    py::register_exception<NonFiniteLoss>(m, "NonFiniteLoss", PyExc_ArithmeticError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);

    m.def(
        "dirs_to_rusink",
        [](std::array<double, 3> wi, std::array<double, 3> wo) {
            const auto c = dirs_to_rusink(to_vec(wi), to_vec(wo));
            return py::make_tuple(c.theta_h, c.theta_d, c.phi_d, c.phi_h);
        },
        py::arg("wi"), py::arg("wo"), "(theta_h, theta_d, phi_d, phi_h) of a direction pair");
    m.def(
        "rusink_to_dirs",
        [](double theta_h, double theta_d, double phi_d, double phi_h) {
            const auto [wi, wo] = rusink_to_dirs({theta_h, theta_d, phi_d, phi_h});
            return py::make_tuple(from_vec(wi), from_vec(wo));
        },
        py::arg("theta_h"), py::arg("theta_d"), py::arg("phi_d"), py::arg("phi_h") = 0.0);

    py::class_<Brdf>(m, "Brdf")
        .def(
            "eval",
            [](const Brdf &b, std::array<double, 3> wi, std::array<double, 3> wo) {
                return from_rgb(b.eval(to_vec(wi), to_vec(wo)));
            },
            py::arg("wi"), py::arg("wo"))
        .def_property_readonly("memory_bytes", &Brdf::memory_bytes);

    py::class_<AnalyticOracle, Brdf>(m, "AnalyticOracle")
        .def_static("parse", &AnalyticOracle::parse, py::arg("spec"))
        .def_property_readonly("anisotropic", &AnalyticOracle::anisotropic)
        .def("__repr__", &AnalyticOracle::describe);

    py::class_<TabulatedBrdf, Brdf>(m, "TabulatedBrdf")
        .def_static("load_merl", &TabulatedBrdf::load_merl, py::arg("path"))
        .def("save_merl", &TabulatedBrdf::save_merl, py::arg("path"));

    m.def(
        "bake_oracle", [](const AnalyticOracle &o) { return bake_oracle(o); }, py::arg("oracle"));

    py::class_<NbrdfBrdf, Brdf>(m, "Nbrdf")
        .def_static(
            "load", [](const std::filesystem::path &p, bool aniso) { return NbrdfBrdf(load_nbrd(p), aniso); },
            py::arg("path"), py::arg("anisotropic") = false)
        .def(
            "save", [](const NbrdfBrdf &n, const std::filesystem::path &p) { save_nbrd(p, n.net()); }, py::arg("path"))
        .def_property_readonly("params",
                               [](const NbrdfBrdf &n) { return vector_array(flatten(n.net())); })
        .def_static(
            "from_params", [](const Array &v) { return NbrdfBrdf(unflatten(to_vector(v))); }, py::arg("params"));

    m.def(
        "train_nbrdf",
        [](const Brdf &gt, std::int64_t samples, int epochs, const std::string &mode, std::uint64_t seed) {
            TrainConfig cfg;
            cfg.sample_count = samples;
            cfg.max_epochs = epochs;
            cfg.mode = parse_sampling_mode(mode);
            cfg.seed = seed;
            const auto *oracle = dynamic_cast<const AnalyticOracle *>(&gt);
            cfg.anisotropic = oracle && oracle->anisotropic();
            py::gil_scoped_release release;
            auto result = train_nbrdf(gt, cfg);
            return NbrdfBrdf(std::move(result.net), cfg.anisotropic);
        },
        py::arg("ground_truth"), py::arg("samples") = 800000, py::arg("epochs") = 100, py::arg("mode") = "adaptive",
        py::arg("seed") = 0);

    m.def(
        "render_sphere",
        [](const Brdf &b, int size, double theta_l, double radiance) {
            SceneSpec scene;
            scene.light_theta_deg = theta_l;
            scene.radiance = radiance;
            return to_array(render_sphere(b, scene, size));
        },
        py::arg("brdf"), py::arg("size") = 64, py::arg("theta_l") = 45.0, py::arg("radiance") = 1.0);
    m.def(
        "render_mc",
        [](const Brdf &b, const std::string &scene, const std::string &sampler, int size, int spp, std::uint64_t seed) {
            const auto img = render_mc(b, SceneSpec::resolve(scene), SamplerSpec::parse(sampler), size, spp, seed);
            return py::make_tuple(to_array(img.mean), to_array(img.standard_error));
        },
        py::arg("brdf"), py::arg("scene") = "sphere-furnace", py::arg("sampler") = "uniform", py::arg("size") = 32,
        py::arg("spp") = 64, py::arg("seed") = 0);
    m.def(
        "tone_map", [](const Array &a) { return to_array(tone_map(to_image(a))); }, py::arg("image"));

    m.def(
        "ssim", [](const Array &a, const Array &b) { return ssim(to_image(a), to_image(b)); }, py::arg("a"), py::arg("b"));
    m.def(
        "rmse", [](const Array &a, const Array &b) { return rmse(to_image(a), to_image(b)); }, py::arg("a"), py::arg("b"));
    m.def(
        "mae", [](const Array &a, const Array &b) { return mae(to_image(a), to_image(b)); }, py::arg("a"), py::arg("b"));
    m.def(
        "mape", [](const Array &a, const Array &ref) { return mape(to_image(a), to_image(ref)); }, py::arg("a"),
        py::arg("reference"));
    m.def(
        "psnr", [](const Array &a, const Array &b) { return psnr(to_image(a), to_image(b)); }, py::arg("a"), py::arg("b"));

    m.def(
        "phong_sample",
        [](double n, double ws, std::array<double, 3> wo, double u1, double u2) {
            const auto s = phong_sample({n, ws}, to_vec(wo), u1, u2);
            return py::make_tuple(from_vec(s.wi), s.pdf);
        },
        py::arg("n"), py::arg("ws"), py::arg("wo"), py::arg("u1"), py::arg("u2"));
    m.def(
        "phong_pdf",
        [](double n, double ws, std::array<double, 3> wo, std::array<double, 3> wi) {
            return phong_pdf({n, ws}, to_vec(wo), to_vec(wi));
        },
        py::arg("n"), py::arg("ws"), py::arg("wo"), py::arg("wi"));
    m.def(
        "fit_phong",
        [](const Brdf &b, int samples, std::uint64_t seed) {
            PhongFitConfig cfg;
            cfg.samples = samples;
            cfg.seed = seed;
            const auto p = fit_phong_oracle(b, cfg);
            return py::make_tuple(p.exponent, p.ws);
        },
        py::arg("brdf"), py::arg("samples") = 20000, py::arg("seed") = 7);

    py::class_<Autoencoder>(m, "Autoencoder")
        .def_static("load", &load_autoencoder, py::arg("path"))
        .def("save", [](const Autoencoder &ae, const std::filesystem::path &p) { save_autoencoder(p, ae); })
        .def(
            "encode", [](const Autoencoder &ae, const NbrdfBrdf &n) { return vector_array(ae.encode(n.net())); },
            py::arg("nbrdf"))
        .def(
            "decode", [](const Autoencoder &ae, const Array &z) { return NbrdfBrdf(ae.decode(to_vector(z))); },
            py::arg("z"));

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "nbrdf");
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line in-process; returns (exit code, stdout, stderr).");
}
