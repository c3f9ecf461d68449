# Copyright 2026 The NBRDF Toolkit Authors
# SPDX-License-Identifier: Apache-2.0

import math

import numpy as np
import pytest

import nbrdf


def normalize(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def test_rusinkiewicz_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        wi = normalize([*rng.normal(size=2), abs(rng.normal()) + 0.05])
        wo = normalize([*rng.normal(size=2), abs(rng.normal()) + 0.05])
        th, td, pd, ph = nbrdf.dirs_to_rusink(wi, wo)
        a, b = nbrdf.rusink_to_dirs(th, td, pd, ph)
        assert np.allclose(a, wi, atol=1e-9)
        assert np.allclose(b, wo, atol=1e-9)
        h = normalize(wi + wo)
        assert th == pytest.approx(math.acos(h[2]), abs=1e-9)
        assert td == pytest.approx(math.acos(np.clip(np.dot(wi, h), -1, 1)), abs=1e-9)


def test_lambertian_oracle_value():
    brdf = nbrdf.AnalyticOracle.parse("lambertian:rho=0.5")
    assert brdf.eval([0, 0, 1], normalize([1, 0, 1])) == pytest.approx([0.5 / math.pi] * 3)
    assert not brdf.anisotropic


def test_bake_and_merl_roundtrip(tmp_path):
    table = nbrdf.bake_oracle(nbrdf.AnalyticOracle.parse("lambertian:rho=0.5"))
    path = tmp_path / "l.binary"
    table.save_merl(path)
    loaded = nbrdf.TabulatedBrdf.load_merl(path)
    wi, wo = normalize([0.2, 0.1, 1]), normalize([-0.3, 0.2, 1])
    assert loaded.eval(wi, wo) == pytest.approx(table.eval(wi, wo), rel=1e-6)
    (tmp_path / "bad.binary").write_bytes(b"\x00" * 20)
    with pytest.raises((ValueError, OSError)):
        nbrdf.TabulatedBrdf.load_merl(tmp_path / "bad.binary")


def test_train_save_load(tmp_path):
    gt = nbrdf.AnalyticOracle.parse("lambertian:rho=0.4")
    net = nbrdf.train_nbrdf(gt, samples=20000, epochs=5, seed=1)
    assert net.memory_bytes == 2700
    path = tmp_path / "m.nbrd"
    net.save(path)
    assert path.stat().st_size == 2728
    loaded = nbrdf.Nbrdf.load(path)
    assert np.array_equal(loaded.params, net.params)
    value = np.array(loaded.eval([0, 0, 1], [0, 0, 1]))
    assert np.all(np.abs(value / (0.4 / math.pi) - 1) < 0.15)


def test_ssim_matches_scikit_image():
    metrics = pytest.importorskip("skimage.metrics")
    gt = nbrdf.AnalyticOracle.parse("phong:n=80,ws=0.5,albedo=0.8/0.5/0.3")
    other = nbrdf.AnalyticOracle.parse("phong:n=40,ws=0.4,albedo=0.7/0.5/0.4")
    a = nbrdf.tone_map(nbrdf.render_sphere(gt, size=48))
    b = nbrdf.tone_map(nbrdf.render_sphere(other, size=48))
    ref = metrics.structural_similarity(
        a, b, gaussian_weights=True, sigma=1.5, use_sample_covariance=False, data_range=1.0, channel_axis=2
    )
    assert nbrdf.ssim(a, b) == pytest.approx(ref, abs=1e-6)
    assert nbrdf.ssim(a, a) == pytest.approx(1.0)


def test_error_metrics_closed_form():
    a = np.full((4, 4, 3), 0.5)
    b = np.full((4, 4, 3), 0.25)
    assert nbrdf.rmse(a, b) == pytest.approx(0.25)
    assert nbrdf.mae(a, b) == pytest.approx(0.25)
    assert nbrdf.mape(a, b) == pytest.approx(1.0)
    assert nbrdf.psnr(a, b) == pytest.approx(-20 * math.log10(0.25))


def test_phong_sampler_pdf_consistency():
    rng = np.random.default_rng(3)
    wo = normalize([0.4, 0.1, 0.8])
    for _ in range(200):
        wi, pdf = nbrdf.phong_sample(200.0, 0.6, wo, rng.random(), rng.random())
        if pdf > 0:
            assert nbrdf.phong_pdf(200.0, 0.6, wo, wi) == pytest.approx(pdf, rel=1e-9)


def test_furnace_render():
    brdf = nbrdf.AnalyticOracle.parse("lambertian:rho=0.8")
    mean, se = nbrdf.render_mc(brdf, scene="sphere-furnace", sampler="cosine", size=8, spp=16)
    lit = mean[..., 0] > 0
    assert np.allclose(mean[lit], 0.8, atol=1e-9)
    assert np.all(se[lit] < 1e-9)


def test_fit_phong_recovers_exponent():
    brdf = nbrdf.AnalyticOracle.parse("phong:n=300,ws=0.6,albedo=0.7")
    n, ws = nbrdf.fit_phong(brdf, samples=5000)
    assert abs(math.log(n / 300)) < 0.2
    assert abs(ws - 0.6) < 0.1


def test_cli_in_process(tmp_path):
    code, out, _ = nbrdf.run_cli(["--help"])
    assert code == 0 and "sample-bench" in out
    code, _, err = nbrdf.run_cli(["train"])
    assert code == 2 and err
    code, _, err = nbrdf.run_cli(["render", "--merl", str(tmp_path / "missing.binary"), "--out", str(tmp_path / "x.pfm")])
    assert code == 1 and "missing.binary" in err
    out_png = tmp_path / "s.png"
    code, _, _ = nbrdf.run_cli(["render", "--oracle", "lambertian", "--size", "16", "--out", str(out_png)])
    assert code == 0 and out_png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
