# Copyright 2026 The NBRDF Toolkit Authors
# SPDX-License-Identifier: Apache-2.0
"""Neural BRDF toolkit: NBRDF compression, weights autoencoder and
Blinn-Phong importance-sampling parameter prediction."""

from ._nbrdf import (
    AnalyticOracle,
    Autoencoder,
    Brdf,
    DegenerateInput,
    FormatError,
    IOError,
    Nbrdf,
    NonFiniteLoss,
    TabulatedBrdf,
    bake_oracle,
    dirs_to_rusink,
    fit_phong,
    mae,
    mape,
    phong_pdf,
    phong_sample,
    psnr,
    render_mc,
    render_sphere,
    rmse,
    run_cli,
    rusink_to_dirs,
    ssim,
    tone_map,
    train_nbrdf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
