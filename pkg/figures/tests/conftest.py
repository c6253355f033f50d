"""Synthetic harness-format inputs for figure rendering tests."""

import os

import numpy as np
import pytest


def _write_csv(path, meta, header, rows):
    with open(path, "w") as fh:
        for k, v in meta.items():
            fh.write(f"# {k}={v}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _write_density(base, rows, cols, seed):
    rng = np.random.default_rng(seed)
    data = rng.random((rows, cols)) * 1e-3 + 1e-12
    data[rows // 2, cols // 2] = 1.0
    data.tofile(base + ".f64")
    with open(base + ".meta.txt", "w") as fh:
        fh.write(f"rows={rows}\ncols={cols}\n")
        fh.write("t_min=0.0\nt_max=1102.3\nx_min=-200.0\nx_max=200.0\n")


@pytest.fixture
def harness_dir(tmp_path):
    """Directory populated with every artifact the nine figures consume."""
    d = tmp_path / "outputs"
    d.mkdir()
    meta = {"config_hash": "deadbeef", "seed": "1"}

    t = np.linspace(0.0, 1102.3, 200)
    _write_csv(d / "chaotic_waveform.csv", meta, ["t", "value"],
               np.column_stack([t, 0.002 * np.sin(0.3 * t)]))
    om = np.linspace(0.01, 1.0, 100)
    _write_csv(d / "chaotic_psd.csv", meta, ["omega", "power"],
               np.column_stack([om, np.where(om < 0.75, 1e-5, 1e-12)]))

    F0 = np.linspace(0.0, 0.1, 6)
    _write_csv(d / "amplitude_sweep.csv", meta, ["F0", "P_mean"],
               np.column_stack([F0, F0**4 * 1e3]))

    F = np.linspace(0.001, 0.01, 8)
    eta = 30 * np.exp(-((F - 0.004) / 0.002) ** 2)
    _write_csv(d / "enhancement_curve.csv",
               {**meta, "peak_F_rms": "0.004", "peak_eta": "30.0"},
               ["F_rms", "eta_mean", "eta_stderr"],
               np.column_stack([F, eta, 0.1 * eta + 0.01]))

    for i, name in enumerate("abcd"):
        _write_density(str(d / f"density_map_{name}"), 40, 64, seed=i)

    levels = np.arange(8)
    _write_csv(d / "populations.csv", meta,
               ["level", "energy", "pop_chaotic_mean", "pop_chaotic_stderr",
                "pop_combined_mean", "pop_combined_stderr"],
               np.column_stack([levels, -0.5 + 0.05 * levels,
                                10.0 ** (-levels - 1), 10.0 ** (-levels - 3),
                                10.0 ** (-0.5 * levels - 1), 10.0 ** (-levels - 3)]))

    op = np.linspace(0.25, 0.5, 30)
    _write_csv(d / "frag.csv", meta,
               ["omega_p", "bare_depletion", "driven_probe_induced"],
               np.column_stack([op, 1e-4 * np.exp(-((op - 0.2675) / 0.01) ** 2),
                                1e-5 + 1e-4 * np.exp(-((op - 0.35) / 0.02) ** 2)]))

    wmax = np.linspace(0.1, 0.7, 13)
    pn = 0.5 / (1 + np.exp(-(wmax - 0.26) / 0.02))
    _write_csv(d / "bandwidth_sweep.csv", meta,
               ["omega_max", "P_n_mean", "P_n_stderr", "P_ln_mean",
                "P_ln_stderr", "eta_mean", "eta_stderr"],
               np.column_stack([wmax, pn, 0.02 * np.ones_like(wmax),
                                pn * 1.3 + 0.01, 0.02 * np.ones_like(wmax),
                                pn * 4, 0.3 * np.ones_like(wmax)]))

    rows = []
    for bw in (0.001, 0.015, 0.2):
        for f in np.geomspace(2.5e-4, 8e-3, 6):
            e = 100 * bw ** 0.3 * np.exp(-((np.log(f) - np.log(2e-3)) / 1.0) ** 2)
            rows.append([bw, f, e, 0.05 * e + 0.01])
    _write_csv(d / "narrowband_curve.csv", meta,
               ["bandwidth", "F_rms", "eta_mean", "eta_stderr"], rows)

    rows = []
    for comb in (0, 1):
        for f in np.geomspace(1e-3, 8e-3, 5):
            e = (5.0 if comb == 0 else 300.0) * f / 8e-3
            rows.append([comb, f, e, 0.05 * e + 0.01])
    _write_csv(d / "harmonic_curve.csv", meta,
               ["comb", "F_rms", "eta_mean", "eta_stderr"], rows)

    with open(d / "manifest.txt", "w") as fh:
        fh.write("synthetic inputs for figure tests\n")
    return str(d)


@pytest.fixture
def out_dir(tmp_path):
    d = tmp_path / "images"
    return str(d)
