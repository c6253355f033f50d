"""One renderer per figure id, reading harness outputs and writing images.

Line plots are written as SVG (with a fixed hash salt and no embedded date,
so reruns are byte-identical); density heatmaps are raster PNG on a
logarithmic color scale. Every figure carries a small footer with the short
hash of the input directory's manifest.
"""

from __future__ import annotations

import os
from typing import Callable, Dict, List, Optional

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "chaoticlight-figures"

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402
import numpy as np  # noqa: E402

from .io import FigureInputError, manifest_hash, read_csv, read_density  # noqa: E402

# experiment subdirectory searched (after the input directory itself) for
# each figure's artifacts, matching the harness's per-experiment layout
_SUBDIRS = {
    1: "enhancement_curve",
    2: "amplitude_sweep",
    3: "enhancement_curve",
    4: "density_map",
    5: "populations",
    6: "frag",
    7: "bandwidth_sweep",
    8: "narrowband_curve",
    9: "harmonic_curve",
}


def _resolve(in_dir: str, name: str, fig_id: int) -> str:
    direct = os.path.join(in_dir, name)
    if os.path.exists(direct):
        return direct
    nested = os.path.join(in_dir, _SUBDIRS[fig_id], name)
    if os.path.exists(nested):
        return nested
    return direct  # let the reader report the missing direct path


def _stamp(fig, in_dir: str, fig_id: int) -> None:
    base = os.path.dirname(_resolve(in_dir, "manifest.txt", fig_id))
    digest = manifest_hash(base)
    if digest:
        fig.text(
            0.995, 0.005, f"inputs {digest}", ha="right", va="bottom",
            fontsize=5, color="0.55",
        )


def _save(fig, out_dir: str, name: str) -> str:
    """Atomic write: render to a temp path, then move into place."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    tmp = path + ".tmp"
    kwargs = {}
    if name.endswith(".svg"):
        kwargs["metadata"] = {"Date": None}
    try:
        fig.savefig(tmp, format=name.rsplit(".", 1)[1], **kwargs)
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.remove(tmp)
    return path


def render_fig1(in_dir: str, out_dir: str) -> str:
    """Sample chaotic waveform and its ensemble power spectral density."""
    _, wf = read_csv(_resolve(in_dir, "chaotic_waveform.csv", 1), ["t", "value"])
    _, sp = read_csv(_resolve(in_dir, "chaotic_psd.csv", 1), ["omega", "power"])
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 5))
    ax1.plot(wf["t"], wf["value"], lw=0.4, color="tab:blue")
    ax1.set_xlabel("t (a.u.)")
    ax1.set_ylabel("Z(t) (a.u.)")
    ax1.set_title("chaotic field, one realization")
    pos = sp["power"] > 0
    ax2.semilogy(sp["omega"][pos], sp["power"][pos], lw=0.7, color="tab:red")
    ax2.set_xlim(0, min(1.5, sp["omega"].max()))
    ax2.set_xlabel(r"$\omega$ (a.u.)")
    ax2.set_ylabel("PSD")
    ax2.set_title("ensemble power spectrum")
    fig.tight_layout()
    _stamp(fig, in_dir, 1)
    return _save(fig, out_dir, "fig1.svg")


def render_fig2(in_dir: str, out_dir: str) -> str:
    """Laser-only ionization probability versus peak amplitude."""
    _, cols = read_csv(_resolve(in_dir, "amplitude_sweep.csv", 2), ["F0", "P_mean"])
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.plot(cols["F0"], cols["P_mean"], "o-", color="tab:blue")
    ax.set_xlabel(r"$F_0$ (a.u.)")
    ax.set_ylabel("ionization probability")
    fig.tight_layout()
    _stamp(fig, in_dir, 2)
    return _save(fig, out_dir, "fig2.svg")


def render_fig3(in_dir: str, out_dir: str) -> str:
    """Enhancement factor versus chaotic field strength, with its maximum."""
    meta, cols = read_csv(
        _resolve(in_dir, "enhancement_curve.csv", 3),
        ["F_rms", "eta_mean", "eta_stderr"],
    )
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.errorbar(
        cols["F_rms"], cols["eta_mean"], yerr=cols["eta_stderr"],
        fmt="o-", capsize=2, color="tab:blue",
    )
    try:
        px, py = float(meta["peak_F_rms"]), float(meta["peak_eta"])
    except (KeyError, ValueError):
        i = int(np.argmax(cols["eta_mean"]))
        px, py = cols["F_rms"][i], cols["eta_mean"][i]
    ax.plot([px], [py], "v", color="tab:red", ms=9, label=f"max $\\eta$ = {py:.1f}")
    ax.set_xlabel(r"$F_\mathrm{rms}$ (a.u.)")
    ax.set_ylabel(r"enhancement $\eta$")
    ax.legend()
    fig.tight_layout()
    _stamp(fig, in_dir, 3)
    return _save(fig, out_dir, "fig3.svg")


def render_fig4(in_dir: str, out_dir: str) -> str:
    """Four wavepacket density panels on a logarithmic color scale."""
    panels = {}
    for name in ("a", "b", "c", "d"):
        base = _resolve(in_dir, f"density_map_{name}.f64", 4)[: -len(".f64")]
        panels[name] = read_density(base)
    fig, axes = plt.subplots(2, 2, figsize=(8, 7), sharex=True, sharey=True)
    titles = {
        "a": "laser only",
        "b": "chaotic only",
        "c": "laser + chaotic",
        "d": "laser + chaotic (ensemble mean)",
    }
    vmax = max(p[0].max() for p in panels.values())
    vmin = vmax * 1e-9
    for ax, name in zip(axes.ravel(), "abcd"):
        data, sc = panels[name]
        im = ax.imshow(
            np.maximum(data, vmin),
            origin="lower",
            aspect="auto",
            norm=LogNorm(vmin=vmin, vmax=vmax),
            extent=(sc["x_min"], sc["x_max"], sc["t_min"], sc["t_max"]),
            cmap="inferno",
        )
        ax.set_title(titles[name], fontsize=10)
    for ax in axes[1]:
        ax.set_xlabel("x (a.u.)")
    for ax in axes[:, 0]:
        ax.set_ylabel("t (a.u.)")
    fig.colorbar(im, ax=axes, shrink=0.85, label=r"$|\psi|^2$ (log scale)")
    _stamp(fig, in_dir, 4)
    return _save(fig, out_dir, "fig4.png")


def render_fig5(in_dir: str, out_dir: str) -> str:
    """Bound-level populations, chaotic light alone versus combined field."""
    _, cols = read_csv(
        _resolve(in_dir, "populations.csv", 5),
        ["level", "pop_chaotic_mean", "pop_combined_mean"],
    )
    levels = cols["level"]
    width = 0.4
    fig, ax = plt.subplots(figsize=(6, 3.8))
    ax.bar(levels - width / 2, cols["pop_chaotic_mean"], width, label="chaotic only")
    ax.bar(levels + width / 2, cols["pop_combined_mean"], width, label="laser + chaotic")
    ax.set_yscale("log")
    ax.set_xlabel("bound level")
    ax.set_ylabel("population")
    ax.legend()
    fig.tight_layout()
    _stamp(fig, in_dir, 5)
    return _save(fig, out_dir, "fig5.svg")


def render_fig6(in_dir: str, out_dir: str) -> str:
    """FRAG spectra: bare-atom and laser-driven probe response."""
    _, cols = read_csv(
        _resolve(in_dir, "frag.csv", 6),
        ["omega_p", "bare_depletion", "driven_probe_induced"],
    )
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.semilogy(cols["omega_p"], np.maximum(cols["bare_depletion"], 1e-12),
                "-", color="tab:blue", label="bare atom")
    ax.semilogy(cols["omega_p"], np.maximum(cols["driven_probe_induced"], 1e-12),
                "-", color="tab:red", label="laser-driven")
    ax.set_xlabel(r"probe frequency $\omega_p$ (a.u.)")
    ax.set_ylabel("probe-induced depletion")
    ax.legend()
    fig.tight_layout()
    _stamp(fig, in_dir, 6)
    return _save(fig, out_dir, "fig6.svg")


def render_fig7(in_dir: str, out_dir: str) -> str:
    """Ionization and enhancement versus chaotic bandwidth."""
    _, cols = read_csv(
        _resolve(in_dir, "bandwidth_sweep.csv", 7),
        ["omega_max", "P_n_mean", "P_n_stderr", "P_ln_mean", "P_ln_stderr",
         "eta_mean", "eta_stderr"],
    )
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(5.5, 6), sharex=True)
    ax1.errorbar(cols["omega_max"], cols["P_n_mean"], yerr=cols["P_n_stderr"],
                 fmt="o-", capsize=2, label=r"$P_n$")
    ax1.errorbar(cols["omega_max"], cols["P_ln_mean"], yerr=cols["P_ln_stderr"],
                 fmt="s-", capsize=2, label=r"$P_{l+n}$")
    ax1.set_ylabel("ionization probability")
    ax1.legend()
    ax2.errorbar(cols["omega_max"], cols["eta_mean"], yerr=cols["eta_stderr"],
                 fmt="o-", capsize=2, color="tab:green")
    ax2.set_xlabel(r"$\omega_\mathrm{max}$ (a.u.)")
    ax2.set_ylabel(r"$\eta$")
    fig.tight_layout()
    _stamp(fig, in_dir, 7)
    return _save(fig, out_dir, "fig7.svg")


def render_fig8(in_dir: str, out_dir: str) -> str:
    """Enhancement curves for narrowband chaotic light, one per bandwidth."""
    _, cols = read_csv(
        _resolve(in_dir, "narrowband_curve.csv", 8),
        ["bandwidth", "F_rms", "eta_mean", "eta_stderr"],
    )
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for bw in np.unique(cols["bandwidth"]):
        sel = cols["bandwidth"] == bw
        ax.errorbar(cols["F_rms"][sel], cols["eta_mean"][sel],
                    yerr=cols["eta_stderr"][sel], fmt="o-", capsize=2,
                    label=f"bandwidth {bw:g}")
    ax.set_xscale("log")
    ax.set_xlabel(r"$F_\mathrm{rms}$ (a.u.)")
    ax.set_ylabel(r"$\eta$")
    ax.legend()
    fig.tight_layout()
    _stamp(fig, in_dir, 8)
    return _save(fig, out_dir, "fig8.svg")


def render_fig9(in_dir: str, out_dir: str) -> str:
    """Enhancement curves for odd-order versus all-order harmonic combs."""
    _, cols = read_csv(
        _resolve(in_dir, "harmonic_curve.csv", 9),
        ["comb", "F_rms", "eta_mean", "eta_stderr"],
    )
    labels = {0: "odd harmonics", 1: "all harmonics"}
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for key, label in labels.items():
        sel = cols["comb"] == key
        if not np.any(sel):
            raise FigureInputError(
                f"harmonic_curve.csv: no rows with comb={key}"
            )
        ax.errorbar(cols["F_rms"][sel], cols["eta_mean"][sel],
                    yerr=cols["eta_stderr"][sel], fmt="o-", capsize=2, label=label)
    ax.set_xscale("log")
    ax.set_xlabel(r"$F_\mathrm{rms}$ (a.u.)")
    ax.set_ylabel(r"$\eta$")
    ax.legend()
    fig.tight_layout()
    _stamp(fig, in_dir, 9)
    return _save(fig, out_dir, "fig9.svg")


RENDERERS: Dict[int, Callable[[str, str], str]] = {
    1: render_fig1,
    2: render_fig2,
    3: render_fig3,
    4: render_fig4,
    5: render_fig5,
    6: render_fig6,
    7: render_fig7,
    8: render_fig8,
    9: render_fig9,
}


def render(fig_ids: List[int], in_dir: str, out_dir: str) -> List[str]:
    return [RENDERERS[i](in_dir, out_dir) for i in fig_ids]
