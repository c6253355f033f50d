"""Command-line surface for the simulation experiments."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from typing import Optional

import numpy as np

from .core import solve_bound_states
from .errors import ConfigError
from .fields import ChaoticSpectrumSpec, LaserPulseSpec
from .harness import (
    ExperimentConfig,
    GridConfig,
    SweepConfig,
    load_config,
    run_experiment,
)
from .potentials import SoftCorePotential
from .propagator import PropagationConfig, relax_to_ground

OUTPUT_ROOT_ENV = "CHAOTICLIGHT_OUT_ROOT"

# desk-scale numerical setup for ensemble experiments: smaller box, coarser
# step; the full default grid is kept for the deterministic amplitude sweep
_ENSEMBLE_GRID = GridConfig(x_max=200.0, n_points=2048)
_ENSEMBLE_PROP = PropagationConfig(dt=0.1)

_BROADBAND = ChaoticSpectrumSpec(
    kind="flat_band", F_rms=0.002, omega_min=0.0, omega_max=0.75, n_modes=512
)

_F_RMS_SWEEP = (0.0005, 0.001, 0.0015, 0.002, 0.0025, 0.003, 0.004, 0.006, 0.009, 0.012)


def default_config(kind: str) -> ExperimentConfig:
    common = dict(
        kind=kind,
        grid=_ENSEMBLE_GRID,
        propagation=_ENSEMBLE_PROP,
        laser=LaserPulseSpec(F0=0.02),
        chaotic=_BROADBAND,
        n_realizations=10,
    )
    if kind == "amplitude_sweep":
        return ExperimentConfig(
            kind=kind,
            grid=GridConfig(),
            propagation=PropagationConfig(),
            drift_factor=2.0,
            sweep=SweepConfig("F0", tuple(np.round(np.arange(0.0, 0.125, 0.01), 3))),
        )
    if kind == "enhancement_curve":
        return ExperimentConfig(**common, sweep=SweepConfig("F_rms", _F_RMS_SWEEP))
    if kind == "density_map":
        return ExperimentConfig(**common)
    if kind == "populations":
        return ExperimentConfig(**common)
    if kind == "frag":
        return ExperimentConfig(
            **common,
            probe_freqs=tuple(np.round(np.arange(0.05, 0.7001, 0.005), 4)),
        )
    if kind == "bandwidth_sweep":
        return ExperimentConfig(
            **common,
            sweep=SweepConfig(
                "omega_max",
                (0.05, 0.10, 0.15, 0.20, 0.22, 0.24, 0.26, 0.28, 0.30,
                 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.70),
            ),
        )
    if kind == "narrowband_curve":
        return ExperimentConfig(
            **common,
            sweep=SweepConfig("F_rms", (0.0005, 0.001, 0.002, 0.004, 0.008, 0.016)),
            bandwidths=(0.001, 0.015, 0.2),
        )
    if kind == "harmonic_curve":
        return ExperimentConfig(
            **common,
            sweep=SweepConfig("F_rms", (0.001, 0.002, 0.004, 0.008, 0.016, 0.032)),
        )
    raise ConfigError(f"unknown experiment kind {kind!r}")


_SUBCOMMANDS = {
    "amplitude-sweep": "amplitude_sweep",
    "enhancement": "enhancement_curve",
    "density": "density_map",
    "populations": "populations",
    "frag": "frag",
    "bandwidth": "bandwidth_sweep",
    "narrowband": "narrowband_curve",
    "harmonics": "harmonic_curve",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaoticlight",
        description="1D photoionization experiments under laser plus chaotic light",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="YAML experiment config path")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--realizations", type=int, help="ensemble size override")
        p.add_argument("--out", help="output directory")
        p.add_argument("--workers", type=int, help="parallel worker count")

    eig = sub.add_parser("eigen", help="print the bound-state spectrum")
    add_common(eig)
    eig.add_argument("--levels", type=int, default=15)

    for name in _SUBCOMMANDS:
        add_common(sub.add_parser(name, help=f"run the {name} experiment"))
    return parser


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if args.realizations is not None:
        cfg = replace(cfg, n_realizations=args.realizations)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    elif os.environ.get(OUTPUT_ROOT_ENV):
        cfg = replace(
            cfg, output_dir=os.path.join(os.environ[OUTPUT_ROOT_ENV], cfg.kind)
        )
    if args.workers is not None:
        cfg = replace(cfg, workers=args.workers)
    return cfg


def _run_eigen(args) -> int:
    grid = GridConfig().build()
    pot = SoftCorePotential()
    _, e0_relax = relax_to_ground(grid, pot, PropagationConfig())
    basis = solve_bound_states(grid, pot, args.levels)
    print(f"E0 (imaginary-time relaxation) = {e0_relax:.6f} a.u.")
    print(f"E0 (eigensolver)               = {basis.energies[0]:.6f} a.u.")
    print(f"omega_12 = {basis.transition_frequency(0, 1):.6f} a.u.")
    out = args.out
    if out:
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "eigenbasis.csv")
        basis.save_csv(path)
        print(f"eigenbasis written to {path}")
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    stage = args.command
    try:
        if args.command == "eigen":
            return _run_eigen(args)
        kind = _SUBCOMMANDS[args.command]
        stage = f"{kind}:config"
        cfg = load_config(args.config) if args.config else default_config(kind)
        if cfg.kind != kind:
            raise ConfigError(
                f"config kind {cfg.kind!r} does not match subcommand {args.command!r}"
            )
        cfg = _apply_overrides(cfg, args)
        stage = f"{kind}:run"
        run_experiment(cfg)
        print(f"{kind}: outputs written to {cfg.output_dir}")
        return 0
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error in stage {stage}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
