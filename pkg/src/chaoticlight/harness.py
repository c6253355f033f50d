"""Declarative experiment configs, ensemble orchestration, and persistence.

Experiments mirror the production protocols: laser-amplitude sweep,
enhancement curve, wavepacket density maps, level populations, FRAG scan,
bandwidth sweep, narrowband curves, and harmonic-comb curves. Every output
CSV embeds provenance (config hash, master seed, version); each experiment
directory gets a manifest with file hashes.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import __version__
from .core import SpatialGrid, WaveFunction, solve_bound_states
from .errors import ConfigError, StructuralError
from .fields import (
    CENTERED_BAND,
    FLAT_BAND,
    ChaoticSpectrumSpec,
    LaserPulseSpec,
    ProbeSpec,
    make_all_harmonic_comb,
    make_odd_harmonic_comb,
    psd,
    psd_to_csv,
    sample_chaotic,
    sample_laser,
    time_lattice,
    waveform_to_csv,
)
from .observables import enhancement, frag_scan, ionization_probability, level_populations
from .potentials import SoftCorePotential
from .propagator import PropagationConfig, propagate, relax_to_ground

EXPERIMENT_KINDS = (
    "amplitude_sweep",
    "enhancement_curve",
    "density_map",
    "populations",
    "frag",
    "bandwidth_sweep",
    "narrowband_curve",
    "harmonic_curve",
)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class GridConfig:
    x_max: float = 400.0
    n_points: int = 4096

    def __post_init__(self):
        if self.x_max <= 0:
            raise ConfigError(f"grid x_max must be positive, got {self.x_max}")
        n = self.n_points
        if n < 2 or (n & (n - 1)) != 0:
            raise ConfigError(f"grid n_points must be a power of two, got {n}")

    def build(self) -> SpatialGrid:
        return SpatialGrid(self.x_max, self.n_points)


@dataclass(frozen=True)
class SweepConfig:
    parameter: str
    values: Tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ConfigError("sweep values must be nonempty")
        vals = tuple(float(v) for v in self.values)
        if not np.all(np.isfinite(vals)):
            raise ConfigError("sweep values must be finite")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    output_dir: str = "out"
    master_seed: int = 20260823
    n_realizations: int = 10
    workers: int = 1
    drift_factor: float = 1.4
    grid: GridConfig = field(default_factory=GridConfig)
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    laser: LaserPulseSpec = field(default_factory=lambda: LaserPulseSpec(F0=0.02))
    chaotic: Optional[ChaoticSpectrumSpec] = None
    probe: Optional[ProbeSpec] = None
    sweep: Optional[SweepConfig] = None
    bandwidths: Tuple[float, ...] = ()
    band_center: float = 0.267
    probe_freqs: Tuple[float, ...] = ()
    n_levels: int = 15

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.n_realizations < 1:
            raise ConfigError("n_realizations must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        return d

    def config_hash(self) -> str:
        """Hash of the scientific content; where and how the run executes
        (output_dir, workers) does not change it."""
        d = self.to_dict()
        d.pop("output_dir", None)
        d.pop("workers", None)
        payload = json.dumps(d, sort_keys=True, default=float)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


_SECTION_TYPES = {
    "grid": GridConfig,
    "propagation": PropagationConfig,
    "laser": LaserPulseSpec,
    "chaotic": ChaoticSpectrumSpec,
    "probe": ProbeSpec,
    "sweep": SweepConfig,
}


def _build_section(cls, data, name):
    if data is None:
        return None
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    import dataclasses

    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    coerced = {}
    for k, v in data.items():
        coerced[k] = tuple(v) if isinstance(v, list) else v
    try:
        return cls(**coerced)
    except (TypeError, StructuralError, ConfigError) as exc:
        raise ConfigError(f"invalid section {name!r}: {exc}") from exc


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    import dataclasses

    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = {}
    for k, v in data.items():
        if k in _SECTION_TYPES:
            built = _build_section(_SECTION_TYPES[k], v, k)
            if built is not None:
                kwargs[k] = built
        elif isinstance(v, list):
            kwargs[k] = tuple(v)
        else:
            kwargs[k] = v
    try:
        return ExperimentConfig(**kwargs)
    except (TypeError, StructuralError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    return config_from_dict(data)


def save_config(cfg: ExperimentConfig, path: str) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(cfg.to_dict(), fh, sort_keys=True)


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path, meta: Dict[str, str], columns: Dict[str, Sequence]) -> None:
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    n_rows = len(arrays[0])
    with open(path, "w") as fh:
        for k, v in meta.items():
            fh.write(f"# {k}={v}\n")
        fh.write(",".join(names) + "\n")
        for i in range(n_rows):
            fh.write(",".join(_fmt(a[i]) for a in arrays) + "\n")


def read_csv(path) -> Tuple[Dict[str, str], Dict[str, np.ndarray]]:
    meta: Dict[str, str] = {}
    header: Optional[List[str]] = None
    rows: List[List[float]] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                meta[k.strip()] = v.strip()
            elif header is None:
                header = line.split(",")
            else:
                rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise StructuralError(f"{path}: no header row")
    data = np.array(rows) if rows else np.empty((0, len(header)))
    return meta, {name: data[:, i] for i, name in enumerate(header)}


def write_manifest(out_dir: str, names: Sequence[str]) -> str:
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w") as fh:
        for name in sorted(names):
            digest = hashlib.sha256(
                open(os.path.join(out_dir, name), "rb").read()
            ).hexdigest()
            fh.write(f"{digest}  {name}\n")
    return path


def _meta(cfg: ExperimentConfig, extra: Optional[dict] = None) -> Dict[str, str]:
    meta = {
        "config_hash": cfg.config_hash(),
        "master_seed": str(cfg.master_seed),
        "n_realizations": str(cfg.n_realizations),
        "version": __version__,
    }
    if extra:
        meta.update({k: str(v) for k, v in extra.items()})
    return meta


# ---------------------------------------------------------------------------
# simulation helpers


@dataclass
class SweepResult:
    """Per-point ensemble statistics plus the raw per-realization values."""

    parameter: str
    values: np.ndarray
    means: Dict[str, np.ndarray]
    stderrs: Dict[str, np.ndarray]
    raw: Dict[str, np.ndarray]  # shape (n_points, n_realizations)
    n_realizations: int


def _mean_stderr(samples: np.ndarray) -> Tuple[float, float]:
    m = float(np.mean(samples))
    if len(samples) < 2:
        return m, 0.0
    return m, float(np.std(samples, ddof=1) / np.sqrt(len(samples)))


class _Workspace:
    """Shared per-experiment state: grid, potential, ground state, pulse."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.grid = cfg.grid.build()
        self.potential = SoftCorePotential()
        self.ground, self.ground_energy = relax_to_ground(
            self.grid, self.potential, cfg.propagation
        )
        self.t_p = cfg.laser.duration
        self.lattice = time_lattice(cfg.propagation.dt, cfg.drift_factor * self.t_p)
        self.laser_wave = sample_laser(cfg.laser, self.lattice)

    def pulse_lattice(self) -> np.ndarray:
        return time_lattice(self.cfg.propagation.dt, self.t_p)

    def ionize(self, fields) -> float:
        run = propagate(self.ground, self.potential, fields, self.cfg.propagation)
        return ionization_probability(run, require_converged=False).value

    def chaotic_wave(self, spec: ChaoticSpectrumSpec, realization: int, lattice=None):
        return sample_chaotic(
            spec,
            self.lattice if lattice is None else lattice,
            self.cfg.master_seed,
            realization,
            support=(0.0, self.t_p),
        )


_POOL_WS: Optional[_Workspace] = None


def _pool_init(cfg: ExperimentConfig) -> None:
    global _POOL_WS
    _POOL_WS = _Workspace(cfg)


def _pool_task(task: Tuple[int, int, ChaoticSpectrumSpec, bool]) -> Tuple[Tuple[int, int, bool], float]:
    point, realization, spec, with_laser = task
    ws = _POOL_WS
    zw = ws.chaotic_wave(spec, realization)
    fields = [ws.laser_wave, zw] if with_laser else [zw]
    return (point, realization, with_laser), ws.ionize(fields)


def _run_ensemble_grid(
    ws: _Workspace,
    specs: Sequence[ChaoticSpectrumSpec],
    with_and_without: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """P_n and P_ln raw matrices, shape (n_specs, n_realizations).

    Realizations are keyed by (master seed, realization index); results are
    reduced by task key, never by completion order.
    """
    cfg = ws.cfg
    tasks = []
    for p, spec in enumerate(specs):
        for r in range(cfg.n_realizations):
            tasks.append((p, r, spec, False))
            if with_and_without:
                tasks.append((p, r, spec, True))
    results: Dict[Tuple[int, int, bool], float] = {}
    if cfg.workers > 1:
        with ProcessPoolExecutor(
            max_workers=cfg.workers, initializer=_pool_init, initargs=(cfg,)
        ) as pool:
            for key, value in pool.map(_pool_task, tasks, chunksize=1):
                results[key] = value
    else:
        global _POOL_WS
        _POOL_WS = ws
        for task in tasks:
            key, value = _pool_task(task)
            results[key] = value
    p_n = np.array(
        [[results[(p, r, False)] for r in range(cfg.n_realizations)] for p in range(len(specs))]
    )
    if not with_and_without:
        return p_n, None
    p_ln = np.array(
        [[results[(p, r, True)] for r in range(cfg.n_realizations)] for p in range(len(specs))]
    )
    return p_n, p_ln


def _eta_sweep(
    ws: _Workspace, axis_name: str, axis_values, specs
) -> SweepResult:
    p_l = ws.ionize([ws.laser_wave])
    p_n_raw, p_ln_raw = _run_ensemble_grid(ws, specs)
    means = {"P_n": [], "P_ln": [], "eta": []}
    stderrs = {"P_n": [], "P_ln": [], "eta": []}
    for i in range(len(specs)):
        mn, sn = _mean_stderr(p_n_raw[i])
        ml, sl = _mean_stderr(p_ln_raw[i])
        pt = enhancement(p_l, mn, ml, p_n_stderr=sn, p_ln_stderr=sl)
        means["P_n"].append(mn)
        means["P_ln"].append(ml)
        means["eta"].append(pt.eta)
        stderrs["P_n"].append(sn)
        stderrs["P_ln"].append(sl)
        stderrs["eta"].append(pt.eta_stderr)
    result = SweepResult(
        parameter=axis_name,
        values=np.asarray(axis_values, dtype=float),
        means={k: np.array(v) for k, v in means.items()},
        stderrs={k: np.array(v) for k, v in stderrs.items()},
        raw={"P_n": p_n_raw, "P_ln": p_ln_raw},
        n_realizations=ws.cfg.n_realizations,
    )
    result.means["P_l"] = np.full(len(specs), p_l)
    return result


def peak_estimate(values: np.ndarray, means: np.ndarray) -> Tuple[float, float]:
    """(location, height) of the curve maximum.

    Quadratic fit through the maximum point and its neighbors; falls back to
    the discrete maximum at the sweep edges.
    """
    i = int(np.argmax(means))
    if i == 0 or i == len(means) - 1:
        return float(values[i]), float(means[i])
    x = np.asarray(values[i - 1 : i + 2], dtype=float)
    y = np.asarray(means[i - 1 : i + 2], dtype=float)
    a, b, c = np.polyfit(x, y, 2)
    if a >= 0:
        return float(values[i]), float(means[i])
    x0 = -b / (2 * a)
    x0 = float(np.clip(x0, x[0], x[-1]))
    return x0, float(a * x0**2 + b * x0 + c)


def bootstrap_peak_stderr(
    values: np.ndarray,
    raw_eta: np.ndarray,
    n_resamples: int = 200,
    seed: int = 0,
) -> Tuple[float, float]:
    """Bootstrap stderr of (peak location, peak height) over realizations."""
    rng = np.random.default_rng(seed)
    n_real = raw_eta.shape[1]
    locs, heights = [], []
    for _ in range(n_resamples):
        idx = rng.integers(0, n_real, n_real)
        means = raw_eta[:, idx].mean(axis=1)
        loc, height = peak_estimate(values, means)
        locs.append(loc)
        heights.append(height)
    return float(np.std(locs)), float(np.std(heights))


# ---------------------------------------------------------------------------
# experiments


def _sweep_csv(
    cfg: ExperimentConfig, result: SweepResult, out_dir: str, name: str, extra_meta=None
) -> List[str]:
    cols = {result.parameter: result.values}
    for key in result.means:
        cols[f"{key}_mean"] = result.means[key]
        if key in result.stderrs:
            cols[f"{key}_stderr"] = result.stderrs[key]
    write_csv(os.path.join(out_dir, f"{name}.csv"), _meta(cfg, extra_meta), cols)
    files = [f"{name}.csv"]
    if result.raw:
        raw_cols = {result.parameter: [], "realization": []}
        for key in result.raw:
            raw_cols[key] = []
        n_pts, n_real = next(iter(result.raw.values())).shape
        for i in range(n_pts):
            for r in range(n_real):
                raw_cols[result.parameter].append(result.values[i])
                raw_cols["realization"].append(r)
                for key in result.raw:
                    raw_cols[key].append(result.raw[key][i, r])
        write_csv(
            os.path.join(out_dir, f"{name}_raw.csv"), _meta(cfg, extra_meta), raw_cols
        )
        files.append(f"{name}_raw.csv")
    return files


def _prepare_out(cfg: ExperimentConfig) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return cfg.output_dir


def run_amplitude_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Laser-only ionization probability versus peak amplitude (deterministic)."""
    if cfg.sweep is None or cfg.sweep.parameter != "F0":
        raise ConfigError("amplitude_sweep needs sweep.parameter == 'F0'")
    ws = _Workspace(cfg)
    probs = []
    for f0 in cfg.sweep.values:
        if f0 == 0.0:
            zero = sample_laser(replace(cfg.laser, F0=0.0), ws.lattice)
            probs.append(ws.ionize([zero]))
        else:
            wave = sample_laser(replace(cfg.laser, F0=f0), ws.lattice)
            probs.append(ws.ionize([wave]))
    result = SweepResult(
        parameter="F0",
        values=np.array(cfg.sweep.values),
        means={"P": np.array(probs)},
        stderrs={},
        raw={},
        n_realizations=1,
    )
    out = _prepare_out(cfg)
    files = _sweep_csv(cfg, result, out, "amplitude_sweep")
    write_manifest(out, files)
    return result


def run_enhancement_curve(cfg: ExperimentConfig) -> SweepResult:
    """eta(F_rms) for broadband chaotic light plus the weak laser pulse."""
    if cfg.chaotic is None:
        raise ConfigError("enhancement_curve needs a chaotic spec")
    if cfg.sweep is None or cfg.sweep.parameter != "F_rms":
        raise ConfigError("enhancement_curve needs sweep.parameter == 'F_rms'")
    ws = _Workspace(cfg)
    specs = [replace(cfg.chaotic, F_rms=v) for v in cfg.sweep.values]
    result = _eta_sweep(ws, "F_rms", cfg.sweep.values, specs)
    loc, height = peak_estimate(result.values, result.means["eta"])
    raw_eta = _raw_eta(result)
    loc_se, height_se = bootstrap_peak_stderr(result.values, raw_eta, seed=cfg.master_seed)
    out = _prepare_out(cfg)
    extra = {
        "P_l": result.means["P_l"][0],
        "peak_F_rms": loc,
        "peak_eta": height,
        "peak_F_rms_stderr": loc_se,
        "peak_eta_stderr": height_se,
        "F0": cfg.laser.F0,
    }
    files = _sweep_csv(cfg, result, out, "enhancement_curve", extra)
    files += _write_field_examples(cfg, ws, out)
    write_manifest(out, files)
    return result


def _raw_eta(result: SweepResult) -> np.ndarray:
    """Per-realization eta values (P_l treated as exact)."""
    p_l = result.means["P_l"][0]
    p_n_mean = result.means["P_n"][:, None]
    base = p_l + p_n_mean
    return (result.raw["P_ln"] - base - (result.raw["P_n"] - p_n_mean)) / base


def _write_field_examples(cfg: ExperimentConfig, ws: _Workspace, out: str) -> List[str]:
    """Sample chaotic waveform and ensemble PSD (inputs for the PSD figure)."""
    if cfg.chaotic is None:
        return []
    spec = cfg.chaotic
    if spec.F_rms == 0.0:
        spec = replace(spec, F_rms=0.016)
    lattice = ws.pulse_lattice()
    sample = ws.chaotic_wave(spec, 0, lattice=lattice)
    waveform_to_csv(sample, os.path.join(out, "chaotic_waveform.csv"))
    ens = [
        ws.chaotic_wave(spec, r, lattice=lattice)
        for r in range(min(cfg.n_realizations, 50))
    ]
    omega, power = psd(ens)
    psd_to_csv(omega, power, os.path.join(out, "chaotic_psd.csv"))
    return ["chaotic_waveform.csv", "chaotic_psd.csv"]


def run_density_map(cfg: ExperimentConfig) -> Dict[str, object]:
    """Four wavepacket-density panels: laser only, chaotic only, combined,
    and the ensemble-averaged combined map."""
    if cfg.chaotic is None:
        raise ConfigError("density_map needs a chaotic spec")
    prop = cfg.propagation
    if prop.record_stride <= 0:
        prop = replace(prop, record_stride=200)
    cfg = replace(cfg, propagation=prop)
    ws = _Workspace(cfg)

    def run_map(fields):
        return propagate(ws.ground, ws.potential, fields, cfg.propagation)

    panels: Dict[str, object] = {}
    run_a = run_map([ws.laser_wave])
    panels["a"] = run_a.density_map
    zw0 = ws.chaotic_wave(cfg.chaotic, 0)
    run_b = run_map([zw0])
    panels["b"] = run_b.density_map
    run_c = run_map([ws.laser_wave, zw0])
    panels["c"] = run_c.density_map

    mean_data = None
    leaked = []
    for r in range(cfg.n_realizations):
        zw = ws.chaotic_wave(cfg.chaotic, r)
        run = run_map([ws.laser_wave, zw])
        leaked.append(run.norm_loss)
        if mean_data is None:
            mean_data = run.density_map.data.copy()
            times, positions = run.density_map.times, run.density_map.positions
        else:
            mean_data += run.density_map.data
    mean_data /= cfg.n_realizations
    from .propagator import DensityMap

    panels["d"] = DensityMap(times, positions, mean_data)

    out = _prepare_out(cfg)
    files = []
    for name, dm in panels.items():
        base = os.path.join(out, f"density_map_{name}")
        dm.save_binary(base)
        files += [f"density_map_{name}.f64", f"density_map_{name}.meta.txt"]
    stats = {
        "leaked_a": run_a.norm_loss,
        "leaked_b": run_b.norm_loss,
        "leaked_c": run_c.norm_loss,
        "leaked_d_mean": float(np.mean(leaked)),
    }
    write_csv(
        os.path.join(out, "density_map_stats.csv"),
        _meta(cfg),
        {k: [v] for k, v in stats.items()},
    )
    files.append("density_map_stats.csv")
    write_manifest(out, files)
    panels["stats"] = stats
    return panels


def run_populations(cfg: ExperimentConfig) -> Dict[str, np.ndarray]:
    """Bound-level populations at end of pulse: chaotic only vs laser+chaotic."""
    if cfg.chaotic is None:
        raise ConfigError("populations needs a chaotic spec")
    ws = _Workspace(cfg)
    basis = solve_bound_states(ws.grid, ws.potential, cfg.n_levels)
    lattice = ws.pulse_lattice()
    laser_wave = sample_laser(cfg.laser, lattice)
    pops_n = np.empty((cfg.n_realizations, cfg.n_levels))
    pops_ln = np.empty((cfg.n_realizations, cfg.n_levels))
    for r in range(cfg.n_realizations):
        zw = ws.chaotic_wave(cfg.chaotic, r, lattice=lattice)
        run_n = propagate(ws.ground, ws.potential, [zw], cfg.propagation)
        run_ln = propagate(ws.ground, ws.potential, [laser_wave, zw], cfg.propagation)
        pops_n[r] = level_populations(run_n, basis)
        pops_ln[r] = level_populations(run_ln, basis)
    out = _prepare_out(cfg)
    cols = {
        "level": np.arange(1, cfg.n_levels + 1),
        "energy": basis.energies,
        "pop_chaotic_mean": pops_n.mean(axis=0),
        "pop_chaotic_stderr": pops_n.std(axis=0, ddof=1) / np.sqrt(cfg.n_realizations)
        if cfg.n_realizations > 1
        else np.zeros(cfg.n_levels),
        "pop_combined_mean": pops_ln.mean(axis=0),
        "pop_combined_stderr": pops_ln.std(axis=0, ddof=1) / np.sqrt(cfg.n_realizations)
        if cfg.n_realizations > 1
        else np.zeros(cfg.n_levels),
    }
    write_csv(os.path.join(out, "populations.csv"), _meta(cfg), cols)
    write_manifest(out, ["populations.csv"])
    return {"chaotic": pops_n, "combined": pops_ln, "energies": basis.energies}


def run_frag(cfg: ExperimentConfig) -> Dict[str, list]:
    """FRAG scan: bare-atom and driven-atom probe response."""
    if not cfg.probe_freqs:
        raise ConfigError("frag needs probe_freqs")
    probe = cfg.probe or ProbeSpec(omega_p=0.267)
    ws = _Workspace(cfg)
    bare = frag_scan(
        None,
        cfg.probe_freqs,
        probe,
        ws.grid,
        ws.potential,
        cfg.propagation,
        ws.ground,
        ws.ground_energy,
        envelope=cfg.laser,
    )
    driven = frag_scan(
        cfg.laser,
        cfg.probe_freqs,
        probe,
        ws.grid,
        ws.potential,
        cfg.propagation,
        ws.ground,
        ws.ground_energy,
    )
    out = _prepare_out(cfg)
    cols = {
        "omega_p": np.array(cfg.probe_freqs, dtype=float),
        "bare_depletion": np.array([p.depletion for p in bare]),
        "bare_absorbed": np.array([p.absorbed_energy for p in bare]),
        "driven_depletion": np.array([p.depletion for p in driven]),
        "driven_probe_induced": np.array([p.probe_induced for p in driven]),
        "driven_absorbed": np.array([p.absorbed_energy for p in driven]),
    }
    write_csv(
        os.path.join(out, "frag.csv"),
        _meta(cfg, {"F_p": probe.F_p, "F0": cfg.laser.F0}),
        cols,
    )
    write_manifest(out, ["frag.csv"])
    return {"bare": bare, "driven": driven}


def run_bandwidth_sweep(cfg: ExperimentConfig) -> SweepResult:
    """P_n, P_ln, eta versus the chaotic bandwidth [0, omega_max]."""
    if cfg.sweep is None or cfg.sweep.parameter != "omega_max":
        raise ConfigError("bandwidth_sweep needs sweep.parameter == 'omega_max'")
    base = cfg.chaotic or ChaoticSpectrumSpec(
        kind=FLAT_BAND, F_rms=0.016, omega_min=0.0, omega_max=0.75, n_modes=512
    )
    ws = _Workspace(cfg)
    specs = [
        ChaoticSpectrumSpec(
            kind=FLAT_BAND,
            F_rms=base.F_rms,
            omega_min=0.0,
            omega_max=v,
            n_modes=base.n_modes,
        )
        for v in cfg.sweep.values
    ]
    result = _eta_sweep(ws, "omega_max", cfg.sweep.values, specs)
    out = _prepare_out(cfg)
    files = _sweep_csv(cfg, result, out, "bandwidth_sweep", {"F_rms": base.F_rms})
    write_manifest(out, files)
    return result


def run_narrowband_curve(cfg: ExperimentConfig) -> Dict[float, SweepResult]:
    """eta(F_rms) for narrowband chaotic light centered on the first transition,
    one curve per bandwidth."""
    if cfg.sweep is None or cfg.sweep.parameter != "F_rms":
        raise ConfigError("narrowband_curve needs sweep.parameter == 'F_rms'")
    if not cfg.bandwidths:
        raise ConfigError("narrowband_curve needs bandwidths")
    n_modes = cfg.chaotic.n_modes if cfg.chaotic else 512
    ws = _Workspace(cfg)
    results: Dict[float, SweepResult] = {}
    rows = {k: [] for k in ("bandwidth", "F_rms", "P_n_mean", "P_n_stderr",
                            "P_ln_mean", "P_ln_stderr", "eta_mean", "eta_stderr", "P_l_mean")}
    for bw in cfg.bandwidths:
        specs = [
            ChaoticSpectrumSpec(
                kind=CENTERED_BAND,
                F_rms=v,
                center=cfg.band_center,
                width=bw,
                n_modes=n_modes,
            )
            for v in cfg.sweep.values
        ]
        res = _eta_sweep(ws, "F_rms", cfg.sweep.values, specs)
        results[bw] = res
        for i, v in enumerate(res.values):
            rows["bandwidth"].append(bw)
            rows["F_rms"].append(v)
            for key in ("P_n", "P_ln", "eta"):
                rows[f"{key}_mean"].append(res.means[key][i])
                rows[f"{key}_stderr"].append(res.stderrs[key][i])
            rows["P_l_mean"].append(res.means["P_l"][i])
    out = _prepare_out(cfg)
    write_csv(os.path.join(out, "narrowband_curve.csv"), _meta(cfg), rows)
    write_manifest(out, ["narrowband_curve.csv"])
    return results


def run_harmonic_curve(cfg: ExperimentConfig) -> Dict[str, SweepResult]:
    """eta(F_rms) for phase-randomized odd-order and all-order harmonic combs."""
    if cfg.sweep is None or cfg.sweep.parameter != "F_rms":
        raise ConfigError("harmonic_curve needs sweep.parameter == 'F_rms'")
    ws = _Workspace(cfg)
    combs = {
        "odd": make_odd_harmonic_comb(cfg.laser.omega0),
        "all": make_all_harmonic_comb(cfg.laser.omega0),
    }
    results: Dict[str, SweepResult] = {}
    rows = {k: [] for k in ("comb", "F_rms", "P_n_mean", "P_n_stderr",
                            "P_ln_mean", "P_ln_stderr", "eta_mean", "eta_stderr", "P_l_mean")}
    extra = {}
    for name, comb in combs.items():
        specs = [replace(comb, F_rms=v) for v in cfg.sweep.values]
        res = _eta_sweep(ws, "F_rms", cfg.sweep.values, specs)
        results[name] = res
        loc, height = peak_estimate(res.values, res.means["eta"])
        extra[f"peak_eta_{name}"] = height
        extra[f"peak_F_rms_{name}"] = loc
        for i, v in enumerate(res.values):
            rows["comb"].append(0 if name == "odd" else 1)
            rows["F_rms"].append(v)
            for key in ("P_n", "P_ln", "eta"):
                rows[f"{key}_mean"].append(res.means[key][i])
                rows[f"{key}_stderr"].append(res.stderrs[key][i])
            rows["P_l_mean"].append(res.means["P_l"][i])
    out = _prepare_out(cfg)
    write_csv(
        os.path.join(out, "harmonic_curve.csv"),
        _meta(cfg, dict(extra, comb_key="0=odd,1=all")),
        rows,
    )
    write_manifest(out, ["harmonic_curve.csv"])
    return results


RUNNERS: Dict[str, Callable] = {
    "amplitude_sweep": run_amplitude_sweep,
    "enhancement_curve": run_enhancement_curve,
    "density_map": run_density_map,
    "populations": run_populations,
    "frag": run_frag,
    "bandwidth_sweep": run_bandwidth_sweep,
    "narrowband_curve": run_narrowband_curve,
    "harmonic_curve": run_harmonic_curve,
}


def run_experiment(cfg: ExperimentConfig):
    return RUNNERS[cfg.kind](cfg)
