"""Driving-field synthesis: laser pulse, chaotic light, probe, and PSD checks.

Chaotic light is a normalized sum of N phase-randomized oscillator modes,
Z(t) = sqrt(2/N) * F_rms * sum_n sin(w_n t + phi_n), nonzero on [0, T_p].
The phases are drawn from a stream keyed by (master seed, realization index),
so every realization is reproducible independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import StructuralError

FLAT_BAND = "flat_band"
CENTERED_BAND = "centered_band"
HARMONIC_COMB = "harmonic_comb"

_TWO_PI = 2.0 * np.pi


def time_lattice(dt: float, t_final: float) -> np.ndarray:
    """Uniform lattice 0, dt, ..., covering [0, t_final]."""
    if dt <= 0 or t_final <= 0:
        raise StructuralError("dt and t_final must be positive")
    n = int(np.ceil(t_final / dt - 1e-9))
    return np.arange(n + 1) * dt


@dataclass(frozen=True)
class LaserPulseSpec:
    """F(t) = sin^2(pi t / T_p) * F0 * sin(w0 t + delta) on [0, T_p]."""

    F0: float
    omega0: float = 0.057
    delta: float = 0.0
    n_cycles: int = 10

    def __post_init__(self):
        if self.F0 < 0:
            raise StructuralError("F0 must be >= 0")
        if self.omega0 <= 0 or self.n_cycles <= 0:
            raise StructuralError("omega0 and n_cycles must be positive")

    @property
    def duration(self) -> float:
        return self.n_cycles * _TWO_PI / self.omega0


@dataclass(frozen=True)
class ChaoticSpectrumSpec:
    """Spectral content of the chaotic light: band edges or an explicit comb."""

    kind: str
    F_rms: float
    n_modes: int = 512
    omega_min: Optional[float] = None
    omega_max: Optional[float] = None
    center: Optional[float] = None
    width: Optional[float] = None
    comb: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.F_rms < 0:
            raise StructuralError("F_rms must be >= 0")
        if self.kind == FLAT_BAND:
            if self.omega_min is None or self.omega_max is None:
                raise StructuralError("flat_band needs omega_min and omega_max")
            if not (self.omega_max > self.omega_min >= 0):
                raise StructuralError("flat_band needs omega_max > omega_min >= 0")
            if self.n_modes < 1:
                raise StructuralError("n_modes must be >= 1")
        elif self.kind == CENTERED_BAND:
            if self.center is None or self.width is None or self.width <= 0:
                raise StructuralError("centered_band needs center and width > 0")
            if self.n_modes < 1:
                raise StructuralError("n_modes must be >= 1")
        elif self.kind == HARMONIC_COMB:
            if not self.comb:
                raise StructuralError("harmonic_comb needs a nonempty comb")
            object.__setattr__(self, "comb", tuple(float(w) for w in self.comb))
            object.__setattr__(self, "n_modes", len(self.comb))
        else:
            raise StructuralError(f"unknown spectrum kind {self.kind!r}")
        if np.any(self.mode_frequencies() <= 0):
            raise StructuralError("all mode frequencies must be positive")

    @property
    def bandwidth(self) -> float:
        if self.kind == FLAT_BAND:
            return self.omega_max - self.omega_min
        if self.kind == CENTERED_BAND:
            return self.width
        freqs = self.mode_frequencies()
        return float(freqs.max() - freqs.min())

    def mode_frequencies(self) -> np.ndarray:
        """Mode comb; band modes sit at interior midpoints to exclude DC."""
        if self.kind == HARMONIC_COMB:
            return np.asarray(self.comb, dtype=float)
        if self.kind == FLAT_BAND:
            lo, hi = self.omega_min, self.omega_max
        else:
            lo = self.center - self.width / 2.0
            hi = self.center + self.width / 2.0
        dw = (hi - lo) / self.n_modes
        return lo + (np.arange(1, self.n_modes + 1) - 0.5) * dw


@dataclass(frozen=True)
class ProbeSpec:
    """Weak tunable probe, envelope shared with the pump pulse."""

    omega_p: float
    F_p: float = 0.0005

    def __post_init__(self):
        if self.F_p <= 0 or self.omega_p <= 0:
            raise StructuralError("F_p and omega_p must be positive")


@dataclass(frozen=True, eq=False)
class FieldWaveform:
    """Sampled field on the simulation time lattice, with provenance."""

    times: np.ndarray
    values: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.times.shape != self.values.shape:
            raise StructuralError("times and values must have equal length")
        if not np.all(np.isfinite(self.values)):
            raise StructuralError("field values must be finite")


def _check_spans(times: np.ndarray, t_p: float) -> None:
    if times[0] > 1e-12 or times[-1] < t_p - 1e-9:
        raise StructuralError(
            f"lattice [{times[0]}, {times[-1]}] does not cover [0, {t_p}]"
        )


def _envelope(times: np.ndarray, t_p: float) -> np.ndarray:
    f = np.sin(np.pi * np.clip(times, 0.0, t_p) / t_p) ** 2
    f[(times <= 0.0) | (times >= t_p)] = 0.0
    return f


def sample_laser(spec: LaserPulseSpec, times: np.ndarray) -> FieldWaveform:
    t_p = spec.duration
    _check_spans(times, t_p)
    values = _envelope(times, t_p) * spec.F0 * np.sin(spec.omega0 * times + spec.delta)
    return FieldWaveform(times, values, {"kind": "laser", "spec": spec})


def sample_probe(spec: ProbeSpec, pulse: LaserPulseSpec, times: np.ndarray) -> FieldWaveform:
    t_p = pulse.duration
    _check_spans(times, t_p)
    values = _envelope(times, t_p) * spec.F_p * np.sin(spec.omega_p * times)
    return FieldWaveform(times, values, {"kind": "probe", "spec": spec})


def zero_waveform(times: np.ndarray) -> FieldWaveform:
    return FieldWaveform(times, np.zeros_like(times), {"kind": "zero"})


def chaotic_phases(spec: ChaoticSpectrumSpec, seed: int, realization: int) -> np.ndarray:
    """i.i.d. uniform [0, 2pi) phases from a stream keyed by (seed, realization)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(realization,)))
    return rng.uniform(0.0, _TWO_PI, spec.n_modes)


def sample_chaotic(
    spec: ChaoticSpectrumSpec,
    times: np.ndarray,
    seed: int,
    realization: int,
    support: Optional[Tuple[float, float]] = None,
) -> FieldWaveform:
    """One realization of the chaotic field; rectangular envelope on `support`."""
    if support is None:
        support = (float(times[0]), float(times[-1]))
    t0, t1 = support
    _check_spans(times, t1)
    phases = chaotic_phases(spec, seed, realization)
    freqs = spec.mode_frequencies()
    values = np.zeros_like(times)
    # chunk over modes to bound the outer-product workspace
    for i in range(0, len(freqs), 64):
        values += np.sin(
            np.multiply.outer(freqs[i : i + 64], times) + phases[i : i + 64, None]
        ).sum(axis=0)
    values *= np.sqrt(2.0 / spec.n_modes) * spec.F_rms
    values[(times < t0) | (times > t1)] = 0.0
    return FieldWaveform(
        times,
        values,
        {"kind": "chaotic", "spec": spec, "seed": seed, "realization": realization},
    )


def psd(ensemble: Sequence[FieldWaveform]) -> Tuple[np.ndarray, np.ndarray]:
    """Ensemble-averaged periodogram: (angular frequency, power density)."""
    if len(ensemble) < 1:
        raise StructuralError("psd needs at least one realization")
    t0 = ensemble[0].times
    for w in ensemble[1:]:
        if w.times.shape != t0.shape or not np.allclose(w.times, t0):
            raise StructuralError("psd requires identical time lattices")
    dt = float(t0[1] - t0[0])
    n = len(t0)
    omega = _TWO_PI * np.fft.rfftfreq(n, dt)
    power = np.zeros(len(omega))
    for w in ensemble:
        power += np.abs(np.fft.rfft(w.values)) ** 2
    power *= dt**2 / (n * dt * len(ensemble))
    return omega, power


def make_odd_harmonic_comb(
    omega0: float = 0.057, count: int = 6, start: int = 3, f_rms: float = 0.0
) -> ChaoticSpectrumSpec:
    """Odd-order harmonic comb {start, start+2, ...} * omega0 (spacing 2*omega0)."""
    if count < 1:
        raise StructuralError("count must be >= 1")
    comb = tuple((start + 2 * i) * omega0 for i in range(count))
    return ChaoticSpectrumSpec(kind=HARMONIC_COMB, F_rms=f_rms, comb=comb)


def make_all_harmonic_comb(
    omega0: float = 0.057, count: int = 6, start: int = 3, f_rms: float = 0.0
) -> ChaoticSpectrumSpec:
    """All-order harmonic comb {start, start+1, ...} * omega0 (spacing omega0)."""
    if count < 1:
        raise StructuralError("count must be >= 1")
    comb = tuple((start + i) * omega0 for i in range(count))
    return ChaoticSpectrumSpec(kind=HARMONIC_COMB, F_rms=f_rms, comb=comb)


def waveform_to_csv(waveform: FieldWaveform, path) -> None:
    """Two-column CSV (t, value)."""
    with open(path, "w") as fh:
        fh.write("t,value\n")
        for t, v in zip(waveform.times, waveform.values):
            fh.write(f"{float(t)!r},{float(v)!r}\n")


def psd_to_csv(omega: np.ndarray, power: np.ndarray, path) -> None:
    with open(path, "w") as fh:
        fh.write("omega,power\n")
        for w, p in zip(omega, power):
            fh.write(f"{float(w)!r},{float(p)!r}\n")
