"""Scalar and spectral observables on propagation results.

Ionization probability from the flux record (cross-checked against norm
loss), the enhancement factor eta = (P_ln - (P_l + P_n)) / (P_l + P_n),
bound-level populations, and the frequency-resolved atomic gain (FRAG)
pump-probe scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import EigenBasis, PotentialFn, SpatialGrid, WaveFunction, inner_product
from .errors import GridMismatchError, StaleFluxError, UndefinedBaselineError
from .fields import (
    FieldWaveform,
    LaserPulseSpec,
    ProbeSpec,
    sample_laser,
    sample_probe,
    time_lattice,
)
from .propagator import (
    PropagationConfig,
    RunResult,
    hamiltonian_expectation,
    propagate,
)

FLUX_INTEGRAL = "flux-integral"
NORM_LOSS = "norm-loss"


@dataclass(frozen=True)
class IonizationProbability:
    value: float
    method: str
    norm_loss: float

    def __post_init__(self):
        if not (-1e-6 <= self.value <= 1.0 + 1e-6):
            raise ValueError(f"probability out of range: {self.value}")


def ionization_probability(
    run: RunResult,
    require_converged: bool = True,
    tail_fraction: float = 0.02,
    tail_tolerance: float = 1e-4,
) -> IonizationProbability:
    """Flux-integral ionization probability, with the norm-loss cross-check.

    Raises StaleFluxError when the trailing outward flux is still significant,
    unless require_converged is False.
    """
    flux = run.flux
    j = flux.total_outward
    if require_converged:
        n_tail = max(1, int(len(j) * tail_fraction))
        if float(np.mean(np.abs(j[-n_tail:]))) > tail_tolerance:
            raise StaleFluxError(
                "trailing flux above tolerance; extend the run past the pulse"
            )
    value = float(np.clip(flux.flux_integral(), 0.0, 1.0))
    return IonizationProbability(
        value=value, method=FLUX_INTEGRAL, norm_loss=flux.final_absorbed
    )


@dataclass(frozen=True)
class EnhancementPoint:
    """One point of an enhancement curve (ensemble means where applicable)."""

    P_l: float
    P_n: float
    P_ln: float
    eta: float
    eta_stderr: float = 0.0
    F_rms: Optional[float] = None
    F0: Optional[float] = None
    n_realizations: int = 1


def enhancement(
    p_l: float,
    p_n: float,
    p_ln: float,
    p_n_stderr: float = 0.0,
    p_ln_stderr: float = 0.0,
    f_rms: Optional[float] = None,
    f0: Optional[float] = None,
    n_realizations: int = 1,
) -> EnhancementPoint:
    """eta = (P_ln - (P_l + P_n)) / (P_l + P_n), stderr by error propagation."""
    baseline = p_l + p_n
    if baseline <= 0.0:
        raise UndefinedBaselineError("P_l + P_n must be positive")
    eta = (p_ln - baseline) / baseline
    stderr = float(
        np.hypot(p_ln_stderr / baseline, p_ln * p_n_stderr / baseline**2)
    )
    return EnhancementPoint(
        P_l=p_l,
        P_n=p_n,
        P_ln=p_ln,
        eta=float(eta),
        eta_stderr=stderr,
        F_rms=f_rms,
        F0=f0,
        n_realizations=n_realizations,
    )


def level_populations(run: RunResult, basis: EigenBasis) -> np.ndarray:
    """p_k = |<phi_k|psi>|^2 over the eigenbasis levels."""
    psi = run.final_state
    if basis.grid != psi.grid:
        raise GridMismatchError("eigenbasis and state live on different grids")
    return np.array(
        [abs(inner_product(st, psi)) ** 2 for st in basis.states]
    )


@dataclass(frozen=True)
class FragPoint:
    """Probe response at one probe frequency."""

    omega_p: float
    depletion: float
    probe_induced: float
    absorbed_energy: float
    driven: bool


def frag_scan(
    pump: Optional[LaserPulseSpec],
    probe_freqs: Sequence[float],
    probe: ProbeSpec,
    grid: SpatialGrid,
    potential: PotentialFn,
    cfg: PropagationConfig,
    ground: WaveFunction,
    ground_energy: float,
    envelope: Optional[LaserPulseSpec] = None,
) -> List[FragPoint]:
    """Ground-state depletion and absorbed energy versus probe frequency.

    One propagation per probe frequency over [0, T_p], field = pump (when
    given) + probe. The pump-only depletion baseline is subtracted into
    probe_induced. With pump=None the bare atom is scanned (baseline 0).
    """
    env = pump if pump is not None else envelope
    if env is None:
        env = LaserPulseSpec(F0=0.0)
    t_p = env.duration
    lattice = time_lattice(cfg.dt, t_p)
    driven = pump is not None and pump.F0 > 0.0

    pump_fields: List[FieldWaveform] = []
    if driven:
        pump_fields.append(sample_laser(pump, lattice))

    def run_with(fields: List[FieldWaveform]) -> RunResult:
        return propagate(ground, potential, fields, cfg)

    def depletion_of(run: RunResult) -> float:
        return 1.0 - abs(inner_product(ground, run.final_state)) ** 2

    def absorbed_energy_of(run: RunResult) -> float:
        # mask-removed norm is counted at the continuum threshold (E = 0),
        # so it contributes -E0 per unit of lost norm
        return hamiltonian_expectation(run.final_state, potential) - ground_energy

    if driven:
        base_run = run_with(pump_fields)
        baseline = depletion_of(base_run)
    else:
        baseline = 0.0

    points = []
    for omega_p in probe_freqs:
        pspec = ProbeSpec(omega_p=float(omega_p), F_p=probe.F_p)
        fields = pump_fields + [sample_probe(pspec, env, lattice)]
        run = run_with(fields)
        d = depletion_of(run)
        points.append(
            FragPoint(
                omega_p=float(omega_p),
                depletion=float(d),
                probe_induced=float(d - baseline),
                absorbed_energy=float(absorbed_energy_of(run)),
                driven=driven,
            )
        )
    return points
