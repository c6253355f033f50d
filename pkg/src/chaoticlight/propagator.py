"""Split-operator spectral propagation with absorbing boundary and flux monitors.

Each step applies Strang splitting: half kinetic (spectral), full potential
V(x) + x*F(t) evaluated at the step midpoint, half kinetic, then the absorber
mask. The probability current is sampled every step at +-x_r with a spectral
derivative, and the norm removed by the mask is accumulated so flux and
norm-loss bookkeeping can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.fft as sfft

from .core import PotentialFn, SpatialGrid, WaveFunction
from .errors import (
    ConvergenceError,
    NumericalInstabilityError,
    StructuralError,
)
from .fields import FieldWaveform


@dataclass(frozen=True)
class PropagationConfig:
    """Numerical knobs for real- and imaginary-time propagation.

    The absorber covers the outer `absorber_fraction` of each half-axis, i.e.
    mask < 1 for |x| > x_max*(1 - absorber_fraction); absorber_fraction = 0
    disables it. x_r defaults to the absorber's inner edge.
    """

    dt: float = 0.05
    absorber_fraction: float = 0.1
    absorber_exponent: float = 0.125
    x_r: Optional[float] = None
    record_stride: int = 0
    x_record_stride: int = 4
    imag_dt: float = 0.05
    relax_energy_tol: float = 1e-12
    max_relax_steps: int = 200_000

    def __post_init__(self):
        if self.dt <= 0:
            raise StructuralError("dt must be positive")
        if not (0.0 <= self.absorber_fraction < 0.5):
            raise StructuralError("absorber_fraction must be in [0, 0.5)")

    def monitor_position(self, grid: SpatialGrid) -> float:
        if self.x_r is not None:
            return self.x_r
        return grid.x_max * (1.0 - self.absorber_fraction)


def absorber_mask(cfg: PropagationConfig, grid: SpatialGrid) -> np.ndarray:
    """cos^p edge mask: 1 on the interior, 0 at the grid endpoints, even in x."""
    mask = np.ones(grid.n_points)
    if cfg.absorber_fraction == 0.0:
        return mask
    x_abs = grid.x_max * (1.0 - cfg.absorber_fraction)
    depth = grid.x_max - x_abs
    pen = (np.abs(grid.x) - x_abs) / depth
    edge = pen > 0
    mask[edge] = np.cos(0.5 * np.pi * np.minimum(pen[edge], 1.0)) ** cfg.absorber_exponent
    # cos(pi/2) is ~6e-17 in floating point and the fractional exponent
    # amplifies it; pin fully penetrated points to exact zero
    mask[np.abs(grid.x) >= grid.x_max - 1e-12] = 0.0
    return mask


@dataclass
class FluxRecord:
    """Outward probability currents at +-x_r and cumulative absorbed norm."""

    times: np.ndarray
    j_plus: np.ndarray
    j_minus: np.ndarray
    absorbed_norm: np.ndarray

    @property
    def total_outward(self) -> np.ndarray:
        return self.j_plus + self.j_minus

    def flux_integral(self) -> float:
        return float(np.trapezoid(self.total_outward, self.times))

    @property
    def final_absorbed(self) -> float:
        return float(self.absorbed_norm[-1]) if len(self.absorbed_norm) else 0.0

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,j_plus,j_minus,absorbed_norm\n")
            for row in zip(self.times, self.j_plus, self.j_minus, self.absorbed_norm):
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


@dataclass
class DensityMap:
    """|psi|^2 snapshots, rows = times, cols = (possibly strided) positions."""

    times: np.ndarray
    positions: np.ndarray
    data: np.ndarray

    def save_binary(self, path_base: str) -> Tuple[str, str]:
        """Flat float64 binary plus a text sidecar. Returns (bin, sidecar) paths."""
        bin_path = f"{path_base}.f64"
        meta_path = f"{path_base}.meta.txt"
        self.data.astype(np.float64).tofile(bin_path)
        with open(meta_path, "w") as fh:
            fh.write(f"rows={self.data.shape[0]}\n")
            fh.write(f"cols={self.data.shape[1]}\n")
            fh.write(f"t_min={float(self.times[0])!r}\n")
            fh.write(f"t_max={float(self.times[-1])!r}\n")
            fh.write(f"x_min={float(self.positions[0])!r}\n")
            fh.write(f"x_max={float(self.positions[-1])!r}\n")
        return bin_path, meta_path


@dataclass
class RunResult:
    """Everything observable about one propagation."""

    final_state: WaveFunction
    flux: FluxRecord
    density_map: Optional[DensityMap] = None
    populations: Optional[np.ndarray] = None
    provenance: dict = field(default_factory=dict)

    @property
    def norm_loss(self) -> float:
        return self.flux.final_absorbed


def _merge_fields(fields: Sequence[FieldWaveform], dt: float) -> np.ndarray:
    if not fields:
        raise StructuralError("propagate needs at least one field waveform")
    times = fields[0].times
    if len(times) < 2:
        raise StructuralError("time lattice must contain at least one step")
    if not np.allclose(np.diff(times), dt, rtol=0, atol=1e-9):
        raise StructuralError("waveform lattice spacing does not match cfg.dt")
    total = np.zeros_like(times)
    for w in fields:
        if w.times.shape != times.shape or not np.allclose(w.times, times):
            raise StructuralError("all waveforms must share one time lattice")
        total = total + w.values
    return total


def _linear_phase(x0: float, dx: float, n: int, a: float) -> np.ndarray:
    """exp(-1j*a*x_j) for x_j = x0 + j*dx, via a geometric recurrence."""
    seq = np.full(n, np.exp(-1j * a * dx))
    seq[0] = np.exp(-1j * a * x0)
    return np.cumprod(seq)


def propagate(
    psi0: WaveFunction,
    potential: Optional[PotentialFn],
    fields: Sequence[FieldWaveform],
    cfg: PropagationConfig,
) -> RunResult:
    """Evolve psi0 under H0 + x*F_tot(t) over the waveforms' time lattice."""
    grid = psi0.grid
    if psi0.representation != "position":
        raise StructuralError("propagate expects a position-representation state")
    f_tot = _merge_fields(fields, cfg.dt)
    times = fields[0].times
    n_steps = len(times) - 1
    f_mid = 0.5 * (f_tot[:-1] + f_tot[1:])

    x = grid.x
    dx = grid.dx
    v = np.zeros(grid.n_points) if potential is None else np.asarray(potential(x), float)
    k = grid.k
    k_half = np.exp(-0.25j * cfg.dt * k**2)
    ik = 1j * k
    exp_v = np.exp(-1j * cfg.dt * v)

    mask = absorber_mask(cfg, grid)
    use_mask = cfg.absorber_fraction > 0.0
    # mask touches only the edges; restrict the multiply and loss sum there
    edge = np.flatnonzero(mask < 1.0)
    mask_edge = mask[edge]
    loss_weight = (1.0 - mask_edge**2) * dx

    x_r = cfg.monitor_position(grid)
    i_plus = grid.index_of(+x_r)
    i_minus = grid.index_of(-x_r)

    j_plus = np.empty(n_steps)
    j_minus = np.empty(n_steps)
    absorbed = np.empty(n_steps)
    absorbed_total = 0.0

    record = cfg.record_stride > 0
    snap_t: List[float] = []
    snaps: List[np.ndarray] = []
    xs = x[:: cfg.x_record_stride] if record else None

    psi = psi0.amplitudes.astype(np.complex128, copy=True)
    fft, ifft = sfft.fft, sfft.ifft

    if record:
        snap_t.append(float(times[0]))
        snaps.append(np.abs(psi[:: cfg.x_record_stride]) ** 2)

    for n in range(n_steps):
        psi_k = fft(psi, overwrite_x=True)
        psi_k *= k_half
        psi = ifft(psi_k, overwrite_x=True)
        psi *= exp_v
        if f_mid[n] != 0.0:
            psi *= _linear_phase(x[0], dx, grid.n_points, cfg.dt * f_mid[n])
        psi_k = fft(psi, overwrite_x=True)
        psi_k *= k_half
        psi = ifft(psi_k)  # psi_k still needed for the derivative
        dpsi = ifft(psi_k * ik, overwrite_x=True)

        jp = float(np.imag(np.conj(psi[i_plus]) * dpsi[i_plus]))
        jm = -float(np.imag(np.conj(psi[i_minus]) * dpsi[i_minus]))
        if jp != jp or jm != jm:  # NaN check
            raise NumericalInstabilityError(step=n)
        j_plus[n] = jp
        j_minus[n] = jm

        if use_mask:
            absorbed_total += float(loss_weight @ np.abs(psi[edge]) ** 2)
            psi[edge] *= mask_edge
        absorbed[n] = absorbed_total

        if record and (n + 1) % cfg.record_stride == 0:
            snap_t.append(float(times[n + 1]))
            snaps.append(np.abs(psi[:: cfg.x_record_stride]) ** 2)

    if not np.all(np.isfinite(psi)):
        raise NumericalInstabilityError(step=n_steps)

    flux = FluxRecord(
        times=times[1:].copy(),
        j_plus=j_plus,
        j_minus=j_minus,
        absorbed_norm=absorbed,
    )
    density = None
    if record:
        density = DensityMap(np.array(snap_t), xs.copy(), np.array(snaps))
    return RunResult(
        final_state=WaveFunction(grid, psi),
        flux=flux,
        density_map=density,
        provenance={"cfg": cfg, "n_steps": n_steps},
    )


def relax_to_ground(
    grid: SpatialGrid, potential: PotentialFn, cfg: PropagationConfig
) -> Tuple[WaveFunction, float]:
    """Imaginary-time split-operator relaxation from a symmetric positive seed.

    Renormalizes each step; stops when the Rayleigh-quotient energy changes by
    less than cfg.relax_energy_tol between steps.
    """
    x = grid.x
    dx = grid.dx
    v = np.asarray(potential(x), dtype=float)
    k2 = grid.k**2
    dtau = cfg.imag_dt
    k_half = np.exp(-0.25 * dtau * k2)
    exp_v = np.exp(-dtau * v)

    psi = np.exp(-(x**2) / 2.0).astype(np.complex128)
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * dx)

    energy_prev = np.inf
    n_pts = grid.n_points
    for step in range(cfg.max_relax_steps):
        psi_k = sfft.fft(psi, overwrite_x=True)
        psi_k *= k_half
        psi = sfft.ifft(psi_k, overwrite_x=True)
        psi *= exp_v
        psi_k = sfft.fft(psi, overwrite_x=True)
        psi_k *= k_half
        psi = sfft.ifft(psi_k, overwrite_x=True)
        psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * dx)

        phi_k = sfft.fft(psi) / np.sqrt(n_pts)
        kinetic = float(np.sum(0.5 * k2 * np.abs(phi_k) ** 2) * dx)
        pot_e = float(np.sum(v * np.abs(psi) ** 2) * dx)
        energy = kinetic + pot_e
        if abs(energy - energy_prev) < cfg.relax_energy_tol:
            return WaveFunction(grid, psi), energy
        energy_prev = energy
    raise ConvergenceError(
        f"imaginary-time relaxation did not converge in {cfg.max_relax_steps} steps"
    )


def hamiltonian_expectation(
    psi: WaveFunction, potential: Optional[PotentialFn]
) -> float:
    """<psi|H0|psi> with spectral kinetic energy (unnormalized state)."""
    grid = psi.grid
    phi_k = sfft.fft(psi.amplitudes) / np.sqrt(grid.n_points)
    kinetic = float(np.sum(0.5 * grid.k**2 * np.abs(phi_k) ** 2) * grid.dx)
    if potential is None:
        return kinetic
    v = np.asarray(potential(grid.x), dtype=float)
    return kinetic + float(np.sum(v * psi.density()) * grid.dx)
