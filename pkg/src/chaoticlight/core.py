"""Spatial grid, wavefunction algebra, and the bound-state eigensolver.

All quantities are in atomic units (hbar = m_e = e = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, List, Sequence

import numpy as np
import scipy.fft as sfft
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from .errors import CapacityError, GridMismatchError, StructuralError

PotentialFn = Callable[[np.ndarray], np.ndarray]

POSITION = "position"
MOMENTUM = "momentum"


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform 1D grid, symmetric about x = 0, with a power-of-two point count."""

    x_max: float
    n_points: int

    def __post_init__(self):
        if self.x_max <= 0:
            raise StructuralError(f"x_max must be positive, got {self.x_max}")
        if not _is_power_of_two(self.n_points):
            raise StructuralError(
                f"n_points must be a power of two >= 2, got {self.n_points}"
            )

    @property
    def x_min(self) -> float:
        return -self.x_max

    @property
    def dx(self) -> float:
        return 2.0 * self.x_max / (self.n_points - 1)

    @cached_property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @cached_property
    def k(self) -> np.ndarray:
        """Momentum lattice matching the discrete Fourier transform ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, self.dx)

    def index_of(self, x0: float) -> int:
        """Index of the grid point closest to x0."""
        return int(round((x0 - self.x_min) / self.dx))


@dataclass
class WaveFunction:
    """Complex amplitudes on a grid, in either position or momentum representation.

    The norm convention is norm^2 = sum |psi_i|^2 * dx in both representations
    (the transform below is unitary in this weighting).
    """

    grid: SpatialGrid
    amplitudes: np.ndarray
    representation: str = POSITION

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.grid.n_points,):
            raise StructuralError(
                f"amplitude vector has length {self.amplitudes.shape}, "
                f"grid has {self.grid.n_points} points"
            )
        if self.representation not in (POSITION, MOMENTUM):
            raise StructuralError(f"unknown representation {self.representation!r}")

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def normalized(self) -> "WaveFunction":
        n = self.norm()
        if not np.isfinite(n) or n == 0.0:
            raise StructuralError("cannot normalize a zero or non-finite state")
        return WaveFunction(self.grid, self.amplitudes / n, self.representation)

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.grid, self.amplitudes.copy(), self.representation)

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _check_compatible(a: WaveFunction, b: WaveFunction) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")
    if a.representation != b.representation:
        raise GridMismatchError(
            f"representations differ: {a.representation} vs {b.representation}"
        )


def inner_product(a: WaveFunction, b: WaveFunction) -> complex:
    """<a|b> = sum conj(a_i) b_i dx. Conjugate-symmetric."""
    _check_compatible(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.grid.dx)


def to_momentum(psi: WaveFunction) -> WaveFunction:
    """Unitary DFT to the momentum representation (ordering of grid.k)."""
    if psi.representation != POSITION:
        raise StructuralError("to_momentum expects a position-representation state")
    amp = sfft.fft(psi.amplitudes) / np.sqrt(psi.grid.n_points)
    return WaveFunction(psi.grid, amp, MOMENTUM)


def to_position(psi: WaveFunction) -> WaveFunction:
    """Inverse of to_momentum."""
    if psi.representation != MOMENTUM:
        raise StructuralError("to_position expects a momentum-representation state")
    amp = sfft.ifft(psi.amplitudes) * np.sqrt(psi.grid.n_points)
    return WaveFunction(psi.grid, amp, POSITION)


@dataclass
class EigenBasis:
    """Lowest bound eigenpairs of H0 = p^2/2 + V(x), ascending in energy."""

    energies: np.ndarray
    states: List[WaveFunction]
    potential_values: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        self.energies = np.asarray(self.energies, dtype=float)
        if len(self.states) != len(self.energies):
            raise StructuralError("energies and states disagree in length")
        if np.any(np.diff(self.energies) <= 0):
            raise StructuralError("energies must be strictly ascending")

    @property
    def grid(self) -> SpatialGrid:
        return self.states[0].grid

    @property
    def count(self) -> int:
        return len(self.states)

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    def transition_frequency(self, i: int, j: int) -> float:
        return float(self.energies[j] - self.energies[i])

    def save_csv(self, path) -> None:
        """One row per eigenpair: energy then the state amplitudes (real)."""
        g = self.grid
        with open(path, "w") as fh:
            fh.write(f"# x_max={float(g.x_max)!r}\n")
            fh.write(f"# n_points={g.n_points}\n")
            fh.write(f"# count={self.count}\n")
            for e, st in zip(self.energies, self.states):
                row = np.concatenate([[e], st.amplitudes.real])
                fh.write(",".join(repr(float(v)) for v in row) + "\n")

    @classmethod
    def load_csv(cls, path) -> "EigenBasis":
        meta = {}
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].strip().partition("=")
                    meta[key.strip()] = val.strip()
                else:
                    rows.append(np.array([float(v) for v in line.split(",")]))
        grid = SpatialGrid(x_max=float(meta["x_max"]), n_points=int(meta["n_points"]))
        energies = np.array([r[0] for r in rows])
        states = [WaveFunction(grid, r[1:].astype(complex)) for r in rows]
        return cls(energies=energies, states=states)


def apply_h0_fd(grid: SpatialGrid, v: np.ndarray, amp: np.ndarray) -> np.ndarray:
    """3-point finite-difference H0 action, matching the eigensolver stencil."""
    out = v * amp
    inv2 = 1.0 / (2.0 * grid.dx**2)
    out += 2.0 * inv2 * amp
    out[1:] -= inv2 * amp[:-1]
    out[:-1] -= inv2 * amp[1:]
    return out


def solve_bound_states(grid: SpatialGrid, potential: PotentialFn, m: int) -> EigenBasis:
    """Lowest m eigenpairs of the finite-difference H0 on the grid.

    Raises CapacityError when fewer than m negative-energy states exist.
    """
    if m < 1:
        raise StructuralError(f"m must be >= 1, got {m}")
    v = np.asarray(potential(grid.x), dtype=float)
    inv2 = 1.0 / (2.0 * grid.dx**2)
    diag = 2.0 * inv2 + v
    offdiag = np.full(grid.n_points - 1, -inv2)
    energies, vecs = eigh_tridiagonal(diag, offdiag, select="i", select_range=(0, m - 1))
    if energies[-1] >= 0.0:
        below = eigvalsh_tridiagonal(
            diag, offdiag, select="v", select_range=(float(v.min()) - 1.0, 0.0)
        )
        raise CapacityError(requested=m, available=len(below))
    states = []
    for i in range(m):
        vec = vecs[:, i] / np.sqrt(grid.dx)
        # sign convention: largest-magnitude component positive
        if vec[np.argmax(np.abs(vec))] < 0:
            vec = -vec
        states.append(WaveFunction(grid, vec.astype(complex)))
    return EigenBasis(energies=energies, states=states, potential_values=v)


def eigen_residual(grid: SpatialGrid, v: np.ndarray, basis: EigenBasis) -> np.ndarray:
    """Grid-norm residual ||H0 phi - E phi|| / ||phi|| per eigenpair (FD stencil)."""
    res = []
    for e, st in zip(basis.energies, basis.states):
        amp = st.amplitudes.real
        r = apply_h0_fd(grid, v, amp) - e * amp
        res.append(np.sqrt(np.sum(r**2) * grid.dx) / st.norm())
    return np.array(res)


def overlap_matrix(basis: EigenBasis) -> np.ndarray:
    states = np.array([st.amplitudes for st in basis.states])
    return (np.conj(states) @ states.T * basis.grid.dx).real
