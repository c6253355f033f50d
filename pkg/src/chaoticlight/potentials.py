"""Soft-core atomic potential and the over-barrier diagnostic."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import StructuralError


@dataclass(frozen=True)
class SoftCorePotential:
    """V(x) = -1/sqrt(x^2 + a^2), a non-singular Coulomb-like well."""

    a_squared: float = 2.0

    def __post_init__(self):
        if self.a_squared <= 0:
            raise StructuralError(f"a_squared must be positive, got {self.a_squared}")

    def __call__(self, x):
        return -1.0 / np.sqrt(np.asarray(x, dtype=float) ** 2 + self.a_squared)


def effective_potential(pot: SoftCorePotential, field_value: float) -> Callable:
    """U(x) = V(x) + x*F for an instantaneous field value F."""

    def u(x):
        return pot(x) + np.asarray(x, dtype=float) * field_value

    return u


# Scan window and step for the barrier search; golden-section refinement follows.
_SCAN_HALF_WIDTH = 200.0
_SCAN_STEP = 0.05


def barrier_height(pot: SoftCorePotential, field_value: float) -> float:
    """Height of the escape barrier of U(x) = V(x) + x*F.

    The barrier is the maximum of U on the downhill side of the well (the
    direction a free charge would escape, x*F < 0): dense scan over that half
    axis, then bounded refinement around the scanned maximum. For F = 0 there
    is no barrier and the continuum threshold 0 is returned.
    """
    if field_value == 0.0:
        return 0.0
    u = effective_potential(pot, field_value)
    sign = -1.0 if field_value > 0 else 1.0
    xs = sign * np.arange(0.0, _SCAN_HALF_WIDTH + _SCAN_STEP, _SCAN_STEP)
    vals = u(xs)
    i = int(np.argmax(vals))
    lo = min(xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)])
    hi = max(xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)])
    res = minimize_scalar(
        lambda x: -u(x), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-8},
    )
    return float(-res.fun)


def critical_amplitude(pot: SoftCorePotential, binding_energy: float) -> float:
    """Field amplitude F* at which the barrier drops to the binding energy.

    barrier_height is monotone decreasing in |F|, so bisection applies.
    """
    if binding_energy >= 0:
        raise StructuralError("binding_energy must be negative")

    def gap(f):
        return barrier_height(pot, f) - binding_energy

    lo, hi = 1e-6, 1.0
    if gap(lo) <= 0:
        return lo
    if gap(hi) >= 0:
        raise StructuralError("barrier never reaches the binding energy below F=1")
    return float(brentq(gap, lo, hi, xtol=1e-10))


def over_barrier_times(
    pulse, pot: SoftCorePotential, binding_energy: float
) -> List[Tuple[float, float]]:
    """Time intervals where |F(t)| exceeds the over-barrier critical amplitude.

    `pulse` is a FieldWaveform sampled on the simulation lattice. Returns
    (t_start, t_end) pairs; empty list if the pulse never crosses F*.
    """
    f_star = critical_amplitude(pot, binding_energy)
    above = np.abs(pulse.values) > f_star
    if not np.any(above):
        return []
    starts = list(np.flatnonzero(above[1:] & ~above[:-1]) + 1)
    if above[0]:
        starts.insert(0, 0)
    intervals = []
    t = pulse.times
    for s in starts:
        e = s
        while e + 1 < len(above) and above[e + 1]:
            e += 1
        intervals.append((float(t[s]), float(t[e])))
    return intervals
