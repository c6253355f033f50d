"""1D strong-field photoionization under combined laser and chaotic light."""

__version__ = "0.1.0"

from .core import (
    EigenBasis,
    SpatialGrid,
    WaveFunction,
    inner_product,
    solve_bound_states,
    to_momentum,
    to_position,
)
from .fields import (
    ChaoticSpectrumSpec,
    FieldWaveform,
    LaserPulseSpec,
    ProbeSpec,
    make_all_harmonic_comb,
    make_odd_harmonic_comb,
    psd,
    sample_chaotic,
    sample_laser,
    sample_probe,
    time_lattice,
)
from .observables import (
    EnhancementPoint,
    FragPoint,
    IonizationProbability,
    enhancement,
    frag_scan,
    ionization_probability,
    level_populations,
)
from .potentials import (
    SoftCorePotential,
    barrier_height,
    critical_amplitude,
    effective_potential,
    over_barrier_times,
)
from .propagator import (
    FluxRecord,
    PropagationConfig,
    RunResult,
    absorber_mask,
    propagate,
    relax_to_ground,
)
