"""Exception types shared across the package."""


class GridMismatchError(ValueError):
    """Two objects live on different grids or representations."""


class StructuralError(ValueError):
    """An input violates a structural precondition (shape, lattice, spec)."""


class CapacityError(RuntimeError):
    """Fewer bound states exist than were requested."""

    def __init__(self, requested: int, available: int):
        self.requested = requested
        self.available = available
        super().__init__(
            f"requested {requested} bound states, potential supports {available}"
        )


class ConvergenceError(RuntimeError):
    """An iterative scheme did not converge within its step budget."""


class NumericalInstabilityError(RuntimeError):
    """Propagation produced non-finite amplitudes."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"non-finite amplitudes at propagation step {step}")


class StaleFluxError(RuntimeError):
    """Flux record was not propagated to convergence before integration."""


class UndefinedBaselineError(ValueError):
    """Enhancement baseline P_l + P_n is zero."""


class ConfigError(ValueError):
    """Experiment configuration is malformed or contains unknown keys."""
