"""Exception types shared across the simulation modules."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class ZeroCondensate(SimulationError):
    """Imbalance and phase difference are undefined at zero condensate."""


class NoThreshold(SimulationError):
    """No pumping threshold exists on the physical bracket (inconsistent rates)."""


class BelowThreshold(SimulationError):
    """Requested gain-loss-balanced states need pumping at or above threshold."""


class PtBroken(SimulationError):
    """Tunneling too weak for balanced states: J^2 < gamma2^2/4 (broken gain-loss symmetry)."""


class ChartSingularity(SimulationError):
    """The (imbalance, phase) chart is singular at |zeta| = 1 or eta = 0."""


class NotAFixedPoint(SimulationError):
    """Stability classification was asked for a state that is not stationary."""


class StepUnderflow(SimulationError):
    """Adaptive integration step fell below the hard floor.

    Carries the time at which the integrator gave up as ``.time``.
    """

    def __init__(self, time, message=None):
        self.time = time
        super().__init__(message or f"integration step underflow at t={time}")


class GridTooSmall(SimulationError):
    """An output grid clips the spectral support of at least one state."""


class ConfigError(SimulationError):
    """A run configuration failed validation."""
