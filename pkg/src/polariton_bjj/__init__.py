"""Mean-field simulations of a one-side-pumped exciton-polariton Josephson junction."""

from .errors import (
    BelowThreshold,
    ChartSingularity,
    ConfigError,
    GridTooSmall,
    NoThreshold,
    NotAFixedPoint,
    PtBroken,
    SimulationError,
    StepUnderflow,
    ZeroCondensate,
)
from .model import (
    HBAR_MEV_PS,
    FullState,
    ModelParams,
    OnSiteEnergies,
    ReducedState,
    full_from_reduced,
    gpe_rhs,
    onsite_energies,
    reduced_from_full,
    self_trapping_parameter,
)
from .spectrum import (
    NonCondensedSpectrum,
    ThresholdResult,
    non_condensed_spectrum,
    threshold_pumping,
    threshold_vs_coupling,
)
from .stationary import (
    BRANCH_MINUS,
    BRANCH_PLUS,
    NON_CONDENSED,
    PT_ANTIBONDING,
    PT_BONDING,
    SELF_TRAPPED,
    UNTRAPPED,
    StationaryState,
    all_states_at_pumping,
    branches_vs_r1,
    exceptional_point,
    fixed_point_residual,
    full_state_of,
    pt_symmetric_states,
)
from .stability import (
    STABILITY_TOL,
    StabilityVerdict,
    classify,
    classify_all,
    jacobian,
    reduced_rhs,
)
from .dynamics import (
    BasinMap,
    SettleResult,
    SweepResult,
    Trajectory,
    basin_map,
    evolve,
    evolve_reduced,
    hysteresis_sweep,
    match_state,
    reduced_velocity,
    settle,
)
from .reduced_models import (
    BROKEN,
    DC_REGIME,
    PI_LOCK,
    ZERO_LOCK,
    JosephsonDerivative,
    PendulumState,
    critical_current_check,
    josephson_rhs,
    locking_criterion,
    pendulum_angular_velocity,
    pendulum_rhs,
)
from .emission import EmissionMap, emission_map, line_weight, stable_states_for_emission

__all__ = [name for name in dir() if not name.startswith("_")]
