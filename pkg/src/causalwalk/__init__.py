"""Discrete-time quantum walks under definite and indefinite causal order."""

__version__ = "0.1.0"

from .engine import (  # noqa: E402
    PeriodicWalkSpec,
    SwitchSpec,
    SwitchedState,
    Trajectory,
    activation_trajectory,
    effective_activation_apply,
    evolve_definite,
    full_activation_apply,
    periodic_sequence,
    project_switch,
    switch_extended_evolve,
    switched_step_evolve,
)
from .walker import (  # noqa: E402
    CoinSpec,
    WalkerState,
    coin_matrix,
    make_localized_state,
    partial_trace_position,
    probability_distribution,
    walk_step,
)
