"""Hyper temporal networks: consistency, schedules, and certificates.

The public surface re-exports the network model, the game engine, and the
solving pipeline; see the README for the file formats and the CLI.
"""

from .model import (
    HyTN,
    Hyperarc,
    MixedNetworkError,
    MultiHead,
    MultiTail,
    NegativeCycleCert,
    NetworkClass,
    Standard,
    classify,
    reverse_network,
    verify_negative_cycle,
    verify_schedule,
    weight_bound,
)
from .mpg import (
    MeanPayoffGame,
    QueuePolicy,
    SolveStats,
    VIResult,
    brute_force_values,
    is_progress_measure,
    project,
    synthesize_player0,
    synthesize_player1,
    value_iteration,
)
from .solver import (
    InconsistentNetworkError,
    ReductionMap,
    Verdict,
    check_consistency,
    compute_negative_cycle,
    compute_schedule,
    compute_schedule_via_projection,
    hytn_to_mpg,
    mpg_to_hytn,
    solve,
)
from .stn import DistanceGraph, bellman_ford, stn_consistency

__version__ = "0.1.0"

__all__ = [
    "HyTN",
    "Hyperarc",
    "MixedNetworkError",
    "MultiHead",
    "MultiTail",
    "NegativeCycleCert",
    "NetworkClass",
    "Standard",
    "classify",
    "reverse_network",
    "verify_negative_cycle",
    "verify_schedule",
    "weight_bound",
    "MeanPayoffGame",
    "QueuePolicy",
    "SolveStats",
    "VIResult",
    "brute_force_values",
    "is_progress_measure",
    "project",
    "synthesize_player0",
    "synthesize_player1",
    "value_iteration",
    "InconsistentNetworkError",
    "ReductionMap",
    "Verdict",
    "check_consistency",
    "compute_negative_cycle",
    "compute_schedule",
    "compute_schedule_via_projection",
    "hytn_to_mpg",
    "mpg_to_hytn",
    "solve",
    "DistanceGraph",
    "bellman_ford",
    "stn_consistency",
]
