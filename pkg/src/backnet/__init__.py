"""Minimum-cost resilient backhaul planning with OF and hybrid RF/FSO links."""

from backnet.errors import (
    BacknetError,
    CapExceededError,
    CombinatorialLimitError,
    InfeasibleAugmentationError,
    InfeasibleError,
    InternalConsistencyError,
    InvalidInputError,
    NoCliqueError,
)
from backnet.hybrid_planner import hybrid_planning, solve_hybrid
from backnet.model import (
    BaseStation,
    FeasibilityReport,
    LinkModels,
    Plan,
    ProblemInstance,
    Topology,
    check_feasibility,
    hybrid_rate,
    hybrid_reliability,
    link_costs,
    min_path_diversity,
    node_rate,
    node_reliability,
    path_diversity,
    plan_cost,
)
from backnet.of_planner import augment_disjoint, of_planning
from backnet.oracle import brute_force_of, brute_force_original, redundancy_check

__version__ = "0.1.0"
