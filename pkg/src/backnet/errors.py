"""Exception hierarchy shared by every planner."""


class BacknetError(Exception):
    """Base class for all planning errors."""


class InvalidInputError(BacknetError, ValueError):
    """Malformed instance, plan, or query (bad dimensions, i == j, ...)."""


class InfeasibleError(BacknetError):
    """No plan satisfies the requested constraints."""


class InfeasibleAugmentationError(InfeasibleError):
    """Every candidate link is already in use; connectivity cannot be raised."""


class NoCliqueError(InfeasibleError):
    """The planning graph has no one-vertex-per-station clique."""


class InternalConsistencyError(BacknetError, RuntimeError):
    """A runtime postcondition check failed."""


class CapExceededError(BacknetError):
    """Instance is larger than an exhaustive-search cap allows."""


class CombinatorialLimitError(CapExceededError):
    """A neighbour set is too large to enumerate link combinations."""
