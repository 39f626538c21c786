"""Exception types."""

from __future__ import annotations


class HeavyTileError(Exception):
    """Base class for domain failures."""


class GraphFormatError(HeavyTileError, ValueError):
    """A graph or partition file could not be parsed or validated."""


class NotHeavyError(HeavyTileError, ValueError):
    """A clique passed as heavy is not t-heavy (precondition violation)."""


class ConstructionFailed(HeavyTileError):
    """A constructive procedure found an empty candidate set at ``step``."""

    def __init__(self, step: str, detail: str = ""):
        self.step = step
        msg = f"CONSTRUCTION_FAILED at step {step}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ConnectorError(HeavyTileError):
    """No connector (or no disjoint connector) could be found for a pair."""

    def __init__(self, pair, detail: str = ""):
        self.pair = tuple(pair)
        msg = f"no connector for pair {self.pair}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class AbsorberError(HeavyTileError):
    """Absorber assembly failed."""


class BudgetError(HeavyTileError):
    """A size budget was exhausted before the construction completed."""


class CapabilityError(HeavyTileError):
    """An exact computation was requested above its configured size cap."""


class DisjointnessError(HeavyTileError):
    """No pairwise-disjoint choice of the required pieces exists."""
