"""Exception hierarchy shared by every stage of the clearing pipeline."""


class SlotMarketError(Exception):
    pass


class ScenarioError(SlotMarketError):
    """A scenario document is malformed; ``path`` points at the offending field."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class Infeasible(SlotMarketError):
    """No capacity-respecting schedule places every flight inside its window."""


class InvalidSchedule(SlotMarketError):
    pass


class NotNormalized(SlotMarketError):
    pass


class NotEquilibrium(SlotMarketError):
    pass


class IterationBound(SlotMarketError):
    """The minimum-price reduction exceeded its safety cap on events."""


class TooLarge(SlotMarketError):
    """An instance is beyond the size guard of a brute-force routine."""


class NoEquilibriumPrices(SlotMarketError):
    pass


class NotLatticeMin(SlotMarketError):
    pass


class RoundInfeasible(SlotMarketError):
    def __init__(self, airport, round_index, cause, log=None):
        self.airport = airport
        self.round_index = round_index
        self.cause = cause
        self.log = log
        super().__init__(f"airport {airport!r} round {round_index}: {cause}")
