"""Exception types shared across the package."""


class DomainError(ValueError):
    """A quantity lies outside its legal domain (piece beyond the cake, deviation beyond the strategy space)."""


class DegenerateInputError(ValueError):
    """Input is degenerate for the requested statistic (e.g. all-zero share vector)."""


class StrategyError(ValueError):
    """A strategy produced an illegal action, e.g. a cut fraction outside [0, 1]."""


class CompositionError(TypeError):
    """Two lenses were composed whose interface types do not line up."""


class TraceError(ValueError):
    """A game trace is incomplete or internally inconsistent."""


class ConfigurationError(ValueError):
    """Game configuration and strategy profile do not match (e.g. missing player)."""


class GridError(ValueError):
    """A search grid violates a resolution precondition."""
