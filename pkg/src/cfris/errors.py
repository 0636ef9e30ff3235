"""Exception types shared across the simulator."""


class SimError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(SimError):
    """A configuration value violates its documented invariant."""


class DomainError(SimError):
    """A numeric argument is outside the domain of the formula."""


class DegenerateChannelError(SimError):
    """A channel is identically zero where a nonzero one is required."""


class SingularChannelError(DegenerateChannelError):
    """An estimated channel matrix is rank deficient or too ill-conditioned."""


class StatisticsError(SimError):
    """A statistic was requested from an empty or invalid sample set."""
