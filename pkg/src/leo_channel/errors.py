"""Exception types shared across the package."""


class LeoChannelError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LeoChannelError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NoVisibleSatellites(LeoChannelError):
    """The user's visible cone does not intersect the inclination band."""


class ConfigError(LeoChannelError, ValueError):
    """Inconsistent or unparseable configuration."""


class ResolutionError(LeoChannelError):
    """A grid is too coarse for the requested computation."""
