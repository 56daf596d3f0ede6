"""Exception and warning types shared across the package."""


class GhostfreeError(Exception):
    """Base class for all package errors."""


class DomainError(GhostfreeError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class DegenerateFrequencyError(DomainError):
    """omega1 == omega2 (or m1 == m2): the decoupling transformation is singular."""


class CausticError(GhostfreeError, ValueError):
    """The propagator denominator vanishes at the requested time."""


class DegenerateFormError(GhostfreeError, ValueError):
    """A Gaussian quadratic form is singular or divergent."""


class ConfigError(GhostfreeError, ValueError):
    """Invalid run configuration, raised before any computation starts."""


class CoarseGridWarning(UserWarning):
    """Finite-difference grid too coarse for the requested residual to be meaningful."""
