"""Exception hierarchy.

Every numerical-contract violation raises a subclass of
:class:`EquivLabError`; the CLI maps these to a non-zero exit status and
names the module that raised.
"""


class EquivLabError(Exception):
    """Base class for all package errors."""


class GridResolutionError(EquivLabError):
    """A packet is under-resolved by, or not contained in, its grid."""


class BoundaryError(EquivLabError):
    """Amplitude reached the periodic domain edge."""


class StabilityError(EquivLabError):
    """Time step violates the kinetic anti-aliasing bound."""


class BoxTooSmallError(EquivLabError):
    """Radial eigenvalues are not converged with respect to the box size."""


class ConvergenceError(EquivLabError):
    """Eigenvalues are not converged with respect to grid refinement."""


class UnboundEnergyError(EquivLabError):
    """Energy has no pair of classical turning points."""


class UndersamplingError(EquivLabError):
    """Too few orbit samples for the requested harmonics."""


class DomainError(EquivLabError):
    """Argument outside the mathematical domain (e.g. |v| >= c)."""


class ConfigError(EquivLabError):
    """Experiment configuration failed schema validation."""
