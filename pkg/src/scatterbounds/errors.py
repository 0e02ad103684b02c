"""Exception hierarchy for scattering computations."""


class ScatterError(Exception):
    """Base class for every error raised by this package."""


class NoOpenChannelError(ScatterError, ValueError):
    """Energy does not exceed both asymptotic potential values."""


class DomainError(ScatterError, ValueError):
    """Position outside the range where a potential is defined."""


class DegenerateCaseError(ScatterError, ValueError):
    """Energy coincides with a flat interior level of a comparison potential."""


class TruncationError(ScatterError):
    """Potential is not asymptotically flat inside the allowed window."""


class StepLimitError(ScatterError):
    """Integrator exceeded its configured step budget."""


class QuadratureError(ScatterError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class PhaseResolutionError(ScatterError):
    """Stored trajectory is too coarse to unwrap phases unambiguously."""


class InsufficientDataError(ScatterError):
    """Too few usable nodes for a residual estimate."""


class ConfigError(ScatterError, ValueError):
    """Invalid scenario configuration."""
