"""Exception hierarchy shared by all beamnet modules."""


class BeamnetError(Exception):
    """Base class for all beamnet errors."""


class DomainError(BeamnetError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class NonConvergenceError(BeamnetError, RuntimeError):
    """A quadrature or iteration failed to meet its error target."""


class SeriesDivergenceError(BeamnetError, RuntimeError):
    """A truncated series failed its convergence (ratio) test."""


class ConfigError(BeamnetError, ValueError):
    """Invalid or inconsistent experiment configuration."""
