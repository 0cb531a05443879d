"""Exception types raised across the package."""


class KoopseqError(Exception):
    pass


class PoleError(KoopseqError):
    """Argument sits on a pole of Gamma, Beta or a Pochhammer denominator."""


class DomainError(KoopseqError):
    """Argument outside the region where the quantity is defined."""


class ConvergenceError(KoopseqError):
    """A series or tail bound failed to meet its stopping rule."""


class QuadratureError(KoopseqError):
    """Quadrature error estimate exceeds the requested tolerance."""


class ConfigError(KoopseqError):
    """Malformed suite configuration."""


class ParseError(KoopseqError):
    """Malformed sequence, function or command-line input."""
