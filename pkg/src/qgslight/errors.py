"""Exception hierarchy shared by every module.

The CLI maps :class:`ConfigError` to exit status 2 and every other
:class:`QgsError` to exit status 1.
"""


class QgsError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(QgsError, ValueError):
    """An input violates a documented precondition."""


class DegenerateGeometry(QgsError, ZeroDivisionError):
    """A divisor in a geometric formula is zero."""


class OutOfRange(InvalidArgument):
    """An angle lies outside the domain where a model is valid."""


class CoverageError(InvalidArgument):
    """A sampled spectrum does not cover a required wavelength window."""


class EmptyGroupError(QgsError):
    """An aggregation group has no samples left after filtering."""


class ExtrapolationError(QgsError):
    """A lookup was requested outside the tabulated range."""


class UndefinedQber(QgsError, ZeroDivisionError):
    """Signal and background are both zero, so no bit is ever detected."""


class ConfigError(QgsError):
    """A site configuration or input file is missing or malformed."""
