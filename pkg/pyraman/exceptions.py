"""Exceptions raised by pyraman.

Most of these also subclass ValueError so that code catching bad-argument
errors the usual way keeps working.
"""
from __future__ import annotations

from typing import Optional


class PyramanError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PyramanError, ValueError):
    """Argument outside the physical or model domain."""


class ResolutionError(PyramanError, ValueError):
    """Spectrum or kernel cannot be represented on the wavelength grid."""


class EdgeError(PyramanError, ValueError):
    """Spectral peak sits on a grid edge, so a width cannot be measured."""


class ShapeError(PyramanError, ValueError):
    """Histogram does not contain the bins an estimator needs."""


class EstimatorError(PyramanError, ValueError):
    """Estimator is undefined for the given counts."""


class DegenerateConfigError(PyramanError, ValueError):
    """Configuration makes the g2 denominator vanish."""


class UnboundedRangeError(PyramanError, ValueError):
    """g2 curve never falls back to the classical bound on one side."""


class FitError(PyramanError, ValueError):
    """Fit input is degenerate."""


class ConfigError(PyramanError, ValueError):
    """Invalid experiment configuration.

    :param field: dotted path of the offending field, e.g. ``write_pulse.fwhm``
    """

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
