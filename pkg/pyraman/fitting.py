"""Weighted nonlinear least-squares fits of storage decays and spectral peaks.

Both fits use a damped Gauss-Newton (Levenberg-Marquardt) solver. Parameter
errors come from the local quadratic model of chi^2, cov = (J^T J)^-1, with
the supplied sigmas taken as absolute.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from .analysis import poisson_sigma
from .exceptions import FitError

logger = logging.getLogger(__name__)

FOUR_LN2 = 4.0 * math.log(2.0)

# relative parameter step and gradient tolerances of the solver
XTOL = 1e-9
GTOL = 1e-12
FTOL = 1e-12
MAX_EVALUATIONS = 2000


@dataclass(frozen=True)
class FitResult:
    parameters: Dict[str, float]
    std_errors: Dict[str, float]
    residual_norm: float
    converged: bool
    message: str = ''
    n_evaluations: int = 0
    model: str = field(default='', compare=False)

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.model == 'exponential':
            return exponential_model(x, self.parameters['amplitude'], self.parameters['lifetime'])
        if self.model == 'gaussian':
            p = self.parameters
            return gaussian_model(x, p['center'], p['fwhm'], p['amplitude'], p['offset'])
        raise FitError(f'Unknown fit model {self.model!r}')


def exponential_model(t: np.ndarray, amplitude: float, lifetime: float) -> np.ndarray:
    return amplitude * np.exp(-t / lifetime)


def gaussian_model(x: np.ndarray, center: float, fwhm: float, amplitude: float, offset: float) -> np.ndarray:
    return offset + amplitude * np.exp(-FOUR_LN2 * (x - center) ** 2 / fwhm ** 2)


def _unpack(points: Sequence[Tuple[float, ...]], min_points: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or data.shape[1] not in (2, 3):
        raise FitError('Points must be (x, y) or (x, y, sigma) tuples')
    if data.shape[0] < min_points:
        raise FitError(f'Need at least {min_points} points, got {data.shape[0]}')
    x, y = data[:, 0], data[:, 1]
    sigma = data[:, 2] if data.shape[1] == 3 else poisson_sigma(np.abs(y))
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(sigma))):
        raise FitError('Points contain non-finite values')
    if np.any(sigma <= 0):
        raise FitError('All sigmas must be > 0')
    if np.unique(x).size < 2:
        raise FitError('Need at least 2 distinct abscissae')
    return x, y, sigma


def _solve(residuals: Callable, jacobian: Callable, x0: np.ndarray, names: Sequence[str], model: str) -> FitResult:
    result = least_squares(residuals, x0, jac=jacobian, method='lm', x_scale='jac',
                           xtol=XTOL, gtol=GTOL, ftol=FTOL, max_nfev=MAX_EVALUATIONS)
    jac = result.jac
    try:
        covariance = np.linalg.pinv(jac.T @ jac)
        errors = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    except np.linalg.LinAlgError:
        errors = np.full(len(names), np.nan)
    converged = bool(result.success) and result.status > 0
    if not converged:
        logger.warning('%s fit did not converge: %s', model, result.message)
    return FitResult(
        parameters={name: float(v) for name, v in zip(names, result.x)},
        std_errors={name: float(e) for name, e in zip(names, errors)},
        residual_norm=float(np.linalg.norm(result.fun)),
        converged=converged,
        message=result.message,
        n_evaluations=int(result.nfev),
        model=model,
    )


def fit_exponential(points: Sequence[Tuple[float, ...]]) -> FitResult:
    """
    Fit A * exp(-t / T) to (delay ps, counts[, sigma]) points.

    Sigma defaults to the Poisson error of the counts. The starting point is
    a weighted log-linear fit of the positive counts.

    :return: FitResult with parameters ``amplitude`` and ``lifetime``
    """
    t, y, sigma = _unpack(points, min_points=2)

    positive = y > 0
    if np.count_nonzero(positive) >= 2 and np.unique(t[positive]).size >= 2:
        slope, intercept = np.polyfit(t[positive], np.log(y[positive]), 1, w=y[positive] / sigma[positive])
        lifetime0 = -1.0 / slope if slope < 0 else np.ptp(t)
        amplitude0 = math.exp(intercept)
    else:
        lifetime0 = np.ptp(t)
        amplitude0 = max(float(np.max(y)), 1.0)

    def residuals(p):
        return (exponential_model(t, p[0], p[1]) - y) / sigma

    def jacobian(p):
        e = np.exp(-t / p[1])
        return np.column_stack([e, p[0] * e * t / p[1] ** 2]) / sigma[:, None]

    fit = _solve(residuals, jacobian, np.array([amplitude0, lifetime0]), ('amplitude', 'lifetime'), 'exponential')
    logger.debug('Exponential fit: T = %.4g +- %.2g ps', fit.parameters['lifetime'], fit.std_errors['lifetime'])
    return fit


def fit_gaussian(points: Sequence[Tuple[float, ...]]) -> FitResult:
    """
    Fit offset + amplitude * exp(-4 ln2 (x - center)^2 / fwhm^2).

    Peaks and dips (negative amplitude) are both accepted. The starting point
    takes the extremum as center and a moment-based width.

    :return: FitResult with ``center``, ``fwhm``, ``amplitude``, ``offset``;
        flat data returns converged=False with zero amplitude
    """
    x, y, sigma = _unpack(points, min_points=5)
    names = ('center', 'fwhm', 'amplitude', 'offset')

    median = float(np.median(y))
    dip = (median - np.min(y)) > (np.max(y) - median)
    base = float(np.max(y)) if dip else float(np.min(y))
    shape = base - y if dip else y - base
    if np.ptp(y) == 0:
        return FitResult(
            parameters={'center': float(np.mean(x)), 'fwhm': math.nan, 'amplitude': 0.0, 'offset': median},
            std_errors={name: math.nan for name in names},
            residual_norm=float(np.linalg.norm((y - median) / sigma)),
            converged=False,
            message='flat data: no peak above the offset',
            model='gaussian',
        )

    weights = np.clip(shape, 0.0, None)
    mean = float(np.sum(weights * x) / np.sum(weights))
    spread = math.sqrt(float(np.sum(weights * (x - mean) ** 2) / np.sum(weights)))
    step = float(np.min(np.diff(np.unique(x))))
    fwhm0 = max(2.0 * math.sqrt(2.0 * math.log(2.0)) * spread, 2.0 * step)
    peak = int(np.argmax(shape))
    x0 = np.array([x[peak], fwhm0, y[peak] - base, base])

    def residuals(p):
        return (gaussian_model(x, *p) - y) / sigma

    def jacobian(p):
        center, width, amplitude, _ = p
        e = np.exp(-FOUR_LN2 * (x - center) ** 2 / width ** 2)
        d_center = amplitude * e * 2.0 * FOUR_LN2 * (x - center) / width ** 2
        d_width = amplitude * e * 2.0 * FOUR_LN2 * (x - center) ** 2 / width ** 3
        return np.column_stack([d_center, d_width, e, np.ones_like(x)]) / sigma[:, None]

    fit = _solve(residuals, jacobian, x0, names, 'gaussian')
    params = dict(fit.parameters)
    params['fwhm'] = abs(params['fwhm'])
    return FitResult(params, fit.std_errors, fit.residual_norm, fit.converged, fit.message, fit.n_evaluations, fit.model)
