from dataclasses import dataclass
from typing import Tuple

import numpy as np
from astropy.modeling import fitting, models


@dataclass
class LineFit:
    """Least-squares line y = slope * x + intercept."""

    slope: float
    intercept: float
    slope_stderr: float
    """Standard error of the slope (inf for fewer than three points)."""
    rms: float
    """Root mean square of the residuals."""

    def band(self, sigmas: float) -> Tuple[float, float]:
        return self.slope - sigmas * self.slope_stderr, self.slope + sigmas * self.slope_stderr


def fit_line(x: np.ndarray, y: np.ndarray) -> LineFit:
    """Fits a straight line with the astropy linear least-squares fitter."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("A line fit needs at least two points.")
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise ValueError("Line fit data must be finite.")
    fitter = fitting.LinearLSQFitter()
    fitted = fitter(models.Linear1D(slope=0.0, intercept=float(np.mean(y))), x, y)
    slope, intercept = float(fitted.slope.value), float(fitted.intercept.value)
    res = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(res**2)))
    spread = float(np.sum((x - x.mean()) ** 2))
    if len(x) > 2 and spread > 0:
        stderr = float(np.sqrt(np.sum(res**2) / (len(x) - 2) / spread))
    else:
        stderr = float("inf")
    return LineFit(slope=slope, intercept=intercept, slope_stderr=stderr, rms=rms)


def fit_power_law(x: np.ndarray, values: np.ndarray) -> LineFit:
    """Fits values ~ A x^slope in log-log space; all inputs must be positive."""
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(x <= 0) or np.any(values <= 0):
        raise ValueError("Power-law fits need strictly positive abscissae and values.")
    return fit_line(np.log(x), np.log(values))


def fit_even_quadratic(rho: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """Fits values ~ c0 + c2 rho^2 (linear coefficient held at zero); returns (c0, c2)."""
    model = models.Polynomial1D(degree=2, c0=0.0, c1=0.0, c2=0.0, fixed={"c1": True})
    fitted = fitting.LinearLSQFitter()(model, np.asarray(rho, float), np.asarray(values, float))
    return float(fitted.c0.value), float(fitted.c2.value)
