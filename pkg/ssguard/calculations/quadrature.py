"""Quadrature rules, sphere directions and the smooth cutoff shared by the diagnostics."""

from typing import Tuple

import numpy as np

_GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def gauss_legendre(order: int, a: float = -1.0, b: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite_gauss(edges: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule of the given order on every panel between consecutive edges."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    return (a + half * (x + 1.0)).ravel(), (half * w).ravel()


def geometric_edges(r_min: float, r_max: float, panels: int) -> np.ndarray:
    """Panel edges on [r_min, r_max], geometrically graded; r_min = 0 grades toward zero."""
    if panels < 1:
        raise ValueError("At least one panel is required.")
    if r_min == 0.0:
        inner = r_max * 0.5 ** np.arange(panels - 1, -1, -1)
        return np.concatenate([[0.0], inner])
    return np.geomspace(r_min, r_max, panels + 1)


def sphere_rule(polar_order: int, azimuthal_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Product rule on the unit sphere: Gauss-Legendre in cos(theta), trapezoid in phi.

    Returns unit directions of shape (m, 3) and weights summing to 4 pi.
    """
    cos_t, w_t = gauss_legendre(polar_order)
    phi = 2.0 * np.pi * np.arange(azimuthal_points) / azimuthal_points
    w_phi = np.full(azimuthal_points, 2.0 * np.pi / azimuthal_points)
    sin_t = np.sqrt(1.0 - cos_t**2)
    dirs = np.stack(
        [
            np.outer(sin_t, np.cos(phi)),
            np.outer(sin_t, np.sin(phi)),
            np.outer(cos_t, np.ones_like(phi)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    return dirs, np.outer(w_t, w_phi).ravel()


def fibonacci_sphere(n: int, include_axes: bool = True) -> np.ndarray:
    """Quasi-uniform unit directions on a Fibonacci spiral, optionally with the six +-e_i."""
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    rho = np.sqrt(1.0 - z**2)
    phi = _GOLDEN_ANGLE * k
    dirs = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)
    if include_axes:
        dirs = np.vstack([dirs, np.eye(3), -np.eye(3)])
    return dirs


def half_circle_directions(n: int) -> np.ndarray:
    """Unit directions (sin t, cos t) of the meridional half-plane r >= 0, t in [0, pi]."""
    t = np.linspace(0.0, np.pi, n)
    return np.stack([np.sin(t), np.cos(t)], axis=-1)


def cutoff(s: np.ndarray) -> np.ndarray:
    """Smooth monotone cutoff: 1 on [0, 1], 0 on [2, inf), quintic C^2 bridge in between."""
    s = np.asarray(s, dtype=float)
    t = np.clip(s - 1.0, 0.0, 1.0)
    return 1.0 - t**3 * (10.0 - 15.0 * t + 6.0 * t**2)
