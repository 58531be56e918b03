from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..classes import Profile, jacobian_magnitude
from ..constants import CONFIG
from ..errors import EnvelopeViolationError
from ..logger import LOGGER
from ..stencils import curl_from_jacobian
from .fitting import LineFit, fit_power_law


@dataclass
class ShellMaxima:
    """Maxima of a nonnegative quantity over concentric radial shells."""

    edges: np.ndarray
    maxima: np.ndarray
    counts: np.ndarray

    @property
    def mid_radii(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def outer_radii(self) -> np.ndarray:
        return self.edges[1:]


def shell_maxima(quantity: np.ndarray, radii: np.ndarray, shell_count: int) -> ShellMaxima:
    """Groups samples into ``shell_count`` equally wide shells out to the largest radius."""
    quantity = np.ravel(quantity)
    radii = np.ravel(radii)
    r_max = float(radii.max())
    edges = np.linspace(0.0, r_max, shell_count + 1)
    index = np.minimum((radii / r_max * shell_count).astype(int), shell_count - 1)
    maxima = np.zeros(shell_count)
    np.maximum.at(maxima, index, quantity)
    counts = np.bincount(index, minlength=shell_count)
    return ShellMaxima(edges=edges, maxima=maxima, counts=counts)


def fit_tail(
    radii: np.ndarray, maxima: np.ndarray, num_outer: int = 3, floor: float = 0.0
) -> Optional[LineFit]:
    """Power-law fit of the outermost shell maxima; None if the tail vanishes.

    A tail counts as vanishing when all of the outer maxima are at or below ``floor``.
    """
    r_out = np.asarray(radii[-num_outer:], dtype=float)
    m_out = np.asarray(maxima[-num_outer:], dtype=float)
    if np.all(m_out <= floor):
        return None
    keep = m_out > floor
    if keep.sum() < 2:
        if not keep[-1]:
            return None
        # only the outermost shell is nonzero: no decay is visible
        return LineFit(slope=0.0, intercept=float(np.log(m_out[-1])), slope_stderr=np.inf, rms=0.0)
    return fit_power_law(r_out[keep], m_out[keep])


@dataclass
class EnvelopeEstimate:
    """Smallest decay constant C_flat satisfying the envelope bounds on the sampled shells."""

    c_flat: float
    radius: float
    """Mid radius of the shell where C_flat is attained."""
    shell_index: int
    shell_ratios: np.ndarray = field(repr=False, default=None)


def _brackets(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    r = np.linalg.norm(points, axis=-1)
    return r, np.sqrt(1.0 + r**2)


def decay_envelope(profile: Profile) -> EnvelopeEstimate:
    """Estimates C_flat from |U| <= C |y| <y>^(-1/gamma) and |Omega| + |grad U| <= C <y>^(-1/gamma).

    Raises
    ------
    EnvelopeViolationError
        If the required constant keeps growing up to the outermost shell.
    """
    grid = profile.grid
    points = grid.points()
    r, bracket = _brackets(points)
    weight = bracket ** (1.0 / profile.gamma)
    u = np.linalg.norm(profile.U.values_on(grid), axis=-1)
    jac_u = profile.U.jacobian_on(grid)
    if profile.Omega is not None:
        omega = np.linalg.norm(profile.Omega.values_on(grid), axis=-1)
    else:
        omega = np.linalg.norm(curl_from_jacobian(jac_u), axis=-1)
    grad_u = jacobian_magnitude(jac_u, 3)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_u = np.where(r > 0, u * weight / np.where(r > 0, r, 1.0), 0.0)
    ratio = np.maximum(ratio_u, (omega + grad_u) * weight)

    shell_count = int(CONFIG.get("numerics", "shell_count"))
    shells = shell_maxima(ratio, r, shell_count)
    index = int(np.argmax(shells.maxima))
    c_flat = float(shells.maxima[index])
    tail = shells.maxima[-3:]
    if c_flat > 0 and index == shell_count - 1 and np.all(np.diff(tail) > 0):
        raise EnvelopeViolationError(
            f"Envelope constant grows up to the outermost shell ({tail.tolist()}); the profile "
            f"is inconsistent with the decay <y>^(-1/gamma) for gamma = {profile.gamma}."
        )
    LOGGER.debug(f"C_flat = {c_flat:.4g} attained at shell {index} of {shell_count}")
    return EnvelopeEstimate(
        c_flat=c_flat,
        radius=float(shells.mid_radii[index]),
        shell_index=index,
        shell_ratios=shells.maxima,
    )
