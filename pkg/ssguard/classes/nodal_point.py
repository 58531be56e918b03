from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class NodalPoint:
    """A zero of the transport velocity V = gamma y + U with its local strain data."""

    location: np.ndarray
    residual: float
    """|V(y_*)| after refinement."""
    eigenvalues: np.ndarray
    """Eigenvalues lambda_1 <= lambda_2 <= lambda_3 of the strain S at y_*."""
    eigenvectors: np.ndarray = field(repr=False, default=None)
    omega: Optional[np.ndarray] = None
    """Omega(y_*), if the profile carries a vorticity."""
    c_star: Optional[float] = None
    """Certified outgoing constant (clamped at 0), once a certificate was computed."""
    c_star_raw: Optional[float] = None
    """Sampled minimum of V(y).(y - y_*) / |y - y_*|^2 before clamping."""
    eps_star: Optional[float] = None
    """Certification radius."""
    outgoing: Optional[bool] = None
    omega_nonzero: Optional[bool] = None
    eigenpair_residual: Optional[float] = None
    """|S Xi - Xi| at y_* (only if Omega(y_*) != 0)."""
    eigenpair_holds: Optional[bool] = None
    implied_gamma_bound: Optional[float] = None
    """1/2 + c_*, when the outgoing property holds."""
    eigenvalue_window_holds: Optional[bool] = None
    """Whether [lambda_1, lambda_3] lies in [c_* - gamma, 2 (gamma - c_*)]."""
    num_samples: int = 0
    """Sample points behind the empirical certificate."""

    def __post_init__(self):
        self.location = np.asarray(self.location, dtype=float)
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)

    @property
    def strain_trace(self) -> float:
        return float(np.sum(self.eigenvalues))

    @property
    def is_origin(self) -> bool:
        return bool(np.all(self.location == 0.0))


@dataclass
class MeridionalFixedPoint:
    """A zero of the meridional transport velocity (gamma r + U_r, gamma z + U_z)."""

    location: np.ndarray
    """(r_*, z_*)."""
    residual: float
    on_axis: bool
    eigenvalues: np.ndarray
    """Eigenvalues of the meridional jacobian (complex in general)."""
    U_theta: float = 0.0
    circulation: float = 0.0
    """Circulation 2 pi r_* U_theta(r_*, z_*) of the invariant circle."""
    verdict: str = ""

    def __post_init__(self):
        self.location = np.asarray(self.location, dtype=float)
        self.eigenvalues = np.asarray(self.eigenvalues)

    @property
    def backward_attracting(self) -> bool:
        """All eigenvalues with positive real part: the point attracts the backward flow."""
        return bool(np.all(np.real(self.eigenvalues) > 0))

    @property
    def forward_attracting(self) -> bool:
        return bool(np.all(np.real(self.eigenvalues) < 0))


@dataclass
class VanishingOrder:
    """Estimated order of vanishing of |Omega| at a point."""

    order: float
    """Fitted log-log slope, inf if the field underflows on the inner shells."""
    fit_residual: float
    stderr: float
    infinite: bool
    """True if the order exceeds the cap (consistent with infinite-order vanishing)."""
    cap: float
    radii: np.ndarray = field(repr=False, default=None)
    shell_max: np.ndarray = field(repr=False, default=None)

    @property
    def description(self) -> str:
        if self.infinite:
            return "consistent with infinite-order vanishing"
        return f"finite order {self.order:.3g} +- {self.stderr:.1g}"
