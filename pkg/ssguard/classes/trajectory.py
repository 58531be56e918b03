from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class IntegratorStats:
    """Bookkeeping of one adaptive integration."""

    steps: int = 0
    """Accepted steps."""
    nfev: int = 0
    """Right-hand-side evaluations (accepted and rejected steps)."""
    rtol: float = 0.0
    atol: float = 0.0
    truncated: bool = False
    """True if the integration stopped before the end of the requested span."""
    message: str = ""

    def merged(self, other: "IntegratorStats") -> "IntegratorStats":
        return IntegratorStats(
            steps=self.steps + other.steps,
            nfev=self.nfev + other.nfev,
            rtol=self.rtol,
            atol=self.atol,
            truncated=self.truncated or other.truncated,
            message="; ".join(m for m in (self.message, other.message) if m),
        )


@dataclass
class Trajectory:
    """A self-similar Lagrangian path Y(a, tau) with its label jacobian."""

    label: np.ndarray
    taus: np.ndarray
    """Increasing sample times, always containing tau = 0."""
    positions: np.ndarray
    """Y(a, tau), shape (n, 3)."""
    jacobians: Optional[np.ndarray] = None
    """grad_a Y(a, tau), shape (n, 3, 3), if the variational equation was integrated."""
    stats: IntegratorStats = field(default_factory=IntegratorStats)

    def __post_init__(self):
        self.label = np.asarray(self.label, dtype=float)
        self.taus = np.asarray(self.taus, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float)
        assert self.positions.shape == (len(self.taus), 3)
        assert np.all(np.diff(self.taus) > 0), "Trajectory samples must be increasing in tau."

    @property
    def index_of_zero(self) -> int:
        return int(np.argmin(np.abs(self.taus)))

    def determinants(self) -> np.ndarray:
        if self.jacobians is None:
            raise ValueError("Trajectory was integrated without its jacobian.")
        return np.linalg.det(self.jacobians)

    @property
    def orientation_preserving(self) -> bool:
        return bool(np.all(self.determinants() > 0))

    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.positions, axis=-1)


@dataclass
class MeridionalTrajectory:
    """A path (R, Z) of the meridional flow with the swept angle Theta."""

    label: np.ndarray
    """(r, z) at tau = 0."""
    taus: np.ndarray
    positions: np.ndarray
    """(R, Z), shape (n, 2)."""
    theta: np.ndarray
    """Theta(tau) with Theta(0) = 0; nan after a divergence of the angular quadrature."""
    stats: IntegratorStats = field(default_factory=IntegratorStats)
    theta_divergent: bool = False

    def __post_init__(self):
        self.label = np.asarray(self.label, dtype=float)
        self.taus = np.asarray(self.taus, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float)
        self.theta = np.asarray(self.theta, dtype=float)
        assert self.positions.shape == (len(self.taus), 2)
        assert np.all(self.positions[:, 0] >= 0), "Meridional paths must stay in r >= 0."

    @property
    def R(self) -> np.ndarray:
        return self.positions[:, 0]

    @property
    def Z(self) -> np.ndarray:
        return self.positions[:, 1]

    @property
    def on_axis(self) -> bool:
        return self.label[0] == 0.0
