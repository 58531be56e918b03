from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..constants import CONFIG
from ..logger import LOGGER
from .field_source import FieldSource
from .grid import Grid3, MeridionalGrid, RegularGrid


@dataclass
class Profile:
    """A candidate self-similar profile: exponent gamma with velocity, vorticity and pressure."""

    gamma: float
    """Similarity exponent, gamma > 0."""
    U: FieldSource
    """Velocity profile (3-vector)."""
    Omega: Optional[FieldSource] = None
    """Vorticity profile (3-vector)."""
    P: Optional[FieldSource] = None
    """Pressure profile (scalar)."""
    c_flat: Optional[float] = None
    """Decay constant of the far-field envelope, if known."""
    grid: Optional[RegularGrid] = None
    """Evaluation grid of all grid-based diagnostics; defaults to the sampling grid of U."""
    name: str = "profile"
    check_galilean: bool = field(default=True, repr=False)

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"The similarity exponent must be positive (got {self.gamma}).")
        if self.U.rank != 3:
            raise ValueError("The velocity profile must be a vector field.")
        if self.Omega is not None and self.Omega.rank != 3:
            raise ValueError("The vorticity profile must be a vector field.")
        if self.P is not None and self.P.rank != 1:
            raise ValueError("The pressure profile must be a scalar field.")
        if self.c_flat is not None and self.c_flat < 0:
            raise ValueError(f"The decay constant must be nonnegative (got {self.c_flat}).")
        if self.grid is None:
            self.grid = self.U.grid or (self.Omega.grid if self.Omega is not None else None)
        if self.grid is None:
            raise ValueError("Analytic profiles need an evaluation grid.")
        if self.check_galilean:
            offset = self.galilean_offset
            if offset > CONFIG.tolerance("galilean"):
                LOGGER.warning(
                    f"Profile '{self.name}' is not Galilean-normalized: |U(0)| = {offset:.3e}"
                )

    @property
    def symmetry(self) -> str:
        return "cartesian"

    @property
    def galilean_offset(self) -> float:
        return float(np.linalg.norm(self.U.evaluate(np.zeros((1, 3)))[0]))

    def rescaled(self, lam: float) -> "Profile":
        """The profile U_lam(y) = lam U(y/lam), Omega_lam(y) = Omega(y/lam), P_lam = lam^2 P(y/lam)."""
        if not lam > 0:
            raise ValueError(f"Scale factor must be positive (got {lam}).")
        return Profile(
            gamma=self.gamma,
            U=self.U.rescaled(lam, amplitude=lam),
            Omega=None if self.Omega is None else self.Omega.rescaled(lam),
            P=None if self.P is None else self.P.rescaled(lam, amplitude=lam**2),
            c_flat=None,
            grid=self.grid.scaled(lam),
            name=self.name,
            check_galilean=False,
        )

    def replace(self, **changes) -> "Profile":
        kwargs = dict(
            gamma=self.gamma,
            U=self.U,
            Omega=self.Omega,
            P=self.P,
            c_flat=self.c_flat,
            grid=self.grid,
            name=self.name,
            check_galilean=False,
        )
        kwargs.update(changes)
        return Profile(**kwargs)

    def metadata(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "gamma": self.gamma,
            "symmetry": self.symmetry,
            "grid": self.grid.to_dict(),
            "kind": self.U.kind,
            "has_omega": self.Omega is not None,
            "has_pressure": self.P is not None,
            "c_flat": self.c_flat,
        }


def _cylindrical_basis(points: np.ndarray):
    x, y = points[..., 0], points[..., 1]
    r = np.hypot(x, y)
    safe = np.where(r > 0, r, 1.0)
    cos = np.where(r > 0, x / safe, 1.0)
    sin = np.where(r > 0, y / safe, 0.0)
    return r, cos, sin


@dataclass
class AxisymProfile:
    """An axisymmetric candidate profile given by cylindrical components on the (r, z) half-plane."""

    gamma: float
    U_r: FieldSource
    U_theta: FieldSource
    U_z: FieldSource
    Omega_r: Optional[FieldSource] = None
    Omega_theta: Optional[FieldSource] = None
    Omega_z: Optional[FieldSource] = None
    P: Optional[FieldSource] = None
    c_flat: Optional[float] = None
    grid: Optional[MeridionalGrid] = None
    """Meridional evaluation grid; defaults to the sampling grid of U_r."""
    name: str = "axisym-profile"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"The similarity exponent must be positive (got {self.gamma}).")
        for label, comp in self.components().items():
            if comp is not None and (comp.rank != 1 or comp.symmetry != "axisym"):
                raise ValueError(f"Axisymmetric component '{label}' must be a meridional scalar.")
        if self.grid is None:
            self.grid = self.U_r.grid or self.U_theta.grid or self.U_z.grid
        if self.grid is None:
            raise ValueError("Analytic axisymmetric profiles need a meridional evaluation grid.")

    @property
    def symmetry(self) -> str:
        return "axisym"

    @property
    def has_vorticity(self) -> bool:
        return any(c is not None for c in (self.Omega_r, self.Omega_theta, self.Omega_z))

    def components(self) -> Dict[str, Optional[FieldSource]]:
        return {
            "U_r": self.U_r,
            "U_theta": self.U_theta,
            "U_z": self.U_z,
            "Omega_r": self.Omega_r,
            "Omega_theta": self.Omega_theta,
            "Omega_z": self.Omega_z,
            "P": self.P,
        }

    def velocity(self, points: np.ndarray) -> np.ndarray:
        """(U_r, U_theta, U_z) at meridional points (..., 2)."""
        return np.stack(
            [self.U_r.evaluate(points), self.U_theta.evaluate(points), self.U_z.evaluate(points)],
            axis=-1,
        )

    def meridional_velocity(self, points: np.ndarray) -> np.ndarray:
        """The transport velocity (gamma r + U_r, gamma z + U_z)."""
        points = np.asarray(points, dtype=float)
        return self.gamma * points + np.stack(
            [self.U_r.evaluate(points), self.U_z.evaluate(points)], axis=-1
        )

    def meridional_jacobian(self, points: np.ndarray) -> np.ndarray:
        """Jacobian of the meridional transport velocity, shape (..., 2, 2)."""
        points = np.asarray(points, dtype=float)
        jac = np.stack([self.U_r.jacobian(points), self.U_z.jacobian(points)], axis=-2)
        return jac + self.gamma * np.eye(2)

    def metadata(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "gamma": self.gamma,
            "symmetry": self.symmetry,
            "grid": self.grid.to_dict(),
            "kind": self.U_r.kind,
            "has_omega": self.has_vorticity,
            "has_pressure": self.P is not None,
            "c_flat": self.c_flat,
        }

    def default_cartesian_grid(self) -> Grid3:
        """A box around the meridional rectangle, with the meridional spacing."""
        r_max = float(self.grid.upper[0])
        dr, dz = self.grid.spacing
        n_xy = max(4, min(2 * int(np.ceil(r_max / dr)) + 1, 97))
        h_xy = 2.0 * r_max / (n_xy - 1)
        return Grid3(
            dims=(n_xy, n_xy, self.grid.dims[1]),
            spacing=(h_xy, h_xy, dz),
            origin=(-r_max, -r_max, self.grid.origin[1]),
        )

    def to_cartesian(self, grid: Optional[Grid3] = None) -> Profile:
        """Lifts the profile to closed-form cartesian fields (jacobians by finite differences)."""
        grid = self.default_cartesian_grid() if grid is None else grid

        def lift_vector(radial, azimuthal, axial) -> Optional[FieldSource]:
            if radial is None and azimuthal is None and axial is None:
                return None
            parts = [radial, azimuthal, axial]

            def func(points):
                points = np.asarray(points, dtype=float)
                r, cos, sin = _cylindrical_basis(points)
                mer = np.stack([r, points[..., 2]], axis=-1)
                f_r, f_t, f_z = (
                    np.zeros(r.shape) if c is None else c.evaluate(mer) for c in parts
                )
                return np.stack([f_r * cos - f_t * sin, f_r * sin + f_t * cos, f_z], axis=-1)

            return FieldSource(rank=3, name=f"{self.name}-lift", func=func)

        pressure = None
        if self.P is not None:
            source = self.P

            def p_func(points):
                points = np.asarray(points, dtype=float)
                r = np.hypot(points[..., 0], points[..., 1])
                return source.evaluate(np.stack([r, points[..., 2]], axis=-1))

            pressure = FieldSource(rank=1, name=f"{self.name}-lift", func=p_func)

        return Profile(
            gamma=self.gamma,
            U=lift_vector(self.U_r, self.U_theta, self.U_z),
            Omega=lift_vector(self.Omega_r, self.Omega_theta, self.Omega_z),
            P=pressure,
            c_flat=self.c_flat,
            grid=grid,
            name=f"{self.name}-lift",
            check_galilean=False,
        )
