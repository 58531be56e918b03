from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from ..constants import BOUNDARY_POLICIES


@dataclass
class RegularGrid:
    """A regular tensor-product grid; base class of the cartesian and meridional grids."""

    dims: Tuple[int, ...]
    """Number of nodes per axis."""
    spacing: Tuple[float, ...]
    """Node spacing per axis."""
    origin: Tuple[float, ...]
    """Coordinates of the first node."""
    boundary_policy: str = "decay"
    """Either 'decay' (fields decay to zero beyond the box) or 'periodic'."""
    ndim: int = field(init=False, default=0)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.spacing = tuple(float(h) for h in self.spacing)
        self.origin = tuple(float(o) for o in self.origin)
        if not len(self.dims) == len(self.spacing) == len(self.origin) == self.ndim:
            raise ValueError(
                f"Grid needs {self.ndim} dims, spacings and origin coordinates, "
                f"got {self.dims}, {self.spacing}, {self.origin}."
            )
        if any(d < 4 for d in self.dims):
            raise ValueError(f"All grid dims must be >= 4 (got {self.dims}).")
        if any(not h > 0 for h in self.spacing):
            raise ValueError(f"Grid spacing must be strictly positive (got {self.spacing}).")
        if self.boundary_policy not in BOUNDARY_POLICIES:
            raise ValueError(
                f"Unknown boundary policy '{self.boundary_policy}', use one of {BOUNDARY_POLICIES}."
            )

    @property
    def periodic(self) -> bool:
        return self.boundary_policy == "periodic"

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.dims

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def lower(self) -> np.ndarray:
        return np.asarray(self.origin)

    @property
    def upper(self) -> np.ndarray:
        """Coordinates of the last node along each axis."""
        return self.lower + (np.asarray(self.dims) - 1) * np.asarray(self.spacing)

    @property
    def period(self) -> np.ndarray:
        return np.asarray(self.dims) * np.asarray(self.spacing)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def axes(self) -> List[np.ndarray]:
        return [o + h * np.arange(n) for n, h, o in zip(self.dims, self.spacing, self.origin)]

    def points(self) -> np.ndarray:
        """All node coordinates, shape ``dims + (ndim,)``."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def interior_mask(self, width: int = 3) -> np.ndarray:
        """Boolean mask of nodes at least ``width`` cells away from every face.

        Periodic grids have no faces, so every node is interior.
        """
        mask = np.ones(self.dims, dtype=bool)
        if self.periodic:
            return mask
        for axis, n in enumerate(self.dims):
            w = min(width, (n - 1) // 2)
            index = [slice(None)] * self.ndim
            index[axis] = slice(0, w)
            mask[tuple(index)] = False
            index[axis] = slice(n - w, n)
            mask[tuple(index)] = False
        return mask

    def boundary_mask(self) -> np.ndarray:
        """Nodes on the outermost layer of the box; empty on periodic grids."""
        return ~self.interior_mask(width=1)

    def outer_layer_mask(self) -> np.ndarray:
        """The first and last node of every axis, whatever the boundary policy."""
        mask = np.zeros(self.dims, dtype=bool)
        for axis in range(self.ndim):
            index = [slice(None)] * self.ndim
            index[axis] = [0, self.dims[axis] - 1]
            mask[tuple(index)] = True
        return mask

    def to_index(self, points: np.ndarray) -> np.ndarray:
        """Fractional node indices of physical points, shape ``(ndim,) + points.shape[:-1]``."""
        points = np.asarray(points, dtype=float)
        idx = (points - self.lower) / np.asarray(self.spacing)
        return np.moveaxis(idx, -1, 0)

    def contains(self, points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.periodic:
            return np.ones(points.shape[:-1], dtype=bool)
        span = np.asarray(self.spacing) * tol
        return np.all((points >= self.lower - span) & (points <= self.upper + span), axis=-1)

    def clip(self, points: np.ndarray) -> np.ndarray:
        """Projection of points onto the box."""
        return np.clip(points, self.lower, self.upper)

    def half_width(self) -> float:
        """Largest distance from the box center to a face."""
        return float(np.max(0.5 * (self.upper - self.lower)))

    def inscribed_radius(self) -> float:
        """Smallest distance from the box center to a face."""
        return float(np.min(0.5 * (self.upper - self.lower)))

    def scaled(self, lam: float) -> "RegularGrid":
        """The same grid with all lengths multiplied by ``lam``."""
        return type(self)(
            dims=self.dims,
            spacing=tuple(lam * h for h in self.spacing),
            origin=tuple(lam * o for o in self.origin),
            boundary_policy=self.boundary_policy,
        )

    def same_as(self, other: "RegularGrid") -> bool:
        return (
            type(self) is type(other)
            and self.dims == other.dims
            and np.allclose(self.spacing, other.spacing, rtol=1e-14, atol=0)
            and np.allclose(self.origin, other.origin, rtol=1e-14, atol=1e-14)
            and self.boundary_policy == other.boundary_policy
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dims": list(self.dims),
            "spacing": list(self.spacing),
            "origin": list(self.origin),
            "boundary_policy": self.boundary_policy,
        }


@dataclass
class Grid3(RegularGrid):
    """Regular grid over a box in R^3 (the self-similar y-domain)."""

    ndim: int = field(init=False, default=3)

    @classmethod
    def centered(cls, n: int, half_width: float, boundary_policy: str = "decay") -> "Grid3":
        """Cubic grid of ``n`` nodes per axis on [-half_width, half_width]^3.

        Periodic grids leave out the duplicate end node.
        """
        if boundary_policy == "periodic":
            h = 2.0 * half_width / n
        else:
            h = 2.0 * half_width / (n - 1)
        return cls(
            dims=(n, n, n),
            spacing=(h, h, h),
            origin=(-half_width,) * 3,
            boundary_policy=boundary_policy,
        )


@dataclass
class MeridionalGrid(RegularGrid):
    """Regular grid over a rectangle [r0, r1] x [z0, z1] of the meridional half-plane."""

    ndim: int = field(init=False, default=2)

    def __post_init__(self):
        super().__post_init__()
        if self.origin[0] < 0:
            raise ValueError(f"Meridional grids need r >= 0 (got r0 = {self.origin[0]}).")
        if self.periodic:
            raise ValueError("Meridional grids do not support the periodic policy.")

    @property
    def touches_axis(self) -> bool:
        return self.origin[0] == 0.0

    @classmethod
    def spanning(
        cls, r_range: Tuple[float, float], z_range: Tuple[float, float], nr: int, nz: int
    ) -> "MeridionalGrid":
        """Grid with nodes on both ends of the given r and z ranges."""
        dr = (r_range[1] - r_range[0]) / (nr - 1)
        dz = (z_range[1] - z_range[0]) / (nz - 1)
        return cls(dims=(nr, nz), spacing=(dr, dz), origin=(r_range[0], z_range[0]))


def grid_from_dict(data: Dict[str, Any], symmetry: str = "cartesian") -> RegularGrid:
    """Builds the grid of the given symmetry from its dictionary form."""
    grid_cls = MeridionalGrid if symmetry == "axisym" else Grid3
    return grid_cls(
        dims=tuple(data["dims"]),
        spacing=tuple(data["spacing"]),
        origin=tuple(data["origin"]),
        boundary_policy=data.get("boundary_policy", "decay"),
    )
