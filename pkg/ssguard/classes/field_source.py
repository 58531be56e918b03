from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy import ndimage

from ..constants import CONFIG, SYMMETRIES
from ..stencils import gradient_array
from .grid import RegularGrid

ArrayFunc = Callable[[np.ndarray], np.ndarray]


def magnitude(values: np.ndarray, rank: int) -> np.ndarray:
    """Pointwise absolute value (scalars) or Euclidean length (vectors)."""
    if rank == 1:
        return np.abs(values)
    return np.linalg.norm(values, axis=-1)


def jacobian_magnitude(jac: np.ndarray, rank: int) -> np.ndarray:
    """Pointwise Frobenius norm of a gradient (scalars) or jacobian (vectors)."""
    if rank == 1:
        return np.linalg.norm(jac, axis=-1)
    return np.linalg.norm(jac, axis=(-2, -1))


@dataclass
class FieldSource:
    """A scalar or 3-vector field, either a closed-form family or gridded samples.

    Analytic fields carry ``func`` (and optionally a registered closed-form ``jac``);
    sampled fields carry ``grid`` and ``values`` and are interpolated with splines of
    the given ``order``. Beyond a decaying box, samples are extended along the
    envelope ``<y>^-decay_exponent``.
    """

    rank: int
    """1 for scalar fields, 3 for vector fields."""
    name: str = "sampled"
    """Family name for analytic fields, free label for sampled ones."""
    symmetry: str = "cartesian"
    """'cartesian' fields live on R^3, 'axisym' fields on the (r, z) half-plane."""
    params: Dict[str, Any] = field(default_factory=dict)
    """Parameter record of an analytic family."""
    func: Optional[ArrayFunc] = field(default=None, repr=False)
    """Maps points of shape (..., d) to values of shape (...) or (..., 3)."""
    jac: Optional[ArrayFunc] = field(default=None, repr=False)
    """Registered closed-form jacobian, J[..., j, i] = d_i F^j."""
    grid: Optional[RegularGrid] = None
    """Sampling grid of a sampled field."""
    values: Optional[np.ndarray] = field(default=None, repr=False)
    """Samples of shape grid.dims (scalar) or grid.dims + (3,) (vector)."""
    order: int = 3
    """Spline interpolation order, 1 or 3."""
    decay_exponent: float = 0.0
    """Exponent k of the far-field envelope <y>^-k used beyond the sampled box."""
    _coeffs: Optional[np.ndarray] = field(default=None, init=False, repr=False)
    _deriv: Optional[np.ndarray] = field(default=None, init=False, repr=False)
    _deriv_coeffs: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.rank not in (1, 3):
            raise ValueError(f"Field rank must be 1 (scalar) or 3 (vector), not {self.rank}.")
        if self.symmetry not in SYMMETRIES:
            raise ValueError(f"Unknown symmetry '{self.symmetry}'.")
        if self.order not in (1, 3):
            raise ValueError(f"Interpolation order must be 1 or 3, not {self.order}.")
        if (self.func is None) == (self.values is None):
            raise ValueError("A field needs either a closed-form function or sampled values.")
        if self.values is not None:
            if self.grid is None:
                raise ValueError("Sampled fields need a grid.")
            self.values = np.asarray(self.values, dtype=float)
            expected = self.grid.dims + ((3,) if self.rank == 3 else ())
            if self.values.shape != expected:
                raise ValueError(
                    f"Sampled array of shape {self.values.shape} does not match the grid "
                    f"(expected {expected})."
                )
            if not np.all(np.isfinite(self.values)):
                raise ValueError(f"Sampled field '{self.name}' contains non-finite entries.")

    @classmethod
    def sampled(
        cls,
        values: np.ndarray,
        grid: RegularGrid,
        name: str = "sampled",
        order: int = 3,
        decay_exponent: float = 0.0,
        symmetry: Optional[str] = None,
    ) -> "FieldSource":
        values = np.asarray(values, dtype=float)
        rank = 3 if values.ndim == grid.ndim + 1 else 1
        if symmetry is None:
            symmetry = "axisym" if grid.ndim == 2 else "cartesian"
        return cls(
            rank=rank,
            name=name,
            symmetry=symmetry,
            grid=grid,
            values=values,
            order=order,
            decay_exponent=decay_exponent,
        )

    @classmethod
    def zero(cls, rank: int, symmetry: str = "cartesian") -> "FieldSource":
        """The identically vanishing field, with its exact (zero) jacobian."""
        d = 2 if symmetry == "axisym" else 3
        comp = () if rank == 1 else (3,)

        def func(points):
            return np.zeros(np.shape(points)[:-1] + comp)

        def jac(points):
            return np.zeros(np.shape(points)[:-1] + comp + (d,))

        return cls(rank=rank, name="zero", symmetry=symmetry, func=func, jac=jac)

    @property
    def is_analytic(self) -> bool:
        return self.func is not None

    @property
    def kind(self) -> str:
        return "analytic" if self.is_analytic else "sampled"

    @property
    def spatial_dim(self) -> int:
        if self.grid is not None:
            return self.grid.ndim
        return 2 if self.symmetry == "axisym" else 3

    @property
    def component_shape(self):
        return () if self.rank == 1 else (3,)

    # ---- evaluation ----

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Field values at points of shape (..., d)."""
        points = np.asarray(points, dtype=float)
        if self.is_analytic:
            with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
                out = np.asarray(self.func(points), dtype=float)
            return np.broadcast_to(out, points.shape[:-1] + self.component_shape).copy()
        return self._interpolate(self._spline_coeffs(), points, self.decay_exponent)

    def jacobian(self, points: np.ndarray) -> np.ndarray:
        """Gradient (scalars, shape (..., d)) or jacobian (vectors, shape (..., 3, d))."""
        points = np.asarray(points, dtype=float)
        if self.is_analytic:
            if self.jac is not None:
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    out = np.asarray(self.jac(points), dtype=float)
                shape = points.shape[:-1] + self.component_shape + (points.shape[-1],)
                return np.broadcast_to(out, shape).copy()
            return self._fd_jacobian(points)
        return self._interpolate(
            self._derivative_coeffs(), points, self.decay_exponent + 1.0, derivative=True
        )

    def values_on(self, grid: RegularGrid) -> np.ndarray:
        if not self.is_analytic and self.grid.same_as(grid):
            return self.values
        return self.evaluate(grid.points())

    def jacobian_on(self, grid: RegularGrid) -> np.ndarray:
        if not self.is_analytic and self.grid.same_as(grid):
            return self.derivative_array()
        return self.jacobian(grid.points())

    def derivative_array(self) -> np.ndarray:
        """Stencil derivatives of the samples on the field's own grid (cached)."""
        if self.values is None:
            raise ValueError("Only sampled fields have a derivative array.")
        if self._deriv is None:
            self._deriv = gradient_array(
                self.values, self.grid.spacing, self.rank, "fd4", periodic=self.grid.periodic
            )
        return self._deriv

    # ---- transformations ----

    def sampled_on(self, grid: RegularGrid, decay_exponent: Optional[float] = None) -> "FieldSource":
        """Samples this field on a grid."""
        return FieldSource(
            rank=self.rank,
            name=self.name,
            symmetry=self.symmetry,
            params=dict(self.params),
            grid=grid,
            values=self.values_on(grid),
            order=self.order,
            decay_exponent=self.decay_exponent if decay_exponent is None else decay_exponent,
        )

    def rescaled(self, lam: float, amplitude: float = 1.0) -> "FieldSource":
        """The field y -> amplitude * F(y / lam)."""
        params = dict(self.params)
        params["scale"] = params.get("scale", 1.0) * lam
        if self.is_analytic:
            func, jac = self.func, self.jac
            new_jac = None
            if jac is not None:
                def new_jac(points):
                    return (amplitude / lam) * jac(np.asarray(points) / lam)

            return FieldSource(
                rank=self.rank,
                name=self.name,
                symmetry=self.symmetry,
                params=params,
                func=lambda points: amplitude * func(np.asarray(points) / lam),
                jac=new_jac,
                order=self.order,
                decay_exponent=self.decay_exponent,
            )
        return FieldSource(
            rank=self.rank,
            name=self.name,
            symmetry=self.symmetry,
            params=params,
            grid=self.grid.scaled(lam),
            values=amplitude * self.values,
            order=self.order,
            decay_exponent=self.decay_exponent,
        )

    # ---- internals ----

    def _spline_mode(self) -> str:
        return "grid-wrap" if self.grid.periodic else "nearest"

    def _prefilter(self, arr: np.ndarray) -> np.ndarray:
        if self.order == 1:
            return arr
        ncomp = arr.shape[self.grid.ndim:]
        flat = arr.reshape(self.grid.dims + (-1,))
        coeffs = np.stack(
            [
                ndimage.spline_filter(flat[..., c], order=self.order, mode=self._spline_mode())
                for c in range(flat.shape[-1])
            ],
            axis=-1,
        )
        return coeffs.reshape(self.grid.dims + ncomp)

    def _spline_coeffs(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = self._prefilter(self.values)
        return self._coeffs

    def _derivative_coeffs(self) -> np.ndarray:
        if self._deriv_coeffs is None:
            self._deriv_coeffs = self._prefilter(self.derivative_array())
        return self._deriv_coeffs

    def _interpolate(
        self, coeffs: np.ndarray, points: np.ndarray, decay: float, derivative: bool = False
    ) -> np.ndarray:
        grid = self.grid
        lead = points.shape[:-1]
        flat_points = points.reshape(-1, grid.ndim)
        if grid.periodic:
            query = flat_points
        else:
            query = grid.clip(flat_points)
        idx = grid.to_index(query)
        tail_shape = coeffs.shape[grid.ndim:]
        flat_coeffs = coeffs.reshape(grid.dims + (-1,))
        out = np.stack(
            [
                ndimage.map_coordinates(
                    flat_coeffs[..., c],
                    idx,
                    order=self.order,
                    mode=self._spline_mode(),
                    prefilter=False,
                )
                for c in range(flat_coeffs.shape[-1])
            ],
            axis=-1,
        )
        if not grid.periodic and decay != 0.0:
            outside = ~grid.contains(flat_points)
            if np.any(outside):
                bracket = np.sqrt(1.0 + np.sum(flat_points[outside] ** 2, axis=-1))
                bracket_b = np.sqrt(1.0 + np.sum(query[outside] ** 2, axis=-1))
                factor = np.minimum(1.0, (bracket / bracket_b) ** (-decay))
                out[outside] *= factor[:, None]
        return out.reshape(lead + tail_shape)

    def _fd_jacobian(self, points: np.ndarray) -> np.ndarray:
        """Fourth-order central differences of the closed-form function."""
        h = float(CONFIG.get("numerics", "fd_step"))
        d = points.shape[-1]
        derivs = []
        for i in range(d):
            step = np.zeros(d)
            step[i] = h
            f = [self.evaluate(points + k * step) for k in (-2, -1, 1, 2)]
            derivs.append((f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h))
        return np.stack(derivs, axis=-1)
