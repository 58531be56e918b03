from typing import Optional

import numpy as np

from ..classes import FieldSource, RegularGrid
from ..errors import RankMismatchError
from ..stencils import curl_from_jacobian, divergence_from_jacobian, gradient_array

OPERATORS = ("curl", "divergence", "gradient")
METHODS = ("spectral", "centered-4th-order")

_REQUIRED_RANK = {"curl": 3, "divergence": 3, "gradient": 1}


def _apply(which: str, jac: np.ndarray) -> np.ndarray:
    if which == "curl":
        return curl_from_jacobian(jac)
    if which == "divergence":
        return divergence_from_jacobian(jac)
    return jac


def differential(
    field: FieldSource,
    which: str,
    method: str = "centered-4th-order",
    grid: Optional[RegularGrid] = None,
) -> FieldSource:
    """Curl, divergence or gradient of a field.

    Analytic fields with a registered closed-form jacobian are differentiated exactly;
    everything else is sampled on ``grid`` (default: the field's own grid) and
    differentiated with fourth-order stencils or, on periodic grids, spectrally.
    """
    if which not in OPERATORS:
        raise ValueError(f"Unknown operator '{which}', use one of {OPERATORS}.")
    if method not in METHODS:
        raise ValueError(f"Unknown method '{method}', use one of {METHODS}.")
    if field.rank != _REQUIRED_RANK[which]:
        raise RankMismatchError(
            f"'{which}' needs a field of rank {_REQUIRED_RANK[which]}, got rank {field.rank}."
        )
    if which == "curl" and field.spatial_dim != 3:
        raise RankMismatchError("The curl is only defined for cartesian fields on R^3.")
    grid = grid or field.grid
    if method == "spectral" and (grid is None or not grid.periodic):
        raise ValueError("Spectral derivatives need a periodic grid.")
    out_rank = 1 if which == "divergence" else 3

    if field.is_analytic and field.jac is not None and method != "spectral":
        jac = field.jac

        def func(points):
            return _apply(which, np.asarray(jac(points), dtype=float))

        return FieldSource(
            rank=out_rank,
            name=f"{which}({field.name})",
            symmetry=field.symmetry,
            params=dict(field.params),
            func=func,
            grid=None,
        )

    if grid is None:
        raise ValueError(f"Cannot differentiate the analytic field '{field.name}' without a grid.")
    values = field.values_on(grid)
    stencil = "spectral" if method == "spectral" else "fd4"
    jac = gradient_array(values, grid.spacing, field.rank, stencil, periodic=grid.periodic)
    out = _apply(which, jac)
    if which == "gradient" and grid.ndim != 3:
        raise RankMismatchError("Gradients returned as fields must be 3-vectors.")
    return FieldSource.sampled(
        out,
        grid,
        name=f"{which}({field.name})",
        order=field.order,
        decay_exponent=field.decay_exponent + 1.0,
        symmetry=field.symmetry,
    )
