"""Array-level finite-difference and spectral derivatives on regular grids.

Derivative arrays follow the jacobian convention ``J[..., j, i] = d_i F^j``:
the component index comes first, the derivative direction last.
"""

from typing import Sequence

import numpy as np
from scipy import fft

_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_ONE_SIDED_0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_ONE_SIDED_1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def _take(arr: np.ndarray, sl, axis: int) -> np.ndarray:
    index = [slice(None)] * arr.ndim
    index[axis] = sl
    return arr[tuple(index)]


def fd4_derivative(arr: np.ndarray, h: float, axis: int, periodic: bool = False) -> np.ndarray:
    """Fourth-order derivative of ``arr`` along ``axis`` with spacing ``h``.

    Periodic arrays use the central stencil everywhere; otherwise the two outermost
    layers at each end use fourth-order one-sided stencils.
    """
    n = arr.shape[axis]
    if periodic:
        out = np.zeros_like(arr, dtype=float)
        for offset, weight in zip(range(-2, 3), _CENTRAL):
            if weight != 0.0:
                out += weight * np.roll(arr, -offset, axis=axis)
        return out / h
    if n < 5:
        return np.gradient(arr, h, axis=axis, edge_order=2)
    out = np.empty_like(arr, dtype=float)
    interior = sum(
        w * _take(arr, slice(2 + k, n - 2 + k), axis)
        for k, w in zip(range(-2, 3), _CENTRAL)
        if w != 0.0
    )
    _take(out, slice(2, n - 2), axis)[...] = interior
    head = [_take(arr, k, axis) for k in range(5)]
    tail = [_take(arr, n - 1 - k, axis) for k in range(5)]
    _take(out, 0, axis)[...] = sum(w * f for w, f in zip(_ONE_SIDED_0, head))
    _take(out, 1, axis)[...] = sum(w * f for w, f in zip(_ONE_SIDED_1, head))
    _take(out, n - 1, axis)[...] = -sum(w * f for w, f in zip(_ONE_SIDED_0, tail))
    _take(out, n - 2, axis)[...] = -sum(w * f for w, f in zip(_ONE_SIDED_1, tail))
    return out / h


def spectral_derivative(arr: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourier derivative of a periodic array along ``axis``."""
    n = arr.shape[axis]
    k = 2.0 * np.pi * fft.fftfreq(n, d=h)
    if n % 2 == 0:
        k[n // 2] = 0.0
    shape = [1] * arr.ndim
    shape[axis] = n
    transformed = fft.fft(arr, axis=axis) * (1j * k.reshape(shape))
    return np.real(fft.ifft(transformed, axis=axis))


def gradient_array(
    values: np.ndarray,
    spacing: Sequence[float],
    rank: int,
    method: str = "fd4",
    periodic: bool = False,
) -> np.ndarray:
    """Derivatives of gridded values along every grid axis.

    Scalars (``rank == 1``) of shape ``dims`` give ``dims + (d,)``; vectors of shape
    ``dims + (3,)`` give ``dims + (3, d)``.
    """
    ndim = len(spacing)
    derivs = []
    for axis, h in enumerate(spacing):
        if method == "spectral":
            derivs.append(spectral_derivative(values, h, axis))
        elif method == "fd4":
            derivs.append(fd4_derivative(values, h, axis, periodic=periodic))
        else:
            raise ValueError(f"Unknown derivative method '{method}'.")
    out = np.stack(derivs, axis=-1)
    assert out.shape[-1] == ndim
    if rank == 1:
        return out
    return out.reshape(values.shape[:-1] + (values.shape[-1], ndim))


def curl_from_jacobian(jac: np.ndarray) -> np.ndarray:
    """Curl of a 3-vector field from its jacobian ``J[..., j, i] = d_i F^j``."""
    return np.stack(
        [
            jac[..., 2, 1] - jac[..., 1, 2],
            jac[..., 0, 2] - jac[..., 2, 0],
            jac[..., 1, 0] - jac[..., 0, 1],
        ],
        axis=-1,
    )


def divergence_from_jacobian(jac: np.ndarray) -> np.ndarray:
    return np.trace(jac, axis1=-2, axis2=-1)


def wavenumbers(dims: Sequence[int], spacing: Sequence[float]) -> np.ndarray:
    """Angular wavenumber grid of shape ``dims + (len(dims),)``."""
    axes = [2.0 * np.pi * fft.fftfreq(n, d=h) for n, h in zip(dims, spacing)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
