from dataclasses import dataclass

import numpy as np

_MIN_VERTICES = 16


def _segment_distances(starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Pairwise minimal distances between the 3D segments [starts[i], ends[i]]."""
    p1, q1 = starts[:, None, :], ends[:, None, :]
    p2, q2 = starts[None, :, :], ends[None, :, :]
    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-300, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = np.where(e > 0, (b * s + f) / e, 0.0)
        t_clipped = np.clip(t, 0.0, 1.0)
        s = np.where(t != t_clipped, np.clip((b * t_clipped - c) / a, 0.0, 1.0), s)
    closest = (p1 + s[..., None] * d1) - (p2 + t_clipped[..., None] * d2)
    return np.linalg.norm(closest, axis=-1)


def polyline_is_simple(vertices: np.ndarray, rel_tol: float = 1e-9) -> bool:
    """True if no two non-adjacent segments of the closed polyline come closer than
    rel_tol times its size."""
    vertices = np.asarray(vertices, dtype=float)
    starts, ends = vertices[:-1], vertices[1:]
    n = len(starts)
    dist = _segment_distances(starts, ends)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    non_adjacent = (gap > 1) & (gap < n - 1)
    scale = np.ptp(vertices, axis=0).max()
    return bool(np.all(dist[non_adjacent] > rel_tol * scale))


@dataclass
class Loop:
    """A closed simple material polyline; ``vertices[0] == vertices[-1]``."""

    vertices: np.ndarray
    """Vertex coordinates, shape (n + 1, 3) with the first vertex repeated at the end."""
    orientation: int = 1
    """+1 or -1; multiplies the circulation."""

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise ValueError("Loop vertices must have shape (n, 3).")
        if not np.allclose(self.vertices[0], self.vertices[-1]):
            self.vertices = np.vstack([self.vertices, self.vertices[:1]])
        if len(self.vertices) - 1 < _MIN_VERTICES:
            raise ValueError(f"A loop needs at least {_MIN_VERTICES} distinct vertices.")
        if self.orientation not in (1, -1):
            raise ValueError("Loop orientation must be +1 or -1.")
        if not self.is_simple():
            raise ValueError("The loop intersects itself.")

    @classmethod
    def circle(cls, r: float, z: float, n: int = 64) -> "Loop":
        """Horizontal circle of radius r around the symmetry axis at height z."""
        phi = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        pts = np.stack([r * np.cos(phi), r * np.sin(phi), np.full(n, z)], axis=-1)
        return cls(vertices=pts)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices) - 1

    @property
    def distinct_vertices(self) -> np.ndarray:
        return self.vertices[:-1]

    def is_simple(self, rel_tol: float = 1e-9) -> bool:
        return polyline_is_simple(self.vertices, rel_tol)
