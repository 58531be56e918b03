from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .field_source import FieldSource

RESIDUAL_KINDS = ("velocity-form", "vorticity-form", "lp-identity", "divergence")


@dataclass
class StretchingResult:
    """The stretching factor at one point, from the strain contraction and the singular integral."""

    point: np.ndarray
    A_direct: float
    """Xi . S Xi from the velocity gradient (nan if the profile has no usable U)."""
    A_integral: float
    """Sum of the inner and outer pieces of the singular integral."""
    alpha_in: float
    alpha_out: float
    bound_in: float
    """C_in L |grad Omega|_inf."""
    bound_out: float
    """(3/4pi)^(1/p) (p-1)^((p-1)/p) |Omega|_p L^(-3/p)."""
    quad_error: float
    """Estimated quadrature error of A_integral (rule difference plus truncated tail)."""
    L: float
    p: float
    error_in: float = 0.0
    error_out: float = 0.0

    def __post_init__(self):
        self.point = np.asarray(self.point, dtype=float)
        assert self.A_integral == self.alpha_in + self.alpha_out

    @property
    def inner_bound_holds(self) -> bool:
        return abs(self.alpha_in) <= self.bound_in + self.error_in

    @property
    def outer_bound_holds(self) -> bool:
        return abs(self.alpha_out) <= self.bound_out + self.error_out


@dataclass
class SmallnessReport:
    """Scaling-invariant size of the vorticity profile against the lower bound 1/C_p."""

    p: float
    size: float
    """|grad Omega|_inf^(3/(p+3)) |Omega|_p^(p/(p+3))."""
    threshold: float
    """1 / C_p."""
    normalized_threshold: float
    """(1/2) (pi/1296)^(1/p) (p-1)^(-1+1/p), the bound on |Omega|_p when |grad Omega|_inf = 1."""
    verdict: str
    """'SATISFIED' or 'VIOLATED'."""
    grad_sup: float = float("nan")
    lp_norm: float = float("nan")
    normalized_verdict: Optional[str] = None
    """Verdict of the |Omega|_p test, only for normalized profiles."""

    @property
    def satisfied(self) -> bool:
        return self.verdict == "SATISFIED"


@dataclass
class ResidualField:
    """A residual of the self-similar equations with its interior norms."""

    which: str
    """One of 'velocity-form', 'vorticity-form', 'lp-identity', 'divergence', or an axisymmetric equation name."""
    field: FieldSource
    sup: float
    """Sup norm over the interior nodes."""
    l2: float
    """L2 norm over the interior nodes."""
    p: Optional[float] = None
    pressure_source: Optional[str] = None
    """'supplied' or 'recovered' for velocity-form residuals."""
    masked: int = 0
    """Number of interior nodes excluded because |Omega| was below threshold."""

    def __post_init__(self):
        base = self.which.split("(")[0]
        if base not in RESIDUAL_KINDS and not base.startswith("axisym."):
            raise ValueError(f"Unknown residual kind '{self.which}'.")

    @property
    def report_name(self) -> str:
        if self.which.startswith("axisym."):
            return self.which
        names = {
            "velocity-form": "res.velocity",
            "vorticity-form": "res.vorticity",
            "divergence": "res.div",
        }
        if self.which.startswith("lp-identity"):
            return f"res.lp.{self.p:g}"
        return names[self.which]


@dataclass
class BernoulliData:
    """The self-similar Bernoulli function and its transport residual."""

    H: FieldSource
    transport_residual: FieldSource
    """V . grad H - (2 gamma - 1) |V|^2."""
    transport_sup: float
    farfield_coefficient: float
    """Fitted coefficient c2 of H ~ c0 + c2 |y|^2 on the outer shells."""
    farfield_target: float
    """gamma (2 gamma - 1) / 2."""
    farfield_deviation: float
    """|c2 - target| relative to max(|target|, gamma^2 / 2)."""
    coefficient_trend: List[float] = field(default_factory=list)
    """Fitted coefficients on successively outer shell windows."""
    pressure_source: str = "supplied"


ALPHA_LIMIT_CLASSES = ("axis-fixed-point", "off-axis-fixed-point", "cycling", "escaped", "undecided")


@dataclass
class AlphaLimitResult:
    """Classification of where a backward meridional trajectory accumulates."""

    classification: str
    """One of ALPHA_LIMIT_CLASSES."""
    fixed_point: Optional[np.ndarray] = None
    """The (r, z) fixed point the path converged to, if any."""
    min_axis_distance: float = float("nan")
    bernoulli_trend: Optional[str] = None
    """'non-increasing', 'non-decreasing' or 'mixed' in forward time; None without pressure."""
    bounded_guarantee: bool = True
    """False for gamma >= 1/2, where superlevel sets of H need not be bounded."""
    crossings: int = 0
    """Section crossings used by the recurrence test."""
    tau_reached: float = 0.0

    def __post_init__(self):
        if self.classification not in ALPHA_LIMIT_CLASSES:
            raise ValueError(f"Unknown alpha-limit classification '{self.classification}'.")
        if self.fixed_point is not None:
            self.fixed_point = np.asarray(self.fixed_point, dtype=float)


@dataclass
class TailFit:
    """Power-law fit f ~ A (T_* - t)^(-exponent) of an integrand on the last samples before T_*."""

    exponent: float
    stderr: float
    amplitude: float
    verdict: str
    """'no blowup possible' (finite integral), 'consistent with blowup' (divergent) or 'inconclusive'."""
    tail: float = float("nan")
    """Extrapolated integral from the last sample to T_*, inf when divergent."""
    num_points: int = 0

    @property
    def finite(self) -> bool:
        return self.verdict == "no blowup possible"


@dataclass
class EllMuResult:
    """The Hoelder length scale series and the criterion integral of ell^(-5/2)."""

    times: np.ndarray
    ell: np.ndarray
    integral: float
    """Trapezoid estimate of int ell^(-5/2) dt up to the last sample."""
    tail: TailFit
    mu: float
    L0: float

    @property
    def ell_exponent(self) -> float:
        """Fitted exponent beta of ell ~ (T_* - t)^beta."""
        return 0.4 * self.tail.exponent

    @property
    def total(self) -> float:
        return self.integral + self.tail.tail


@dataclass
class AlphaBoundResult:
    """The optimized pointwise stretching bound min_R (C_in R G + C_out R^(-1-3/p) E) per sample."""

    times: np.ndarray
    R_star: np.ndarray
    bound: np.ndarray
    integral: float
    tail: TailFit
    p: float
    search_deviation: float
    """Largest relative difference between the searched and the closed-form minimum."""

    @property
    def total(self) -> float:
        return self.integral + self.tail.tail


@dataclass
class ViscousResult:
    """Bound on int_0^1 |omega|_L2^4 dt from a split into outer budget and inner amplitude."""

    bound: Optional[float]
    """16 (Gamma + C^4 / (6 gamma - 3)), None when the inner contribution diverges."""
    divergent: bool
    verdict: str
