from dataclasses import dataclass
from typing import Optional

from typing_extensions import Literal

NormKind = Literal["lp", "sup", "grad-sup", "holder"]
Rule = Literal["trapezoid", "midpoint"]
NORM_KINDS = ("lp", "sup", "grad-sup", "holder")
RULES = ("trapezoid", "midpoint")


@dataclass
class NormRequest:
    """Which norm or seminorm of a field to compute."""

    kind: NormKind = "sup"
    """One of 'lp', 'sup', 'grad-sup', 'holder'."""
    p: float = 2.0
    """Lebesgue exponent for 'lp'."""
    mu: float = 0.5
    """Hoelder exponent for 'holder'."""
    L0: float = 1.0
    """Maximal pair distance for 'holder'."""
    rule: Rule = "trapezoid"
    """Quadrature rule for 'lp'."""

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise ValueError(f"Unknown norm kind '{self.kind}', use one of {NORM_KINDS}.")
        if self.rule not in RULES:
            raise ValueError(f"Unknown integration rule '{self.rule}', use one of {RULES}.")
        if self.p < 1:
            raise ValueError(f"Lebesgue exponent must satisfy p >= 1 (got {self.p}).")
        if not 0 < self.mu < 1:
            raise ValueError(f"Hoelder exponent must lie in (0, 1) (got {self.mu}).")
        if not self.L0 > 0:
            raise ValueError(f"Hoelder length scale must be positive (got {self.L0}).")

    @classmethod
    def lp(cls, p: float, rule: Rule = "trapezoid") -> "NormRequest":
        return cls(kind="lp", p=p, rule=rule)

    @classmethod
    def holder(cls, mu: float, L0: float) -> "NormRequest":
        return cls(kind="holder", mu=mu, L0=L0)

    def label(self) -> str:
        if self.kind == "lp":
            return f"L{self.p:g}"
        if self.kind == "holder":
            return f"C^{self.mu:g} (L0={self.L0:g})"
        return self.kind


@dataclass
class NormEstimate:
    """A norm value with its estimated truncation error."""

    value: float
    error: float = 0.0
    """Estimated truncation error (tail beyond the sampled box for Lp norms)."""
    request: Optional[NormRequest] = None
    tail_exponent: Optional[float] = None
    """Fitted far-field decay exponent of |f| (Lp norms only)."""
    num_pairs: int = 0
    """Number of sampled pairs (Hoelder seminorm only)."""

    def __float__(self) -> float:
        return float(self.value)
