"""Domain errors raised by the diagnostics.

All of them are ``ValueError`` subclasses, so generic callers can keep catching
``ValueError`` while the CLI maps them onto exit codes and report verdicts.
"""

from typing import Optional


class ProfileFormatError(ValueError):
    """A profile container could not be parsed."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        prefix = f"[{field}] " if field else ""
        super().__init__(prefix + message)


class RankMismatchError(ValueError):
    """A differential operator was requested on a field of the wrong rank."""


class DivergentTailError(ValueError):
    """A quadrature over R^3 would not converge given the fitted far-field decay."""

    def __init__(self, message: str, exponent: float = float("nan")):
        self.exponent = exponent
        super().__init__(message)


class EnvelopeViolationError(ValueError):
    """The decay envelope keeps growing at the outermost sampled shell."""


class DirectionUndefinedError(ValueError):
    """The vorticity direction cannot be formed because |Omega| is too small."""


class NotVanishingError(ValueError):
    """The vorticity does not vanish at the requested point (vanishing order 0)."""


class ShrinkRadiusError(ValueError):
    """The certification ball reaches another nodal point."""


class AxisContactError(ValueError):
    """A meridional trajectory or polygon touched the symmetry axis."""


class NonDecayingFieldError(ValueError):
    """A field expected to decay at infinity does not decay on the sampled box."""
