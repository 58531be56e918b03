from typing import Tuple

from ..classes import FieldSource, NormRequest, Profile
from ..constants import CONFIG
from ..logger import LOGGER
from .differential import differential
from .norms import field_norm


def vorticity_of(profile: Profile) -> FieldSource:
    """The profile's vorticity, or curl U when none was supplied."""
    if profile.Omega is not None:
        return profile.Omega
    return differential(profile.U, "curl", grid=profile.grid)


def grad_omega_sup(profile: Profile) -> float:
    """|grad Omega|_inf on the evaluation grid (Frobenius norm, an upper bound of the operator norm)."""
    return field_norm(vorticity_of(profile), NormRequest(kind="grad-sup"), profile.grid).value


def normalize_profile(profile: Profile) -> Tuple[Profile, float]:
    """Rescales the profile to |grad Omega|_inf = 1.

    Returns the rescaled profile and the factor lambda with
    U_lam(y) = lam U(y / lam), Omega_lam(y) = Omega(y / lam). Profiles already normalized
    within the configured tolerance are returned unchanged with lambda = 1.
    """
    if profile.Omega is None:
        raise ValueError("Normalization needs a vorticity profile.")
    lam = grad_omega_sup(profile)
    if lam == 0.0:
        raise ValueError("The vorticity profile vanishes identically; it cannot be normalized.")
    if abs(lam - 1.0) <= CONFIG.tolerance("normalization"):
        return profile, 1.0
    LOGGER.info(f"Normalizing profile '{profile.name}' with lambda = {lam:.6g}")
    return profile.rescaled(lam), lam


def is_normalized(profile: Profile) -> bool:
    return abs(grad_omega_sup(profile) - 1.0) <= CONFIG.tolerance("normalization")
