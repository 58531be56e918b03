"""Closed-form fixture profiles.

Each family is written once as sympy expressions in (x, y, z) or in the meridional
coordinates (r, z). Gradients, and the vorticity where a family does not prescribe it,
follow by symbolic differentiation; everything is lambdified to numpy. Default
parameters, admissible ranges, default grids and the expected check outcomes are read
from ``assets/fixture_catalog.yml``.
"""

from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import sympy as sp

from ..classes import AxisymProfile, FieldSource, FixtureSpec, Grid3, MeridionalGrid, Profile, RegularGrid
from ..logger import LOGGER
from ..setup.config_io import read_yaml
from ..setup.constants import FIXTURE_CATALOG_PATH

X, Y, Z = sp.symbols("x y z", real=True)
R = sp.symbols("r", nonnegative=True)
CARTESIAN = (X, Y, Z)
MERIDIONAL = (R, Z)

Expressions = Dict[str, Any]
FamilyBuilder = Callable[[Dict[str, float], str], Expressions]
_BUILDERS: Dict[str, FamilyBuilder] = {}


def family(name: str):
    """Registers the expression builder of a fixture family."""

    def register(builder: FamilyBuilder) -> FamilyBuilder:
        _BUILDERS[name] = builder
        return builder

    return register


# ---- catalog ledger ----


@lru_cache(maxsize=1)
def load_catalog() -> Dict[str, Dict[str, Any]]:
    catalog = read_yaml(FIXTURE_CATALOG_PATH)
    unknown = set(catalog) ^ set(_BUILDERS)
    assert not unknown, f"Catalog and registered builders disagree on {sorted(unknown)}"
    LOGGER.debug(f"Loaded {len(catalog)} fixture families from {FIXTURE_CATALOG_PATH}")
    return catalog


def fixture_families() -> List[str]:
    return list(load_catalog())


def _entry(name: str) -> Dict[str, Any]:
    catalog = load_catalog()
    if name not in catalog:
        raise ValueError(f"Unknown fixture family '{name}', use one of {list(catalog)}.")
    return catalog[name]


def expected_outcomes(name: str) -> Dict[str, str]:
    """The documented PASS/FAIL outcome per report entry name."""
    return dict(_entry(name).get("expect") or {})


def fixture_params(spec: FixtureSpec) -> Dict[str, float]:
    """Family defaults updated with the requested parameters, checked against the documented ranges."""
    entry = _entry(spec.family)
    params = dict(entry["defaults"])
    unknown = set(spec.params) - set(params)
    if unknown:
        raise ValueError(f"Family '{spec.family}' has no parameters {sorted(unknown)}; use {sorted(params)}.")
    params.update(spec.params)
    for key, (low, high) in entry["ranges"].items():
        value = float(params[key])
        if not low <= value <= high:
            raise ValueError(
                f"Parameter {key} = {value} of family '{spec.family}' lies outside [{low}, {high}]."
            )
        params[key] = value
    return params


def fixture_symmetry(spec: FixtureSpec) -> str:
    offered = _entry(spec.family)["symmetries"]
    symmetry = spec.symmetry or offered[0]
    if symmetry not in offered:
        raise ValueError(f"Family '{spec.family}' has no {symmetry} variant (offers {offered}).")
    return symmetry


def default_fixture_grid(name: str, symmetry: str = "cartesian") -> RegularGrid:
    record = _entry(name)["grid"][symmetry]
    if symmetry == "axisym":
        return MeridionalGrid.spanning(
            tuple(record["r_range"]), tuple(record["z_range"]), record["nr"], record["nz"]
        )
    return Grid3.centered(record["n"], record["half_width"], record.get("boundary_policy", "decay"))


# ---- lambdification ----


def _broadcast(values: Sequence[Any], shape) -> List[np.ndarray]:
    return [np.broadcast_to(np.asarray(v, dtype=float), shape) for v in values]


def _lambdified(exprs: Sequence[sp.Expr], coords: Sequence[sp.Symbol]):
    """numpy callables returning the expressions (..., n) and their gradients (..., n, d)."""
    exprs = [sp.sympify(e) for e in exprs]
    f = sp.lambdify(coords, exprs, "numpy", cse=True)
    df = sp.lambdify(coords, [[sp.diff(e, c) for c in coords] for e in exprs], "numpy", cse=True)

    def values(points: np.ndarray) -> np.ndarray:
        args = [points[..., k] for k in range(len(coords))]
        return np.stack(_broadcast(f(*args), points.shape[:-1]), axis=-1)

    def gradients(points: np.ndarray) -> np.ndarray:
        args = [points[..., k] for k in range(len(coords))]
        rows = [np.stack(_broadcast(row, points.shape[:-1]), axis=-1) for row in df(*args)]
        return np.stack(rows, axis=-2)

    return values, gradients


def closed_form_field(
    exprs: Union[sp.Expr, Sequence[sp.Expr]],
    name: str,
    params: Optional[Dict[str, float]] = None,
    symmetry: str = "cartesian",
) -> FieldSource:
    """Analytic FieldSource with exact jacobian; J[..., j, i] = d_i F^j for vectors."""
    coords = MERIDIONAL if symmetry == "axisym" else CARTESIAN
    scalar = isinstance(exprs, (sp.Basic, int, float))
    values, gradients = _lambdified([exprs] if scalar else exprs, coords)
    if scalar:
        return FieldSource(
            rank=1,
            name=name,
            symmetry=symmetry,
            params=dict(params or {}),
            func=lambda points: values(points)[..., 0],
            jac=lambda points: gradients(points)[..., 0, :],
        )
    return FieldSource(
        rank=3, name=name, symmetry=symmetry, params=dict(params or {}), func=values, jac=gradients
    )


def curl(F: Sequence[sp.Expr]) -> List[sp.Expr]:
    fx, fy, fz = (sp.sympify(f) for f in F)
    return [
        sp.diff(fz, Y) - sp.diff(fy, Z),
        sp.diff(fx, Z) - sp.diff(fz, X),
        sp.diff(fy, X) - sp.diff(fx, Y),
    ]


def meridional_vorticity(u_r: sp.Expr, u_theta: sp.Expr, u_z: sp.Expr) -> Dict[str, sp.Expr]:
    """Omega_r = -d_z U_theta, Omega_theta = d_z U_r - d_r U_z, Omega_z = d_r U_theta + U_theta / r."""
    u_r, u_theta, u_z = (sp.sympify(u) for u in (u_r, u_theta, u_z))
    return {
        "Omega_r": -sp.diff(u_theta, Z),
        "Omega_theta": sp.diff(u_r, Z) - sp.diff(u_z, R),
        "Omega_z": sp.diff(u_theta, R) + u_theta / R,
    }


# ---- families ----


def _rho2():
    return X**2 + Y**2 + Z**2


@family("trivial")
def _trivial(p, symmetry):
    if symmetry == "axisym":
        return {"U_r": 0, "U_theta": 0, "U_z": 0, "P": 0}
    return {"U": [0, 0, 0], "P": 0}


@family("gaussian-column")
def _gaussian_column(p, symmetry):
    A = p["amplitude"]
    if symmetry == "axisym":
        return {
            "U_r": 0,
            "U_theta": A / 2 * R * sp.exp(-R**2),
            "U_z": 0,
            "P": -(A**2) / 16 * sp.exp(-2 * R**2),
        }
    g = A / 2 * sp.exp(-(X**2 + Y**2))
    return {"U": [-Y * g, X * g, 0], "P": -(A**2) / 16 * sp.exp(-2 * (X**2 + Y**2))}


@family("gaussian-ring")
def _gaussian_ring(p, symmetry):
    # U_z(0) = 2 phi(0); the subtracted core makes phi(0) = 0 so that U(0) = 0 while U decays
    ring = sp.exp(-((X**2 + Y**2 - 1) ** 2 / 4 + Z**2) / p["width"])
    core = sp.exp(-sp.Rational(1, 4) / p["width"]) * sp.exp(-_rho2() / p["width"])
    phi = p["amplitude"] * (ring - core)
    return {"U": curl([-Y * phi, X * phi, 0])}


@family("burgers")
def _burgers(p, symmetry):
    s = p["sigma"]
    swirl = sp.exp(-(X**2 + Y**2))
    return {
        "U": [-s * X / 2 - Y * swirl, -s * Y / 2 + X * swirl, s * Z],
        "P": -(s**2) * (X**2 + Y**2) / 8 - s**2 * Z**2 / 2,
    }


@family("linear-strain")
def _linear_strain(p, symmetry):
    a, b = p["a"], p["b"]
    if symmetry == "axisym":
        if not np.isclose(a, b):
            raise ValueError(f"The axisymmetric linear strain needs a == b (got a = {a}, b = {b}).")
        return {"U_r": a * R, "U_theta": 0, "U_z": -2 * a * Z, "P": -(a**2) * (R**2 + 4 * Z**2) / 2}
    return {
        "U": [a * X, b * Y, -(a + b) * Z],
        "P": -(a**2 * X**2 + b**2 * Y**2 + (a + b) ** 2 * Z**2) / 2,
    }


def swirl_power(gamma: float, a: float) -> float:
    """m with D(r U_theta) + (1 - 2 gamma) r U_theta = 0 for U_theta = r^m under U_r = a r, U_z = -2 a z."""
    return -(1.0 - gamma + a) / (gamma + a)


def azimuthal_power(gamma: float, a: float) -> float:
    """m with Omega_theta = r^(m + 1) solving the azimuthal vorticity equation under the same strain."""
    return -(1.0 + gamma) / (gamma + a)


@family("manufactured-swirl")
def _manufactured_swirl(p, symmetry):
    a = p["a"]
    m = swirl_power(p["gamma"], a)
    return {"U_r": a * R, "U_theta": p["kappa"] * R**m, "U_z": -2 * a * Z, "P": 0}


@family("manufactured-azimuthal")
def _manufactured_azimuthal(p, symmetry):
    a = p["a"]
    m = azimuthal_power(p["gamma"], a)
    return {
        "U_r": a * R,
        "U_theta": 0,
        "U_z": -2 * a * Z,
        "Omega": {"Omega_theta": p["kappa"] * R ** (m + 1)},
    }


@family("off-axis-zero")
def _off_axis_zero(p, symmetry):
    psi = sp.exp(-((R - 1) ** 2 + Z**2) / p["w"])
    return {
        "U_r": -p["gamma"] * R * psi + p["b"] * R * (R - 1) * psi,
        "U_theta": p["swirl"] * R * psi,
        "U_z": 0,
    }


@family("gaussian-blob")
def _gaussian_blob(p, symmetry):
    return {"U": [0, 0, 0], "Omega": [0, 0, p["amplitude"] * sp.exp(-_rho2())]}


@family("rigid-rotation")
def _rigid_rotation(p, symmetry):
    w = p["omega"]
    return {"U": [-w * Y, w * X, 0], "P": w**2 * (X**2 + Y**2) / 2}


@family("power-vanishing")
def _power_vanishing(p, symmetry):
    return {"U": [0, 0, 0], "Omega": [0, 0, _rho2() * sp.exp(-_rho2())]}


@family("flat-vanishing")
def _flat_vanishing(p, symmetry):
    return {"U": [0, 0, 0], "Omega": [0, 0, sp.exp(-1 / _rho2())]}


@family("envelope-algebraic")
def _envelope_algebraic(p, symmetry):
    return {"U": [0, 0, 0], "Omega": [0, 0, 1 / (1 + _rho2())]}


@family("nodal-pair")
def _nodal_pair(p, symmetry):
    e = sp.exp(-1)
    bump = sp.exp(-(X**2 + Y**2 + (Z - 1) ** 2)) - e * sp.exp(-_rho2())
    return {"U": [0, 0, -p["gamma"] * bump / (1 - e**2)]}


@family("inward-bump")
def _inward_bump(p, symmetry):
    g = -2 * p["gamma"] * sp.exp(-_rho2())
    return {"U": [g * X, g * Y, g * Z]}


# ---- assembly ----


def _is_zero(expr) -> bool:
    return sp.sympify(expr) == 0


def _cartesian_profile(exprs: Expressions, name: str, params, grid: RegularGrid) -> Profile:
    omega = exprs.get("Omega") or curl(exprs["U"])
    pressure = exprs.get("P")
    return Profile(
        gamma=params["gamma"],
        U=closed_form_field(exprs["U"], f"{name}:U", params),
        Omega=closed_form_field(omega, f"{name}:Omega", params),
        P=None if pressure is None else closed_form_field(pressure, f"{name}:P", params),
        grid=grid,
        name=name,
    )


def _axisym_profile(exprs: Expressions, name: str, params, grid: RegularGrid) -> AxisymProfile:
    velocity = {key: exprs[key] for key in ("U_r", "U_theta", "U_z")}
    vorticity = exprs.get("Omega") or meridional_vorticity(*velocity.values())
    fields = {
        key: closed_form_field(expr, f"{name}:{key}", params, "axisym") for key, expr in velocity.items()
    }
    fields.update(
        {
            key: closed_form_field(expr, f"{name}:{key}", params, "axisym")
            for key, expr in vorticity.items()
            if not _is_zero(expr)
        }
    )
    if exprs.get("P") is not None:
        fields["P"] = closed_form_field(exprs["P"], f"{name}:P", params, "axisym")
    return AxisymProfile(gamma=params["gamma"], grid=grid, name=name, **fields)


def build_fixture(spec: FixtureSpec) -> Union[Profile, AxisymProfile]:
    """The closed-form profile of a catalog family on the requested (or default) grid.

    Raises
    ------
    ValueError
        For unknown families, unknown parameters or parameters outside the documented ranges.
    """
    params = fixture_params(spec)
    symmetry = spec.symmetry or ("axisym" if spec.grid is not None and spec.grid.ndim == 2 else None)
    symmetry = fixture_symmetry(FixtureSpec(spec.family, symmetry=symmetry))
    grid = spec.grid or default_fixture_grid(spec.family, symmetry)
    if (grid.ndim == 2) != (symmetry == "axisym"):
        raise ValueError(f"A {symmetry} fixture cannot be built on a {grid.ndim}D grid.")
    exprs = _BUILDERS[spec.family](params, symmetry)
    LOGGER.debug(f"Building fixture '{spec.family}' ({symmetry}) with {params}")
    if symmetry == "axisym":
        return _axisym_profile(exprs, spec.family, params, grid)
    return _cartesian_profile(exprs, spec.family, params, grid)


def make_fixture(name: str, grid: Optional[RegularGrid] = None, symmetry: Optional[str] = None, **params):
    return build_fixture(FixtureSpec(family=name, params=params, grid=grid, symmetry=symmetry))
