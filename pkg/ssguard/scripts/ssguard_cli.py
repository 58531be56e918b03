import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ssguard.calculations import (
    area_growth_check,
    axis_outgoing_certificate,
    axisym_invariant_check,
    backward_alpha_limit,
    biot_savart,
    check_axisym,
    check_profile,
    circulation_check,
    default_labels,
    ell_mu_criterion,
    alpha_pointwise_bound,
    integrate_flow,
    meridional_fixed_points,
    meridional_flow,
    nodal_battery,
    orbit_connection_check,
    profile_compatibility,
    viscous_criterion,
    vorticity_of,
)
from ssguard.calculations.axisym import alpha_limit_entry, fixed_point_entries, record_axisym_residuals
from ssguard.calculations.battery import default_polygon, default_seeds
from ssguard.calculations.criteria import criteria_entries
from ssguard.calculations.flow import IDENTITIES, bernoulli_monotonicity_check, flow_identity_check
from ssguard.calculations.selfsim import bernoulli, bernoulli_entries, record_residuals
from ssguard.calculations.stretching import sample_points, stretching_batch, stretching_entries
from ssguard.classes import AxisymProfile, DiagnosticReport, FixtureSpec, Loop, Profile, ResidualField, ViscousSplitSpec
from ssguard.constants import CONFIG, TOOL_VERSION
from ssguard.errors import ProfileFormatError
from ssguard.io import (
    dump_report,
    expected_outcomes,
    fixture_families,
    load_loop,
    load_points,
    load_profile,
    load_series,
    make_fixture,
    save_profile,
    save_report,
    save_summary_csv,
)
from ssguard.logger import LOGGER, log_to_file, set_log_level
from ssguard.plotting import (
    plot_check_summary,
    plot_meridional_flow,
    plot_residual_slice,
    plot_trajectories,
    save_figure,
)

AXISYM_ACTIONS = (
    "residual",
    "flow",
    "fixed-points",
    "area",
    "invariants",
    "alpha-limit",
    "orbit",
    "axis-outgoing",
    "compat",
)

AnyProfile = Union[Profile, AxisymProfile]


def _tau_span(text: str) -> Tuple[float, float]:
    """Parses 'a:b' into a tau span."""
    try:
        t0, t1 = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a span 'a:b', not '{text}'.")
    if t0 == t1:
        raise argparse.ArgumentTypeError(f"The tau span '{text}' is empty.")
    return t0, t1


def _key_value(text: str) -> Tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"Expected a parameter 'key=value', not '{text}'.")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"The value of '{key}' is not a number: '{value}'.")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--loglevel",
        type=str,
        default="INFO",
        help="Set the logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).",
    )
    parser.add_argument("--logfile", type=Path, default=None, help="Additionally write the log to this file.")
    parser.add_argument(
        "--tol-scale",
        type=float,
        default=1.0,
        help="Multiply every tolerance of the configuration table by this factor.",
    )
    parser.add_argument(
        "-o",
        "--output",
        type=Path,
        default=None,
        help="Write the report (line-delimited JSON) to this file instead of stdout.",
    )
    parser.add_argument("--plot", type=Path, default=None, help="Save a static figure to this path.")


def _add_profile(parser: argparse.ArgumentParser):
    parser.add_argument("profile", type=Path, help="Profile file in the ssp-1 container format.")
    parser.add_argument(
        "--gamma-override",
        type=float,
        default=None,
        help="Check the stored fields against this similarity exponent instead of the stored one.",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssguard",
        description="Consistency checks and obstructions for self-similar Euler blowup profiles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    check = subparsers.add_parser("check", help="Run every applicable check on a profile.")
    _add_profile(check)
    check.add_argument("--tau", type=_tau_span, default=None, help="Flow span 'a:b' for the flow identities.")
    check.add_argument("--p", type=float, nargs="+", default=[2.0], help="Exponents of the L^p checks.")
    check.add_argument("--no-flow", action="store_true", help="Skip the Lagrangian flow identities.")
    check.add_argument("--summary", type=Path, default=None, help="CSV summary path (default: next to -o).")

    residual = subparsers.add_parser("residual", help="Self-similar residuals and the Bernoulli identities.")
    _add_profile(residual)
    residual.add_argument("--p", type=float, nargs="+", default=[2.0], help="Exponents of the L^p identity.")

    stretching = subparsers.add_parser("stretching", help="Stretching factor as a singular integral.")
    _add_profile(stretching)
    stretching.add_argument(
        "--points", type=str, default="auto", help="Evaluation points: a text file (x y z per line) or 'auto'."
    )
    stretching.add_argument("--count", type=int, default=20, help="Number of points for '--points auto'.")
    stretching.add_argument("--seed", type=int, default=0, help="Seed for '--points auto'.")
    stretching.add_argument("--L", type=float, default=0.5, help="Inner/outer cutoff radius.")
    stretching.add_argument("--p", type=float, default=2.0, help="Exponent of the outer majorant.")
    stretching.add_argument("--order", type=int, default=None, help="Gauss-Legendre order per radial panel.")
    stretching.add_argument(
        "--biot-savart", action="store_true", help="Rebuild U from Omega before evaluating the strain."
    )

    flow = subparsers.add_parser("flow", help="Flow-map identities along self-similar trajectories.")
    _add_profile(flow)
    flow.add_argument("--seeds", type=str, default="auto", help="Labels: a text file (x y z per line) or 'auto'.")
    flow.add_argument("--tau", type=_tau_span, default=(0.0, 1.0), help="Span 'a:b' of self-similar time.")
    flow.add_argument("--backward", action="store_true", help="Integrate the reversed span.")

    nodal = subparsers.add_parser("nodal", help="Nodal set of V and outgoing certificates.")
    _add_profile(nodal)
    nodal.add_argument("--eps-star", type=float, default=None, help="Radius of the certification balls.")

    circ = subparsers.add_parser("circulation", help="Self-similar circulation along a material loop.")
    _add_profile(circ)
    loop_group = circ.add_mutually_exclusive_group(required=True)
    loop_group.add_argument("--loop", type=Path, default=None, help="Loop vertices, x y z per line.")
    loop_group.add_argument(
        "--circle", type=float, nargs=3, metavar=("R", "Z", "N"), help="Horizontal circle of radius R at height Z."
    )
    circ.add_argument("--tau", type=_tau_span, default=(0.0, 1.0), help="Span 'a:b' of self-similar time.")

    axisym = subparsers.add_parser("axisym", help="Checks specific to axisymmetric profiles.")
    _add_profile(axisym)
    axisym.add_argument("action", choices=AXISYM_ACTIONS)
    axisym.add_argument("--seeds", type=Path, default=None, help="Meridional seeds, r z per line.")
    axisym.add_argument("--polygon", type=Path, default=None, help="Polygon vertices, r z per line.")
    axisym.add_argument("--tau", type=_tau_span, default=(0.0, 1.0), help="Span 'a:b' of self-similar time.")
    axisym.add_argument("--tau-min", type=float, default=None, help="End of the backward integration.")
    axisym.add_argument("--z-star", type=float, default=0.0, help="Height of the axis fixed point.")
    axisym.add_argument("--eps-star", type=float, default=0.1, help="Radius of the axis certificate.")

    criteria = subparsers.add_parser("criteria", help="Blowup criteria from scalar inputs and time series.")
    criteria.add_argument("--gamma-bound", type=float, default=None, metavar="P", help="Print p / (p + 3).")
    criteria.add_argument(
        "--ell-mu", type=Path, nargs=2, metavar=("HOLDER", "ENERGY"), help="Hoelder and energy series files."
    )
    criteria.add_argument("--mu", type=float, default=0.5, help="Hoelder exponent of the ell_mu criterion.")
    criteria.add_argument("--L0", type=float, default=1.0, help="Length scale cap of the ell_mu criterion.")
    criteria.add_argument(
        "--alpha-bound", type=Path, nargs=2, metavar=("GRADW", "UP"), help="|grad omega|_inf and |u|_p series."
    )
    criteria.add_argument("--p", type=float, default=2.0, help="Exponent of the velocity norm series.")
    criteria.add_argument("--blowup-time", type=float, default=1.0, help="Candidate blowup time of the series.")
    criteria.add_argument(
        "--viscous", type=float, nargs=3, metavar=("GAMMA_OUT", "C", "GAMMA"), help="Viscous split inputs."
    )

    fixture = subparsers.add_parser("fixture", help="Write a closed-form fixture profile.")
    fixture.add_argument("family", choices=fixture_families())
    fixture.add_argument("params", type=_key_value, nargs="*", help="Family parameters as key=value.")
    fixture.add_argument("--symmetry", choices=("cartesian", "axisym"), default=None)

    for sub in subparsers.choices.values():
        _add_common(sub)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return _build_parser().parse_args(argv)


# ---- helpers ----


def _load(args: argparse.Namespace) -> AnyProfile:
    profile = load_profile(args.profile)
    if args.gamma_override is not None:
        LOGGER.info(f"Overriding gamma = {profile.gamma:g} with {args.gamma_override:g}")
        if isinstance(profile, Profile):
            profile = profile.replace(gamma=args.gamma_override)
        else:
            profile = dataclasses.replace(profile, gamma=args.gamma_override)
    return profile


def _cartesian(profile: AnyProfile, command: str) -> Profile:
    if not isinstance(profile, Profile):
        raise ValueError(f"'{command}' needs a cartesian profile; use 'axisym' for axisymmetric files.")
    return profile


def _axisym(profile: AnyProfile) -> AxisymProfile:
    if not isinstance(profile, AxisymProfile):
        raise ValueError("'axisym' needs a profile with symmetry 'axisym'.")
    return profile


def _new_report(profile: Optional[AnyProfile] = None) -> DiagnosticReport:
    meta = profile.metadata() if profile is not None else {}
    meta["tolerances"] = CONFIG.tolerance_table()
    return DiagnosticReport(profile=meta)


def _finish(report: DiagnosticReport, args: argparse.Namespace) -> int:
    if args.output is not None:
        save_report(report, args.output)
        LOGGER.info(f"Report written to {args.output}")
    else:
        dump_report(report, sys.stdout)
    counts = {k: v for k, v in report.verdict_counts().items() if v}
    LOGGER.info(f"Verdicts: {counts}")
    return report.exit_code()


def _plot(args: argparse.Namespace, draw: Callable[[plt.Axes], None]):
    if args.plot is None:
        return
    fig, ax = plt.subplots(figsize=(7, 6))
    draw(ax)
    save_figure(fig, args.plot)
    LOGGER.info(f"Figure saved to {args.plot}")


def _plot_worst_residual(args: argparse.Namespace, residuals: Sequence[ResidualField]):
    if not residuals:
        if args.plot is not None:
            LOGGER.warning("No residual could be evaluated; nothing to plot.")
        return
    _plot(args, lambda ax: plot_residual_slice(max(residuals, key=lambda res: res.sup), ax))


# ---- subcommands ----


def _cmd_check(args: argparse.Namespace) -> int:
    profile = _load(args)
    if isinstance(profile, AxisymProfile):
        run = check_axisym(profile, tau_span=args.tau)
    else:
        run = check_profile(profile, tau_span=args.tau, p_values=args.p, with_flow=not args.no_flow)
    run.report.profile["tolerances"] = CONFIG.tolerance_table()
    summary = args.summary
    if summary is None and args.output is not None:
        summary = args.output.with_suffix(".csv")
    if summary is not None:
        save_summary_csv(run.report, summary)
    if args.plot is not None:
        save_figure(plot_check_summary(run.report, run.residuals, run.trajectories), args.plot)
    return _finish(run.report, args)


def _cmd_residual(args: argparse.Namespace) -> int:
    profile = _load(args)
    report = _new_report(profile)
    if isinstance(profile, AxisymProfile):
        residuals = record_axisym_residuals(report, profile)
    else:
        residuals = record_residuals(report, profile, args.p)
        report.record("bernoulli", lambda: bernoulli_entries(bernoulli(profile)))
    _plot_worst_residual(args, residuals)
    return _finish(report, args)


def _cmd_stretching(args: argparse.Namespace) -> int:
    profile = _cartesian(_load(args), "stretching")
    if args.biot_savart:
        profile = profile.replace(U=biot_savart(vorticity_of(profile), profile.grid))
    if args.order is not None:
        CONFIG.override("stretching", "radial_order", args.order)
    if args.points == "auto":
        points = sample_points(profile, args.count, seed=args.seed, L=args.L)
    else:
        points = load_points(args.points)
    LOGGER.info(f"Evaluating the stretching integral at {len(points)} points with L = {args.L:g}")
    results = stretching_batch(profile, points, args.L, args.p)
    report = _new_report(profile)
    report.record("stretching", lambda: stretching_entries(results))
    return _finish(report, args)


def _cmd_flow(args: argparse.Namespace) -> int:
    profile = _cartesian(_load(args), "flow")
    span = args.tau
    if args.backward:
        span = (-span[1], -span[0])
    labels = default_labels(profile) if args.seeds == "auto" else load_points(args.seeds)
    trajectories = integrate_flow(profile, labels, span)
    report = _new_report(profile)
    for which in IDENTITIES:
        report.record(f"flow.{which}", lambda which=which: flow_identity_check(profile, trajectories, which))
    report.record("flow.bernoulli_monotone", lambda: bernoulli_monotonicity_check(profile, trajectories))
    _plot(args, lambda ax: plot_trajectories(trajectories, ax))
    return _finish(report, args)


def _cmd_nodal(args: argparse.Namespace) -> int:
    profile = _cartesian(_load(args), "nodal")
    report = _new_report(profile)
    report.record("nodal", lambda: nodal_battery(profile, args.eps_star))
    return _finish(report, args)


def _cmd_circulation(args: argparse.Namespace) -> int:
    profile = _cartesian(_load(args), "circulation")
    if args.loop is not None:
        loop = load_loop(args.loop)
    else:
        r, z, n = args.circle
        loop = Loop.circle(r, z, int(n))
    report = _new_report(profile)
    report.record("flow.circulation", lambda: circulation_check(profile, loop, args.tau))
    return _finish(report, args)


def _meridional_points(path: Optional[Path], fallback: np.ndarray) -> np.ndarray:
    return fallback if path is None else load_points(path, dim=2)


def _cmd_axisym(args: argparse.Namespace) -> int:
    profile = _axisym(_load(args))
    report = _new_report(profile)
    action = args.action
    if action == "residual":
        _plot_worst_residual(args, record_axisym_residuals(report, profile))
    elif action == "flow":
        seeds = _meridional_points(args.seeds, default_seeds(profile))
        trajectories = meridional_flow(profile, seeds, args.tau)
        points = meridional_fixed_points(profile)
        report.add(fixed_point_entries(profile, points))
        _plot(args, lambda ax: plot_meridional_flow(trajectories, points, ax))
    elif action == "fixed-points":
        report.add(fixed_point_entries(profile, meridional_fixed_points(profile)))
    elif action == "area":
        polygon = _meridional_points(args.polygon, default_polygon(profile))
        report.record("axisym.area_growth", lambda: area_growth_check(profile, polygon, args.tau))
    elif action == "invariants":
        seeds = _meridional_points(args.seeds, default_seeds(profile))
        trajectories = meridional_flow(profile, seeds, args.tau)
        report.record("axisym.invariant.swirl", lambda: axisym_invariant_check(profile, trajectories, "swirl"))
        if profile.Omega_theta is not None:
            report.record(
                "axisym.invariant.azimuthal-vorticity",
                lambda: axisym_invariant_check(profile, trajectories, "azimuthal-vorticity"),
            )
    elif action == "alpha-limit":
        points = meridional_fixed_points(profile)
        for seed in _meridional_points(args.seeds, default_seeds(profile)):
            report.record(
                "axisym.alpha_limit",
                lambda seed=seed: alpha_limit_entry(
                    backward_alpha_limit(profile, seed, args.tau_min, fixed_points=points)
                ),
            )
    elif action == "orbit":
        span = args.tau if args.tau[0] < 0 < args.tau[1] else (-abs(args.tau[1]), abs(args.tau[1]))
        for seed in _meridional_points(args.seeds, default_seeds(profile)):
            report.record("axisym.orbit", lambda seed=seed: orbit_connection_check(profile, seed, span))
    elif action == "axis-outgoing":
        report.record(
            "axisym.axis_outgoing", lambda: axis_outgoing_certificate(profile, args.z_star, args.eps_star)
        )
    else:
        report.add(profile_compatibility(profile))
    return _finish(report, args)


def _cmd_criteria(args: argparse.Namespace) -> int:
    ell = alpha = viscous = None
    if args.ell_mu is not None:
        holder, energy = (load_series(path, args.blowup_time) for path in args.ell_mu)
        ell = ell_mu_criterion(holder, energy, args.mu, args.L0)
    if args.alpha_bound is not None:
        gradw, up = (load_series(path, args.blowup_time) for path in args.alpha_bound)
        alpha = alpha_pointwise_bound(gradw, up, args.p)
    if args.viscous is not None:
        spec = ViscousSplitSpec(*args.viscous)
        viscous = (spec, viscous_criterion(spec))
    entries = criteria_entries(args.gamma_bound, ell, alpha, viscous)
    if not entries:
        raise ValueError("Nothing to evaluate: pass --gamma-bound, --ell-mu, --alpha-bound or --viscous.")
    if args.output is None:
        for entry in entries:
            suffix = f"  ({entry.message})" if entry.message else ""
            print(f"{entry.name}: {entry.residual:.12g}{suffix}")
        return 0
    report = _new_report()
    report.add(entries)
    return _finish(report, args)


def _cmd_fixture(args: argparse.Namespace) -> int:
    params = dict(args.params)
    if args.output is None:
        raise ValueError("The fixture subcommand needs an output path (-o).")
    profile = make_fixture(args.family, symmetry=args.symmetry, **params)
    spec = FixtureSpec(family=args.family, params=params, symmetry=profile.symmetry)
    save_profile(profile, args.output, fixture=spec)
    LOGGER.info(f"Wrote fixture '{args.family}' ({profile.symmetry}) to {args.output}")
    for name, verdict in expected_outcomes(args.family).items():
        LOGGER.info(f"  expected {verdict:<4} {name}")
    if args.plot is not None:
        LOGGER.warning("Fixtures have no figure; ignoring --plot.")
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "residual": _cmd_residual,
    "stretching": _cmd_stretching,
    "flow": _cmd_flow,
    "nodal": _cmd_nodal,
    "circulation": _cmd_circulation,
    "axisym": _cmd_axisym,
    "criteria": _cmd_criteria,
    "fixture": _cmd_fixture,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    try:
        set_log_level(LOGGER, args.loglevel)
        CONFIG.tol_scale = args.tol_scale
        with log_to_file(LOGGER, args.logfile):
            return _COMMANDS[args.command](args)
    except ProfileFormatError as err:
        field = f" (field '{err.field}')" if err.field else ""
        LOGGER.error(f"Malformed profile file{field}: {err}")
        return 2
    except (OSError, ValueError, KeyError) as err:
        LOGGER.error(str(err))
        return 2


if __name__ == "__main__":
    sys.exit(main())
