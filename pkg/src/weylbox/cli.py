"""Command-line driver: ``weylbox {count,weyl,compare,em,debye,sweep}``.

Every subcommand prints one table (CSV or JSON) on stdout.  Exit status
is 0 on success, 2 for usage errors and 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .debye import (
    DebyeSolid,
    bulk_velocity,
    debye_frequency,
    heat_capacity_high_t,
    heat_capacity_low_t,
    heat_capacity_numeric,
    internal_energy_debye,
    surface_velocity,
)
from .em import (
    CavityState,
    CutoffSpec,
    internal_energy_em,
    internal_energy_em_cutoff,
    internal_energy_em_cutoff_numeric,
    reference_cutoff_energy_2d,
)
from .errors import WeylboxError
from .lattice import BoundarySpec, count_em_direct, count_lattice, count_polarized
from .numerics import SI, PhysicalConstants, QuadratureSpec
from .tables import SweepTable
from .weyl import CountPolynomial, em_mode_count, mixed_expansion, polarized_expansion

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated command-line parameters."""

    command: str
    d: int | None = None
    boundary: BoundarySpec | None = None
    em: bool = False
    radii: tuple = ()
    L: float = 1.0
    T: float | None = None
    temperatures: tuple = ()
    x_min: float | None = None
    c_l: float | None = None
    c_t: float | None = None
    rho: float | None = None
    walls: str = "free"
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    fmt: str = "csv"
    jobs: int = 1
    quantity: str | None = None
    speed: float | None = None


# ---------------------------------------------------------------- parsing


def _radius(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value <= 0 or (2 * value).denominator != 1:
        raise argparse.ArgumentTypeError(f"radius must be a positive integer or half-integer, got {text}")
    return value


def _length(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive(text: str) -> float:
    value = _length(text)
    if math.isinf(value):
        raise argparse.ArgumentTypeError("must be finite")
    return value


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("output and units")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--units", choices=("natural", "si"), default="natural")
    g.add_argument("--natural", action="store_const", dest="units", const="natural", help="alias for --units natural")
    g.add_argument("--hbar", type=_positive, default=SI.hbar, help="SI only; default %(default)s J s")
    g.add_argument("--kb", type=_positive, default=SI.k_B, help="SI only; default %(default)s J/K")
    g.add_argument("--c", type=_positive, default=SI.c, dest="light", help="SI only; default %(default)s m/s")
    g.add_argument("--tol", type=_positive, default=1e-10, help="relative quadrature tolerance")
    g.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps; output order is fixed")


def _boundary_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    g = parser.add_mutually_exclusive_group()
    g.add_argument("--bc", help="per-axis conditions, e.g. NND")
    g.add_argument("--chi", type=int, help="number of Neumann axes")
    g.add_argument("--em", action="store_true", help="transverse electromagnetic modes")
    parser.add_argument("--vector", action="store_true", help="vector field with the given chi")
    parser.add_argument("--xi", type=int, default=0, choices=(0, 1), help="1 for transverse-only vector fields")


def _radius_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--r", type=_radius, nargs="+")
    parser.add_argument("--r-min", type=_radius)
    parser.add_argument("--r-max", type=_radius)
    parser.add_argument("--r-step", type=_radius, default=Fraction(1))


def _cavity_args(parser: argparse.ArgumentParser, with_t: bool = True) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--L", type=_length, default=1.0)
    if with_t:
        parser.add_argument("--T", type=_positive, default=1.0)
    parser.add_argument("--x-min", type=float, help="cutoff hbar omega_min / k_B T (default: lowest mode)")


def _solid_args(parser: argparse.ArgumentParser, with_t: bool = True) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--L", type=_length, default=math.inf, help="side length, may be inf")
    parser.add_argument("--cl", type=_positive, required=True)
    parser.add_argument("--ct", type=_positive, required=True)
    parser.add_argument("--rho", type=_positive, default=1.0)
    parser.add_argument("--walls", choices=("free", "fixed"), default="free")
    if with_t:
        parser.add_argument("--T", type=_positive)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylbox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact mode counts")
    _boundary_args(p)
    _radius_args(p)
    _common(p)

    p = sub.add_parser("weyl", help="coefficients of the asymptotic count")
    _boundary_args(p)
    p.add_argument("--L", type=_positive, default=1.0)
    p.add_argument("--speed", type=_positive, help="express the count in omega with this wave speed")
    _common(p)

    p = sub.add_parser("compare", help="exact counts against the asymptotic polynomial")
    _boundary_args(p)
    _radius_args(p)
    _common(p)

    p = sub.add_parser("em", help="cavity radiation energies")
    _cavity_args(p)
    _common(p)

    p = sub.add_parser("debye", help="Debye frequencies and heat capacities")
    _solid_args(p)
    _common(p)

    p = sub.add_parser("sweep", help="temperature sweep of em or debye quantities")
    p.add_argument("quantity", choices=("em", "debye"))
    p.add_argument("--t-min", type=_positive, required=True)
    p.add_argument("--t-max", type=_positive, required=True)
    p.add_argument("--t-num", type=int, default=11)
    p.add_argument("--log", action="store_true", help="geometric spacing")
    p.add_argument("--cl", type=_positive)
    p.add_argument("--ct", type=_positive)
    p.add_argument("--rho", type=_positive, default=1.0)
    p.add_argument("--walls", choices=("free", "fixed"), default="free")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=_length, default=1.0)
    p.add_argument("--x-min", type=float)
    _common(p)
    return parser


def _radii(args) -> tuple:
    if args.r:
        if args.r_min is not None or args.r_max is not None:
            raise UsageError("give either --r or --r-min/--r-max, not both")
        return tuple(args.r)
    if args.r_min is None or args.r_max is None:
        raise UsageError("give --r or both --r-min and --r-max")
    if args.r_max < args.r_min:
        raise UsageError("--r-max must be >= --r-min")
    count = int((args.r_max - args.r_min) / args.r_step) + 1
    return tuple(args.r_min + i * args.r_step for i in range(count))


def _boundary(args) -> tuple[BoundarySpec | None, bool]:
    d = args.d
    try:
        if args.em:
            if args.vector:
                raise UsageError("--em already fixes the polarization")
            return BoundarySpec.electromagnetic(d), True
        if args.bc is not None:
            spec = BoundarySpec.from_string(args.bc)
            if spec.d != d:
                raise UsageError(f"--bc {args.bc!r} has {spec.d} axes but --d is {d}")
            chi = spec.chi
        else:
            chi = d if args.chi is None else args.chi
        if args.vector:
            return BoundarySpec.vector(d, chi, args.xi), False
        if args.xi:
            raise UsageError("--xi needs --vector")
        return BoundarySpec(d, chi), False
    except WeylboxError as exc:
        raise UsageError(str(exc)) from exc


def make_config(args) -> RunConfig:
    if args.units == "si":
        try:
            constants = PhysicalConstants(args.hbar, args.kb, args.light)
        except WeylboxError as exc:
            raise UsageError(str(exc)) from exc
    else:
        constants = PhysicalConstants()
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    quad = QuadratureSpec(rel_tol=args.tol)
    base = dict(
        command=args.command, d=args.d, constants=constants, quadrature=quad, fmt=args.format, jobs=args.jobs
    )
    if args.d is not None and args.d < 1:
        raise UsageError("--d must be >= 1")
    cmd = args.command
    if cmd in ("count", "compare", "weyl"):
        spec, em = _boundary(args)
        extra = dict(boundary=spec, em=em)
        if cmd == "weyl":
            extra.update(L=args.L, speed=args.speed)
        else:
            extra["radii"] = _radii(args)
        return RunConfig(**base, **extra)
    if cmd in ("em", "sweep") and (cmd == "em" or args.quantity == "em"):
        if args.d < 2:
            raise UsageError("cavity radiation needs --d >= 2")
        if math.isinf(args.L):
            raise UsageError("cavity radiation needs a finite --L")
        if args.x_min is not None and not args.x_min >= 0:
            raise UsageError("--x-min must be >= 0")
    if cmd == "em":
        return RunConfig(**base, L=args.L, T=args.T, x_min=args.x_min)
    if cmd == "debye":
        return RunConfig(**base, L=args.L, T=args.T, c_l=args.cl, c_t=args.ct, rho=args.rho, walls=args.walls)
    # sweep
    if args.t_num < 1 or args.t_max < args.t_min:
        raise UsageError("need --t-num >= 1 and --t-max >= --t-min")
    space = np.geomspace if args.log else np.linspace
    temps = tuple(float(t) for t in space(args.t_min, args.t_max, args.t_num))
    if args.quantity == "debye":
        if args.cl is None or args.ct is None:
            raise UsageError("debye sweeps need --cl and --ct")
        if math.isinf(args.L):
            raise UsageError("debye sweeps need a finite --L")
    return RunConfig(
        **base, quantity=args.quantity, temperatures=temps, L=args.L, x_min=args.x_min,
        c_l=args.cl, c_t=args.ct, rho=args.rho, walls=args.walls,
    )


# ---------------------------------------------------------------- commands


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _label(spec: BoundarySpec, em: bool) -> str:
    if em:
        return "em"
    axes = "N" * spec.chi + "D" * (spec.d - spec.chi)
    return axes if spec.polarization == "scalar" else f"vector:{axes}:xi{spec.xi_tilde}"


def _exact_count(cfg: RunConfig, R: Fraction) -> int:
    spec = cfg.boundary
    if cfg.em:
        return count_em_direct(spec.d, R)
    if spec.polarization == "vector":
        return count_polarized(spec, R)
    return count_lattice(spec.lower_bounds(), R)


def _asymptotic(cfg: RunConfig, L: float = math.pi, speed: float | None = None) -> CountPolynomial:
    spec = cfg.boundary
    if cfg.em:
        return em_mode_count(spec.d, L, speed or 1.0)
    if spec.polarization == "vector":
        return polarized_expansion(spec.d, spec.chi, spec.xi_tilde, L, speed)
    return mixed_expansion(spec.d, spec.chi, L, speed)


def cmd_count(cfg: RunConfig) -> SweepTable:
    spec = cfg.boundary
    table = SweepTable.with_schema(
        ("d", "int"), ("boundary", "str"), ("chi", "int"), ("polarization", "str"), ("xi_tilde", "int"),
        ("R", "float"), ("exact", "int"),
    )
    counts = _map(lambda R: _exact_count(cfg, R), cfg.radii, cfg.jobs)
    for R, n in zip(cfg.radii, counts):
        table.append(
            d=spec.d, boundary=_label(spec, cfg.em), chi=spec.chi, polarization=spec.polarization,
            xi_tilde=spec.xi_tilde, R=float(R), exact=n,
        )
    return table


def cmd_weyl(cfg: RunConfig) -> SweepTable:
    poly = _asymptotic(cfg, cfg.L, cfg.speed)
    table = SweepTable.with_schema(
        ("power", "int"), ("coefficient", "float"), ("provenance", "str"),
        meta={"variable": poly.variable, "d": poly.d, "boundary": _label(cfg.boundary, cfg.em), "L": cfg.L},
    )
    for j, (a, prov) in enumerate(zip(poly.coefficients, poly.provenance)):
        table.append(power=j, coefficient=a, provenance=prov)
    return table


def fit_area_coefficient(radii, residuals, d: int) -> float:
    """Least-squares ``a`` in ``residual ~ a R^(d-1)``."""
    x = np.asarray(radii, dtype=float) ** (d - 1)
    r = np.asarray(residuals, dtype=float)
    return float(np.dot(x, r) / np.dot(x, x))


def fit_decay_exponent(radii, residuals) -> float:
    """Slope of ``log|residual|`` against ``log R``; nan with fewer than two usable points."""
    pts = [(math.log(R), math.log(abs(r))) for R, r in zip(radii, residuals) if r != 0]
    if len(pts) < 2:
        return math.nan
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def cmd_compare(cfg: RunConfig) -> SweepTable:
    spec = cfg.boundary
    d = spec.d
    poly = _asymptotic(cfg)
    table = SweepTable.with_schema(
        ("d", "int"), ("boundary", "str"), ("R", "float"), ("exact", "int"), ("asymptotic", "float"),
        ("residual", "float"), ("relative_residual", "float"),
    )
    counts = _map(lambda R: _exact_count(cfg, R), cfg.radii, cfg.jobs)
    for R, n in zip(cfg.radii, counts):
        asym = poly(float(R))
        res = n - asym
        table.append(
            d=d, boundary=_label(spec, cfg.em), R=float(R), exact=n, asymptotic=asym, residual=res,
            relative_residual=res / n if n else math.nan,
        )
    radii = table.column("R")
    residuals = table.column("residual")
    # Area-term check: put the area term back and refit it alone.
    area = poly.coefficient(d - 1)
    with_area = [r + area * R ** (d - 1) for R, r in zip(radii, residuals)]
    table.meta = {
        "kind": poly.metadata.get("kind"),
        "coefficients": list(poly.coefficients),
        "decay_exponent": fit_decay_exponent(radii, residuals),
        "max_abs_residual_over_R": max(abs(r) / R for R, r in zip(radii, residuals)),
        "area_coefficient_predicted": area,
        "area_coefficient_fitted": fit_area_coefficient(radii, with_area, d) if d >= 2 else math.nan,
    }
    return table


def _cutoff(state: CavityState, x_min):
    return CutoffSpec.lowest_mode(state) if x_min is None else CutoffSpec.from_x(state, x_min)


_EM_COLUMNS = (
    ("d", "int"), ("L", "float"), ("T", "float"), ("validity", "float"), ("warning", "bool"),
    ("U", "float"), ("U_numeric", "float"), ("x_min", "float"), ("U_cutoff", "float"),
    ("U_cutoff_numeric", "float"), ("U_cutoff_truncated", "float"), ("U_cutoff_paper_literal", "float"),
    ("U_reference_2d", "float"),
)


def _em_row(cfg: RunConfig, T: float) -> dict:
    state = CavityState(cfg.d, cfg.L, T, cfg.constants)
    cut = _cutoff(state, cfg.x_min)
    energy = internal_energy_em_cutoff(state, cut, spec=cfg.quadrature)
    return dict(
        d=cfg.d, L=cfg.L, T=T, validity=state.validity, warning=state.warning,
        U=internal_energy_em(state),
        U_numeric=internal_energy_em_cutoff_numeric(state, 0.0, cfg.quadrature),
        x_min=cut.x_min, U_cutoff=energy.full,
        U_cutoff_numeric=internal_energy_em_cutoff_numeric(state, cut.omega_min, cfg.quadrature),
        U_cutoff_truncated=energy.truncated, U_cutoff_paper_literal=energy.paper_literal,
        U_reference_2d=reference_cutoff_energy_2d(state) if cfg.d == 2 else math.nan,
    )


def cmd_em(cfg: RunConfig) -> SweepTable:
    table = SweepTable.with_schema(*_EM_COLUMNS)
    table.append(**_em_row(cfg, cfg.T))
    return table


def _solid(cfg: RunConfig) -> DebyeSolid:
    return DebyeSolid(cfg.d, cfg.L, cfg.c_l, cfg.c_t, cfg.rho, cfg.walls, cfg.constants)


_DEBYE_T_COLUMNS = (
    ("T", "float"), ("T_over_theta", "float"), ("U", "float"), ("C_numeric", "float"),
    ("C_low_T", "float"), ("C_high_T", "float"),
)


def _debye_t_row(cfg: RunConfig, solid: DebyeSolid, freqs, T: float) -> dict:
    area = solid.d > 1
    return dict(
        T=T, T_over_theta=T / freqs.theta,
        U=internal_energy_debye(solid, T, cfg.quadrature, freqs, area),
        C_numeric=heat_capacity_numeric(solid, T, cfg.quadrature, include_area=area),
        C_low_T=heat_capacity_low_t(solid, T, area),
        C_high_T=heat_capacity_high_t(solid, freqs, area),
    )


def cmd_debye(cfg: RunConfig) -> SweepTable:
    solid = _solid(cfg)
    area = solid.d > 1
    freqs = debye_frequency(solid, include_area=area)
    columns = [
        ("d", "int"), ("L", "float"), ("walls", "str"), ("c_s0", "float"), ("c_s", "float"),
        ("omega_0", "float"), ("omega", "float"), ("B", "float"), ("theta", "float"), ("theta_0", "float"),
        ("omega_exact", "float"), ("omega_first_order", "float"), ("omega_numeric", "float"),
        ("method", "str"),
    ]
    row = dict(
        d=solid.d, L=solid.L, walls=solid.walls, c_s0=bulk_velocity(solid),
        c_s=surface_velocity(solid) if area else math.nan,
        omega_0=freqs.omega_0, omega=freqs.omega, B=freqs.B, theta=freqs.theta, theta_0=freqs.theta_0,
        omega_exact=freqs.omega_exact, omega_first_order=freqs.omega_first_order,
        omega_numeric=freqs.omega_numeric, method=freqs.method,
    )
    if cfg.T is not None:
        if math.isinf(solid.L):
            raise UsageError("temperature-dependent quantities are extensive; give a finite --L")
        columns += list(_DEBYE_T_COLUMNS)
        row.update(_debye_t_row(cfg, solid, freqs, cfg.T))
    table = SweepTable.with_schema(*columns)
    table.append(**row)
    return table


def cmd_sweep(cfg: RunConfig) -> SweepTable:
    if cfg.quantity == "em":
        table = SweepTable.with_schema(*_EM_COLUMNS, meta={"quantity": "em"})
        rows = _map(lambda T: _em_row(cfg, T), cfg.temperatures, cfg.jobs)
    else:
        solid = _solid(cfg)
        freqs = debye_frequency(solid, include_area=solid.d > 1)
        table = SweepTable.with_schema(*_DEBYE_T_COLUMNS, meta={"quantity": "debye", "theta": freqs.theta})
        rows = _map(lambda T: _debye_t_row(cfg, solid, freqs, T), cfg.temperatures, cfg.jobs)
    for row in rows:
        table.append(**row)
    return table


COMMANDS = {
    "count": cmd_count,
    "weyl": cmd_weyl,
    "compare": cmd_compare,
    "em": cmd_em,
    "debye": cmd_debye,
    "sweep": cmd_sweep,
}


def _context(cfg: RunConfig) -> str:
    keys = ("d", "L", "T", "c_l", "c_t", "rho", "walls")
    parts = [f"{k}={getattr(cfg, k)}" for k in keys if getattr(cfg, k) is not None]
    return ", ".join(parts)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = None
    try:
        cfg = make_config(args)
        table = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"weylbox {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE
    except WeylboxError as exc:
        context = f" ({_context(cfg)})" if cfg else ""
        print(f"weylbox {args.command}: error: {exc}{context}", file=stderr)
        return EXIT_NUMERIC
    if "warning" in table.schema and any(table.column("warning")):
        print("weylbox: warning: k_B L T / (hbar c) is small; quasithermodynamic corrections may be unreliable",
              file=stderr)
    stdout.write(table.render(cfg.fmt))
    return EXIT_OK


def main() -> None:
    sys.exit(run())
