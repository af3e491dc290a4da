"""Generalised Debye model of a finite harmonic solid.

Sound waves in a cube of side ``L`` with free (``+``) or fixed (``-``)
walls have the two-term mode density

    D(omega) = kappa_0 omega^(d-1) + kappa_pm omega^(d-2),

with a bulk speed ``c_s0`` and a boundary speed ``c_spm``.  The Debye
frequency solves ``N(omega_D) = d n``, i.e.

    omega^d + B omega^(d-1) - omega_0^d = 0.

Area terms vanish for ``d = 1``; asking for them there raises
:class:`~weylbox.errors.DomainError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import DomainError, SingularityError, WeylboxError
from .numerics import (
    DEFAULT_QUADRATURE,
    NATURAL,
    PhysicalConstants,
    QuadratureSpec,
    bose_integral,
    gamma_real,
    zeta_real,
)

__all__ = [
    "DebyeSolid",
    "DebyeFrequencies",
    "bulk_velocity",
    "surface_velocity",
    "surface_velocity_3d_printed",
    "debye_frequency",
    "density_coefficients_debye",
    "mode_density",
    "mode_count",
    "internal_energy_debye",
    "internal_energy_low_t",
    "heat_capacity_low_t",
    "heat_capacity_high_t",
    "heat_capacity_numeric",
    "dulong_petit_limit",
]


@dataclass(frozen=True)
class DebyeSolid:
    """Isotropic solid filling ``[0, L]^d``.

    ``L`` may be ``math.inf`` for the bulk limit; extensive quantities
    then raise :class:`DomainError`.
    """

    d: int
    L: float
    c_l: float
    c_t: float
    rho: float
    walls: str = "free"
    constants: PhysicalConstants = NATURAL

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {self.d!r}")
        if not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L!r}")
        if not (0 < self.c_t <= self.c_l and math.isfinite(self.c_l)):
            raise DomainError(f"need c_l >= c_t > 0, got c_l={self.c_l!r}, c_t={self.c_t!r}")
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise DomainError(f"rho must be positive, got {self.rho!r}")
        if self.walls not in ("free", "fixed"):
            raise DomainError(f"walls must be 'free' or 'fixed', got {self.walls!r}")

    @property
    def sign(self) -> int:
        return 1 if self.walls == "free" else -1

    @property
    def particles(self) -> float:
        if math.isinf(self.L):
            raise DomainError("particle number is infinite for L = inf")
        return self.rho * self.L**self.d


@dataclass(frozen=True)
class DebyeFrequencies:
    """Debye frequencies of a solid.

    ``omega`` is the value used downstream: the closed form for
    ``d = 2, 3`` and the numerical root otherwise.  ``omega_exact`` is
    ``nan`` where no closed form exists;
    ``omega_first_order`` is ``omega_0 - B/d``.
    """

    omega_0: float
    omega: float
    B: float
    theta: float
    theta_0: float
    omega_exact: float
    omega_first_order: float
    omega_numeric: float
    method: str

    def residual(self, d: int) -> float:
        return self.omega ** (d - 1) * (self.omega + self.B) - self.omega_0**d


def _require_area(solid: DebyeSolid) -> None:
    if solid.d == 1:
        raise DomainError("area corrections are undefined for d = 1; pass include_area=False")


def bulk_velocity(solid: DebyeSolid) -> float:
    """``c_s0`` from ``c_s0^d = d c_t^d / (d - 1 + c_t^d / c_l^d)``."""
    d = solid.d
    r = (solid.c_t / solid.c_l) ** d
    return solid.c_t * (d / (d - 1 + r)) ** (1 / d)


def surface_velocity(solid: DebyeSolid) -> float:
    """Boundary speed ``c_spm`` for free (+) or fixed (-) walls."""
    _require_area(solid)
    d = solid.d
    a, b = solid.c_l ** (d - 1), solid.c_t ** (d - 1)
    gap = a - solid.sign * b
    if gap == 0 or solid.walls == "free" and math.isclose(solid.c_l, solid.c_t, rel_tol=1e-14):
        raise SingularityError(
            "free walls need c_l != c_t: the boundary-speed formula divides by c_l^(d-1) - c_t^(d-1)"
        )
    bracket = d - 1 + (a * a - a * b + 2 * b * b) / (a * gap)
    return solid.c_t * (d / bracket) ** (1 / (d - 1))


def surface_velocity_3d_printed(c_l: float, c_t: float, walls: str) -> float:
    """Published three-dimensional slab results, for cross-checking the general formula."""
    l2, t2 = c_l**2, c_t**2
    if walls == "free":
        if l2 == t2:
            raise SingularityError("free walls need c_l != c_t")
        inv = (2 * t2**2 - 3 * t2 * l2 + 3 * l2**2) / (t2 * l2 * (l2 - t2))
    else:
        inv = 2 / t2 + 1 / l2 + (l2 - t2) ** 2 / (l2 * t2 * (l2 + t2))
    return math.sqrt(3 / inv)


def _omega_0(solid: DebyeSolid, c0: float) -> float:
    d = solid.d
    return 2 * math.sqrt(math.pi) * c0 * (gamma_real(d / 2 + 1) * solid.rho) ** (1 / d)


def _b_coefficient(solid: DebyeSolid, c0: float) -> float:
    d = solid.d
    cs = surface_velocity(solid)
    if math.isinf(solid.L):
        return 0.0
    ratio = gamma_real(d / 2 + 1) / gamma_real((d - 1) / 2 + 1)
    return solid.sign * d * math.sqrt(math.pi) * ratio * c0**d / (cs ** (d - 1) * solid.L)


def _exact_2d(B: float, w0: float) -> float:
    root = math.hypot(B, 2 * w0)
    # Rationalised when B > 0 to avoid cancellation.
    return 2 * w0 * w0 / (root + B) if B > 0 else (root - B) / 2


def _exact_3d(B: float, w0: float) -> float:
    # omega = y - B/3 turns the cubic into y^3 + p y + q = 0 (Cardano).
    half_q = w0**3 / 2 - B**3 / 27  # this is -q/2
    disc = w0**6 / 4 - B**3 * w0**3 / 27
    if disc < 0:
        # Three real roots (B > 0 large); the positive one is the largest.
        # Its trigonometric form, rewritten without the subtraction of B/3.
        phi = 2 * math.asin(math.sqrt(27 * w0**3 / (4 * B**3)))
        return 4 * B / 3 * math.sin(math.pi / 3 - phi / 6) * math.sin(phi / 6)
    big = half_q + math.copysign(math.sqrt(disc), half_q)
    # The two cube arguments multiply to (B^2/9)^3.
    small = (B * B / 9) ** 3 / big if big else 0.0
    return float(math.copysign(abs(big) ** (1 / 3), big) + math.copysign(abs(small) ** (1 / 3), small) - B / 3)


def _numeric_root(d: int, B: float, w0: float) -> float:
    f = lambda w: w ** (d - 1) * (w + B) - w0**d
    hi = 2 * w0 + abs(B)
    root = brentq(f, 0.0, hi, xtol=1e-15 * w0, rtol=4 * 2.0**-52, maxiter=500)
    fp = d * root ** (d - 1) + (d - 1) * B * root ** (d - 2) if d > 1 else 1.0
    if fp:
        polished = root - f(root) / fp
        if abs(f(polished)) <= abs(f(root)):
            root = polished
    if not root > 0:
        raise WeylboxError(f"no positive Debye root found (d={d}, B={B}, omega_0={w0})")
    return root


def debye_frequency(solid: DebyeSolid, include_area: bool = True) -> DebyeFrequencies:
    """Bulk and corrected Debye frequencies.

    Parameters
    ----------
    solid : DebyeSolid
    include_area : bool
        ``False`` drops the boundary term (``B = 0``); required for ``d = 1``.
    """
    if include_area:
        _require_area(solid)
    d = solid.d
    c0 = bulk_velocity(solid)
    w0 = _omega_0(solid, c0)
    B = _b_coefficient(solid, c0) if include_area else 0.0
    numeric = w0 if B == 0 else _numeric_root(d, B, w0)
    first = w0 - B / d
    if B == 0:
        exact, method = w0, "bulk"
    elif d == 2:
        exact, method = _exact_2d(B, w0), "exact"
    elif d == 3:
        exact, method = _exact_3d(B, w0), "exact"
    else:
        exact, method = math.nan, "numeric"
    if math.isnan(exact) or not exact > 0:
        # No usable closed form: fall back to the bracketed root.
        exact, method = math.nan, "numeric"
    omega = exact if method != "numeric" else numeric
    hk = solid.constants.hbar / solid.constants.k_B
    return DebyeFrequencies(w0, omega, B, hk * omega, hk * w0, exact, first, numeric, method)


def density_coefficients_debye(solid: DebyeSolid, include_area: bool = True) -> tuple[float, float]:
    """``(kappa_0, kappa_pm)`` of the two-term mode density."""
    if math.isinf(solid.L):
        raise DomainError("mode density is extensive; L must be finite")
    d, L = solid.d, solid.L
    c0 = bulk_velocity(solid)
    kappa_0 = d * d * L**d / (2**d * math.pi ** (d / 2) * gamma_real(d / 2 + 1) * c0**d)
    if not include_area:
        return kappa_0, 0.0
    _require_area(solid)
    cs = surface_velocity(solid)
    kappa_s = solid.sign * d * d * (d - 1) * L ** (d - 1) / (
        2**d * math.pi ** ((d - 1) / 2) * gamma_real((d - 1) / 2 + 1)
    ) * cs ** (1 - d)
    return kappa_0, kappa_s


def _density_list(solid: DebyeSolid, include_area: bool) -> list[float]:
    k0, ks = density_coefficients_debye(solid, include_area)
    d = solid.d
    coeffs = [0.0] * d
    coeffs[d - 1] = k0
    if d >= 2:
        coeffs[d - 2] += ks
    return coeffs


def mode_density(solid: DebyeSolid, omega: float, include_area: bool = True) -> float:
    """Two-term mode density ``D(omega)``, without the Debye cutoff applied."""
    if omega < 0:
        raise DomainError("omega must be >= 0")
    return math.fsum(a * omega**p for p, a in enumerate(_density_list(solid, include_area)) if a)


def mode_count(solid: DebyeSolid, omega: float, include_area: bool = True) -> float:
    """``N(omega) = kappa_0 omega^d/d + kappa_pm omega^(d-1)/(d-1)``."""
    return math.fsum(a * omega ** (p + 1) / (p + 1) for p, a in enumerate(_density_list(solid, include_area)) if a)


def _freqs(solid, freqs, include_area):
    return freqs if freqs is not None else debye_frequency(solid, include_area)


def internal_energy_debye(
    solid: DebyeSolid,
    T: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    freqs: DebyeFrequencies | None = None,
    include_area: bool = True,
) -> float:
    """Thermal energy ``int_0^omega_D D(omega) hbar omega / (e^(hbar omega/k_B T) - 1) d omega``."""
    if not T > 0:
        raise DomainError(f"T must be positive, got {T!r}")
    f = _freqs(solid, freqs, include_area)
    kT, hbar = solid.constants.k_B * T, solid.constants.hbar
    upper = f.theta / T
    terms = []
    for p, a in enumerate(_density_list(solid, include_area)):
        if a:
            terms.append(a * kT ** (p + 2) / hbar ** (p + 1) * bose_integral(p + 1, 0.0, upper, spec))
    return math.fsum(terms)


def internal_energy_low_t(solid: DebyeSolid, T: float, include_area: bool = True) -> float:
    """Low-temperature closed form, with the cutoff pushed to infinity."""
    k0, ks = density_coefficients_debye(solid, include_area)
    d, kT, hbar = solid.d, solid.constants.k_B * T, solid.constants.hbar
    u = math.factorial(d) * k0 * zeta_real(d + 1) * kT ** (d + 1) / hbar**d
    if include_area:
        u += math.factorial(d - 1) * ks * zeta_real(d) * kT**d / hbar ** (d - 1)
    return u


def heat_capacity_low_t(solid: DebyeSolid, T: float, include_area: bool = True, bulk_only: bool = False) -> float:
    """Corrected Debye ``T^d`` law; ``bulk_only`` returns just the ``T^d`` term."""
    k0, ks = density_coefficients_debye(solid, include_area)
    d, k, hbar = solid.d, solid.constants.k_B, solid.constants.hbar
    c = math.factorial(d) * (d + 1) * k0 * zeta_real(d + 1) * k ** (d + 1) * T**d / hbar**d
    if include_area and not bulk_only:
        c += d * math.factorial(d - 1) * ks * zeta_real(d) * k**d * T ** (d - 1) / hbar ** (d - 1)
    return c


def heat_capacity_high_t(
    solid: DebyeSolid, freqs: DebyeFrequencies | None = None, include_area: bool = True
) -> float:
    """Corrected Dulong-Petit constant ``k_B N(omega_D)``."""
    f = _freqs(solid, freqs, include_area)
    k0, ks = density_coefficients_debye(solid, include_area)
    d, k, hbar = solid.d, solid.constants.k_B, solid.constants.hbar
    bracket = k0 * f.theta**d / d
    if include_area:
        bracket += hbar * ks * f.theta ** (d - 1) / (k * (d - 1))
    return (k / hbar) ** d * bracket * k


def dulong_petit_limit(solid: DebyeSolid) -> float:
    """Thermodynamic-limit constant ``kappa_0 omega_D0^d / d * k_B``."""
    k0, _ = density_coefficients_debye(solid, include_area=False)
    w0 = _omega_0(solid, bulk_velocity(solid))
    return k0 * w0**solid.d / solid.d * solid.constants.k_B


def heat_capacity_numeric(
    solid: DebyeSolid,
    T: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    rel_step: float = 1e-3,
    include_area: bool = True,
) -> float:
    """Five-point finite difference of :func:`internal_energy_debye` in ``T``."""
    f = debye_frequency(solid, include_area)
    h = rel_step * T
    u = lambda t: internal_energy_debye(solid, t, spec, f, include_area)
    return (u(T - 2 * h) - 8 * u(T - h) + 8 * u(T + h) - u(T + 2 * h)) / (12 * h)
