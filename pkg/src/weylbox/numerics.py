"""Special functions and Bose-Einstein quadrature.

Everything here is a pure function of its arguments.  Natural units
(hbar = k_B = c = 1) are the default throughout the package; pass an
explicit :class:`PhysicalConstants` to work in SI.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.special

from .errors import ConvergenceError, DivergenceError, DomainError

__all__ = [
    "PhysicalConstants",
    "QuadratureSpec",
    "NATURAL",
    "SI",
    "gamma_real",
    "zeta_real",
    "polylog",
    "polylog_exp",
    "unit_ball_volume",
    "theta_coeff",
    "integrate",
    "bose_integral",
    "log_partition",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Reduced Planck constant, Boltzmann constant and a wave speed.

    ``c`` is whatever speed the dispersion relation ``k = omega / c`` uses:
    the speed of light for the cavity, a sound speed for a solid.
    """

    hbar: float = 1.0
    k_B: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "k_B", "c"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    def with_speed(self, c: float) -> "PhysicalConstants":
        return PhysicalConstants(self.hbar, self.k_B, c)


NATURAL = PhysicalConstants()
# CODATA 2018 exact values.
SI = PhysicalConstants(hbar=1.054571817e-34, k_B=1.380649e-23, c=299792458.0)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


# ---------------------------------------------------------------------------
# gamma, zeta, polylogarithm


def gamma_real(x: float) -> float:
    """Gamma function for positive real ``x``.

    Integers and half-integers are built from exact integer arithmetic so
    that e.g. ``gamma_real(2.5) == 3*sqrt(pi)/4`` to the last bit or so.
    """
    if not x > 0:
        raise DomainError(f"gamma_real requires x > 0, got {x!r}")
    twice = 2 * x
    if twice == int(twice) and x < 170:
        n2 = int(twice)
        if n2 % 2 == 0:
            return float(math.factorial(n2 // 2 - 1))
        # Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
        m = (n2 - 1) // 2
        return math.factorial(2 * m) / (4**m * math.factorial(m)) * math.sqrt(math.pi)
    return math.gamma(x)


def zeta_real(s: float) -> float:
    """Riemann zeta function for real ``s > 1``."""
    if not s > 1:
        raise DomainError(f"zeta_real requires s > 1, got {s!r}")
    return float(scipy.special.zeta(s))


@lru_cache(maxsize=None)
def _bernoulli(nmax: int) -> tuple[float, ...]:
    # B_1 = -1/2 convention (x / (e^x - 1) generating function).
    return tuple(float(b) for b in scipy.special.bernoulli(nmax))


def _zeta_integer(n: int) -> float:
    """zeta(n) for any integer n != 1, including non-positive ones."""
    if n > 1:
        return zeta_real(n)
    if n == 0:
        return -0.5
    m = -n
    # zeta(-m) = (-1)^m B_{m+1} / (m+1); vanishes for even m > 0.
    if m % 2 == 0:
        return 0.0
    return (-1) ** m * _bernoulli(m + 1)[m + 1] / (m + 1)


def polylog_exp(s: int, mu: float) -> float:
    """``Li_s(exp(-mu))`` for integer ``s >= 1`` and ``mu >= 0``.

    Working in ``mu`` avoids the cancellation in ``1 - z`` when the argument
    sits close to 1, which is where the cutoff energies live.
    """
    if int(s) != s or s < 1:
        raise DomainError(f"polylog order must be an integer >= 1, got {s!r}")
    s = int(s)
    if mu < 0 or math.isnan(mu):
        raise DomainError(f"polylog_exp requires mu >= 0, got {mu!r}")
    if s == 1:
        if mu == 0:
            raise DivergenceError("Li_1(1) diverges")
        # expm1 keeps small mu accurate, log1p keeps large mu accurate.
        return -math.log(-math.expm1(-mu)) if mu < math.log(2.0) else -math.log1p(-math.exp(-mu))
    if mu == 0:
        return zeta_real(s)
    if mu == math.inf:
        return 0.0
    if mu > math.log(2.0):
        return _polylog_series(s, math.exp(-mu))
    return _polylog_near_one(s, mu)


def _polylog_series(s: int, z: float) -> float:
    # Terms fall faster than z^k; the tail after K terms is below
    # z^(K+1) / ((K+1)^s (1 - z)).
    total = 0.0
    zk = z
    k = 1
    while True:
        term = zk / k**s
        total += term
        k += 1
        zk *= z
        if zk / (k**s * (1.0 - z)) < 1e-17 * total:
            return total


def _polylog_near_one(s: int, mu: float) -> float:
    # Li_s(e^-mu) = sum_{k != s-1} zeta(s-k) (-mu)^k / k!
    #              + (-mu)^(s-1) / (s-1)! * (H_{s-1} - ln mu),   |mu| < 2 pi
    harmonic = sum(1.0 / j for j in range(1, s))
    total = (-mu) ** (s - 1) / math.factorial(s - 1) * (harmonic - math.log(mu))
    for k in range(0, 80):
        if k == s - 1:
            continue
        zeta_value = _zeta_integer(s - k)
        if zeta_value == 0.0:
            continue
        term = zeta_value * (-mu) ** k / math.factorial(k)
        total += term
        if k > s + 2 and abs(term) < 1e-18 * abs(total):
            break
    return total


def polylog(s: int, z: float) -> float:
    """Polylogarithm ``Li_s(z)`` for integer ``s >= 1`` and ``0 <= z <= 1``."""
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"polylog requires 0 <= z <= 1, got {z!r}")
    if z == 0.0:
        if int(s) != s or s < 1:
            raise DomainError(f"polylog order must be an integer >= 1, got {s!r}")
        return 0.0
    if s == 1:
        if z == 1.0:
            raise DivergenceError("Li_1(1) diverges")
        return -math.log1p(-z)
    if z <= 0.5:
        if int(s) != s or s < 1:
            raise DomainError(f"polylog order must be an integer >= 1, got {s!r}")
        return _polylog_series(int(s), z)
    return polylog_exp(s, -math.log(z))


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in ``d`` dimensions, ``pi^(d/2) / Gamma(d/2 + 1)``."""
    if d < 0:
        raise DomainError(f"dimension must be >= 0, got {d}")
    return math.pi ** (d / 2) / gamma_real(d / 2 + 1)


def theta_coeff(m: int, constants: PhysicalConstants = NATURAL) -> float:
    """Stefan-Boltzmann-type coefficient for the ``T^(m+1)`` energy term.

    ``zeta(m+1) Gamma(m+1) m / (2^m pi^(m/2) Gamma(m/2+1)) * (k_B/(hbar c))^m``
    """
    if m < 1:
        raise DomainError(f"theta_coeff requires m >= 1, got {m}")
    pure = zeta_real(m + 1) * gamma_real(m + 1) * m / (2**m * math.pi ** (m / 2) * gamma_real(m / 2 + 1))
    return pure * (constants.k_B / (constants.hbar * constants.c)) ** m


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature

_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss-7 nodes are the odd-indexed Kronrod nodes.
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(f(mid + half * _NODES), dtype=float)
    kron = half * float(_WEIGHTS_K @ fx)
    gauss = half * float(_WEIGHTS_G @ fx)
    err = abs(kron - gauss)
    # Roundoff floor.
    err = max(err, 50 * np.finfo(float).eps * abs(half) * float(_WEIGHTS_K @ np.abs(fx)))
    return kron, err


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    full_output: bool = False,
):
    """Adaptive G7/K15 quadrature of a vectorised integrand on ``[a, b]``.

    An infinite upper limit is mapped to ``[0, 1)`` via ``x = a + t/(1-t)``.
    Panels with the largest error estimate are bisected until the summed
    error meets ``max(abs_tol, rel_tol * |I|)``.

    Returns the integral, or ``(integral, error)`` with ``full_output``.

    Raises
    ------
    ConvergenceError
        If the tolerance is not met within ``spec.max_subdivisions`` panels.
    """
    if not (a < b):
        if a == b:
            return (0.0, 0.0) if full_output else 0.0
        raise DomainError(f"integrate requires a < b, got [{a}, {b}]")
    if not math.isfinite(a):
        raise DomainError("lower limit must be finite")
    g = f
    lo, hi = a, b
    if math.isinf(b):
        def g(t, _f=f, _a=a):
            t = np.asarray(t, dtype=float)
            one_minus = 1.0 - t
            return _f(_a + t / one_minus) / one_minus**2
        lo, hi = 0.0, 1.0

    value, err = _gk15(g, lo, hi)
    heap = [(-err, lo, hi, value)]
    total, total_err = value, err
    panels = 1
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if panels >= spec.max_subdivisions:
            raise ConvergenceError(
                f"quadrature on [{a}, {b}] did not converge in {panels} panels "
                f"(estimate {total!r}, error {total_err:.3g})",
                estimate=total,
                error=total_err,
            )
        neg_err, p_lo, p_hi, p_val = heapq.heappop(heap)
        p_mid = 0.5 * (p_lo + p_hi)
        left, left_err = _gk15(g, p_lo, p_mid)
        right, right_err = _gk15(g, p_mid, p_hi)
        heapq.heappush(heap, (-left_err, p_lo, p_mid, left))
        heapq.heappush(heap, (-right_err, p_mid, p_hi, right))
        panels += 1
        # Re-sum from the heap to keep the running total free of drift.
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return (total, total_err) if full_output else total


def _bose_head(p: float, h: float) -> float:
    # int_0^h x^(p-1) * x/(e^x-1) dx via the Bernoulli series; needs h < 2 pi.
    bern = _bernoulli(40)
    total = 0.0
    for n, b_n in enumerate(bern):
        if b_n == 0.0:
            continue
        term = b_n * h ** (n + p) / (math.factorial(n) * (n + p))
        total += term
        if n > 4 and abs(term) < 1e-18 * abs(total):
            break
    return total


def bose_integral(
    p: float,
    lower: float = 0.0,
    upper: float = math.inf,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    fugacity: float = 1.0,
) -> float:
    """``int_lower^upper x^p / (e^x / z - 1) dx`` with fugacity ``z``.

    For ``z = 1`` and ``p < 1`` the integrand blows up at ``x = 0``; the
    stretch ``[0, min(upper, 1)]`` is then done with the Bernoulli series of
    ``x / (e^x - 1)`` and only the remainder goes to quadrature.
    """
    if p < 0:
        raise DomainError(f"bose_integral requires p >= 0, got {p!r}")
    if lower < 0:
        raise DomainError(f"bose_integral requires lower >= 0, got {lower!r}")
    if not 0.0 < fugacity <= 1.0:
        raise DomainError(f"fugacity must lie in (0, 1], got {fugacity!r}")
    if upper == lower:
        return 0.0
    if not lower < upper:
        raise DomainError(f"bose_integral requires lower < upper, got [{lower}, {upper}]")

    if fugacity == 1.0:
        def integrand(x):
            x = np.asarray(x, dtype=float)
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                out = x**p / np.expm1(x)
            # Exponential underflow/overflow far out in the tail.
            return np.where(np.isfinite(out), out, 0.0)
    else:
        def integrand(x):
            x = np.asarray(x, dtype=float)
            e = np.exp(-x)
            return fugacity * x**p * e / (1.0 - fugacity * e)

    head = 0.0
    if fugacity == 1.0 and lower == 0.0 and p < 1.0:
        if p == 0.0:
            raise DivergenceError("int_0 dx/(e^x - 1) diverges at x = 0")
        h = min(upper, 1.0)
        head = _bose_head(p, h)
        lower = h
        if lower >= upper:
            return head
    return head + integrate(integrand, lower, upper, spec)


def _density_coefficients(density) -> Sequence[float]:
    coeffs = getattr(density, "coefficients", density)
    return [float(a) for a in coeffs]


def log_partition(
    density,
    T: float,
    constants: PhysicalConstants = NATURAL,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    omega_min: float = 0.0,
    omega_max: float = math.inf,
) -> float:
    """``ln Z = -int D(omega) ln(1 - exp(-hbar omega / k_B T)) d omega``.

    ``density`` is a polynomial in omega, given either as ascending
    coefficients or as any object with a ``coefficients`` attribute (a
    :class:`weylbox.weyl.CountPolynomial` in omega works directly).

    The full half-line uses ``int_0^inf x^p ln(1-e^-x) dx = -Gamma(p+1) zeta(p+2)``;
    finite limits integrate by parts onto :func:`bose_integral`.
    """
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T!r}")
    if omega_min < 0 or not omega_min < omega_max:
        raise DomainError("need 0 <= omega_min < omega_max")
    coeffs = _density_coefficients(density)
    if not all(math.isfinite(a) for a in coeffs):
        raise DomainError("density coefficients must be finite")
    scale = constants.k_B * T / constants.hbar
    x_lo = omega_min / scale
    x_hi = omega_max / scale if math.isfinite(omega_max) else math.inf

    def boundary(p, x):
        # -x^(p+1) ln(1 - e^-x) / (p+1); vanishes at 0 and infinity.
        if x == 0.0 or math.isinf(x):
            return 0.0
        return -(x ** (p + 1)) * math.log(-math.expm1(-x)) / (p + 1)

    total = 0.0
    for p, a in enumerate(coeffs):
        if a == 0.0:
            continue
        if x_lo == 0.0 and math.isinf(x_hi):
            j = gamma_real(p + 1) * zeta_real(p + 2)
        else:
            j = boundary(p, x_hi) - boundary(p, x_lo)
            j += bose_integral(p + 1, x_lo, x_hi, spec) / (p + 1)
        total += a * scale ** (p + 1) * j
    return total
