"""Electromagnetic radiation in a finite hypercubic cavity.

The transverse mode density of a perfectly conducting box carries an
area correction, so the Stefan-Boltzmann and Planck laws pick up terms
of relative order ``hbar c / (k_B L T)``.  With a lowest allowed mode
the energy integrals start at ``x_min = hbar omega_min / (k_B T)`` and
are expressed through

    S_d(x) = int_x^inf t^d / (e^t - 1) dt
           = sum_k binom(d, k) k! x^(d-k) Li_{k+1}(e^-x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .numerics import (
    DEFAULT_QUADRATURE,
    NATURAL,
    PhysicalConstants,
    QuadratureSpec,
    bose_integral,
    gamma_real,
    integrate,
    polylog_exp,
    theta_coeff,
    zeta_real,
)

__all__ = [
    "VALIDITY_THRESHOLD",
    "CavityState",
    "CutoffSpec",
    "CutoffEnergy",
    "density_coefficients_em",
    "spectral_density_em",
    "internal_energy_em",
    "planck_density",
    "s_function",
    "s_tilde",
    "s_d",
    "internal_energy_em_cutoff",
    "internal_energy_em_cutoff_numeric",
    "reference_cutoff_energy_2d",
]

# k_B L T / (hbar c) below this is flagged as outside the quasithermodynamic regime.
VALIDITY_THRESHOLD = 10.0


@dataclass(frozen=True)
class CavityState:
    """A cubic cavity of side ``L`` in ``d`` dimensions at temperature ``T``."""

    d: int
    L: float
    T: float
    constants: PhysicalConstants = NATURAL
    validity: float = field(init=False)
    warning: bool = field(init=False)

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"cavity dimension must be an integer >= 2, got {self.d!r}")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError(f"L must be positive and finite, got {self.L!r}")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise DomainError(f"T must be positive and finite, got {self.T!r}")
        c = self.constants
        ratio = c.k_B * self.L * self.T / (c.hbar * c.c)
        object.__setattr__(self, "validity", ratio)
        object.__setattr__(self, "warning", ratio < VALIDITY_THRESHOLD)

    @property
    def thermal_energy(self) -> float:
        return self.constants.k_B * self.T


@dataclass(frozen=True)
class CutoffSpec:
    """Lowest mode, given as ``x_min = hbar omega_min / (k_B T)``."""

    x_min: float
    omega_min: float

    @classmethod
    def from_x(cls, state: CavityState, x_min: float) -> "CutoffSpec":
        if not (x_min >= 0 and math.isfinite(x_min)):
            raise DomainError(f"x_min must be finite and >= 0, got {x_min!r}")
        return cls(x_min, x_min * state.thermal_energy / state.constants.hbar)

    @classmethod
    def from_omega(cls, state: CavityState, omega_min: float) -> "CutoffSpec":
        if not (omega_min >= 0 and math.isfinite(omega_min)):
            raise DomainError(f"omega_min must be finite and >= 0, got {omega_min!r}")
        return cls(state.constants.hbar * omega_min / state.thermal_energy, omega_min)

    @classmethod
    def lowest_mode(cls, state: CavityState) -> "CutoffSpec":
        """``omega_min = (pi c / L) sqrt(3d/2 - 1)``."""
        omega = math.pi * state.constants.c / state.L * math.sqrt(1.5 * state.d - 1)
        return cls.from_omega(state, omega)


@dataclass(frozen=True)
class CutoffEnergy:
    """Internal energy with a frequency cutoff, in several approximations.

    ``full`` is exact for the two-term density.  ``truncated`` keeps the
    small-``x_min`` expansion to terms linear in ``T``.  ``paper_literal``
    evaluates the printed general-``d`` closed form with its ``C~_d``
    constant; it is kept for comparison only.
    """

    full: float
    truncated: float
    paper_literal: float
    x_min: float
    omega_min: float
    bulk: float
    area: float


def density_coefficients_em(state: CavityState) -> tuple[float, float]:
    """``(a_bulk, a_area)`` with ``D(omega) = a_bulk omega^(d-1) + a_area omega^(d-2)``."""
    d, L, c = state.d, state.L, state.constants.c
    bulk = d * (d - 1) * L**d / (2**d * math.pi ** (d / 2) * gamma_real(d / 2 + 1) * c**d)
    area = d * (d - 1) * (3 - d) * L ** (d - 1) / (
        2**d * math.pi ** ((d - 1) / 2) * gamma_real((d - 1) / 2 + 1) * c ** (d - 1)
    )
    return bulk, area


def spectral_density_em(state: CavityState, omega):
    """Two-term transverse mode density ``D_em(omega)``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("omega must be >= 0")
    bulk, area = density_coefficients_em(state)
    d = state.d
    value = bulk * omega ** (d - 1) + (area * omega ** (d - 2) if area else 0.0)
    return float(value) if value.ndim == 0 else value


def internal_energy_em(state: CavityState) -> float:
    """Stefan-Boltzmann energy with its area correction (no cutoff)."""
    d, L, T = state.d, state.L, state.T
    k = state.constants.k_B
    bulk = (d - 1) * theta_coeff(d, state.constants) * L**d * T ** (d + 1)
    area = (3 - d) * (d / 2) * theta_coeff(d - 1, state.constants) * L ** (d - 1) * T**d
    return k * (bulk + area)


def planck_density(state: CavityState, omega):
    """Spectral energy density ``B(omega, T, L)``, energy per volume per unit omega."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("omega must be > 0")
    d, L = state.d, state.L
    hbar, c = state.constants.hbar, state.constants.c
    bracket = omega / gamma_real(d / 2 + 1) - c * (d - 3) * math.sqrt(math.pi) / (gamma_real((d - 1) / 2 + 1) * L)
    prefactor = d * (d - 1) * hbar * omega ** (d - 1) / (2**d * math.pi ** (d / 2) * c**d)
    value = bracket * prefactor / np.expm1(hbar * omega / state.thermal_energy)
    return float(value) if value.ndim == 0 else value


def _xli(power: int, x: float, s: int) -> float:
    # x^power Li_s(e^-x), with the x -> 0 limit of x^p Li_1 taken as 0.
    if x == 0:
        if power > 0:
            return 0.0
        return zeta_real(s) if s > 1 else math.inf
    return x**power * polylog_exp(s, x)


def s_d(d: int, x: float) -> float:
    """``S_d(x) = int_x^inf t^d/(e^t - 1) dt`` via polylogarithms."""
    if d < 1:
        raise DomainError(f"S_d needs d >= 1, got {d}")
    if not (x >= 0 and math.isfinite(x)):
        raise DomainError(f"x must be finite and >= 0, got {x!r}")
    return math.fsum(math.comb(d, k) * math.factorial(k) * _xli(d - k, x, k + 1) for k in range(d + 1))


def s_function(x: float) -> float:
    """``S(x) = 2 Li_3 + 2x Li_2 + x^2 Li_1`` at ``e^-x``; equals ``S_2``."""
    return s_d(2, x)


def s_tilde(x: float) -> float:
    """``S~(x) = Li_2 + x Li_1`` at ``e^-x``; equals ``S_1``."""
    return s_d(1, x)


def _resolve_cutoff(state: CavityState, cutoff) -> CutoffSpec:
    if cutoff is None:
        return CutoffSpec.lowest_mode(state)
    if isinstance(cutoff, CutoffSpec):
        return cutoff
    return CutoffSpec.from_x(state, float(cutoff))


def _paper_literal(state: CavityState, x: float) -> float:
    if x == 0:
        return math.nan
    d = state.d
    c_d = (math.pi / 8) ** (d / 2) * (3 * d - 2) ** (d / 2) / gamma_real(d / 2 + 1)
    c_1 = (math.pi / 8) ** 0.5 / gamma_real(1.5)
    c_tilde = (-1) ** d / (2 ** (d - 1) * math.pi) * c_1
    return d * (d - 1) * state.thermal_energy * (x**-d * c_d * s_d(d, x) + c_tilde * s_tilde(x) / x)


def internal_energy_em_cutoff(
    state: CavityState,
    cutoff: CutoffSpec | float | None = None,
    *,
    area_method: str = "polylog",
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> CutoffEnergy:
    """Energy of the modes above a cutoff, for the two-term EM density.

    Parameters
    ----------
    state : CavityState
    cutoff : CutoffSpec or float, optional
        A float is read as ``x_min``.  Defaults to the lowest cavity mode.
    area_method : {"polylog", "quadrature"}
        How the area-term tail integral ``S_{d-1}`` is evaluated.

    Returns
    -------
    CutoffEnergy
        With ``x_min = 0`` the full value is the uncut energy.
    """
    cut = _resolve_cutoff(state, cutoff)
    x, d = cut.x_min, state.d
    kT, hbar = state.thermal_energy, state.constants.hbar
    a_bulk, a_area = density_coefficients_em(state)
    if x == 0:
        u = internal_energy_em(state)
        return CutoffEnergy(u, u, math.nan, 0.0, 0.0, math.nan, math.nan)
    bulk = a_bulk * kT ** (d + 1) / hbar**d * s_d(d, x)
    if a_area == 0:
        area = 0.0
    elif area_method == "polylog":
        area = a_area * kT**d / hbar ** (d - 1) * s_d(d - 1, x)
    elif area_method == "quadrature":
        area = a_area * kT**d / hbar ** (d - 1) * bose_integral(d - 1, x, math.inf, spec)
    else:
        raise DomainError(f"area_method must be 'polylog' or 'quadrature', got {area_method!r}")
    # Drop the O(x) tails of S_d and S_{d-1}: U_inf - k_B T N(omega_min).
    n_min = a_bulk * cut.omega_min**d / d + (a_area * cut.omega_min ** (d - 1) / (d - 1) if a_area else 0.0)
    truncated = internal_energy_em(state) - kT * n_min
    return CutoffEnergy(bulk + area, truncated, _paper_literal(state, x), x, cut.omega_min, bulk, area)


def internal_energy_em_cutoff_numeric(
    state: CavityState, omega_min: float = 0.0, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Direct quadrature of ``D_em(omega) hbar omega / (e^(hbar omega/k_B T) - 1)`` above ``omega_min``."""
    if not omega_min >= 0:
        raise DomainError(f"omega_min must be >= 0, got {omega_min!r}")
    if math.isinf(omega_min):
        return 0.0
    kT, hbar, d = state.thermal_energy, state.constants.hbar, state.d
    a_bulk, a_area = density_coefficients_em(state)
    scale = kT / hbar

    def integrand(x):
        omega = scale * x
        density = a_bulk * omega ** (d - 1) + a_area * omega ** (d - 2)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            value = density * kT * x / np.expm1(x)
        return np.where(x > 0, value, 0.0 if d > 2 else a_area * kT)

    return scale * integrate(integrand, hbar * omega_min / kT, math.inf, spec)


def reference_cutoff_energy_2d(state: CavityState) -> float:
    """Literature two-dimensional value ``2 zeta(3)/pi L^2 T^3 (k^3/hbar^2 c^2) - pi k T``.

    It uses the bulk density with two polarizations, so its leading term
    is twice that of :func:`internal_energy_em`.
    """
    if state.d != 2:
        raise DomainError("the reference cutoff energy is two-dimensional")
    c = state.constants
    return 2 * zeta_real(3) / math.pi * c.k_B**3 / (c.hbar**2 * c.c**2) * state.L**2 * state.T**3 - math.pi * c.k_B * state.T
