"""Weyl-type asymptotic mode-count polynomials for hypercubes.

Every count here is a polynomial in a wavenumber-like variable, stored
with ascending coefficients ``a_0 .. a_d``.  The dimensionless form uses
``epsilon = 1/R``; the dimensional forms use ``k`` or ``omega = c k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import DomainError
from .lattice import BoundarySpec, degeneracies
from .numerics import gamma_real, unit_ball_volume

__all__ = [
    "CountPolynomial",
    "axes_hypervolume",
    "continuous_part",
    "scalar_expansion",
    "polarized_expansion",
    "mixed_expansion",
    "em_mode_count",
    "acoustic_mode_count",
]

_VARIABLES = ("epsilon", "k", "omega")

# Provenance labels attached per coefficient.
PAPER = "paper"            # printed explicitly in the source formulas
COMBINATION = "combination"  # follows from the binomial combination, not printed
OMITTED = "omitted"        # beyond the two-term formula; set to zero


@dataclass(frozen=True)
class CountPolynomial:
    """Polynomial ``sum_j a_j x^j`` in the variable named by ``variable``.

    Attributes
    ----------
    variable : str
        One of ``"epsilon"``, ``"k"``, ``"omega"``.
    coefficients : tuple of float
        Ascending coefficients.
    d : int
        Spatial dimension the polynomial describes.
    metadata : mapping
        Boundary spec, box size, speeds and other context.
    provenance : tuple of str
        One label per coefficient.
    """

    variable: str
    coefficients: tuple
    d: int
    metadata: Mapping[str, Any] = field(default_factory=dict)
    provenance: tuple = ()

    def __post_init__(self):
        if self.variable not in _VARIABLES:
            raise DomainError(f"variable must be one of {_VARIABLES}, got {self.variable!r}")
        coeffs = tuple(float(a) for a in self.coefficients)
        if not coeffs:
            raise DomainError("a polynomial needs at least one coefficient")
        if not all(math.isfinite(a) for a in coeffs):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)
        prov = tuple(self.provenance) or (COMBINATION,) * len(coeffs)
        if len(prov) != len(coeffs):
            raise DomainError("provenance needs one label per coefficient")
        object.__setattr__(self, "provenance", prov)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, power: int) -> float:
        return self.coefficients[power] if 0 <= power < len(self.coefficients) else 0.0

    def evaluate(self, x):
        """Value at ``x`` (scalar or array)."""
        value = np.polynomial.polynomial.polyval(x, self.coefficients)
        return float(value) if np.ndim(value) == 0 else value

    __call__ = evaluate

    def derivative(self) -> "CountPolynomial":
        """``dN/dx``, e.g. the mode density ``D(omega)`` of a count in omega."""
        coeffs = [j * a for j, a in enumerate(self.coefficients)][1:] or [0.0]
        prov = self.provenance[1:] or (COMBINATION,)
        meta = dict(self.metadata, derivative_of=self.metadata.get("kind", "count"))
        return CountPolynomial(self.variable, tuple(coeffs), self.d, meta, prov)

    def to_dict(self) -> dict:
        meta = {k: v for k, v in self.metadata.items() if isinstance(v, (int, float, str, bool, type(None)))}
        return {
            "variable": self.variable,
            "d": self.d,
            "coefficients": list(self.coefficients),
            "provenance": list(self.provenance),
            "metadata": meta,
        }


def _check_d(d: int, minimum: int = 1) -> None:
    if int(d) != d or d < minimum:
        raise DomainError(f"dimension must be an integer >= {minimum}, got {d!r}")


def _region_coefficients(d: int) -> list[float]:
    return [math.comb(d, n) * 2.0**-d * unit_ball_volume(d - n) for n in range(d + 1)]


def axes_hypervolume(d: int, eps: float) -> float:
    """Volume added by the unit cubes straddling the coordinate hyperplanes.

    ``sum_{n=1}^{d} binom(d, n) 2^-d omega_{d-n} eps^n``.
    """
    _check_d(d)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    coeffs = _region_coefficients(d)
    return math.fsum(coeffs[n] * eps**n for n in range(1, d + 1))


def continuous_part(d: int) -> CountPolynomial:
    """``F^(d)(eps)``: normalised Neumann count ``eps^d N(1/eps)`` without lattice noise."""
    _check_d(d)
    return CountPolynomial(
        "epsilon",
        tuple(_region_coefficients(d)),
        d,
        {"kind": "continuous_part", "boundary": "allNeumann", "error_order": "w_d"},
        (PAPER,) * (d + 1),
    )


def _scalar_k_coefficients(d: int, neumann: bool, L: float) -> list[float]:
    # Term n of the epsilon expansion becomes the k^(d-n) coefficient.
    # Dirichlet flips the sign of every odd power of epsilon.
    coeffs = [0.0] * (d + 1)
    for n in range(d + 1):
        m = d - n
        sign = 1.0 if neumann or n % 2 == 0 else -1.0
        coeffs[m] = sign * math.comb(d, n) * math.pi ** (-m / 2) * L**m / (2.0**d * gamma_real(m / 2 + 1))
    return coeffs


def _to_variable(coeffs: Sequence[float], speed: float | None) -> tuple[str, list[float]]:
    if speed is None:
        return "k", list(coeffs)
    if speed <= 0:
        raise DomainError(f"speed must be positive, got {speed}")
    return "omega", [a / speed**j for j, a in enumerate(coeffs)]


def scalar_expansion(d: int, neumann: bool = True, L: float = 1.0, speed: float | None = None) -> CountPolynomial:
    """Asymptotic scalar count ``N_pm(k)`` in a box of side ``L``.

    Parameters
    ----------
    d : int
        Dimension, ``>= 0``; ``d = 0`` gives the constant 1.
    neumann : bool
        ``True`` for all-Neumann, ``False`` for all-Dirichlet.
    L : float
        Side length.
    speed : float, optional
        If given, the polynomial is in ``omega`` with ``k = omega/speed``.
    """
    _check_d(d, 0)
    if L <= 0:
        raise DomainError(f"L must be positive, got {L}")
    variable, coeffs = _to_variable(_scalar_k_coefficients(d, neumann, L), speed)
    spec = "allNeumann" if neumann else "allDirichlet"
    meta = {"kind": "scalar", "boundary": spec, "L": L, "speed": speed, "error_order": "w_d"}
    return CountPolynomial(variable, tuple(coeffs), d, meta, (PAPER,) * (d + 1))


def polarized_expansion(
    d: int,
    chi: int,
    xi_tilde: int = 0,
    L: float = 1.0,
    speed: float | None = None,
    xi: Sequence[int] | None = None,
) -> CountPolynomial:
    """Full degree-``d`` count ``sum_n binom(d, n) xi_n N_D^(d-n)(k)``.

    ``xi`` overrides the degeneracies; by default ``xi_0 = d - xi_tilde``
    and ``xi_n = chi - n + 1``.
    """
    _check_d(d)
    if not 0 <= chi <= d:
        raise DomainError(f"need 0 <= chi <= d, got chi={chi}, d={d}")
    xi = list(degeneracies(d, chi, xi_tilde) if xi is None else xi)
    if len(xi) < chi + 1:
        raise DomainError(f"need {chi + 1} degeneracies, got {len(xi)}")
    total = np.zeros(d + 1)
    for n in range(chi + 1):
        part = _scalar_k_coefficients(d - n, False, L) if d - n else [1.0]
        total[: len(part)] += math.comb(d, n) * xi[n] * np.asarray(part)
    variable, coeffs = _to_variable(total, speed)
    # Leading and area terms follow the printed two-term formula.
    prov = [COMBINATION] * (d + 1)
    prov[d] = PAPER
    if d >= 1:
        prov[d - 1] = PAPER
    meta = {
        "kind": "polarized",
        "chi": chi,
        "xi_tilde": xi_tilde,
        "L": L,
        "speed": speed,
        "error_order": "w_d",
    }
    return CountPolynomial(variable, tuple(coeffs), d, meta, tuple(prov))


def mixed_expansion(d: int, chi: int, L: float = 1.0, speed: float | None = None) -> CountPolynomial:
    """Scalar count with ``chi`` Neumann axes: ``sum_n binom(chi, n) N_D^(d-n)(k)``."""
    _check_d(d)
    if not 0 <= chi <= d:
        raise DomainError(f"need 0 <= chi <= d, got chi={chi}, d={d}")
    total = np.zeros(d + 1)
    for n in range(chi + 1):
        part = _scalar_k_coefficients(d - n, False, L) if d - n else [1.0]
        total[: len(part)] += math.comb(chi, n) * np.asarray(part)
    variable, coeffs = _to_variable(total, speed)
    meta = {"kind": "mixed", "chi": chi, "L": L, "speed": speed, "error_order": "w_d"}
    return CountPolynomial(variable, tuple(coeffs), d, meta, (PAPER,) * (d + 1))


def em_mode_count(d: int, L: float = 1.0, c: float = 1.0) -> CountPolynomial:
    """Transverse electromagnetic mode count ``N_em(omega)`` in a perfect conductor box.

    The constant term (and for ``d > 3`` every term below the area
    term) comes from the full combination and is labelled accordingly.
    """
    _check_d(d)
    if d < 2:
        raise DomainError(f"electromagnetic modes need d >= 2, got {d}")
    poly = polarized_expansion(d, 1, 1, L, c)
    prov = list(poly.provenance)
    if d == 3:
        prov[1] = PAPER
    coeffs = list(poly.coefficients)
    if d == 3:
        coeffs[2] = 0.0  # cancels identically; drop the roundoff
    meta = dict(poly.metadata, kind="em", boundary=BoundarySpec.electromagnetic(d).kind)
    return CountPolynomial("omega", tuple(coeffs), d, meta, tuple(prov))


def acoustic_mode_count(d: int, L: float, chi: int, c_bulk: float, c_surface: float) -> CountPolynomial:
    """Two-term elastic-wave count with bulk and surface effective speeds.

    ``chi = d`` is the all-free solid, ``chi = 0`` all-fixed; the area
    term carries the factor ``2 chi - d``.
    """
    _check_d(d)
    if not 0 <= chi <= d:
        raise DomainError(f"need 0 <= chi <= d, got chi={chi}, d={d}")
    if c_bulk <= 0 or c_surface <= 0:
        raise DomainError("speeds must be positive")
    if L <= 0:
        raise DomainError(f"L must be positive, got {L}")
    coeffs = [0.0] * (d + 1)
    prov = [OMITTED] * (d + 1)
    coeffs[d] = d * 2.0**-d * unit_ball_volume(d) * (L / (math.pi * c_bulk)) ** d
    coeffs[d - 1] = d * (2 * chi - d) * 2.0**-d * unit_ball_volume(d - 1) * (L / (math.pi * c_surface)) ** (d - 1)
    prov[d] = prov[d - 1] = PAPER
    meta = {"kind": "acoustic", "chi": chi, "L": L, "c_bulk": c_bulk, "c_surface": c_surface, "error_order": "w_d"}
    return CountPolynomial("omega", tuple(coeffs), d, meta, tuple(prov))
