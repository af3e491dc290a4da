"""Exact counts of Helmholtz eigenmodes in the hypercube ``[0, L]^d``.

Modes are labelled by integer tuples ``(n_1, ..., n_d)`` with wavenumber
``k = (pi/L) |n|``.  All counts here take the dimensionless radius
``R = kL/pi`` and count tuples with ``sum n_i^2 < R^2`` (strict).  Neumann
axes allow ``n_i >= 0``, Dirichlet axes ``n_i >= 1``.

``R`` may be an int, a float, a :class:`fractions.Fraction` or a decimal
string such as ``"20.5"``; ``R^2`` is formed exactly as a rational, so
ties on the sphere are decided without rounding.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ArityError, CountOverflowError, DomainError
from .numerics import unit_ball_volume

__all__ = [
    "BoundarySpec",
    "as_radius",
    "count_lattice",
    "count_scalar",
    "count_mixed_scalar",
    "count_polarized",
    "count_em_direct",
    "degeneracies",
    "neumann_from_dirichlet",
    "dirichlet_from_neumann",
    "sawtooth",
]

Radius = Union[int, float, Fraction, str]

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary conditions and polarization of a field in a hypercube.

    ``chi`` axes carry Neumann conditions, the remaining ``d - chi``
    Dirichlet.  A ``vector`` field additionally has ``xi_tilde = 1`` when
    only transverse perturbations are allowed.
    """

    d: int
    chi: int
    polarization: str = "scalar"
    xi_tilde: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if not 0 <= self.chi <= self.d:
            raise DomainError(f"need 0 <= chi <= d, got chi={self.chi}, d={self.d}")
        if self.polarization not in ("scalar", "vector"):
            raise DomainError(f"polarization must be 'scalar' or 'vector', got {self.polarization!r}")
        if self.xi_tilde not in (0, 1):
            raise DomainError(f"xi_tilde must be 0 or 1, got {self.xi_tilde}")
        if self.polarization == "scalar" and self.xi_tilde:
            raise DomainError("xi_tilde only applies to vector fields")
        if self.polarization == "vector" and self.xi_tilde == 1 and self.d < 2:
            raise DomainError("transverse vector fields need d >= 2")

    @classmethod
    def neumann(cls, d: int) -> "BoundarySpec":
        return cls(d, d)

    @classmethod
    def dirichlet(cls, d: int) -> "BoundarySpec":
        return cls(d, 0)

    @classmethod
    def mixed(cls, d: int, chi: int) -> "BoundarySpec":
        return cls(d, chi)

    @classmethod
    def vector(cls, d: int, chi: int, xi_tilde: int) -> "BoundarySpec":
        return cls(d, chi, "vector", xi_tilde)

    @classmethod
    def electromagnetic(cls, d: int) -> "BoundarySpec":
        return cls(d, 1, "vector", 1)

    @classmethod
    def from_string(cls, axes: str) -> "BoundarySpec":
        """Parse a per-axis string such as ``"NND"``.

        Only the number of ``N`` axes matters for a hypercube, so the
        result is normalised to ``mixed(d, chi)``.
        """
        axes = axes.strip().upper()
        if not axes or set(axes) - {"N", "D"}:
            raise DomainError(f"boundary string must consist of N and D, got {axes!r}")
        return cls(len(axes), axes.count("N"))

    @property
    def kind(self) -> str:
        if self.chi == self.d:
            return "allNeumann"
        if self.chi == 0:
            return "allDirichlet"
        return "mixed"

    def lower_bounds(self) -> tuple[int, ...]:
        return (0,) * self.chi + (1,) * (self.d - self.chi)


def as_radius(R: Radius) -> Fraction:
    if isinstance(R, str):
        value = Fraction(R.strip())
    elif isinstance(R, (int, Fraction)):
        value = Fraction(R)
    else:
        if not math.isfinite(R):
            raise DomainError(f"radius must be finite, got {R!r}")
        value = Fraction(R)
    if value <= 0:
        raise DomainError(f"radius must be positive, got {R!r}")
    return value


def sawtooth(x: float) -> float:
    """Fractional part ``x - floor(x)``, always in ``[0, 1)``."""
    if isinstance(x, (int, Fraction)):
        return float(x - math.floor(x))
    # Tiny negative floats round x + 1 up to exactly 1.
    frac = x - math.floor(x)
    return frac if frac < 1.0 else 0.0


def _max_norm(R: Fraction) -> int:
    # Largest integer m with m < R^2, i.e. sum n_i^2 < R^2 <=> sum n_i^2 <= m.
    r2 = R * R
    return (r2.numerator - 1) // r2.denominator


def _check_overflow(d: int, m: int) -> None:
    # Every counted tuple owns the unit cube [n, n+1)^d, and those cubes sit in
    # the positive orthant of a ball of radius sqrt(m) + sqrt(d).
    bound = 2.0**-d * unit_ball_volume(d) * (math.sqrt(m) + math.sqrt(d)) ** d
    if bound > _INT64_MAX:
        raise CountOverflowError(
            f"mode count in d={d} below |n|^2 <= {m} may exceed 2^63 (volume bound {bound:.3g})"
        )


def _isqrt_array(values: np.ndarray) -> np.ndarray:
    root = np.floor(np.sqrt(values.astype(np.float64))).astype(np.int64)
    # Float sqrt can be off by one near perfect squares.
    root[(root + 1) ** 2 <= values] += 1
    root[root * root > values] -= 1
    return root


def _count_pairs(lo1: int, lo2: int, m: int, first: Iterable[int] | None = None) -> int:
    """Two innermost axes: vectorized over the outer, closed form for the inner."""
    if first is None:
        ns = np.arange(lo1, math.isqrt(m) + 1, dtype=np.int64)
    else:
        ns = np.fromiter(first, np.int64)
        ns = ns[ns * ns <= m]
    if ns.size == 0:
        return 0
    inner = _isqrt_array(m - ns * ns) - lo2 + 1
    return int(np.maximum(inner, 0).sum())


def _count(lows: Sequence[int], m: int, first: Iterable[int] | None = None) -> int:
    if m < 0:
        return 0
    if not lows:
        return 1
    if len(lows) == 1:
        if first is not None:
            return sum(1 for n in first if n * n <= m)
        return max(math.isqrt(m) - lows[0] + 1, 0)
    if len(lows) == 2:
        return _count_pairs(lows[0], lows[1], m, first)
    ns = range(lows[0], math.isqrt(m) + 1) if first is None else first
    return sum(_count(lows[1:], m - n * n) for n in ns)


def count_lattice(lower_bounds: Sequence[int], R: Radius, *, chunks: int = 1, workers: int | None = None) -> int:
    """Number of integer tuples with ``n_i >= lower_bounds[i]`` and ``|n|^2 < R^2``.

    ``chunks`` splits the range of the first axis into contiguous blocks
    whose counts are summed; ``workers`` evaluates the blocks on a thread
    pool.  The result is an exact integer and independent of both.
    """
    lows = tuple(int(lo) for lo in lower_bounds)
    if any(lo not in (0, 1) for lo in lows):
        raise DomainError("lower bounds must be 0 (Neumann) or 1 (Dirichlet)")
    if not lows:
        return 1
    m = _max_norm(as_radius(R))
    _check_overflow(len(lows), m)
    if chunks < 1:
        raise DomainError("chunks must be >= 1")
    first_axis = range(lows[0], math.isqrt(max(m, 0)) + 1)
    if chunks == 1 or len(first_axis) <= 1:
        return _count(lows, m)
    blocks = [first_axis[i::chunks] for i in range(chunks)]
    blocks = [b for b in blocks if len(b)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _count(lows, m, b), blocks))
    else:
        parts = [_count(lows, m, b) for b in blocks]
    return sum(parts)


def _as_spec(spec_or_d, chi=None) -> BoundarySpec:
    if isinstance(spec_or_d, BoundarySpec):
        return spec_or_d
    if chi is None:
        raise DomainError("pass a BoundarySpec or (d, chi)")
    return BoundarySpec(int(spec_or_d), int(chi))


def count_scalar(spec: BoundarySpec, R: Radius, **kwargs) -> int:
    """Scalar count for a uniform all-Neumann or all-Dirichlet box."""
    if spec.polarization != "scalar":
        raise DomainError("count_scalar needs a scalar BoundarySpec; use count_polarized")
    if spec.kind == "mixed":
        raise DomainError("count_scalar needs uniform N or D conditions; use count_mixed_scalar")
    return count_lattice(spec.lower_bounds(), R, **kwargs)


def _dirichlet(m: int, R: Radius) -> int:
    return 1 if m == 0 else count_lattice((1,) * m, R)


def count_mixed_scalar(spec: BoundarySpec, R: Radius) -> int:
    """Scalar count with Neumann on ``chi`` axes and Dirichlet on the rest.

    Uses the per-axis enumeration directly; it equals
    ``sum_n binom(chi, n) N_D^(d-n)(R)``, which the tests check.
    """
    if spec.polarization != "scalar":
        raise DomainError("count_mixed_scalar needs a scalar BoundarySpec")
    return count_lattice(spec.lower_bounds(), R)


def degeneracies(d: int, chi: int, xi_tilde: int) -> list[int]:
    """Polarization degeneracy ``xi_n`` of the class with ``n`` vanishing indices.

    ``xi_0 = d - xi_tilde`` and ``xi_n = chi - n + 1`` for ``1 <= n <= chi``.
    """
    if not 0 <= chi <= d:
        raise DomainError(f"need 0 <= chi <= d, got chi={chi}, d={d}")
    return [d - xi_tilde] + [chi - n + 1 for n in range(1, chi + 1)]


def count_polarized(spec: BoundarySpec, R: Radius) -> int:
    """Vector-field mode count ``sum_n binom(d, n) xi_n N_D^(d-n)(R)``."""
    if spec.polarization != "vector":
        raise DomainError("count_polarized needs a vector BoundarySpec")
    xi = degeneracies(spec.d, spec.chi, spec.xi_tilde)
    return sum(math.comb(spec.d, n) * xi[n] * _dirichlet(spec.d - n, R) for n in range(spec.chi + 1))


def count_em_direct(d: int, R: Radius) -> int:
    """Electromagnetic mode count by enumerating field components.

    Component ``E^i`` carries a Neumann factor on axis ``i`` and Dirichlet
    factors elsewhere, so it survives only if ``n_j >= 1`` for all
    ``j != i``.  Transversality ``sum_i k_i E^i = 0`` removes one degree of
    freedom whenever a surviving component has ``k_i != 0``.
    """
    if d < 2:
        raise DomainError(f"electromagnetic modes need d >= 2, got {d}")
    m = _max_norm(as_radius(R))
    _check_overflow(d, m)
    top = math.isqrt(m)
    rest = np.indices((top + 1,) * (d - 1)).reshape(d - 1, -1).T
    rest_norm = (rest * rest).sum(axis=1)
    rest_zeros = (rest == 0).sum(axis=1)
    total = 0
    for n1 in range(top + 1):
        inside = rest_norm + n1 * n1 <= m
        tuples = np.column_stack([np.full(int(inside.sum()), n1), rest[inside]])
        zeros = rest_zeros[inside] + (n1 == 0)
        is_zero = tuples == 0
        # Component i survives when every other index is non-zero.
        alive = (zeros[:, None] - is_zero) == 0
        components = alive.sum(axis=1)
        constrained = (alive & ~is_zero).any(axis=1)
        total += int((components - constrained).sum())
    return total


def neumann_from_dirichlet(dirichlet_counts: Sequence[int], d: int) -> int:
    """``N_N^(d) = sum_j binom(d, j) N_D^(d-j)`` from ``[N_D^(0), ..., N_D^(d)]``."""
    counts = _orders(dirichlet_counts, d)
    return sum(math.comb(d, j) * counts[d - j] for j in range(d + 1))


def dirichlet_from_neumann(neumann_counts: Sequence[int], d: int) -> int:
    """``N_D^(d) = sum_n (-1)^(d-n) binom(d, n) N_N^(n)`` (inverse Pascal matrix)."""
    counts = _orders(neumann_counts, d)
    return sum((-1) ** (d - n) * math.comb(d, n) * counts[n] for n in range(d + 1))


def _orders(counts: Sequence[int], d: int) -> list[int]:
    counts = list(counts)
    if len(counts) < d + 1:
        raise ArityError(f"need counts for orders 0..{d}, got {len(counts)} values")
    return counts
