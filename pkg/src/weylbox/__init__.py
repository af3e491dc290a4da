"""Exact mode counting and Weyl-law corrections for fields in d-dimensional boxes.

Subpackages
-----------
numerics
    Special functions and Bose-Einstein quadrature.
lattice
    Exact integer mode counts.
weyl
    Asymptotic counting polynomials.
em
    Cavity radiation with finite-size corrections.
debye
    Debye model of a finite solid.
"""

__version__ = "0.1.0"

from .errors import (
    ArityError,
    ConvergenceError,
    CountOverflowError,
    DivergenceError,
    DomainError,
    SingularityError,
    WeylboxError,
)
from .numerics import NATURAL, SI, PhysicalConstants, QuadratureSpec
from .lattice import BoundarySpec, count_em_direct, count_lattice, count_mixed_scalar, count_polarized, count_scalar
from .weyl import CountPolynomial, continuous_part, em_mode_count, polarized_expansion, scalar_expansion
from .em import CavityState, CutoffSpec, internal_energy_em
from .debye import DebyeSolid, debye_frequency
