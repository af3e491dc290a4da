import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylbox.errors import DomainError
from weylbox.lattice import BoundarySpec, count_em_direct, count_mixed_scalar, count_scalar
from weylbox.numerics import unit_ball_volume
from weylbox.weyl import (
    COMBINATION,
    OMITTED,
    PAPER,
    CountPolynomial,
    acoustic_mode_count,
    axes_hypervolume,
    continuous_part,
    em_mode_count,
    mixed_expansion,
    polarized_expansion,
    scalar_expansion,
)

# With L = pi the wavenumber k equals the lattice radius R.
PI = math.pi


class TestCountPolynomial:
    def test_evaluate_and_derivative(self):
        p = CountPolynomial("k", (1.0, 2.0, 3.0), 2)
        assert p(2.0) == 17.0
        assert p.derivative().coefficients == (2.0, 6.0)
        np.testing.assert_allclose(p.evaluate(np.array([0.0, 1.0])), [1.0, 6.0])

    def test_rejects(self):
        with pytest.raises(DomainError):
            CountPolynomial("x", (1.0,), 1)
        with pytest.raises(DomainError):
            CountPolynomial("k", (), 1)
        with pytest.raises(DomainError):
            CountPolynomial("k", (math.nan,), 1)
        with pytest.raises(DomainError):
            CountPolynomial("k", (1.0, 2.0), 1, provenance=(PAPER,))

    def test_to_dict(self):
        doc = scalar_expansion(2).to_dict()
        assert doc["variable"] == "k"
        assert len(doc["coefficients"]) == len(doc["provenance"]) == 3


class TestContinuousPart:
    def test_two_dimensional(self):
        p = continuous_part(2)
        assert p.coefficients == pytest.approx((PI / 4, 1.0, 1 / 4), rel=1e-15)

    def test_three_dimensional(self):
        p = continuous_part(3)
        expected = (PI / 6, 3 * PI / 8, 3 / 4, 1 / 8)
        assert p.coefficients == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_hypervolume_adds_to_leading(self, d):
        eps = 0.03
        total = continuous_part(d)(eps)
        assert total == pytest.approx(2.0**-d * unit_ball_volume(d) + axes_hypervolume(d, eps), rel=1e-14)

    def test_leading_is_weyl(self):
        for d in range(1, 7):
            assert continuous_part(d).coefficient(0) == pytest.approx(2.0**-d * unit_ball_volume(d), rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            axes_hypervolume(2, 0.0)


class TestScalarExpansion:
    def test_matches_continuous_part(self):
        # N(k) at L = pi is eps^-d F(eps) with eps = 1/k.
        for d in range(1, 6):
            big = scalar_expansion(d, True, PI)
            F = continuous_part(d)
            assert big.coefficients == pytest.approx(F.coefficients[::-1], rel=1e-13)

    def test_dirichlet_signs(self):
        p = scalar_expansion(3, False, PI)
        assert p.coefficients == pytest.approx((-1 / 8, 3 / 4, -3 * PI / 8, PI / 6), rel=1e-13)

    def test_zero_dimension(self):
        assert scalar_expansion(0).coefficients == (1.0,)

    def test_speed_rescales(self):
        p = scalar_expansion(3, True, 2.0, speed=3.0)
        q = scalar_expansion(3, True, 2.0)
        assert p.variable == "omega"
        assert p(6.0) == pytest.approx(q(2.0), rel=1e-14)

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_pascal_polynomial_identity(self, d):
        # N_+^(d) = sum_j binom(d, j) N_-^(d-j) holds term by term.
        total = np.zeros(d + 1)
        for j in range(d + 1):
            part = scalar_expansion(d - j, False, 1.7).coefficients
            total[: len(part)] += math.comb(d, j) * np.asarray(part)
        np.testing.assert_allclose(total, scalar_expansion(d, True, 1.7).coefficients, rtol=1e-13, atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("neumann", [True, False])
    def test_tracks_enumeration(self, d, neumann):
        spec = BoundarySpec.neumann(d) if neumann else BoundarySpec.dirichlet(d)
        p = scalar_expansion(d, neumann, PI)
        for R in (40, 80):
            exact = count_scalar(spec, R)
            # Lattice noise is well below the area term.
            assert abs(exact - p(R)) < 0.2 * abs(p.coefficient(d - 1)) * R ** (d - 1) + 5

    def test_domain(self):
        with pytest.raises(DomainError):
            scalar_expansion(2, L=0)
        with pytest.raises(DomainError):
            scalar_expansion(2, speed=-1)


class TestMixedAndPolarized:
    def test_mixed_extremes(self):
        for d in (1, 2, 3, 4):
            np.testing.assert_allclose(
                mixed_expansion(d, d, 1.3).coefficients, scalar_expansion(d, True, 1.3).coefficients, rtol=1e-13
            )
            np.testing.assert_allclose(
                mixed_expansion(d, 0, 1.3).coefficients, scalar_expansion(d, False, 1.3).coefficients, rtol=1e-13
            )

    def test_mixed_area_weight(self):
        # Area coefficient carries (2 chi - d) times the scalar one.
        d = 4
        unit = scalar_expansion(d, True, 1.0).coefficient(d - 1) / d
        for chi in range(d + 1):
            assert mixed_expansion(d, chi).coefficient(d - 1) == pytest.approx((2 * chi - d) * unit, abs=1e-14)

    def test_mixed_tracks_enumeration(self):
        p = mixed_expansion(3, 1, PI)
        exact = count_mixed_scalar(BoundarySpec.mixed(3, 1), 80)
        assert abs(exact - p(80)) < 300

    def test_polarized_leading_has_d_polarizations(self):
        for d in (2, 3, 4):
            scalar = scalar_expansion(d, True, 1.0)
            vector = polarized_expansion(d, d, 0, 1.0)
            assert vector.coefficient(d) == pytest.approx(d * scalar.coefficient(d), rel=1e-14)

    def test_custom_xi(self):
        p = polarized_expansion(2, 2, xi=[1, 0, 0])
        np.testing.assert_allclose(p.coefficients, scalar_expansion(2, False).coefficients, rtol=1e-14)

    def test_provenance(self):
        p = polarized_expansion(3, 1, 1)
        assert p.provenance[3] == PAPER and p.provenance[2] == PAPER
        assert p.provenance[0] == COMBINATION

    def test_domain(self):
        with pytest.raises(DomainError):
            polarized_expansion(2, 3)
        with pytest.raises(DomainError):
            polarized_expansion(3, 2, xi=[1, 1])


class TestEMCount:
    def test_three_dimensional(self):
        p = em_mode_count(3, PI)
        assert p.coefficients == pytest.approx((0.5, -1.5, 0.0, PI / 3), abs=1e-13)
        assert p.coefficients[2] == 0.0
        assert p.provenance[1] == PAPER

    def test_two_dimensional(self):
        assert em_mode_count(2, PI).coefficients == pytest.approx((-0.75, 1.0, PI / 4), rel=1e-13)

    def test_four_dimensional_area(self):
        # Area term binom(4,0) 3 ... - 4 ... 1: -pi/3 at L = pi.
        assert em_mode_count(4, PI).coefficient(3) == pytest.approx(-PI / 3, rel=1e-13)

    def test_general_area_formula(self):
        # Area coefficient d(3 - d) 2^-d omega_{d-1} in R units.
        for d in range(2, 8):
            expected = d * (3 - d) * 2.0**-d * unit_ball_volume(d - 1)
            assert em_mode_count(d, PI).coefficient(d - 1) == pytest.approx(expected, abs=1e-13)

    def test_tracks_enumeration_3d(self):
        p = em_mode_count(3, PI)
        for R in (30, 60):
            # Residual is lattice noise, of order R^1.5 in three dimensions.
            assert abs(count_em_direct(3, R) - p(R)) < 2 * R**1.5

    def test_speed(self):
        p = em_mode_count(3, 1.0, c=2.0)
        q = em_mode_count(3, 1.0, c=1.0)
        assert p(4.0) == pytest.approx(q(2.0), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            em_mode_count(1)


class TestAcoustic:
    def test_three_dimensional_free(self):
        p = acoustic_mode_count(3, PI, 3, 1.0, 1.0)
        assert p.coefficient(3) == pytest.approx(PI / 2, rel=1e-14)
        # 3 * 3 * 2^-3 * pi * (1/1)^2 = 9 pi / 8 in R units
        assert p.coefficient(2) == pytest.approx(9 * PI / 8, rel=1e-14)

    def test_area_vanishes_when_balanced(self):
        assert acoustic_mode_count(4, 1.0, 2, 1.0, 1.0).coefficient(3) == 0.0

    def test_fixed_negative(self):
        assert acoustic_mode_count(3, 1.0, 0, 1.0, 1.0).coefficient(2) < 0

    def test_omitted_lower_terms(self):
        p = acoustic_mode_count(3, 1.0, 3, 1.0, 2.0)
        assert p.coefficients[:2] == (0.0, 0.0)
        assert p.provenance[0] == OMITTED

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.5, 3.0), st.floats(0.1, 1.0), st.integers(2, 4))
    def test_scales_with_speeds(self, c, ratio, d):
        p = acoustic_mode_count(d, 1.0, d, c, c * ratio)
        q = acoustic_mode_count(d, 1.0, d, 1.0, 1.0)
        assert p.coefficient(d) == pytest.approx(q.coefficient(d) / c**d, rel=1e-12)
        assert p.coefficient(d - 1) == pytest.approx(q.coefficient(d - 1) / (c * ratio) ** (d - 1), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            acoustic_mode_count(3, 1.0, 4, 1.0, 1.0)
        with pytest.raises(DomainError):
            acoustic_mode_count(3, 1.0, 1, 0.0, 1.0)
