import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import reference_quad
from weylbox.em import (
    CavityState,
    CutoffSpec,
    density_coefficients_em,
    internal_energy_em,
    internal_energy_em_cutoff,
    internal_energy_em_cutoff_numeric,
    planck_density,
    reference_cutoff_energy_2d,
    s_d,
    s_function,
    s_tilde,
    spectral_density_em,
)
from weylbox.errors import DomainError
from weylbox.numerics import PhysicalConstants, zeta_real

ZETA3 = 1.2020569031595942


def series_s(x):
    # Small-x expansion of S through x^6, and the first omitted term.
    value = 2 * ZETA3 - x**2 / 2 + x**3 / 6 - x**4 / 48 + x**6 / 4320
    return value, x**8 / 241920


def series_s_tilde(x):
    value = math.pi**2 / 6 - x + x**2 / 4 - x**3 / 36 + x**5 / 3600
    return value, x**7 / 211680


def mp_energy(d, L, T, x_min=0.0):
    # Independent two-term density integral in natural units.
    a_b = d * (d - 1) * L**d / (2**d * mpmath.pi ** (mpmath.mpf(d) / 2) * mpmath.gamma(mpmath.mpf(d) / 2 + 1))
    a_a = d * (d - 1) * (3 - d) * L ** (d - 1) / (
        2**d * mpmath.pi ** (mpmath.mpf(d - 1) / 2) * mpmath.gamma(mpmath.mpf(d - 1) / 2 + 1)
    )
    f = lambda w: (a_b * w ** (d - 1) + a_a * w ** (d - 2)) * w / mpmath.expm1(w / T)
    with mpmath.workdps(30):
        return float(mpmath.quad(f, [x_min * T, x_min * T + 1, mpmath.inf]))


class TestState:
    def test_validity(self):
        assert CavityState(3, 1.0, 1.0).warning
        assert not CavityState(3, 20.0, 1.0).warning
        assert CavityState(3, 2.0, 3.0).validity == 6.0

    @pytest.mark.parametrize("kwargs", [dict(d=1, L=1, T=1), dict(d=3, L=0, T=1), dict(d=3, L=1, T=-1),
                                        dict(d=3, L=math.inf, T=1)])
    def test_domain(self, kwargs):
        with pytest.raises(DomainError):
            CavityState(**kwargs)


class TestDensity:
    def test_three_dimensional(self):
        bulk, area = density_coefficients_em(CavityState(3, 1.0, 1.0))
        assert bulk == pytest.approx(1 / math.pi**2, rel=1e-14)
        assert area == 0.0

    def test_two_dimensional(self):
        # d N/d omega of (pi/4) R^2 + R with R = omega L / pi.
        bulk, area = density_coefficients_em(CavityState(2, 1.0, 1.0))
        assert bulk == pytest.approx(1 / (2 * math.pi), rel=1e-14)
        assert area == pytest.approx(1 / math.pi, rel=1e-14)

    def test_spectral_array(self):
        state = CavityState(2, 2.0, 1.0)
        w = np.array([0.5, 1.0])
        b, a = density_coefficients_em(state)
        np.testing.assert_allclose(spectral_density_em(state, w), b * w + a, rtol=1e-15)
        with pytest.raises(DomainError):
            spectral_density_em(state, -1.0)


class TestEnergy:
    def test_stefan_boltzmann(self):
        assert internal_energy_em(CavityState(3, 1.0, 1.0)) == pytest.approx(math.pi**2 / 15, rel=1e-12)

    def test_two_dimensional(self):
        assert internal_energy_em(CavityState(2, 1.0, 1.0)) == pytest.approx(zeta_real(3) / math.pi + math.pi / 6,
                                                                            rel=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    @pytest.mark.parametrize("L,T", [(1.0, 1.0), (3.0, 0.7)])
    def test_against_mpmath(self, d, L, T):
        assert internal_energy_em(CavityState(d, L, T)) == pytest.approx(mp_energy(d, L, T), rel=1e-10)

    def test_numeric_zero_cutoff(self):
        state = CavityState(3, 1.0, 1.0)
        assert internal_energy_em_cutoff_numeric(state) == pytest.approx(math.pi**2 / 15, rel=1e-10)

    def test_si_units_scale(self):
        c = PhysicalConstants(hbar=2.0, k_B=3.0, c=5.0)
        nat = internal_energy_em(CavityState(3, 7.0, 11.0))
        si = internal_energy_em(CavityState(3, 7.0, 11.0, c))
        # U = k T (k T L / hbar c)^3 pi^2/15 scaling
        assert si == pytest.approx(nat * 3.0 * (3.0 / 10.0) ** 3, rel=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 5), st.floats(0.5, 20.0), st.floats(0.1, 10.0), st.floats(0.25, 4.0))
    def test_homogeneity(self, d, L, T, lam):
        # Both terms depend on L T only, times k_B T: U(lam L, T/lam) = U(L, T)/lam.
        u = internal_energy_em(CavityState(d, L, T))
        assert internal_energy_em(CavityState(d, lam * L, T / lam)) == pytest.approx(u / lam, rel=1e-12)


class TestPlanck:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_integrates_to_energy_density(self, d):
        state = CavityState(d, 2.0, 1.5)
        ref = reference_quad(lambda w: planck_density(state, w), 1e-12, 80.0, n=400)
        assert ref * state.L**d == pytest.approx(internal_energy_em(state), rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            planck_density(CavityState(3, 1.0, 1.0), 0.0)


class TestPolylogForms:
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    @pytest.mark.parametrize("x", [0.0, 0.01, 0.3, 2.0, 15.0])
    def test_s_d_quadrature(self, d, x):
        with mpmath.workdps(30):
            expected = float(mpmath.quad(lambda t: t**d / mpmath.expm1(t), [x, x + 1, mpmath.inf]))
        assert s_d(d, x) == pytest.approx(expected, rel=1e-12)

    def test_aliases(self):
        assert s_function(0.4) == s_d(2, 0.4)
        assert s_tilde(0.4) == s_d(1, 0.4)

    @pytest.mark.parametrize("x", list(np.linspace(0.01, 0.2, 20)))
    def test_series_within_next_term(self, x):
        # Next-term bound plus a few ulps of rounding in the sums.
        value, bound = series_s(x)
        assert abs(value - s_function(x)) <= bound + 8e-16 * value
        value, bound = series_s_tilde(x)
        assert abs(value - s_tilde(x)) <= bound + 8e-16 * value

    def test_domain(self):
        with pytest.raises(DomainError):
            s_d(0, 1.0)
        with pytest.raises(DomainError):
            s_d(2, -0.1)


class TestCutoff:
    def test_lowest_mode(self):
        state = CavityState(3, 10.0, 1.0)
        cut = CutoffSpec.lowest_mode(state)
        assert cut.omega_min == pytest.approx(math.pi / 10 * math.sqrt(3.5), rel=1e-15)
        assert cut.x_min == pytest.approx(cut.omega_min, rel=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4])
    @pytest.mark.parametrize("x", [0.01, 0.1, 0.5, 1.0])
    def test_polylog_matches_quadrature(self, d, x):
        state = CavityState(d, 10.0, 1.0)
        full = internal_energy_em_cutoff(state, x).full
        numeric = internal_energy_em_cutoff_numeric(state, x)
        assert full == pytest.approx(numeric, rel=1e-10)
        assert full == pytest.approx(mp_energy(d, 10.0, 1.0, x), rel=1e-10)

    def test_area_methods_agree(self):
        state = CavityState(4, 10.0, 1.0)
        a = internal_energy_em_cutoff(state, 0.3, area_method="polylog").full
        b = internal_energy_em_cutoff(state, 0.3, area_method="quadrature").full
        assert a == pytest.approx(b, rel=1e-10)
        with pytest.raises(DomainError):
            internal_energy_em_cutoff(state, 0.3, area_method="simpson")

    def test_zero_cutoff_is_uncut(self):
        state = CavityState(2, 5.0, 1.0)
        assert internal_energy_em_cutoff(state, 0.0).full == internal_energy_em(state)

    def test_truncated_2d(self):
        state = CavityState(2, 10.0, 1.0)
        r = internal_energy_em_cutoff(state)
        # U_inf - T N(omega_min) with omega_min = pi sqrt(2) / L
        w = math.pi * math.sqrt(2) / 10
        n_min = w**2 * 100 / (4 * math.pi) + w * 10 / math.pi
        assert r.truncated == pytest.approx(internal_energy_em(state) - n_min, rel=1e-14)
        assert r.truncated == pytest.approx(40.5136, abs=1e-4)
        # Truncation error is O(x_min^3) relative to the leading term.
        assert abs(r.full - r.truncated) < r.x_min**2 * r.full

    def test_truncation_error_shrinks(self):
        errs = []
        for L in (10.0, 20.0, 40.0):
            r = internal_energy_em_cutoff(CavityState(3, L, 1.0))
            errs.append(abs(r.full - r.truncated) / r.full)
        assert errs[0] > errs[1] > errs[2]

    def test_monotone_in_cutoff(self):
        state = CavityState(3, 10.0, 1.0)
        values = [internal_energy_em_cutoff(state, x).full for x in (0.0, 0.1, 0.5, 1.0, 3.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_paper_literal_kept(self):
        r = internal_energy_em_cutoff(CavityState(3, 10.0, 1.0))
        assert math.isfinite(r.paper_literal)
        assert math.isnan(internal_energy_em_cutoff(CavityState(3, 10.0, 1.0), 0.0).paper_literal)

    def test_reference_2d(self):
        state = CavityState(2, 10.0, 1.0)
        assert reference_cutoff_energy_2d(state) == pytest.approx(2 * zeta_real(3) / math.pi * 100 - math.pi, rel=1e-14)
        with pytest.raises(DomainError):
            reference_cutoff_energy_2d(CavityState(3, 10.0, 1.0))

    def test_domain(self):
        state = CavityState(3, 1.0, 1.0)
        with pytest.raises(DomainError):
            CutoffSpec.from_x(state, -1.0)
        with pytest.raises(DomainError):
            internal_energy_em_cutoff_numeric(state, -1.0)
        assert internal_energy_em_cutoff_numeric(state, math.inf) == 0.0
