import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from reflect_lab import (
    ElementGeometry,
    ModelError,
    PropagationPath,
    SaturationError,
    far_field_gain,
    far_field_relative_error,
    free_space_gain,
    planar_exact_gain,
    rule_of_thumb_max,
    spherical_total_gain,
)
from reflect_lab.propagation import SPEED_OF_LIGHT, GainModel, planar_gain_array, spherical_cap

from conftest import mp_alpha, mp_far_field_error


def square_aperture_quadrature(n, area, d):
    """Power fraction through an N*A square at broadside, by 2-D quadrature of d / (4 pi r^3)."""
    half = math.sqrt(n * area) / 2
    f = lambda y, x: d / (4 * math.pi * (x * x + y * y + d * d) ** 1.5)  # noqa: E731
    v, _ = integrate.dblquad(f, 0, half, 0, half, epsabs=0, epsrel=1e-12)
    return 4 * v


class TestGeometry:
    def test_isotropic_area(self):
        g = ElementGeometry.isotropic(0.1)
        assert g.area == pytest.approx(0.01 / (4 * math.pi), rel=1e-12)
        assert g.is_isotropic

    def test_from_frequency_uses_exact_c(self):
        g = ElementGeometry.from_frequency(3e9)
        assert g.wavelength == SPEED_OF_LIGHT / 3e9
        assert g.is_isotropic

    @pytest.mark.parametrize("wl,area", [(0, 1), (-1, 1), (1, 0), (math.inf, 1), (1, math.nan)])
    def test_rejects_bad_values(self, wl, area):
        with pytest.raises(ValueError):
            ElementGeometry(wl, area)

    def test_path_positive(self):
        with pytest.raises(ValueError):
            PropagationPath(0.0)


class TestFreeSpaceGain:
    def test_vanishing_aperture(self):
        assert free_space_gain(ElementGeometry(0.1, 1e-30), 10.0) < 1e-32

    def test_three_ghz_at_2p5m(self):
        # mpmath: A = (c/3e9)^2/(4 pi), beta = A/(4 pi 2.5^2) = 1.0118104279366134e-5
        g = ElementGeometry.from_frequency(3e9)
        beta = free_space_gain(g, 2.5)
        assert beta == pytest.approx(1.0118104279366134e-5, rel=1e-12)
        assert 10 * math.log10(beta) == pytest.approx(-49.949008489717, abs=1e-9)

    def test_inverse_square(self, geom_01):
        ratio = free_space_gain(geom_01, 2.5) / free_space_gain(geom_01, 25.0)
        assert ratio == pytest.approx(100.0, rel=1e-14)

    def test_rejects_gain_above_one(self):
        with pytest.raises(ModelError):
            free_space_gain(ElementGeometry(1.0, 20.0), 1.0)

    def test_boundary_is_one(self):
        g = ElementGeometry(1.0, 4 * math.pi)
        assert free_space_gain(g, 1.0) == 1.0


class TestSpherical:
    def test_single_element(self):
        assert spherical_total_gain(1, 1e-5).value == 1e-5

    def test_full_sphere_boundary(self):
        tg = spherical_total_gain(10**5, 1e-5)
        assert tg.value == 1.0
        assert tg.model is GainModel.SPHERICAL

    def test_saturation_carries_cap(self):
        with pytest.raises(SaturationError) as info:
            spherical_total_gain(10**5 + 1, 1e-5)
        assert info.value.n_max == 10**5

    @given(st.floats(min_value=1e-9, max_value=1.0))
    def test_cap_is_tight(self, beta):
        cap = spherical_cap(beta)
        assert cap * beta <= 1.0
        assert (cap + 1) * beta > 1.0
        assert spherical_total_gain(cap, beta).value <= 1.0
        with pytest.raises(SaturationError):
            spherical_total_gain(cap + 1, beta)

    @pytest.mark.parametrize("n", [0, -3, 1.5, True])
    def test_rejects_bad_n(self, n):
        with pytest.raises(ValueError):
            spherical_total_gain(n, 1e-3)


class TestPlanarExact:
    def test_far_field_reduction(self):
        g = ElementGeometry(0.1, 7.95e-4)
        alpha = planar_exact_gain(1, g, 25.0).value
        assert alpha == pytest.approx(free_space_gain(g, 25.0), rel=1e-3)

    @pytest.mark.parametrize("n", [1, 100, 10**4, 10**6, 10**8, 10**12])
    def test_matches_high_precision(self, geom_01, n):
        value = planar_exact_gain(n, geom_01, 2.5).value
        assert value == pytest.approx(float(mp_alpha(n, geom_01.area, 2.5)), rel=1e-13)

    def test_n_1e8_frozen(self, geom_01):
        # mpmath reference: 0.48872048876349532
        value = planar_exact_gain(10**8, geom_01, 2.5).value
        assert value == pytest.approx(0.48872048876349532, rel=1e-13)
        assert 0.45 <= value < 0.5

    def test_limit_one_half(self, geom_01):
        n = int(1e9 * 2.5**2 / geom_01.area)
        value = planar_exact_gain(n, geom_01, 2.5).value
        assert 0.49 < value < 0.5

    def test_stays_below_half_at_overflow_bound(self, geom_01):
        assert planar_exact_gain(10**15, geom_01, 0.1).value < 0.5

    def test_far_field_regime_matches_aperture_quadrature(self, geom_01):
        # independent physics check; only the far-field regime is compared
        for n in (1, 10, 100):
            q = square_aperture_quadrature(n, geom_01.area, 25.0)
            assert planar_exact_gain(n, geom_01, 25.0).value == pytest.approx(q, rel=1e-4)

    def test_strictly_increasing_in_n(self, geom_01):
        n = np.unique(np.logspace(0, 12, 500).astype(np.int64))
        a = planar_gain_array(n, geom_01.area, 2.5)
        assert np.all(np.diff(a) > 0)

    @given(
        st.integers(min_value=1, max_value=10**12),
        st.floats(min_value=0.5, max_value=500.0),
        st.floats(min_value=1.01, max_value=10.0),
    )
    def test_strictly_decreasing_in_distance(self, n, d, factor):
        g = ElementGeometry.isotropic(0.1)
        assert planar_exact_gain(n, g, d * factor).value < planar_exact_gain(n, g, d).value


class TestFarField:
    def test_single_element_equals_free_space(self, geom_01):
        beta = free_space_gain(geom_01, 2.5)
        assert far_field_gain(1, geom_01, 2.5).value == beta
        assert spherical_total_gain(1, beta).value == beta

    def test_linear(self):
        g = ElementGeometry(1.0, 4 * math.pi * 1e-5)
        assert far_field_gain(100, g, 1.0).value == pytest.approx(1e-3, rel=1e-14)

    def test_no_error_past_validity(self, geom_01):
        tg = far_field_gain(10**9, geom_01, 2.5)
        assert tg.value > 1.0
        assert not tg.far_field_valid

    def test_within_five_percent_when_array_small(self):
        # the linear law holds to 5% while N * A <= d^2 / 10 (grid: 3 decades of d, 8 of N)
        for d in np.logspace(0, 3, 7):
            for area in (1e-4, 7.957747e-4, 1e-2):
                g = ElementGeometry(0.1, area)
                for n in np.unique(np.logspace(0, 8, 81).astype(np.int64)):
                    if n * area * 10 <= d * d:
                        assert far_field_relative_error(int(n), g, d) <= 0.05


class TestRuleOfThumb:
    def test_d_2p5(self, geom_01):
        # floor(10 * 6.25 / (0.01 / 4 pi)) = floor(78539.816...) = 78539
        assert rule_of_thumb_max(geom_01, 2.5) == 78539

    def test_d_25(self, geom_01):
        assert rule_of_thumb_max(geom_01, 25.0) == 7853981

    def test_rounded_area_from_examples(self):
        # A = 7.958e-4 exactly: floor(62.5 / 7.958e-4) = floor(78537.32)
        assert rule_of_thumb_max(ElementGeometry(0.1, 7.958e-4), 2.5) == 78537

    def test_strict_inequality_at_integer_bound(self):
        # 10 d^2 / A = 1000 exactly; N = 1000 gives equality and is excluded
        assert rule_of_thumb_max(ElementGeometry(1.0, 0.01), 1.0) == 999

    @given(st.floats(min_value=0.5, max_value=1000.0))
    def test_quadratic_growth(self, d):
        g = ElementGeometry.isotropic(0.1)
        one, two = rule_of_thumb_max(g, d), rule_of_thumb_max(g, 2 * d)
        assert 4 * one <= two <= 4 * one + 4

    def test_flag_follows_rule(self, geom_01):
        n_star = rule_of_thumb_max(geom_01, 2.5)
        assert planar_exact_gain(n_star, geom_01, 2.5).far_field_valid
        assert not planar_exact_gain(n_star + 1, geom_01, 2.5).far_field_valid


class TestRelativeError:
    def test_deep_far_field(self, geom_01):
        assert far_field_relative_error(1, geom_01, 25.0) < 1e-6

    @pytest.mark.parametrize("d,crossing", [(2.5, 802), (25.0, 80163)])
    def test_five_percent_crossing(self, geom_01, d, crossing):
        # crossings found by bisection on the mpmath error curve
        assert far_field_relative_error(crossing - 1, geom_01, d) <= 0.05
        assert far_field_relative_error(crossing, geom_01, d) > 0.05

    def test_matches_high_precision(self, geom_01):
        for n in (1, 802, 78539, 10**6):
            got = far_field_relative_error(n, geom_01, 2.5)
            assert got == pytest.approx(float(mp_far_field_error(n, geom_01.area, 2.5)), rel=1e-9, abs=1e-15)

    def test_monotone_beyond_far_field(self, geom_01):
        errs = [far_field_relative_error(int(n), geom_01, 2.5) for n in np.logspace(2, 10, 200)]
        assert all(b >= a for a, b in zip(errs, errs[1:]))
