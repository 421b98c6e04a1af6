import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paritycat.limits import (
    IndeterminateLimitError,
    LossChannel,
    SphericalDirection,
    direction_components,
    directional_spectrum,
    double_tl_spectrum,
    lambda_double_tl,
    lambda_ho,
    lambda_infinity_d2,
    lambda_infinity_directional,
    lambda_origin,
    lambda_rescaled_tl,
    lambda_thermodynamic,
    lambda_unit,
    origin_spectrum,
    rescaled_tl_spectrum,
    spectrum_at,
    thermodynamic_spectrum,
    unit_spectrum,
    zero_pattern_spectrum,
)
from paritycat.schmidt import schmidt_eigenvalues, von_neumann_entropy
from paritycat.states import CSLabel


def test_direction_components():
    np.testing.assert_allclose(direction_components(SphericalDirection((), 2)), [1.0])
    np.testing.assert_allclose(direction_components(SphericalDirection((math.pi / 4,), 3)),
                               [2**-0.5, 2**-0.5], atol=1e-16)
    np.testing.assert_allclose(direction_components(SphericalDirection((0.0,), 3)), [1.0, 0.0])
    y = direction_components(SphericalDirection((0.3, 1.1, 0.7), 5))
    assert np.all(y >= 0) and math.fsum(y * y) == pytest.approx(1.0, abs=1e-15)


def test_direction_validation():
    with pytest.raises(ValueError):
        SphericalDirection((0.1, 0.2), 3)
    with pytest.raises(ValueError):
        SphericalDirection((2.0,), 3)


def test_thermodynamic_examples():
    assert lambda_thermodynamic(CSLabel((0.0, 0.0)), 2, 0) == 1.0
    for M in (1, 2, 5):
        np.testing.assert_allclose(thermodynamic_spectrum(CSLabel((1.0,)), M).lambdas, [0.5, 0.5], atol=1e-15)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_thermodynamic_matches_large_n(M):
    z = CSLabel((0.7, 1.2))
    lim = thermodynamic_spectrum(z, M).lambdas
    for c in range(4):
        np.testing.assert_allclose(schmidt_eigenvalues(z, c, 2000, M).lambdas, lim, atol=1e-9)


def test_double_tl_examples():
    np.testing.assert_allclose(double_tl_spectrum(CSLabel((1.0, 1.0)), 0).lambdas, [0.25] * 4)
    assert lambda_double_tl(CSLabel((1.0, 0.0)), 0b00, 0b10) == 0.0
    assert lambda_double_tl(CSLabel((1.0, 0.0)), 0b10, 0b11) == 0.5


def test_lambda_ho_examples():
    for cp in (0, 1):
        assert lambda_ho(1.7, 1, cp, 0.5) == 0.5
    assert lambda_ho(0.0, 0, 0, 0.8) == 1.0
    assert lambda_ho(0.0, 0, 1, 0.8) == 0.0
    assert lambda_ho(0.5, 0, 0, 0.999) >= 0.99
    assert lambda_ho(2.0, 1, 0, 1 - 1e-9) == pytest.approx(1.0, abs=1e-7)
    # continuous at alpha = 0 for the odd cat
    assert lambda_ho(0.0, 1, 0, 0.7) == pytest.approx(0.7, abs=1e-15)
    assert lambda_ho(1e-5, 1, 0, 0.7) == pytest.approx(0.7, abs=1e-9)
    with pytest.raises(ValueError):
        lambda_ho(1.0, 0, 0, 0.4)


def test_lambda_ho_closed_form():
    a, eta = 1.3, 2 / 3
    x = a * a
    expected = 0.5 + 0.5 * math.cosh((1 - 2 * eta) * x) / math.cosh(x)
    assert lambda_ho(a, 0, 0, eta) == pytest.approx(expected, abs=1e-15)
    expected = 0.5 - 0.5 * math.sinh((1 - 2 * eta) * x) / math.sinh(x)
    assert lambda_ho(a, 1, 0, eta) == pytest.approx(expected, abs=1e-15)


def test_lambda_ho_large_alpha_is_stable():
    assert lambda_ho(40.0, 0, 0, 0.6) == pytest.approx(0.5, abs=1e-15)
    assert math.isfinite(lambda_ho(1e3, 1, 1, 0.9))


@given(st.floats(0.0, 30.0), st.integers(0, 1), st.floats(0.5, 0.999999))
def test_lambda_ho_sums_to_one(alpha, c, eta):
    total = lambda_ho(alpha, c, 0, eta) + lambda_ho(alpha, c, 1, eta)
    assert total == pytest.approx(1.0, abs=1e-15)
    assert 0.0 <= lambda_ho(alpha, c, 0, eta) <= 1.0


def test_rescaled_examples():
    lam = rescaled_tl_spectrum(LossChannel(0.8, (0.0, 0.0)), 0).lambdas
    np.testing.assert_array_equal(lam, [1, 0, 0, 0])
    np.testing.assert_allclose(rescaled_tl_spectrum(LossChannel(0.5, (0.3, 2.0, 1.0)), 0b111).lambdas,
                               [1 / 8] * 8, atol=1e-15)
    ch = LossChannel(2 / 3, (1.3, 0.9))
    assert lambda_rescaled_tl(ch, 0b01, 0b11) == pytest.approx(
        lambda_ho(1.3, 1, 1, 2 / 3) * lambda_ho(0.9, 0, 1, 2 / 3), abs=1e-15)
    with pytest.raises(ValueError):
        LossChannel(1.0, (1.0,))


def test_rescaled_matches_finite_n():
    ch = LossChannel(2 / 3, (1.3, 0.9))
    N, M = 300, 100
    z = CSLabel(tuple(a / math.sqrt(N) for a in ch.alpha))
    for c in range(4):
        finite = schmidt_eigenvalues(z, c, N, M).lambdas
        np.testing.assert_allclose(finite, rescaled_tl_spectrum(ch, c).lambdas, atol=5e-3)


def test_rescaled_half_eta_independent_of_odd_c():
    for alpha in [(0.4, 1.0), (2.0, 3.0)]:
        a = rescaled_tl_spectrum(LossChannel(0.5, alpha), 0b11).lambdas
        np.testing.assert_allclose(a, [0.25] * 4, atol=1e-15)
    # with an even component the spectrum does depend on that alpha
    a = rescaled_tl_spectrum(LossChannel(0.5, (1.0, 0.5)), 0b01).lambdas
    b = rescaled_tl_spectrum(LossChannel(0.5, (1.0, 1.5)), 0b01).lambdas
    assert np.max(np.abs(a - b)) > 1e-3


def test_origin_examples():
    assert lambda_origin(2, 6, 2, 1, 0) == pytest.approx(2 / 3)
    assert lambda_origin(2, 6, 2, 1, 1) == pytest.approx(1 / 3)
    np.testing.assert_array_equal(origin_spectrum(3, 6, 3, 0b11).lambdas, [0.2, 0.3, 0.3, 0.2])
    np.testing.assert_array_equal(origin_spectrum(3, 8, 2, 0).lambdas, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        origin_spectrum(3, 6, 4, 0)


@pytest.mark.parametrize("D", [2, 3])
@pytest.mark.parametrize("N", [2, 5, 10])
def test_origin_matches_small_z(D, N):
    for M in range(1, N // 2 + 1):
        for c in range(1 << (D - 1)):
            if bin(c).count("1") > N:
                continue
            small = schmidt_eigenvalues(CSLabel((1e-5,) * (D - 1)), c, N, M).lambdas
            np.testing.assert_allclose(small, origin_spectrum(D, N, M, c).lambdas, atol=1e-3)
            exact = zero_pattern_spectrum(CSLabel((0.0,) * (D - 1)), c, N, M).lambdas
            np.testing.assert_allclose(exact, origin_spectrum(D, N, M, c).lambdas, atol=1e-15)


def test_origin_large_d_is_numerical():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        s = origin_spectrum(4, 6, 2, 0b101)
    assert caught and math.fsum(s.lambdas) == pytest.approx(1.0, abs=1e-12)
    exact = zero_pattern_spectrum(CSLabel((0.0,) * 3), 0b101, 6, 2).lambdas
    np.testing.assert_allclose(s.lambdas, exact, atol=1e-9)


def test_unit_examples():
    for c in (0, 1):
        np.testing.assert_array_equal(unit_spectrum(2, 7, 3, c).lambdas, [0.5, 0.5])
    for N in (4, 6, 9):
        for c in range(4):
            assert lambda_unit(3, N, 1, c, 0b11) == 0.0
    for N in (4, 6, 8, 10):
        np.testing.assert_allclose(unit_spectrum(3, N, 1, 0).lambdas[:3], [1 / 3] * 3, atol=1e-15)


@pytest.mark.parametrize("N", [3, 6, 7, 12])
def test_unit_matches_finite(N):
    for M in range(1, N // 2 + 1):
        for c in range(4):
            finite = schmidt_eigenvalues(CSLabel((1.0, 1.0)), c, N, M).lambdas
            np.testing.assert_allclose(finite, unit_spectrum(3, N, M, c).lambdas, atol=1e-14)


def test_unit_large_n_ratio_form():
    s = unit_spectrum(3, 80, 3, 0b01)
    assert math.fsum(s.lambdas) == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(s.lambdas, schmidt_eigenvalues(CSLabel((1.0, 1.0)), 1, 80, 3).lambdas,
                               atol=1e-12)


def test_infinity_d2_examples():
    assert lambda_infinity_d2(6, 2, 0, 0) == 1.0
    assert lambda_infinity_d2(6, 2, 0, 1) == 0.0
    assert lambda_infinity_d2(7, 3, 1, 1) == pytest.approx(1.0)


@pytest.mark.parametrize("N", [2, 3, 6, 9, 10])
def test_infinity_d2_matches_large_z(N):
    for M in range(1, N // 2 + 1):
        for c in (0, 1):
            finite = schmidt_eigenvalues(CSLabel((1e3,)), c, N, M).lambdas
            lim = [lambda_infinity_d2(N, M, c, cp) for cp in (0, 1)]
            np.testing.assert_allclose(finite, lim, atol=1e-4)


def test_directional_reduces_to_d2():
    for c in (0, 1):
        a = directional_spectrum(SphericalDirection((), 2), c, 7, 3).lambdas
        np.testing.assert_array_equal(a, [lambda_infinity_d2(7, 3, c, cp) for cp in (0, 1)])


def test_directional_on_axis_is_pure():
    for theta in (0.0, math.pi / 2):
        d = SphericalDirection((theta,), 3)
        assert lambda_infinity_directional(d, 0, 0, 6, 2) == pytest.approx(1.0, abs=1e-15)


def test_directional_indeterminate():
    # N even with an odd number of odd levels has no leading-order weight
    with pytest.raises(IndeterminateLimitError):
        directional_spectrum(SphericalDirection((0.5,), 3), 0b01, 6, 1)


@pytest.mark.parametrize("theta", [0.2, math.pi / 4, 1.3])
def test_directional_matches_large_radius(theta):
    d = SphericalDirection((theta,), 3)
    z = CSLabel(tuple(1e3 * direction_components(d)))
    for c in (0b00, 0b11):
        lim = directional_spectrum(d, c, 6, 2).lambdas
        np.testing.assert_allclose(schmidt_eigenvalues(z, c, 6, 2).lambdas, lim, atol=1e-5)


def test_directional_d4():
    d = SphericalDirection((0.4, 0.9), 4)
    z = CSLabel(tuple(1e3 * direction_components(d)))
    lim = directional_spectrum(d, 0, 6, 2).lambdas
    np.testing.assert_allclose(schmidt_eigenvalues(z, 0, 6, 2).lambdas, lim, atol=1e-5)


def test_zero_pattern_matches_oracle_direction():
    # one vanishing component, odd there: that level carries exactly one particle
    z = CSLabel((0.0, 1.4))
    exact = zero_pattern_spectrum(z, 0b01, 7, 2).lambdas
    near = schmidt_eigenvalues(CSLabel((1e-7, 1.4)), 0b01, 7, 2).lambdas
    np.testing.assert_allclose(exact, near, atol=1e-10)


def test_spectrum_at_falls_back_only_for_zeros():
    s = spectrum_at(CSLabel((0.0, 2.0)), 0b01, 5, 2)
    assert math.fsum(s.lambdas) == pytest.approx(1.0, abs=1e-14)
    assert s.meta["kind"] == "zero_pattern"


def test_isentropic_rays_d3():
    for theta in np.linspace(0, math.pi / 2, 7):
        y = direction_components(SphericalDirection((theta,), 3))
        a = von_neumann_entropy(schmidt_eigenvalues(CSLabel(tuple(20 * y)), 0, 6, 1))
        b = von_neumann_entropy(schmidt_eigenvalues(CSLabel(tuple(30 * y)), 0, 6, 1))
        assert abs(a - b) < 1e-3
