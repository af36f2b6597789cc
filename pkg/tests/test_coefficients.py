import numpy as np
import pytest

from libs.coefficients import (
    build_coef_table,
    c_m,
    c_m_asymptotic,
    coef_A,
    coef_A0_closed_form,
    coef_B,
    coef_D,
    euclid_gamma,
    euclid_gamma_quadrature,
    i_m_exact,
    laurent_coefficients,
    s_factor,
    s_factor_at_zero,
    s_factor_bound,
    s_factor_derivative,
    s_factor_table,
)
from libs.errors import DomainError
from libs.geometry import Params


def test_s_factor_special_values():
    params = Params(3)
    assert s_factor(1, 0.0, params) == pytest.approx(4.0 / 3.0, rel=1e-15)
    assert s_factor(0, 0.6, params) == 1.0
    assert s_factor(7, 1.0, params) == 1.0
    assert float(s_factor_at_zero(1, 3)) == pytest.approx(4.0 / 3.0, rel=1e-14)
    assert float(s_factor_at_zero(0, 5)) == pytest.approx(1.0, rel=1e-15)


def test_s_factor_rejects_outside_radius():
    with pytest.raises(DomainError):
        s_factor(1, 1.2, Params(3))
    with pytest.raises(DomainError):
        s_factor(-1, 0.5, Params(3))


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("r", [0.3, 0.9, 0.99])
def test_s_factor_table_matches_hypergeometric_form(n, r):
    params = Params(n)
    degrees = np.arange(0, 41)
    table = s_factor_table(degrees, r, n)
    direct = np.array([s_factor(int(m), r, params) for m in degrees])
    np.testing.assert_allclose(table, direct, rtol=1e-11)


def test_s_factor_table_at_origin_and_boundary():
    degrees = np.arange(10)
    np.testing.assert_allclose(s_factor_table(degrees, 0.0, 4), s_factor_at_zero(degrees, 4), rtol=1e-15)
    np.testing.assert_array_equal(s_factor_table(degrees, 1.0, 4), np.ones(10))


def test_s_factor_is_decreasing_toward_one():
    # S_m falls from S_m(0) > 1 to S_m(1) = 1
    radii = np.linspace(0.0, 0.99, 12)
    values = [s_factor(5, float(r), Params(3)) for r in radii]
    assert np.all(np.diff(values) < 0)
    assert values[-1] > 1.0


def test_s_factor_derivative_matches_differences():
    params, h = Params(4), 1e-6
    for m, r in ((1, 0.4), (3, 0.7), (10, 0.95)):
        numeric = (s_factor(m, r + h, params) - s_factor(m, r - h, params)) / (2 * h)
        assert s_factor_derivative(m, r, params) == pytest.approx(numeric, rel=1e-6)
        _, slopes = s_factor_table(np.array([m]), r, 4, derivative=True)
        assert slopes[0] == pytest.approx(s_factor_derivative(m, r, params), rel=1e-10)
    assert s_factor_derivative(0, 0.5, params) == 0.0


@pytest.mark.parametrize("n", [3, 4, 6])
def test_s_factor_bound_majorizes(n):
    degrees = np.arange(0, 201)
    for r in (0.2, 0.8, 0.999):
        assert np.all(s_factor_bound(degrees, r, n) >= s_factor_table(degrees, r, n) * (1 - 1e-10))


def test_euclid_gamma():
    params = Params(3)
    assert euclid_gamma(0, params) == pytest.approx(1.0, rel=1e-15)
    assert euclid_gamma_quadrature(5, params) == pytest.approx(euclid_gamma(5, params), rel=1e-12)
    for alpha in (-0.5, 1.5):
        other = Params(4, alpha)
        values = euclid_gamma(np.arange(30), other)
        quadrature = [euclid_gamma_quadrature(m, other) for m in range(30)]
        np.testing.assert_allclose(quadrature, values, rtol=1e-12)
    with pytest.raises(DomainError):
        euclid_gamma(-1, params)


def test_radial_integral_at_zero_and_positivity():
    params = Params(3)
    assert i_m_exact(0, params) == 1.0
    assert 0.0 < i_m_exact(5, params) < 1.0
    with pytest.raises(DomainError):
        i_m_exact(-2, params)


def test_coef_A_terminates_for_even_n():
    params = Params(4, 0.5)
    assert coef_A(2, params) == 0.0
    assert coef_A(3, params) == 0.0
    assert coef_A(1, params) != 0.0
    with pytest.raises(DomainError):
        coef_A(-1, params)


@pytest.mark.parametrize("n, alpha", [(3, 0.0), (3, 1.5), (4, 0.5), (5, -0.5)])
def test_coef_A0_closed_form(n, alpha):
    params = Params(n, alpha)
    assert coef_A(0, params) == pytest.approx(coef_A0_closed_form(params), rel=1e-10)


def test_laurent_coefficients():
    params = Params(3, 0.0)
    table = laurent_coefficients(4, params)
    assert table[0, 0] == 1.0
    assert table[1, 1] == 1.0
    assert table[2, 1] == pytest.approx(-(params.alpha + params.n))
    np.testing.assert_array_equal(np.triu(table, 1), 0.0)
    # 1/(m+3)_2 at m = 1e3 from its expansion
    longer, m = laurent_coefficients(10, params), 1e3
    series = sum(longer[k, 2] / m ** k for k in range(10))
    assert series == pytest.approx(1.0 / ((m + 3) * (m + 4)), rel=1e-12)
    with pytest.raises(DomainError):
        laurent_coefficients(0, params)


def test_coef_B_and_D_leading_terms():
    params = Params(3, 1.5)
    A = np.array([coef_A(k, params) for k in range(4)])
    B = coef_B(4, params, A)
    D = coef_D(4, params, B)
    assert B[0] == pytest.approx(A[0], rel=1e-15)
    assert D[0] == pytest.approx(1.0 / A[0], rel=1e-15)
    assert D[1] == pytest.approx(-B[1] / B[0] ** 2, rel=1e-13)


def test_table_basics(table3):
    assert table3.c_exact[0] == pytest.approx(1.0, abs=1e-14)
    assert np.all(table3.c_exact > 0)
    assert table3.quadrature_error <= 1e-12
    assert table3.c(0) == table3.c_exact[0]
    assert set(table3.to_dict()) == {"n", "alpha", "m_max", "K", "c_exact", "A", "B", "D"}


def test_table_is_memoized(params3, table3):
    assert build_coef_table(params3) is table3


def test_asymptotic_coefficients_match_exact(params3, table3):
    m_max = table3.m_max
    asymptotic = c_m_asymptotic(m_max, params3, table3.D)
    assert asymptotic == pytest.approx(table3.c_exact[m_max], rel=1e-6)
    assert c_m(m_max, params3, mode="asymptotic") == pytest.approx(asymptotic, rel=1e-14)


def test_table_switches_to_asymptotic_beyond_m_max(params3, table3):
    small = build_coef_table(params3, 50)
    assert small.c(51) == pytest.approx(table3.c_exact[51], rel=1e-4)
    np.testing.assert_allclose(small.c_array(np.arange(40)), table3.c_exact[:40], rtol=1e-10)


def test_table_for_even_dimension(table4):
    assert table4.params == Params(4, 0.5)
    np.testing.assert_array_equal(table4.A[2:], 0.0)
    assert table4.c_exact[0] == pytest.approx(1.0, abs=1e-14)


def test_coefficient_validation(params3):
    with pytest.raises(DomainError):
        build_coef_table(params3, 0)
    with pytest.raises(DomainError):
        c_m(3, params3, mode="bogus")
    with pytest.raises(DomainError):
        c_m_asymptotic(0, params3, np.ones(2))
