import numpy as np
import pytest
from scipy import integrate, special

from libs.errors import DivergenceError, DomainError, PoleError
from libs.specfun import (
    GammaRatioSpec,
    HypParams21,
    HypParams32,
    beta_fn,
    dixon_sum,
    gamma_ratio,
    gegenbauer,
    gegenbauer_at_one,
    gegenbauer_sequence,
    gegenbauer_weighted_integral,
    hyp2f1,
    hyp3f2_unit,
    kummer_transform,
    log_gamma_ratio,
    pochhammer,
)


def test_pochhammer_basics():
    assert pochhammer(3.7, 0) == 1.0
    assert pochhammer(1.0, 4) == 24.0
    assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5, rel=1e-15)


def test_pochhammer_terminates_at_nonpositive_integer():
    assert pochhammer(-1.0, 2) == 0.0
    assert pochhammer(-2.0, 5) == 0.0
    assert pochhammer(-2.0, 2) == pytest.approx(2.0)


def test_pochhammer_rejects_negative_order():
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


def test_beta_fn():
    assert beta_fn(1.5, 1.0) == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert beta_fn(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-14)


def test_gamma_ratio_against_direct_products(rng):
    for _ in range(20):
        a1, a2, b1, b2 = rng.uniform(0.5, 25.0, 4)
        expected = special.gamma(a1) * special.gamma(a2) / (special.gamma(b1) * special.gamma(b2))
        assert gamma_ratio(GammaRatioSpec((a1, a2), (b1, b2))) == pytest.approx(expected, rel=1e-12)


def test_gamma_ratio_large_shift_stays_finite():
    # Gamma(k + 3)/Gamma(k + 1) = (k+1)(k+2) without overflow
    k = 1e6
    assert gamma_ratio(GammaRatioSpec((3.0,), (1.0,)), k) == pytest.approx((k + 1) * (k + 2), rel=1e-9)


def test_gamma_ratio_sign_on_negative_arguments():
    # Gamma(5/2)/Gamma(-1/2) = (-1/2)(1/2)(3/2)
    assert gamma_ratio(GammaRatioSpec((2.5,), (-0.5,))) == pytest.approx(-0.375, rel=1e-14)
    sign, _ = log_gamma_ratio(GammaRatioSpec((-0.5,), ()))
    assert sign == -1.0


def test_gamma_ratio_pole():
    with pytest.raises(PoleError):
        gamma_ratio(GammaRatioSpec((0.0,), (1.0,)))
    with pytest.raises(PoleError):
        log_gamma_ratio(GammaRatioSpec((1.0,), (0.5,)), k=-3.0)


def test_hyp2f1_trivial_cases():
    assert hyp2f1(HypParams21(1.3, 0.7, 2.2), 0.0) == 1.0
    assert hyp2f1(HypParams21(0.0, 0.7, 2.2), 0.6) == 1.0


def test_hyp2f1_gauss_value_at_one():
    assert hyp2f1(HypParams21(1.0, -0.5, 2.5), 1.0) == pytest.approx(0.75, rel=1e-14)


def test_hyp2f1_euler_transform_example():
    a, b, c, z = 0.7, -0.4, 2.1, 0.5
    direct = hyp2f1(HypParams21(a, b, c), z)
    transformed = (1 - z) ** (c - a - b) * hyp2f1(HypParams21(c - a, c - b, c), z)
    assert direct == pytest.approx(transformed, rel=1e-11)


@pytest.mark.parametrize("a, b, c", [(0.7, -0.4, 2.1), (1.5, 2.0, 3.2), (-0.5, 1.5, 0.5), (1.0, 1.0, 1.5)])
@pytest.mark.parametrize("z", [-0.95, -0.6, -0.3, 0.2, 0.6, 0.9])
def test_hyp2f1_matches_scipy(a, b, c, z):
    assert hyp2f1(HypParams21(a, b, c), z) == pytest.approx(special.hyp2f1(a, b, c, z), rel=1e-10)


def test_hyp2f1_domain_errors():
    with pytest.raises(DomainError):
        hyp2f1(HypParams21(1.0, 1.0, 3.0), 1.2)
    with pytest.raises(DivergenceError):
        hyp2f1(HypParams21(1.0, 1.0, 1.5), 1.0)
    with pytest.raises(DomainError):
        HypParams21(1.0, 1.0, -2.0)


def test_hyp3f2_terminating_and_trivial():
    assert hyp3f2_unit(HypParams32(0.0, 1.0, 1.0, 2.0, 2.0)) == 1.0
    # 3F2(-1, b, c; d, e; 1) = 1 - bc/(de)
    value = hyp3f2_unit(HypParams32(-1.0, 1.5, 0.5, 2.0, 3.0))
    assert value == pytest.approx(1.0 - 0.75 / 6.0, rel=1e-15)


def test_hyp3f2_reduces_to_gauss_value():
    # equal upper and lower parameter reduce 3F2 to 2F1(1, -1/2; 5/2; 1) = 3/4
    assert hyp3f2_unit(HypParams32(1.0, -0.5, 0.7, 2.5, 0.7)) == pytest.approx(0.75, rel=1e-10)


def test_hyp3f2_dixon_at_coefficient_parameters():
    # the k = 0 series behind A_0 for n = 3, alpha = 0
    a, b, c = 3.0, 1.5, -0.5
    series = hyp3f2_unit(HypParams32(a, b, c, a - b + 1.0, a - c + 1.0))
    assert series == pytest.approx(dixon_sum(a, b, c), rel=1e-10)


def test_hyp3f2_positive_parameters_bound():
    value = hyp3f2_unit(HypParams32(1.0, 1.5, -0.5, 2.0, 2.5))
    assert 0.0 <= value <= 1.0


def test_hyp3f2_divergence():
    with pytest.raises(DivergenceError):
        hyp3f2_unit(HypParams32(1.0, 1.0, 1.0, 1.0, 1.0))


def test_kummer_transform_preserves_value():
    params = HypParams32(0.5, 0.7, 0.9, 1.8, 2.6)
    prefactor, transformed = kummer_transform(params)
    assert prefactor * hyp3f2_unit(transformed) == pytest.approx(hyp3f2_unit(params), rel=1e-10)


def test_kummer_transform_needs_e_above_a():
    with pytest.raises(DomainError):
        kummer_transform(HypParams32(2.0, 0.1, 0.1, 3.0, 1.5))


def test_dixon_sum_divergence():
    with pytest.raises(DivergenceError):
        dixon_sum(1.0, 1.0, 1.0)


def test_gegenbauer_low_degrees():
    t = np.linspace(-1.0, 1.0, 11)
    np.testing.assert_array_equal(gegenbauer(0, 0.8, t), np.ones(11))
    np.testing.assert_allclose(gegenbauer(1, 0.8, t), 1.6 * t, rtol=0, atol=1e-15)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
def test_gegenbauer_matches_scipy(lam):
    t = np.linspace(-1.0, 1.0, 41)
    for m in range(11):
        np.testing.assert_allclose(gegenbauer(m, lam, t), special.eval_gegenbauer(m, lam, t),
                                   rtol=1e-12, atol=1e-12)


def test_gegenbauer_bounded_by_value_at_one():
    t = np.linspace(-1.0, 1.0, 201)
    bound = float(gegenbauer_at_one(7, 0.5))
    assert bound == pytest.approx(1.0, rel=1e-14)
    assert np.all(np.abs(gegenbauer(7, 0.5, t)) <= bound + 1e-14)
    assert gegenbauer(7, 1.5, 1.0) == pytest.approx(float(gegenbauer_at_one(7, 1.5)), rel=1e-13)


def test_gegenbauer_derivative():
    h = 1e-6
    for t in (-0.7, 0.1, 0.55):
        value, slope = gegenbauer(5, 1.5, t, derivative=True)
        numeric = (special.eval_gegenbauer(5, 1.5, t + h) - special.eval_gegenbauer(5, 1.5, t - h)) / (2 * h)
        assert value == pytest.approx(special.eval_gegenbauer(5, 1.5, t), rel=1e-12)
        assert slope == pytest.approx(numeric, rel=1e-6)


def test_gegenbauer_sequence_rows():
    t = np.array([-0.3, 0.2, 0.9])
    rows = gegenbauer_sequence(6, 1.0, t)
    assert rows.shape == (7, 3)
    for m in range(7):
        np.testing.assert_allclose(rows[m], gegenbauer(m, 1.0, t), rtol=1e-14, atol=1e-14)


def test_gegenbauer_validation():
    with pytest.raises(DomainError):
        gegenbauer(2, -0.5, 0.3)
    with pytest.raises(DomainError):
        gegenbauer(2, 0.5, 1.5)
    with pytest.raises(DomainError):
        gegenbauer(-1, 0.5, 0.3)


@pytest.mark.parametrize("lam", [0.5, 1.0])
def test_gegenbauer_weighted_integral_matches_quad(lam):
    t0, t1 = -0.3, 0.6
    norm = special.beta(0.5, lam + 0.5)
    integrals = gegenbauer_weighted_integral(5, lam, t0, t1)
    for m in range(6):
        expected, _ = integrate.quad(
            lambda t: special.eval_gegenbauer(m, lam, t) * (1 - t * t) ** (lam - 0.5) / norm, t0, t1,
            epsabs=1e-13, epsrel=1e-13)
        assert integrals[m, 0] == pytest.approx(expected, abs=1e-11)


def test_gegenbauer_weighted_integral_over_full_interval():
    integrals = gegenbauer_weighted_integral(6, 0.5, -1.0, 1.0)[:, 0]
    assert integrals[0] == pytest.approx(1.0, rel=1e-14)
    np.testing.assert_allclose(integrals[1:], 0.0, atol=1e-14)
