import numpy as np
import pytest
from scipy import special

from libs.errors import DegenerateFitError, DomainError, UnsupportedError
from libs.geometry import Params
from libs.kernels import zonal_scale
from libs.quadrature import (
    angular_measure_rule,
    ball_integrate,
    gauss_jacobi_rule,
    graded_rule,
    growth_fit,
    radial_measure_rule,
    sphere_integrate,
    zonal_ball_integrate,
    zonal_sphere_rule,
)
from libs.specfun import gegenbauer


def _ones(points):
    return np.ones(np.atleast_2d(points).shape[0])


def test_gauss_jacobi_weight_moments():
    rule = gauss_jacobi_rule(8, 1.5, 0.0)
    assert rule.weights.sum() == pytest.approx(0.4, rel=1e-14)
    assert rule.apply(lambda t: t) == pytest.approx(special.beta(3.5, 1.0), rel=1e-14)
    legendre = gauss_jacobi_rule(6)
    assert legendre.apply(lambda t: t ** 11) == pytest.approx(1.0 / 12.0, rel=1e-14)


def test_gauss_jacobi_nodes_inside_interval():
    rule = gauss_jacobi_rule(20, -0.5, 2.0)
    assert np.all((rule.nodes > 0) & (rule.nodes < 1))
    assert np.all(rule.weights > 0)
    assert len(rule) == 20


def test_gauss_jacobi_validation():
    with pytest.raises(DomainError):
        gauss_jacobi_rule(1)
    with pytest.raises(DomainError):
        gauss_jacobi_rule(8, -1.0, 0.0)


def test_graded_rule_endpoint_singularity():
    rule = graded_rule(0.0, 1.0, depth=10, e_hi=-0.5)
    assert rule.weights.sum() == pytest.approx(2.0, rel=1e-13)
    assert rule.apply(lambda x: x) == pytest.approx(4.0 / 3.0, rel=1e-13)


@pytest.mark.parametrize("n, beta", [(3, 0.0), (4, 0.5), (3, -0.5), (5, 2.0)])
def test_radial_measure_rule_is_a_probability(n, beta):
    rule = radial_measure_rule(n, beta, depth=8)
    assert rule.weights.sum() == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_angular_measure_rule_moments(n):
    rule = angular_measure_rule(n, depth=6)
    assert rule.weights.sum() == pytest.approx(1.0, rel=1e-12)
    assert rule.apply(lambda t: t) == pytest.approx(0.0, abs=1e-14)
    assert rule.apply(lambda t: t ** 2) == pytest.approx(1.0 / n, rel=1e-12)


def test_zonal_sphere_rule_moments():
    rule = zonal_sphere_rule(5, 10)
    assert rule.weights.sum() == pytest.approx(1.0, rel=1e-13)
    assert rule.apply(lambda t: t ** 4) == pytest.approx(3.0 / (5 * 7), rel=1e-12)


def test_sphere_integrate_constants_and_moments():
    assert sphere_integrate(_ones, 3) == pytest.approx(1.0, rel=1e-13)
    assert sphere_integrate(lambda z: z[:, 2] ** 2, 3) == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert sphere_integrate(lambda z: z[:, 0] * z[:, 1], 3) == pytest.approx(0.0, abs=1e-14)


def _zonal_on_sphere(m, x, zeta):
    r = np.linalg.norm(x)
    return zonal_scale(m, 3) * r ** m * gegenbauer(m, 0.5, np.clip(zeta @ (x / r), -1.0, 1.0))


def test_sphere_integrate_reproduces_zonal_harmonics():
    x, y = np.array([0.5, 0.2, 0.1]), np.array([-0.3, 0.4, 0.2])
    value = sphere_integrate(lambda z: _zonal_on_sphere(2, x, z) * _zonal_on_sphere(2, y, z), 3, tol=1e-13)
    t = x @ y / (np.linalg.norm(x) * np.linalg.norm(y))
    expected = zonal_scale(2, 3) * np.linalg.norm(x) ** 2 * np.linalg.norm(y) ** 2 * gegenbauer(2, 0.5, t)
    assert value == pytest.approx(expected, rel=1e-10)
    assert sphere_integrate(lambda z: _zonal_on_sphere(3, x, z), 3) == pytest.approx(0.0, abs=1e-13)


def test_sphere_integrate_zonal_reduction_in_higher_dimension():
    pole = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
    value = sphere_integrate(lambda z: z[:, 1] ** 2, 5, pole=pole)
    assert value == pytest.approx(0.2, rel=1e-12)
    with pytest.raises(UnsupportedError):
        sphere_integrate(lambda z: z[:, 1] ** 2, 5)


@pytest.mark.parametrize("beta", [-0.5, 0.0, 1.0, 2.5])
def test_ball_integrate_volume(beta):
    assert ball_integrate(_ones, Params(3), weight_beta=beta) == pytest.approx(1.0, abs=1e-10)
    assert ball_integrate(_ones, Params(4), weight_beta=beta, pole=np.eye(4)[0]) == pytest.approx(1.0, abs=1e-10)


def test_ball_integrate_second_moment():
    value = ball_integrate(lambda p: np.sum(p ** 2, axis=1), Params(3))
    assert value == pytest.approx(0.6, rel=1e-12)
    assert ball_integrate(lambda p: p[:, 0], Params(3)) == pytest.approx(0.0, abs=1e-13)


def test_ball_integrate_rejects_bad_weight():
    with pytest.raises(DomainError):
        ball_integrate(_ones, Params(3), weight_beta=-1.0)
    with pytest.raises(UnsupportedError):
        ball_integrate(_ones, Params(4))


def test_zonal_ball_integrate_moment():
    n = 3
    radial, angular = radial_measure_rule(n, 0.0, 8), angular_measure_rule(n, 6)
    value = zonal_ball_integrate(lambda rho, t: (rho * t) ** 2, radial, angular)
    # int x_1^2 d nu = 1/(n+2)
    assert float(value) == pytest.approx(1.0 / (n + 2), rel=1e-12)


def test_growth_fit_power_law():
    a = np.geomspace(1e-1, 1e-3, 5)
    fit = growth_fit(list(zip(a, 3.0 * a ** -2.5)))
    assert fit.fitted_exponent == pytest.approx(2.5, rel=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.model == "power"


def test_growth_fit_log_model():
    a = np.geomspace(1e-1, 1e-4, 6)
    fit = growth_fit(list(zip(a, 0.7 * np.log(1.0 / a) + 2.0)), model="log")
    assert fit.fitted_exponent == pytest.approx(0.7, rel=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_growth_fit_degenerate_samples():
    with pytest.raises(DegenerateFitError):
        growth_fit([(0.1, 1.0), (0.01, 2.0), (0.001, 3.0)])
    with pytest.raises(DegenerateFitError):
        growth_fit([(0.1, 1.0), (0.08, 2.0), (0.06, 3.0), (0.05, 4.0)])
    with pytest.raises(DegenerateFitError):
        growth_fit([(0.1, 1.0), (0.01, -2.0), (0.001, 3.0), (0.0001, 4.0)])
    with pytest.raises(DomainError):
        growth_fit([(0.1, 1.0)], model="cubic")
