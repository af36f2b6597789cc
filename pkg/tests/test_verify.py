import numpy as np
import pytest

from libs import verify
from libs.errors import ConditionError, DomainError
from libs.geometry import Params, weighted_volume
from libs.kernels import bergman_kernel
from libs.verify import (
    PARAMETER_FREE,
    REGISTRY,
    CheckOptions,
    Criterion,
    ProjectedField,
    SignField,
    VerifyReport,
    bergman_project,
    bracket_integral,
    check_bloch,
    check_bracket_integral,
    check_coefficients,
    check_gradient,
    check_hardy,
    check_integral_growth,
    check_kernel_lower,
    check_kernel_upper,
    check_mean_value,
    check_quadrature_oracle,
    check_radial_integral,
    check_reproducing,
    check_schur,
    check_special_functions,
    default_suite,
    kernel_power_integral,
    run_check,
)


def _report(statistics, criteria):
    return VerifyReport("demo", {"n": 3, "alpha": 0.0}, {"shells": [0.1]}, statistics, tuple(criteria), 0.05)


def test_criterion_operators():
    assert Criterion("x", "<=", 1.0).holds({"x": 1.0})
    assert not Criterion("x", "<", 1.0).holds({"x": 1.0})
    assert Criterion("x", ">", 0.0).holds({"x": 1e-300})
    assert not Criterion("x", ">=", 0.0).holds({"x": float("nan")})
    assert not Criterion("missing", "<=", 1.0).holds({"x": 0.0})
    assert not Criterion("x", "<", float("inf")).holds({"x": float("inf")})


def test_report_verdict_follows_criteria():
    passing = _report({"err": 0.01}, [Criterion("err", "<=", 0.05)])
    failing = _report({"err": 0.2, "ok": 1.0}, [Criterion("err", "<=", 0.05), Criterion("ok", ">", 0.0)])
    assert passing.passed and passing.failed_criteria() == []
    assert not failing.passed
    assert [c.statistic for c in failing.failed_criteria()] == ["err"]


def test_report_dict_layout():
    report = VerifyReport("demo", {"n": 3}, {}, {"err": 0.01}, (Criterion("err", "<=", 0.05),), 0.05, runtime=1.5)
    data = report.to_dict()
    assert list(data) == ["check_id", "params", "grid_spec", "statistics", "criteria", "passed",
                          "tolerance", "runtime"]
    assert data["runtime"] is None
    assert report.to_dict(timings=True)["runtime"] == 1.5
    assert data["criteria"] == [{"statistic": "err", "op": "<=", "bound": 0.05}]


def test_registry_and_default_suite():
    assert {"kernel_upper", "kernel_lower", "integral_growth", "schur", "bloch", "reproducing",
            "mean_value", "coefficients", "special_functions"} <= set(REGISTRY)
    params = Params(3, 1.5)
    jobs = default_suite(params, CheckOptions())
    growth = [options for check_id, options in jobs if check_id == "integral_growth"]
    assert [(o.p, o.beta) for o in growth] == [(2.0, 1.5), (1.0, 1.5), (1.0, 3.5)]
    assert len(jobs) == len(REGISTRY) + 2
    trimmed = default_suite(params, CheckOptions(), include_parameter_free=False)
    assert not any(check_id in PARAMETER_FREE for check_id, _ in trimmed)


def test_run_check_unknown_id(params3):
    with pytest.raises(DomainError):
        run_check("no_such_check", params3, CheckOptions())


def test_radial_integral_trichotomy():
    report = check_radial_integral()
    assert report.passed, report.failed_criteria()
    assert report.statistics["case0_exponent_rel_error"] <= 0.05
    assert report.statistics["case1_log_slope"] > 0
    assert report.statistics["case2_bounded_ratio"] < 2.0


def test_bracket_integral_trichotomy(params3):
    report = check_bracket_integral(params3)
    assert report.passed, report.failed_criteria()
    assert {row["quantity"] for row in report.rows} == {"bracket_integral"}


def test_bracket_integral_at_origin_is_volume():
    # [0, y] = 1, so the integral is V_b
    assert bracket_integral(3, 0.5, 4.0, 0.0) == pytest.approx(weighted_volume(3, 0.5), rel=1e-12)


def test_square_integral_equals_diagonal(table3):
    # int |R(x, y)|^2 d nu_alpha = R(x, x)
    r = 0.5
    diagonal = bergman_kernel([r, 0.0, 0.0], [r, 0.0, 0.0], table3).value
    assert kernel_power_integral(table3, r, 2.0, 0.0) == pytest.approx(weighted_volume(3, 0.0) * diagonal, rel=1e-6)


def test_special_functions_check():
    report = check_special_functions(seed=7, samples=5)
    assert report.passed, report.failed_criteria()
    assert report.params == {}


def test_quadrature_oracle_check(params3):
    report = check_quadrature_oracle(params3, m_top=20)
    assert report.passed, report.failed_criteria()


def test_coefficients_check(params3, table3):
    report = check_coefficients(params3, table3)
    assert report.passed, report.failed_criteria()
    assert report.statistics["residual_K2_slope"] == pytest.approx(-2.0, abs=0.5)


def test_coefficients_check_even_dimension(table4):
    report = check_coefficients(Params(4, 0.5), table4)
    assert report.passed, report.failed_criteria()
    assert report.statistics["A_terminated_abs"] == 0.0
    assert "residual_K2_max_rel" in report.statistics


def test_schur_check_and_conditions(params3):
    report = check_schur(params3, 2.0, 0.0)
    assert report.passed, report.failed_criteria()
    with pytest.raises(ConditionError):
        check_schur(Params(3, 3.0), 2.0, 0.0)
    with pytest.raises(DomainError):
        check_schur(params3, 1.0, 0.0)


def test_integral_growth_rejects_bad_exponents(params3, table3):
    with pytest.raises(DomainError):
        check_integral_growth(params3, 0.0, 0.0, table3)
    with pytest.raises(DomainError):
        check_integral_growth(params3, 2.0, -1.0, table3)


def test_kernel_lower_rejects_aperture(params3, table3):
    with pytest.raises(DomainError):
        check_kernel_lower(params3, s=0.5, table=table3)


def test_sign_field_values():
    field = SignField.half_space(3)
    points = np.array([[0.5, 0.1, 0.0], [-0.2, 0.3, 0.1], [0.0, 0.4, 0.0], [0.5, 0.0, 0.0]])
    np.testing.assert_array_equal(field(points), [1.0, -1.0, 1.0, 1.0])
    np.testing.assert_array_equal(SignField.constant(3)(points), np.ones(4))


def test_projection_of_constant_is_constant(table3, table4):
    for table in (table3, table4):
        projected = ProjectedField(SignField.constant(table.params.n), table)
        for radius in (0.0, 0.4, 0.9):
            x = np.zeros(table.params.n)
            x[-1] = radius
            assert projected(x) == pytest.approx(1.0, abs=1e-10)


def test_projection_of_sign_is_odd(params3, table3):
    x = np.array([0.5, 0.2, 0.0])
    value = bergman_project(SignField.half_space(3), params3, 0.0, x, table3)
    assert bergman_project(SignField.half_space(3), params3, 0.0, -x, table3) == pytest.approx(-value, abs=1e-10)
    assert bergman_project(SignField.half_space(3), params3, 0.0, np.zeros(3), table3) == pytest.approx(0.0, abs=1e-12)
    assert value > 0.0


def test_projection_needs_matching_table(params3, table3):
    with pytest.raises(DomainError):
        bergman_project(SignField.half_space(3), params3, 1.0, [0.1, 0.0, 0.0], table3)
    with pytest.raises(DomainError):
        ProjectedField(SignField.half_space(4), table3)


def test_extremal_field_follows_kernel_sign(table3):
    field = SignField.extremal(table3, radius=0.5)
    x0 = np.array([0.5, 0.0, 0.0])
    for theta in np.linspace(0.05, np.pi - 0.05, 15):
        y = 0.8 * np.array([np.cos(theta), np.sin(theta), 0.0])
        kernel = bergman_kernel(x0, y, table3).value
        if abs(kernel) > 1e-6:
            assert field(y[None, :])[0] == np.sign(kernel)


@pytest.mark.slow
def test_reproducing_check(params3, table3):
    report = check_reproducing(params3, table=table3)
    assert report.passed, report.failed_criteria()
    with pytest.raises(DomainError):
        check_reproducing(params3, probe=[0.7, 0.0, 0.0], table=table3)


@pytest.mark.slow
def test_reproducing_check_zonal(table4):
    report = check_reproducing(Params(4, 0.5), m=2, table=table4)
    assert report.passed, report.failed_criteria()


@pytest.mark.slow
def test_mean_value_check(params3, table3):
    report = check_mean_value(params3, table=table3)
    assert report.passed, report.failed_criteria()


@pytest.mark.slow
def test_kernel_upper_and_negative_control(params3, table3):
    report = check_kernel_upper(params3, table=table3)
    assert report.passed, report.failed_criteria()
    shifted = check_kernel_upper(params3, table=table3, exponent_shift=1.0)
    assert not shifted.passed
    assert [c.statistic for c in shifted.failed_criteria()] == ["diagonal_exponent_rel_error",
                                                                 "euclid_exponent_rel_error"]


@pytest.mark.slow
def test_kernel_lower_check(params3, table3):
    report = check_kernel_lower(params3, table=table3)
    assert report.passed, report.failed_criteria()
    assert report.grid_spec["apertures_tried"][0] == 0.25


@pytest.mark.slow
def test_gradient_check(params3, table3):
    report = check_gradient(params3, table3, seed=3, pairs=5)
    assert report.passed, report.failed_criteria()


@pytest.mark.slow
def test_hardy_check(params3):
    report = check_hardy(params3, seed=3, pairs=20)
    assert report.passed, report.failed_criteria()


@pytest.mark.slow
@pytest.mark.parametrize("p, beta", [(2.0, 0.0), (1.0, 0.0), (1.0, 2.0)])
def test_integral_growth_check(params3, table3, p, beta):
    report = check_integral_growth(params3, p, beta, table3)
    assert report.passed, report.failed_criteria()


@pytest.mark.slow
def test_bloch_check(params3, table3):
    fields = [SignField.constant(3), SignField.half_space(3)]
    report = check_bloch(params3, fields=fields, table=table3)
    assert report.passed, report.failed_criteria()
    assert report.statistics["one_seminorm_max"] <= 1e-6
    assert report.statistics["family_seminorm_max"] == report.statistics["sign_seminorm_max"]
    assert report.statistics["family_spread"] == 1.0


@pytest.mark.slow
def test_bloch_constant_is_taken_over_the_whole_family(params3, table3):
    flipped = SignField("flipped", 3, lambda rho: (np.array([-1.0, 0.0, 1.0]), np.array([1.0, -1.0])))
    fields = [SignField.constant(3), SignField.half_space(3), flipped]
    report = check_bloch(params3, fields=fields, table=table3, shells=[1e-1])
    stats = report.statistics
    assert stats["flipped_seminorm_max"] == pytest.approx(stats["sign_seminorm_max"], rel=1e-9)
    assert stats["family_seminorm_max"] == max(stats["sign_seminorm_max"], stats["flipped_seminorm_max"])
    assert stats["family_spread"] == pytest.approx(1.0, rel=1e-9)
    assert 0.0 < stats["family_seminorm_max"] <= 1e3
    assert Criterion("family_seminorm_max", "<=", 1e3) in report.criteria


def test_runners_forward_command_line_options(monkeypatch, params3):
    calls = {}

    def record(name):
        def fake(params, **kwargs):
            calls[name] = kwargs
            return _report({"x": 0.0}, [Criterion("x", "<=", 1.0)])
        return fake

    monkeypatch.setattr(verify, "check_hardy", record("hardy"))
    monkeypatch.setattr(verify, "check_gradient", record("gradient"))
    monkeypatch.setattr(verify, "check_coefficients", record("coefficients"))
    monkeypatch.setattr(verify, "table_for", lambda params, options: ("table", options.m_max, options.K))
    options = CheckOptions(m_max=120, K=3, tol=1e-12, seed=5, pairs=7)
    for check_id in ("hardy", "gradient", "coefficients"):
        run_check(check_id, params3, options)
    assert calls["hardy"] == {"seed": 5, "pairs": 7, "tol": 1e-12}
    assert calls["gradient"] == {"table": ("table", 120, 3), "seed": 5, "pairs": 7}
    assert calls["coefficients"] == {"table": ("table", 120, 3), "m_high": 120}


def test_coefficients_check_needs_a_range(params3, table3):
    with pytest.raises(DomainError):
        check_coefficients(params3, table=table3, m_low=20, m_high=20)


def test_hardy_pair_tolerance_is_recorded(params3, monkeypatch):
    monkeypatch.setitem(verify.CONFIG, "SHELLS", [1e-1, 10 ** -1.5, 1e-2])
    report = check_hardy(params3, seed=3, pairs=4, tol=1e-12)
    assert report.grid_spec["pairs"] == 4
    assert report.grid_spec["pair_tol"] == 1e-12
    assert report.statistics["min_value_plus_tail"] >= 0.0
