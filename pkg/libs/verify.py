"""
Verification harness.

Each ``check_*`` function sweeps a grid, evaluates kernels or integrals,
fits growth rates and returns a VerifyReport. A report's verdict is a pure
function of its statistics and its criteria. ``REGISTRY`` maps check ids to
runners taking ``(params, CheckOptions)``; ``default_suite`` lists what
``verify-all`` runs for one (n, alpha) pair.
"""
import operator
import os
import sys
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize, special

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils import get_logger
from config_hbergman import CONFIG
from libs.coefficients import (
    CoefTable,
    build_coef_table,
    coef_A,
    coef_A0_closed_form,
    c_m_asymptotic,
    coef_D,
    euclid_gamma,
    euclid_gamma_quadrature,
    s_factor,
    s_factor_at_zero,
    s_factor_bound,
    s_factor_table,
)
from libs.errors import ConditionError, DomainError
from libs.geometry import BallPoint, Params, PointLike, ahlfors_bracket, as_point, invariant_gradient_fd, weighted_volume
from libs.kernels import (
    KernelFamily,
    ZonalProfile,
    bergman_kernel,
    choose_truncation,
    euclid_kernel,
    hardy_kernel,
    kernel_gradient,
    profile_series,
    zonal_scale,
    zonal_dimension,
)
from libs.quadrature import (
    angular_measure_rule,
    ball_integrate,
    gauss_jacobi_rule,
    graded_rule,
    growth_fit,
    radial_measure_rule,
    sphere_integrate,
    zonal_ball_integrate,
)
from libs.specfun import (
    GammaRatioSpec,
    HypParams21,
    HypParams32,
    dixon_sum,
    gamma_ratio,
    gegenbauer_at_one,
    gegenbauer_sequence,
    gegenbauer_weighted_integral,
    hyp2f1,
    hyp3f2_unit,
    kummer_transform,
    beta_fn,
)

logger = get_logger(__name__)

OPERATORS = {"<=": operator.le, "<": operator.lt, ">=": operator.ge, ">": operator.gt}

# |c| below this counts as the logarithmic case of a growth trichotomy
GROWTH_ZERO = 1e-12

# === Reports ===

@dataclass(frozen=True)
class Criterion:
    """``statistics[statistic] <op> bound``; missing or non-finite statistics fail."""
    statistic: str
    op: str
    bound: float

    def holds(self, statistics: Dict[str, float]) -> bool:
        value = statistics.get(self.statistic)
        if value is None or not np.isfinite(value):
            return False
        return bool(OPERATORS[self.op](value, self.bound))

    def as_dict(self) -> dict:
        return {"statistic": self.statistic, "op": self.op, "bound": float(self.bound)}


@dataclass(frozen=True, eq=False)
class VerifyReport:
    check_id: str
    params: Dict[str, float]
    grid_spec: Dict[str, object]
    statistics: Dict[str, float]
    criteria: Tuple[Criterion, ...]
    tolerance: float
    runtime: Optional[float] = None
    rows: Tuple[dict, ...] = ()

    @property
    def passed(self) -> bool:
        return all(criterion.holds(self.statistics) for criterion in self.criteria)

    def failed_criteria(self) -> List[Criterion]:
        return [criterion for criterion in self.criteria if not criterion.holds(self.statistics)]

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "check_id": self.check_id,
            "params": dict(self.params),
            "grid_spec": dict(self.grid_spec),
            "statistics": {key: float(value) for key, value in self.statistics.items()},
            "criteria": [criterion.as_dict() for criterion in self.criteria],
            "passed": self.passed,
            "tolerance": float(self.tolerance),
            "runtime": self.runtime if timings else None,
        }


@dataclass(frozen=True)
class CheckOptions:
    """Per-run settings forwarded from the command line."""
    p: Optional[float] = None
    beta: Optional[float] = None
    m_max: Optional[int] = None
    K: Optional[int] = None
    tol: Optional[float] = None
    seed: Optional[int] = None
    pairs: Optional[int] = None
    debug_exponent: bool = False


def _row(point: str, shell: float, x_norm: float, y_norm: float, cos_angle: float,
         quantity: str, value: float) -> dict:
    return {"point": point, "shell": shell, "x_norm": x_norm, "y_norm": y_norm,
            "cos_angle": cos_angle, "quantity": quantity, "value": value}


def _finish(check_id: str, params: dict, grid_spec: dict, statistics: dict, criteria: Sequence[Criterion],
            tolerance: float, started: float, rows: Sequence[dict] = ()) -> VerifyReport:
    report = VerifyReport(
        check_id=check_id,
        params=params,
        grid_spec=grid_spec,
        statistics={key: float(value) for key, value in statistics.items()},
        criteria=tuple(criteria),
        tolerance=float(tolerance),
        runtime=time.perf_counter() - started,
        rows=tuple(rows),
    )
    if report.passed:
        logger.info(f"Check {check_id} {params} passed in {report.runtime:.1f}s")
    else:
        failed = ", ".join(f"{c.statistic}={report.statistics.get(c.statistic)} (needs {c.op} {c.bound})"
                           for c in report.failed_criteria())
        logger.warning(f"Check {check_id} {params} FAILED: {failed}")
    return report


def _shell_radius(shell: float) -> float:
    return float(np.sqrt(1.0 - shell))


def _unit(n: int, axis: int = 0) -> np.ndarray:
    vector = np.zeros(n)
    vector[axis] = 1.0
    return vector


def _stability(values: Sequence[float]) -> float:
    """max/min of positive values; infinite when some value is not positive."""
    values = np.asarray(values, dtype=float)
    if values.size == 0 or np.any(values <= 0) or not np.all(np.isfinite(values)):
        return float("inf")
    return float(values.max() / values.min())


def _relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), abs(value), 1.0)


def _sweep_settings() -> Tuple[float, int, float]:
    return CONFIG["SWEEP_TOL"], CONFIG["SWEEP_TERM_CAP"], CONFIG["SWEEP_REL_TOL"]


def _growth_verdict(prefix: str, samples: Sequence[Tuple[float, float]], c: float):
    """Statistics and criteria for the trichotomy ~ a^-c (c > 0), log(1/a) (c = 0), bounded (c < 0)."""
    statistics, criteria = {f"{prefix}c": c}, []
    if c > GROWTH_ZERO:
        fit = growth_fit(samples, "power")
        statistics[f"{prefix}fitted_exponent"] = fit.fitted_exponent
        statistics[f"{prefix}exponent_rel_error"] = abs(fit.fitted_exponent - c) / c
        statistics[f"{prefix}r_squared"] = fit.r_squared
        criteria.append(Criterion(f"{prefix}exponent_rel_error", "<=", CONFIG["SLOPE_REL_TOL"]))
    elif c < -GROWTH_ZERO:
        statistics[f"{prefix}bounded_ratio"] = _stability([value for _, value in samples])
        criteria.append(Criterion(f"{prefix}bounded_ratio", "<", CONFIG["BOUNDED_RATIO_MAX"]))
    else:
        fit = growth_fit(samples, "log")
        statistics[f"{prefix}log_slope"] = fit.fitted_exponent
        statistics[f"{prefix}log_r_squared"] = fit.r_squared
        criteria.append(Criterion(f"{prefix}log_r_squared", ">=", CONFIG["LOG_R2_MIN"]))
        criteria.append(Criterion(f"{prefix}log_slope", ">", 0.0))
    return statistics, criteria


def _zonal_rules(n: int, r: float, beta: float):
    """Radial and angular rules graded to resolve a peak at distance 1-r from the boundary."""
    scale = np.log2(1.0 / max(1.0 - r, 1e-16))
    radial = radial_measure_rule(n, beta, int(np.ceil(scale)) + 6)
    angular = angular_measure_rule(n, int(np.ceil(2.0 * scale)) + 4)
    return radial, angular


def kernel_power_integral(table: CoefTable, r: float, p: float, beta: float) -> float:
    """int |R_alpha(r e_1, y)|^p (1-|y|^2)^beta d nu(y) on graded zonal rules."""
    n = table.params.n
    radial, angular = _zonal_rules(n, r, beta)
    tol, cap, rel_tol = _sweep_settings()
    profile = ZonalProfile(table, angular.nodes, tol, cap, rel_tol)

    def integrand(rho: float, _t: np.ndarray) -> np.ndarray:
        return np.abs(profile(r, rho)[0]) ** p

    return weighted_volume(n, beta) * float(zonal_ball_integrate(integrand, radial, angular))


def bracket_integral(n: int, b: float, power: float, r: float) -> float:
    """int (1-|y|^2)^b / [r e_1, y]^power d nu(y)."""
    radial, angular = _zonal_rules(n, r, b)

    def integrand(rho: float, t: np.ndarray) -> np.ndarray:
        return (1.0 - 2.0 * r * rho * t + (r * rho) ** 2) ** (-0.5 * power)

    return weighted_volume(n, b) * float(zonal_ball_integrate(integrand, radial, angular))


# === Kernel estimates ===

def _upper_grid(r: float, shell: float, n: int) -> List[Tuple[str, np.ndarray]]:
    x_dir, side = _unit(n, 0), _unit(n, 1)
    grid = [("diagonal", r * x_dir)]
    for k, factor in enumerate((1.0, 4.0)):
        theta = factor * np.sqrt(shell)
        grid.append((f"near{k}", r * (np.cos(theta) * x_dir + np.sin(theta) * side)))
    grid.append(("interior", 0.5 * side))
    grid.append(("antipodal", -r * x_dir))
    return grid


def check_kernel_upper(params: Params, grid_spec: Optional[dict] = None, table: Optional[CoefTable] = None,
                       exponent_shift: float = 0.0) -> VerifyReport:
    """
    Sharp upper bound |R_alpha(x, y)| [x, y]^(alpha+n) <= C.

    Fits the diagonal growth of R_alpha(r e_1, r e_1) and of the Euclidean
    kernel against 1/(1-r^2), expecting alpha+n+exponent_shift, and checks that
    the per-shell sup of |R_alpha| [x, y]^(alpha+n) is stable.
    """
    started = time.perf_counter()
    spec = {"shells": list(CONFIG["SHELLS"])}
    spec.update(grid_spec or {})
    table = table or build_coef_table(params)
    n, power = params.n, params.alpha + params.n
    tol, cap, rel_tol = _sweep_settings()
    diagonal, euclid_diagonal, shell_sups, rows = [], [], [], []
    for shell in spec["shells"]:
        r = _shell_radius(shell)
        x = BallPoint.on_axis(r, n)
        shell_sup = 0.0
        for name, y_coords in _upper_grid(r, shell, n):
            y = BallPoint(y_coords)
            value = bergman_kernel(x, y, table, tol, cap, rel_tol).value
            ratio = abs(value) * ahlfors_bracket(x, y) ** power
            shell_sup = max(shell_sup, ratio)
            cosine = float(np.dot(x.direction(), y.direction()))
            rows.append(_row(name, shell, r, y.norm, cosine, "kernel", value))
            rows.append(_row(name, shell, r, y.norm, cosine, "bracket_ratio", ratio))
            if name == "diagonal":
                diagonal.append((shell, value))
                euclid_value = euclid_kernel(x, y, params, tol, cap, rel_tol).value
                euclid_diagonal.append((shell, euclid_value))
                rows.append(_row(name, shell, r, y.norm, cosine, "euclid_kernel", euclid_value))
        shell_sups.append(shell_sup)
    expected = power + exponent_shift
    fit = growth_fit(diagonal, "power")
    euclid_fit = growth_fit(euclid_diagonal, "power")
    statistics = {
        "expected_exponent": expected,
        "diagonal_exponent": fit.fitted_exponent,
        "diagonal_exponent_rel_error": abs(fit.fitted_exponent - expected) / expected,
        "diagonal_r_squared": fit.r_squared,
        "euclid_diagonal_exponent": euclid_fit.fitted_exponent,
        "euclid_exponent_rel_error": abs(euclid_fit.fitted_exponent - expected) / expected,
        "sup_ratio_max": max(shell_sups),
        "sup_ratio_min": min(shell_sups),
        "shell_stability": _stability(shell_sups),
    }
    criteria = [
        Criterion("diagonal_exponent_rel_error", "<=", CONFIG["SLOPE_REL_TOL"]),
        Criterion("euclid_exponent_rel_error", "<=", CONFIG["SLOPE_REL_TOL"]),
        Criterion("sup_ratio_max", "<", float("inf")),
        Criterion("shell_stability", "<", CONFIG["STABILITY_FACTOR"]),
    ]
    return _finish("kernel_upper", params.as_dict(), spec, statistics, criteria,
                   CONFIG["SLOPE_REL_TOL"], started, rows)


def _cone_grid(r: float, s: float, n: int) -> List[Tuple[str, np.ndarray]]:
    grid = []
    for i, y1 in enumerate((0.5, r, 1.0 - 0.5 * (1.0 - r))):
        for j, spread in enumerate((0.0, 0.5 * s, 0.99 * s)):
            coords = y1 * _unit(n, 0) + spread * (1.0 - y1) * _unit(n, 1)
            grid.append((f"cone{i}{j}", coords))
    return grid


def check_kernel_lower(params: Params, s: Optional[float] = None, grid_spec: Optional[dict] = None,
                       table: Optional[CoefTable] = None) -> VerifyReport:
    """
    Nontangential lower bound R_alpha(r e_1, y) (1 - r y_1)^(alpha+n) >= C > 0 on the cone Omega_s.

    Without ``s`` the apertures of CONE_APERTURES are tried in order and the
    first one giving a positive, shell-stable minimum is reported.
    """
    started = time.perf_counter()
    spec = {"shells": list(CONFIG["SHELLS"])}
    spec.update(grid_spec or {})
    apertures = [s] if s is not None else list(CONFIG["CONE_APERTURES"])
    if any(a <= 0 or a >= 0.5 for a in apertures):
        raise DomainError(f"cone apertures must lie in (0, 1/2), got {apertures}")
    table = table or build_coef_table(params)
    n, power = params.n, params.alpha + params.n
    tol, cap, rel_tol = _sweep_settings()
    for aperture in apertures:
        shell_mins, rows = [], []
        for shell in spec["shells"]:
            r = _shell_radius(shell)
            x = BallPoint.on_axis(r, n)
            ratios = []
            for name, y_coords in _cone_grid(r, aperture, n):
                y = BallPoint(y_coords)
                value = bergman_kernel(x, y, table, tol, cap, rel_tol).value
                ratio = value * (1.0 - r * y.coords[0]) ** power
                ratios.append(ratio)
                rows.append(_row(name, shell, r, y.norm, float(np.dot(x.direction(), y.direction())),
                                 "lower_ratio", ratio))
            shell_mins.append(min(ratios))
        statistics = {
            "aperture": aperture,
            "min_ratio": min(shell_mins),
            "shell_stability": _stability(shell_mins),
        }
        positive = statistics["min_ratio"] > 0 and statistics["shell_stability"] < CONFIG["STABILITY_FACTOR"]
        logger.debug(f"cone aperture {aperture}: min ratio {statistics['min_ratio']:.4g}, "
                     f"stability {statistics['shell_stability']:.4g}")
        if positive:
            break
    spec["apertures_tried"] = apertures[:apertures.index(aperture) + 1]
    criteria = [
        Criterion("min_ratio", ">", 0.0),
        Criterion("shell_stability", "<", CONFIG["STABILITY_FACTOR"]),
    ]
    return _finish("kernel_lower", params.as_dict(), spec, statistics, criteria,
                   CONFIG["STABILITY_FACTOR"], started, rows)


def _random_points(rng: np.random.Generator, count: int, n: int, max_radius: float) -> np.ndarray:
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    return directions * (max_radius * rng.random(count))[:, None]


def check_gradient(params: Params, table: Optional[CoefTable] = None, seed: Optional[int] = None,
                   pairs: int = 100, step: float = 1e-4) -> VerifyReport:
    """Series gradient against central differences, and shell stability of |grad R| [x, y]^(alpha+n+1)."""
    started = time.perf_counter()
    seed = CONFIG["SEED"] if seed is None else seed
    table = table or build_coef_table(params)
    n, power = params.n, params.alpha + params.n + 1.0
    rng = np.random.default_rng(seed)
    xs, ys = _random_points(rng, pairs, n, 0.7), _random_points(rng, pairs, n, 0.7)
    fd_tol = 1e-15
    worst = 0.0
    rows = []
    for k, (x, y) in enumerate(zip(xs, ys)):
        series = kernel_gradient(x, y, table, fd_tol)[0]
        differences = np.empty(n)
        for i in range(n):
            shift = step * _unit(n, i)
            forward = bergman_kernel(x + shift, y, table, fd_tol).value
            backward = bergman_kernel(x - shift, y, table, fd_tol).value
            differences[i] = (forward - backward) / (2.0 * step)
        error = float(np.max(np.abs(series - differences)) / max(1.0, float(np.max(np.abs(series)))))
        worst = max(worst, error)
        rows.append(_row(f"pair{k}", float("nan"), float(np.linalg.norm(x)), float(np.linalg.norm(y)),
                         float("nan"), "fd_error", error))
    tol, cap, rel_tol = _sweep_settings()
    shell_sups = []
    for shell in CONFIG["SHELLS"]:
        r = _shell_radius(shell)
        x = BallPoint.on_axis(r, n)
        shell_sup = 0.0
        for name, y_coords in _upper_grid(r, shell, n)[:4]:
            y = BallPoint(y_coords)
            gradient = kernel_gradient(x, y, table, tol, cap, rel_tol)[0]
            ratio = float(np.linalg.norm(gradient)) * ahlfors_bracket(x, y) ** power
            shell_sup = max(shell_sup, ratio)
            rows.append(_row(name, shell, r, y.norm, float(np.dot(x.direction(), y.direction())),
                             "gradient_ratio", ratio))
        shell_sups.append(shell_sup)
    statistics = {
        "fd_max_error": worst,
        "gradient_sup_max": max(shell_sups),
        "shell_stability": _stability(shell_sups),
    }
    criteria = [
        Criterion("fd_max_error", "<=", 1e-6),
        Criterion("shell_stability", "<", CONFIG["STABILITY_FACTOR"]),
    ]
    spec = {"pairs": pairs, "max_radius": 0.7, "step": step, "seed": seed, "shells": list(CONFIG["SHELLS"])}
    return _finish("gradient", params.as_dict(), spec, statistics, criteria, 1e-6, started, rows)


def check_hardy(params: Params, seed: Optional[int] = None, pairs: int = 200,
                tol: Optional[float] = None) -> VerifyReport:
    """K(x, y) >= -tail_bound on random pairs; K(r e_1, r e_1) grows like (1-r^2)^-(n-1)."""
    started = time.perf_counter()
    seed = CONFIG["SEED"] if seed is None else seed
    n = params.n
    rng = np.random.default_rng(seed)
    xs, ys = _random_points(rng, pairs, n, 0.95), _random_points(rng, pairs, n, 0.95)
    pair_tol = tol or CONFIG["KERNEL_TOL"]
    lowest = min(value.value + value.tail_bound
                 for value in (hardy_kernel(x, y, pair_tol) for x, y in zip(xs, ys)))
    sweep_tol, cap, rel_tol = _sweep_settings()
    diagonal, rows = [], []
    for shell in CONFIG["SHELLS"]:
        r = _shell_radius(shell)
        x = BallPoint.on_axis(r, n)
        value = hardy_kernel(x, x, sweep_tol, cap, rel_tol).value
        diagonal.append((shell, value))
        rows.append(_row("diagonal", shell, r, r, 1.0, "hardy_kernel", value))
    fit = growth_fit(diagonal, "power")
    expected = n - 1.0
    scaled = [value * shell ** expected for shell, value in diagonal]
    statistics = {
        "min_value_plus_tail": lowest,
        "diagonal_exponent": fit.fitted_exponent,
        "diagonal_exponent_rel_error": abs(fit.fitted_exponent - expected) / expected,
        "scaled_diagonal_stability": _stability(scaled),
    }
    criteria = [
        Criterion("min_value_plus_tail", ">=", 0.0),
        Criterion("diagonal_exponent_rel_error", "<=", CONFIG["SLOPE_REL_TOL"]),
        Criterion("scaled_diagonal_stability", "<", CONFIG["STABILITY_FACTOR"]),
    ]
    spec = {"pairs": pairs, "max_radius": 0.95, "seed": seed, "pair_tol": pair_tol,
            "shells": list(CONFIG["SHELLS"])}
    return _finish("hardy", {"n": n}, spec, statistics, criteria, CONFIG["SLOPE_REL_TOL"], started, rows)


# === Integral estimates ===

def check_integral_growth(params: Params, p: float, beta: float, table: Optional[CoefTable] = None,
                          shells: Optional[Sequence[float]] = None) -> VerifyReport:
    """
    Growth of J(x) = int |R_alpha(x, y)|^p (1-|y|^2)^beta d nu(y) as x = r e_1 -> boundary.

    With c = p(alpha+n) - (beta+n): J ~ (1-|x|^2)^-c for c > 0, ~ log for c = 0, bounded for c < 0.
    """
    started = time.perf_counter()
    if p <= 0:
        raise DomainError(f"exponent p must be positive, got {p}")
    if beta <= -1:
        raise DomainError(f"weight beta must exceed -1, got {beta}")
    shells = list(shells or CONFIG["INTEGRAL_SHELLS"])
    table = table or build_coef_table(params)
    c = p * (params.alpha + params.n) - (beta + params.n)
    samples, rows = [], []
    for shell in shells:
        r = _shell_radius(shell)
        value = kernel_power_integral(table, r, p, beta)
        samples.append((shell, value))
        rows.append(_row("axis", shell, r, float("nan"), float("nan"), "J", value))
    statistics, criteria = _growth_verdict("", samples, c)
    return _finish("integral_growth", {**params.as_dict(), "beta": beta, "p": p}, {"shells": shells},
                   statistics, criteria, CONFIG["SLOPE_REL_TOL"], started, rows)


def check_radial_integral(cases: Sequence[Tuple[float, float]] = ((0.5, 1.2), (0.5, 0.0), (0.5, -0.7)),
                          gaps: Sequence[float] = tuple(10.0 ** -np.linspace(2.0, 4.0, 5))) -> VerifyReport:
    """One-dimensional trichotomy of int_0^1 (1-t)^b / (1-rt)^(1+b+c) dt as r -> 1, by adaptive quadrature."""
    started = time.perf_counter()
    statistics, criteria, rows = {}, [], []
    for index, (b, c) in enumerate(cases):
        samples = []
        for gap in gaps:
            r = 1.0 - gap
            value, _ = integrate.quad(lambda t: (1.0 - r * t) ** (-(1.0 + b + c)), 0.0, 1.0,
                                      weight="alg", wvar=(0.0, b), limit=500)
            samples.append((gap, value))
            rows.append(_row(f"case{index}", gap, r, float("nan"), float("nan"), "radial_integral", value))
        case_statistics, case_criteria = _growth_verdict(f"case{index}_", samples, c)
        statistics.update(case_statistics)
        criteria.extend(case_criteria)
    spec = {"cases": [list(case) for case in cases], "gaps": [float(g) for g in gaps]}
    return _finish("radial_integral", {}, spec, statistics, criteria, CONFIG["SLOPE_REL_TOL"], started, rows)


def check_bracket_integral(params: Params, cases: Sequence[Tuple[float, float]] = ((0.0, 1.5), (0.5, 0.0), (1.0, -0.5)),
                           shells: Optional[Sequence[float]] = None) -> VerifyReport:
    """Ball trichotomy of int (1-|y|^2)^b / [x, y]^(n+b+c) d nu(y) as x = r e_1 -> boundary."""
    started = time.perf_counter()
    shells = list(shells or CONFIG["BRACKET_SHELLS"])
    n = params.n
    statistics, criteria, rows = {}, [], []
    for index, (b, c) in enumerate(cases):
        samples = []
        for shell in shells:
            r = _shell_radius(shell)
            value = bracket_integral(n, b, n + b + c, r)
            samples.append((shell, value))
            rows.append(_row(f"case{index}", shell, r, float("nan"), float("nan"), "bracket_integral", value))
        case_statistics, case_criteria = _growth_verdict(f"case{index}_", samples, c)
        statistics.update(case_statistics)
        criteria.extend(case_criteria)
    spec = {"cases": [list(case) for case in cases], "shells": list(shells)}
    return _finish("bracket_integral", {"n": n}, spec, statistics, criteria,
                   CONFIG["SLOPE_REL_TOL"], started, rows)


def check_adjoint_extremal(params: Params, table: Optional[CoefTable] = None,
                           shells: Optional[Sequence[float]] = None) -> VerifyReport:
    """
    P*_alpha f_x0 (x0) = int |R_alpha(x0, y)| d nu_alpha(y) grows like log 1/(1-|x0|^2),
    so P_alpha is unbounded on L^1_alpha.
    """
    started = time.perf_counter()
    shells = list(shells or CONFIG["INTEGRAL_SHELLS"])
    table = table or build_coef_table(params)
    samples, rows = [], []
    volume = weighted_volume(params.n, params.alpha)
    for shell in shells:
        r = _shell_radius(shell)
        value = kernel_power_integral(table, r, 1.0, params.alpha) / volume
        samples.append((shell, value))
        rows.append(_row("x0", shell, r, float("nan"), float("nan"), "adjoint_extremal", value))
    statistics, criteria = _growth_verdict("", samples, 0.0)
    return _finish("adjoint_extremal", params.as_dict(), {"shells": shells}, statistics, criteria,
                   CONFIG["LOG_R2_MIN"], started, rows)


def check_schur(params: Params, p: float, beta: float, shells: Optional[Sequence[float]] = None) -> VerifyReport:
    """
    Schur test for P_beta on L^p_alpha with h(x) = (1-|x|^2)^(-(alpha+1)/(pq)).

    (h1): int (1-|y|^2)^beta [x,y]^-(beta+n) h^q(y) d nu(y) / h^q(x),
    (h2): (1-|y|^2)^(beta-alpha) int (1-|x|^2)^alpha [x,y]^-(beta+n) h^p(x) d nu(x) / h^p(y);
    both ratios must stay bounded across shells.

    Raises:
        ConditionError: alpha+1 >= p(beta+1).
    """
    started = time.perf_counter()
    alpha, n = params.alpha, params.n
    if p <= 1:
        raise DomainError(f"Schur's test needs p > 1, got {p}")
    if beta <= -1:
        raise DomainError(f"weight beta must exceed -1, got {beta}")
    if not alpha + 1.0 < p * (beta + 1.0):
        raise ConditionError(f"alpha+1 < p(beta+1) fails for alpha={alpha}, beta={beta}, p={p}")
    q = p / (p - 1.0)
    shells = list(shells or CONFIG["SHELLS"])
    first_ratios, second_ratios, rows = [], [], []
    for shell in shells:
        r = _shell_radius(shell)
        first = bracket_integral(n, beta - (alpha + 1.0) / p, beta + n, r) * shell ** ((alpha + 1.0) / p)
        second = (shell ** (beta - alpha) * bracket_integral(n, alpha - (alpha + 1.0) / q, beta + n, r)
                  * shell ** ((alpha + 1.0) / q))
        first_ratios.append(first)
        second_ratios.append(second)
        rows.append(_row("axis", shell, r, float("nan"), float("nan"), "h1_ratio", first))
        rows.append(_row("axis", shell, r, float("nan"), float("nan"), "h2_ratio", second))
    statistics = {
        "h1_ratio_max": max(first_ratios),
        "h1_stability": _stability(first_ratios),
        "h2_ratio_max": max(second_ratios),
        "h2_stability": _stability(second_ratios),
    }
    criteria = [
        Criterion("h1_stability", "<", CONFIG["STABILITY_FACTOR"]),
        Criterion("h2_stability", "<", CONFIG["STABILITY_FACTOR"]),
    ]
    return _finish("schur", {**params.as_dict(), "beta": beta, "p": p}, {"shells": shells},
                   statistics, criteria, CONFIG["STABILITY_FACTOR"], started, rows)


# === Projections ===

@dataclass(frozen=True, eq=False)
class SignField:
    """
    A field of modulus one that on each sphere |y| = rho is piecewise constant
    in t = <y/|y|, e_1>: ``pieces(rho)`` returns breakpoints -1 = t_0 < ... < t_k = 1
    and the k values taken in between.
    """
    name: str
    n: int
    pieces: Callable[[float], Tuple[np.ndarray, np.ndarray]] = field(repr=False)

    def __call__(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        norms = np.linalg.norm(points, axis=1)
        cosines = np.where(norms > 0, points[:, 0] / np.where(norms > 0, norms, 1.0), 1.0)
        out = np.empty(points.shape[0])
        for rho in np.unique(norms):
            chosen = norms == rho
            breaks, values = self.pieces(float(rho))
            index = np.clip(np.searchsorted(breaks, cosines[chosen], side="right") - 1, 0, values.size - 1)
            out[chosen] = values[index]
        return out

    @classmethod
    def constant(cls, n: int) -> "SignField":
        return cls("one", n, lambda rho: (np.array([-1.0, 1.0]), np.array([1.0])))

    @classmethod
    def half_space(cls, n: int) -> "SignField":
        """sign(y_1)."""
        return cls("sign", n, lambda rho: (np.array([-1.0, 0.0, 1.0]), np.array([-1.0, 1.0])))

    @classmethod
    def extremal(cls, table: CoefTable, radius: float = None, scan: int = 2001) -> "SignField":
        """f_x0(y) = sign R_beta(x0, y) for x0 = radius e_1 (1 where the kernel vanishes)."""
        radius = CONFIG["EXTREMAL_POINT"] if radius is None else radius
        grid = np.cos(np.linspace(np.pi, 0.0, scan))

        @lru_cache(maxsize=4096)
        def pieces(rho: float):
            series = profile_series(radius, rho, table, tol=1e-12)
            values = series(grid)
            roots = []
            for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
                if fa == 0.0:
                    roots.append(float(a))
                elif fa * fb < 0:
                    roots.append(optimize.brentq(lambda s: float(series(np.array([s]))[0]), a, b, xtol=1e-14))
            breaks = np.array([-1.0] + roots + [1.0])
            middles = 0.5 * (breaks[:-1] + breaks[1:])
            signs = np.sign(series(middles))
            return breaks, np.where(signs == 0, 1.0, signs)

        return cls("extremal", table.params.n, pieces)


class ProjectedField:
    """
    P_beta f for a SignField f, as sum_m c_m S_m(|x|) a_m Z_m(x, e_1).

    By the Funk-Hecke formula a_m = int rho^m S_m(rho) mu_m(rho) d nu_beta, where
    mu_m(rho) = int f(rho zeta) C_m(t)/C_m(1) over the sphere. The a_m do not
    depend on x, so P_beta f is cheap to evaluate anywhere.
    """

    def __init__(self, sign_field: SignField, table: CoefTable, tol: float = 1e-12, cap: int = None,
                 rel_tol: float = 1e-12):
        if sign_field.n != table.params.n:
            raise DomainError(f"field lives in dimension {sign_field.n}, table in {table.params.n}")
        self.field = sign_field
        self.table = table
        self.family = KernelFamily.bergman(table)
        self.tol = tol
        self.rel_tol = rel_tol
        self.cap = cap or CONFIG["SWEEP_TERM_CAP"]
        self._moments = np.zeros(0)

    def moments(self, M: int) -> np.ndarray:
        if self._moments.size < M + 1:
            size = max(M + 1, 2 * self._moments.size)
            self._moments = self._compute_moments(size - 1)
        return self._moments[:M + 1]

    def _compute_moments(self, M: int) -> np.ndarray:
        n, beta = self.table.params.n, self.table.params.alpha
        lam = self.table.params.lam
        degrees = np.arange(M + 1)
        radial = radial_measure_rule(n, beta, int(np.ceil(np.log2(M + 2))) + 6)
        at_one = gegenbauer_at_one(degrees, lam)
        moments = np.zeros(M + 1)
        for rho, weight in zip(radial.nodes, radial.weights):
            breaks, values = self.field.pieces(float(rho))
            mu = gegenbauer_weighted_integral(M, lam, breaks[:-1], breaks[1:]) @ values / at_one
            moments += weight * np.exp(degrees * np.log(rho)) * s_factor_table(degrees, float(rho), n) * mu
        logger.debug(f"projection moments of field {self.field.name} computed up to degree {M}")
        return moments

    def __call__(self, x) -> float:
        coords = x.coords if isinstance(x, BallPoint) else np.asarray(x, dtype=float)
        r = float(np.linalg.norm(coords))
        if r >= 1.0:
            raise DomainError(f"point {coords.tolist()} is not inside the open unit ball")
        if r == 0.0:
            return float(self.moments(0)[0])
        n = self.family.n

        def majorant(m: np.ndarray) -> np.ndarray:
            return (np.abs(self.family.coefficients(m)) * s_factor_bound(m, r, n) * s_factor_at_zero(m, n)
                    * zonal_dimension(m, n) * np.exp(m * np.log(r)))

        M, _ = choose_truncation(majorant, r, self.family.growth_degree, self.tol, self.cap, self.rel_tol)
        degrees = np.arange(M + 1)
        weights = (self.family.coefficients(degrees) * s_factor_table(degrees, r, n) * self.moments(M)
                   * zonal_scale(degrees, n) * np.exp(degrees * np.log(r)))
        cosine = float(np.clip(coords[0] / r, -1.0, 1.0))
        return float(weights @ gegenbauer_sequence(M, self.table.params.lam, cosine))


def bergman_project(f, params: Params, beta: float, x: PointLike, table: Optional[CoefTable] = None,
                    pole=None, tol: float = 1e-10) -> float:
    """
    P_beta f(x) = int R_beta(x, y) f(y) d nu_beta(y).

    A SignField goes through ProjectedField; any other field is integrated by
    ``ball_integrate`` (vectorized over the points of each sphere). For n > 3
    the field must be zonal about ``pole`` and x must lie on that axis.
    """
    table = table or build_coef_table(params.with_alpha(beta))
    if table.params.alpha != beta or table.params.n != params.n:
        raise DomainError(f"coefficient table is for {table.params}, projection needs alpha={beta}")
    if isinstance(f, SignField):
        return ProjectedField(f, table)(x)
    x = as_point(x)
    direction = x.direction()
    if pole is not None and x.norm > 0:
        axis = np.asarray(pole, dtype=float) / np.linalg.norm(pole)
        if abs(abs(float(np.dot(axis, direction))) - 1.0) > 1e-12:
            raise DomainError("zonal projection needs x on the pole axis")

    def integrand(points: np.ndarray) -> np.ndarray:
        rho = float(np.linalg.norm(points[0]))
        series = profile_series(x.norm, rho, table, tol=1e-14)
        cosines = np.clip(points @ direction / rho, -1.0, 1.0)
        return series(cosines) * f(points)

    return ball_integrate(integrand, params, weight_beta=beta, tol=tol, pole=pole)


def _reproducing_field(params: Params, m: int):
    """f = S_m(|y|) p_m(y) with p_m a fixed solid harmonic; returns (f, pole)."""
    n = params.n
    if n == 3:
        products = {0: (), 1: (0,), 2: (0, 1), 3: (0, 1, 2)}
        if m not in products:
            raise DomainError(f"product harmonics are defined for m <= 3, got {m}")

        def harmonic(points: np.ndarray) -> np.ndarray:
            return np.prod(points[:, list(products[m])], axis=1) if products[m] else np.ones(points.shape[0])
        pole = None
    else:
        lam = params.lam

        def harmonic(points: np.ndarray) -> np.ndarray:
            norms = np.linalg.norm(points, axis=1)
            safe = np.where(norms > 0, norms, 1.0)
            return norms ** m * gegenbauer_sequence(m, lam, np.clip(points[:, 0] / safe, -1.0, 1.0))[m]
        pole = _unit(n, 0)

    def field_values(points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        rho = float(np.linalg.norm(points[0]))
        return s_factor(m, rho, params) * harmonic(points)

    return field_values, pole


def check_reproducing(params: Params, m: Optional[int] = None, probe: Optional[PointLike] = None,
                      table: Optional[CoefTable] = None) -> VerifyReport:
    """P_alpha f(probe) = f(probe) for f = S_m(|y|) p_m(y); all m in 0..3 when ``m`` is None."""
    started = time.perf_counter()
    n = params.n
    degrees = [m] if m is not None else [0, 1, 2, 3]
    if probe is None:
        probe = np.array([0.4, 0.1, -0.2]) if n == 3 else 0.45 * _unit(n, 0)
    probe = as_point(probe)
    if probe.norm > 0.6:
        raise DomainError(f"reproduction probes must satisfy |x| <= 0.6, got {probe.norm}")
    table = table or build_coef_table(params)
    statistics, rows = {}, []
    for degree in degrees:
        field_values, pole = _reproducing_field(params, degree)
        expected = float(field_values(probe.coords[None, :])[0])
        value = bergman_project(field_values, params, params.alpha, probe, table, pole=pole)
        error = abs(value - expected) / max(abs(expected), 1e-300)
        statistics[f"rel_error_m{degree}"] = error
        rows.append(_row(f"m{degree}", float("nan"), probe.norm, float("nan"), float("nan"), "projection", value))
        rows.append(_row(f"m{degree}", float("nan"), probe.norm, float("nan"), float("nan"), "field", expected))
    statistics["max_rel_error"] = max(statistics[f"rel_error_m{degree}"] for degree in degrees)
    criteria = [Criterion("max_rel_error", "<=", 1e-6)]
    spec = {"degrees": degrees, "probe": probe.coords.tolist()}
    return _finish("reproducing", params.as_dict(), spec, statistics, criteria, 1e-6, started, rows)


def check_mean_value(params: Params, x: Optional[PointLike] = None, r: float = 0.7,
                     table: Optional[CoefTable] = None, delta: float = 1.5) -> VerifyReport:
    """
    The sphere average of R_alpha(x, r zeta) is 1, and int R_alpha(x, y)(1-|y|^2)^delta d nu(y)
    does not depend on x.
    """
    started = time.perf_counter()
    n = params.n
    if not 0 <= r < 1:
        raise DomainError(f"sphere radius must lie in [0, 1), got {r}")
    x = as_point(0.5 * _unit(n, 0) if x is None else x)
    table = table or build_coef_table(params)
    direction = x.direction()
    series = profile_series(x.norm, r, table, tol=1e-14)
    average = sphere_integrate(lambda zeta: series(np.clip(zeta @ direction, -1.0, 1.0)), n,
                               tol=1e-12, pole=direction)
    rows = [_row("sphere", float("nan"), x.norm, r, float("nan"), "sphere_average", average)]
    ball_values = []
    for radius in (0.0, 0.3, 0.6):
        def integrand(points: np.ndarray, radius=radius) -> np.ndarray:
            rho = float(np.linalg.norm(points[0]))
            return profile_series(radius, rho, table, tol=1e-14)(np.clip(points[:, 0] / rho, -1.0, 1.0))

        value = ball_integrate(integrand, params, weight_beta=delta, tol=1e-10, pole=_unit(n, 0))
        ball_values.append(value)
        rows.append(_row(f"probe{radius}", float("nan"), radius, float("nan"), float("nan"), "ball_integral", value))
    statistics = {
        "sphere_average": average,
        "sphere_average_error": abs(average - 1.0),
        "ball_integral_spread": max(ball_values) - min(ball_values),
    }
    criteria = [
        Criterion("sphere_average_error", "<=", 1e-8),
        Criterion("ball_integral_spread", "<=", 1e-7),
    ]
    spec = {"x": x.coords.tolist(), "r": r, "delta": delta, "probes": [0.0, 0.3, 0.6]}
    return _finish("mean_value", params.as_dict(), spec, statistics, criteria, 1e-8, started, rows)


def check_bloch(params: Params, fields: Optional[Sequence[SignField]] = None,
                table: Optional[CoefTable] = None, shells: Optional[Sequence[float]] = None) -> VerifyReport:
    """
    (1-|x|^2)|grad P_alpha f(x)| for bounded fields f stays below a shell-stable
    multiple of ||f||_inf = 1; P_alpha 1 = 1 has seminorm 0.
    """
    started = time.perf_counter()
    table = table or build_coef_table(params)
    n = params.n
    fields = list(fields or (SignField.constant(n), SignField.half_space(n), SignField.extremal(table)))
    shells = list(shells or CONFIG["BLOCH_SHELLS"])
    directions = [_unit(n, 0), _unit(n, 1), (_unit(n, 0) + _unit(n, 1)) / np.sqrt(2.0)]
    statistics, criteria, rows = {}, [], []
    for sign_field in fields:
        projected = ProjectedField(sign_field, table)
        per_shell = []
        for shell in shells:
            r = _shell_radius(shell)
            seminorms = []
            for k, direction in enumerate(directions):
                value = invariant_gradient_fd(projected, r * direction)
                seminorms.append(value)
                rows.append(_row(f"{sign_field.name}_dir{k}", shell, r, float("nan"), float(direction[0]),
                                 "bloch_seminorm", value))
            per_shell.append(max(seminorms))
        name = sign_field.name
        statistics[f"{name}_seminorm_max"] = max(per_shell)
        if name == "one":
            criteria.append(Criterion(f"{name}_seminorm_max", "<=", 1e-6))
        else:
            statistics[f"{name}_shell_growth"] = max(per_shell) / per_shell[0] if per_shell[0] > 0 else float("inf")
            criteria.append(Criterion(f"{name}_shell_growth", "<=", CONFIG["STABILITY_FACTOR"]))
    # ||f||_inf = 1 for every sign field
    family = [statistics[f"{f.name}_seminorm_max"] for f in fields if f.name != "one"]
    if family:
        statistics["family_seminorm_max"] = max(family)
        statistics["family_spread"] = max(family) / min(family) if min(family) > 0 else float("inf")
        criteria.append(Criterion("family_seminorm_max", "<=", CONFIG["BLOCH_CONSTANT_MAX"]))
    spec = {"shells": shells, "fields": [f.name for f in fields], "directions": len(directions)}
    return _finish("bloch", params.as_dict(), spec, statistics, criteria, CONFIG["STABILITY_FACTOR"],
                   started, rows)


# === Coefficients and substrate ===

def check_coefficients(params: Params, table: Optional[CoefTable] = None, m_low: int = 20,
                       m_high: int = 400) -> VerifyReport:
    """
    Asymptotics of I_m: the residual of the K-term inverse-Pochhammer expansion
    decays like m^-K; exact and asymptotic c_m agree at m_high; A_0 matches
    its closed form; for even n the A_k vanish from k = n/2 on.
    """
    started = time.perf_counter()
    n, alpha = params.n, params.alpha
    if m_high <= m_low:
        raise DomainError(f"m_high must exceed m_low={m_low}, got {m_high}")
    if table is None or table.m_max < m_high:
        table = build_coef_table(params, max(m_high, CONFIG["M_MAX"]), table.K if table else None)
    degrees = np.unique(np.round(np.geomspace(m_low, m_high, 12)).astype(int))
    log_ratio = special.gammaln(degrees + alpha + n) - special.gammaln(degrees + n - 1.0)
    scaled = np.exp(log_ratio) / table.c_exact[degrees]
    A = np.array([coef_A(k, params) for k in range(4)])
    statistics, criteria, rows = {}, [], []
    shift = alpha + n
    for K in (1, 2, 3):
        partial = sum(A[k] / np.array([gamma_ratio(GammaRatioSpec((m + shift + k,), (m + shift,)))
                                        for m in degrees]) for k in range(K))
        residual = np.abs(scaled - partial)
        for m, value in zip(degrees, residual):
            rows.append(_row(f"m{m}", float("nan"), float("nan"), float("nan"), float("nan"),
                             f"residual_K{K}", float(value)))
        if n % 2 == 0 and K >= n // 2:
            statistics[f"residual_K{K}_max_rel"] = float(np.max(residual / np.abs(scaled)))
            criteria.append(Criterion(f"residual_K{K}_max_rel", "<=", 1e-9))
        else:
            fit = growth_fit(list(zip(1.0 / degrees, residual)), "power")
            statistics[f"residual_K{K}_slope"] = fit.fitted_exponent
            statistics[f"residual_K{K}_slope_error"] = abs(fit.fitted_exponent + K)
            criteria.append(Criterion(f"residual_K{K}_slope_error", "<=", 0.5))
    D3 = coef_D(3, params)
    exact = float(table.c_exact[m_high])
    asymptotic = float(c_m_asymptotic(m_high, params, D3))
    statistics["c_asymptotic_rel_error"] = abs(asymptotic - exact) / exact
    criteria.append(Criterion("c_asymptotic_rel_error", "<=", 1e-5))
    statistics["A0_closed_form_rel_error"] = abs(A[0] - coef_A0_closed_form(params)) / abs(A[0])
    criteria.append(Criterion("A0_closed_form_rel_error", "<=", 1e-10))
    statistics["c0_error"] = abs(float(table.c_exact[0]) - 1.0)
    criteria.append(Criterion("c0_error", "<=", 1e-14))
    statistics["c_min"] = float(np.min(table.c_exact))
    criteria.append(Criterion("c_min", ">", 0.0))
    if n % 2 == 0:
        statistics["A_terminated_abs"] = abs(coef_A(n // 2, params))
        criteria.append(Criterion("A_terminated_abs", "<=", 0.0))
    spec = {"m_low": m_low, "m_high": m_high, "degrees": degrees.tolist(), "m_max": table.m_max}
    return _finish("coefficients", params.as_dict(), spec, statistics, criteria, 1e-5, started, rows)


def _euler_integral_error(a: float, b: float, c: float, rho: float) -> float:
    # the piece over [1 - 2^-7, 1] is below F(1) 2^(-7 rho) / rho, negligible for rho >= 6
    top = 1.0 - 2.0 ** -7
    rule = graded_rule(0.0, top, depth=10, e_lo=c - 1.0)
    params = HypParams21(a, b, c)
    values = np.array([hyp2f1(params, float(t)) for t in rule.nodes])
    integral = float(np.sum(rule.weights * (1.0 - rule.nodes) ** (rho - 1.0) * values))
    closed = gamma_ratio(GammaRatioSpec((c, rho, c - a - b + rho), (c - a + rho, c - b + rho)))
    return _relative_error(integral, closed)


def check_special_functions(seed: Optional[int] = None, samples: int = 50) -> VerifyReport:
    """
    Euler's transform, Gauss's value, Dixon's sum, Kummer's relation and the
    Euler integral int_0^1 t^(c-1) (1-t)^(rho-1) F(a, b; c; t) dt on random
    admissible parameters.
    """
    started = time.perf_counter()
    seed = CONFIG["SEED"] if seed is None else seed
    rng = np.random.default_rng(seed)
    errors = {"euler": 0.0, "gauss": 0.0, "dixon": 0.0, "kummer": 0.0, "euler_integral": 0.0}
    for _ in range(samples):
        a, b = rng.uniform(-2.0, 2.0, 2)
        c, z = rng.uniform(0.5, 3.0), rng.uniform(-0.9, 0.9)
        direct = hyp2f1(HypParams21(a, b, c), z)
        transformed = (1.0 - z) ** (c - a - b) * hyp2f1(HypParams21(c - a, c - b, c), z)
        errors["euler"] = max(errors["euler"], _relative_error(transformed, direct))

        a, b = rng.uniform(0.1, 2.0, 2)
        c = a + b + rng.uniform(1.0, 3.0)
        extra = rng.uniform(0.5, 2.0)
        series = hyp3f2_unit(HypParams32(a, b, extra, c, extra))
        closed = gamma_ratio(GammaRatioSpec((c, c - a - b), (c - a, c - b)))
        errors["gauss"] = max(errors["gauss"], _relative_error(series, closed))

        a, b, c = rng.uniform(1.0, 4.0), rng.uniform(0.1, 0.8), rng.uniform(-0.8, 0.3)
        series = hyp3f2_unit(HypParams32(a, b, c, a - b + 1.0, a - c + 1.0))
        errors["dixon"] = max(errors["dixon"], _relative_error(series, dixon_sum(a, b, c)))

        while True:
            a, b, c = rng.uniform(0.2, 1.5, 3)
            d = rng.uniform(0.5, 3.0)
            e = a + rng.uniform(1.0, 3.0)
            if d + e - a - b - c >= 1.0:
                break
        left = hyp3f2_unit(HypParams32(a, b, c, d, e))
        prefactor, transformed_params = kummer_transform(HypParams32(a, b, c, d, e))
        right = prefactor * hyp3f2_unit(transformed_params)
        errors["kummer"] = max(errors["kummer"], _relative_error(right, left))

        a, b = rng.uniform(-1.0, 1.0, 2)
        c, rho = max(a + b, 0.0) + rng.uniform(0.5, 2.5), rng.uniform(6.0, 8.0)
        errors["euler_integral"] = max(errors["euler_integral"], _euler_integral_error(a, b, c, rho))
    statistics = {f"{name}_max_rel_error": value for name, value in errors.items()}
    criteria = [Criterion(name, "<=", 1e-10) for name in statistics]
    return _finish("special_functions", {}, {"samples": samples, "seed": seed}, statistics, criteria,
                   1e-10, started)


def check_quadrature_oracle(params: Params, m_top: int = 50) -> VerifyReport:
    """Gauss-Jacobi rules against Beta moments, gamma_m against its closed form, and nu_beta(B) = 1."""
    started = time.perf_counter()
    beta_error = 0.0
    for a, b in ((1.5, 2.5), (0.5, 0.5), (2.0, 3.0), (0.3, 1.7)):
        rule = gauss_jacobi_rule(16, a - 1.0, b - 1.0)
        for k in range(11):
            moment = rule.apply(lambda t: t ** k)
            beta_error = max(beta_error, abs(moment - beta_fn(a + k, b)) / beta_fn(a + k, b))
    gamma_error = max(abs(euclid_gamma_quadrature(m, params) - euclid_gamma(m, params)) / euclid_gamma(m, params)
                      for m in range(m_top + 1))
    pole = None if params.n == 3 else _unit(params.n, 0)
    volume_error = max(abs(ball_integrate(lambda pts: np.ones(pts.shape[0]), params, weight_beta=weight,
                                          pole=pole) - 1.0)
                       for weight in (-0.5, 0.0, 1.0, 2.5))
    statistics = {
        "beta_moment_max_rel_error": beta_error,
        "euclid_gamma_max_rel_error": gamma_error,
        "ball_volume_max_error": volume_error,
    }
    criteria = [
        Criterion("beta_moment_max_rel_error", "<=", 1e-12),
        Criterion("euclid_gamma_max_rel_error", "<=", 1e-12),
        Criterion("ball_volume_max_error", "<=", 1e-10),
    ]
    return _finish("quadrature_oracle", params.as_dict(), {"m_top": m_top}, statistics, criteria,
                   1e-12, started)


# === Registry ===

Runner = Callable[[Params, CheckOptions], VerifyReport]
REGISTRY: Dict[str, Runner] = {}


def register(check_id: str):
    def decorator(runner: Runner) -> Runner:
        REGISTRY[check_id] = runner
        return runner
    return decorator


def table_for(params: Params, options: CheckOptions) -> CoefTable:
    return build_coef_table(params, options.m_max, options.K, options.tol)


@register("kernel_upper")
def _run_kernel_upper(params, options):
    return check_kernel_upper(params, table=table_for(params, options),
                              exponent_shift=1.0 if options.debug_exponent else 0.0)


@register("kernel_lower")
def _run_kernel_lower(params, options):
    return check_kernel_lower(params, table=table_for(params, options))


@register("gradient")
def _run_gradient(params, options):
    pairs = 100 if options.pairs is None else options.pairs
    return check_gradient(params, table=table_for(params, options), seed=options.seed, pairs=pairs)


@register("hardy")
def _run_hardy(params, options):
    pairs = 200 if options.pairs is None else options.pairs
    return check_hardy(params, seed=options.seed, pairs=pairs, tol=options.tol)


@register("integral_growth")
def _run_integral_growth(params, options):
    p = 2.0 if options.p is None else options.p
    beta = params.alpha if options.beta is None else options.beta
    return check_integral_growth(params, p, beta, table=table_for(params, options))


@register("reproducing")
def _run_reproducing(params, options):
    return check_reproducing(params, table=table_for(params, options))


@register("mean_value")
def _run_mean_value(params, options):
    return check_mean_value(params, table=table_for(params, options))


@register("schur")
def _run_schur(params, options):
    p = 2.0 if options.p is None else options.p
    beta = params.alpha if options.beta is None else options.beta
    return check_schur(params, p, beta)


@register("bloch")
def _run_bloch(params, options):
    return check_bloch(params, table=table_for(params, options))


@register("coefficients")
def _run_coefficients(params, options):
    m_high = CONFIG["M_MAX"] if options.m_max is None else options.m_max
    return check_coefficients(params, table=table_for(params, options), m_high=m_high)


@register("special_functions")
def _run_special_functions(params, options):
    return check_special_functions(seed=options.seed)


@register("quadrature_oracle")
def _run_quadrature_oracle(params, options):
    return check_quadrature_oracle(params)


@register("radial_integral")
def _run_radial_integral(params, options):
    return check_radial_integral()


@register("bracket_integral")
def _run_bracket_integral(params, options):
    return check_bracket_integral(params)


@register("adjoint_extremal")
def _run_adjoint_extremal(params, options):
    return check_adjoint_extremal(params, table=table_for(params, options))


# checks that do not depend on (n, alpha) run once per verify-all
PARAMETER_FREE = ("special_functions", "radial_integral")


def default_suite(params: Params, options: CheckOptions, include_parameter_free: bool = True
                  ) -> List[Tuple[str, CheckOptions]]:
    """(check_id, options) jobs run by verify-all for one (n, alpha) pair."""
    alpha = params.alpha
    jobs = []
    for check_id in REGISTRY:
        if check_id in PARAMETER_FREE and not include_parameter_free:
            continue
        if check_id == "integral_growth":
            for p, beta in ((2.0, alpha), (1.0, alpha), (1.0, alpha + 2.0)):
                jobs.append((check_id, replace(options, p=p, beta=beta)))
        elif check_id == "schur":
            jobs.append((check_id, replace(options, p=2.0, beta=alpha)))
        else:
            jobs.append((check_id, options))
    return jobs


def run_check(check_id: str, params: Params, options: CheckOptions) -> VerifyReport:
    if check_id not in REGISTRY:
        raise DomainError(f"unknown check {check_id!r}; known checks: {', '.join(sorted(REGISTRY))}")
    logger.info(f"Running check {check_id} for n={params.n}, alpha={params.alpha}")
    return REGISTRY[check_id](params, options)
