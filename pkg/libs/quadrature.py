"""
Weighted quadrature on [0, 1], the ball and the sphere, plus growth-rate fits.

Rules are immutable once built. Integrands are vectorized callables: a ball
or sphere integrand receives an ``(k, n)`` array of points (all on one sphere
for ball integrals) and returns ``k`` values.
"""
import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import special
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils import get_logger
from config_hbergman import CONFIG
from libs.errors import (
    ConvergenceError,
    DegenerateFitError,
    DomainError,
    QuadratureError,
    UnsupportedError,
)

logger = get_logger(__name__)

Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadRule:
    """Nodes and positive weights; ``integrate`` sums over the last axis of ``values``."""
    nodes: np.ndarray
    weights: np.ndarray
    weight_exponents: Tuple[float, float] = (0.0, 0.0)
    interval: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        for name in ("nodes", "weights"):
            array = np.asarray(getattr(self, name), dtype=float)
            array.flags.writeable = False
            object.__setattr__(self, name, array)

    def __len__(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> np.ndarray:
        return np.asarray(values, dtype=float) @ self.weights

    def apply(self, func: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(self.integrate(func(self.nodes)))


@lru_cache(maxsize=256)
def gauss_jacobi_rule(npoints: int, a0: float = 0.0, a1: float = 0.0) -> QuadRule:
    """
    Gauss-Jacobi rule on [0, 1] for the weight t^a0 (1-t)^a1.

    Exact for polynomials of degree <= 2*npoints - 1.

    Raises:
        DomainError: npoints < 2 or an exponent <= -1.
        ConvergenceError: the node solve returned unusable weights.
    """
    if npoints < 2:
        raise DomainError(f"a quadrature rule needs at least 2 nodes, got {npoints}")
    if a0 <= -1 or a1 <= -1:
        raise DomainError(f"Jacobi exponents must exceed -1, got ({a0}, {a1})")
    # scipy's weight is (1-x)^alpha (1+x)^beta on [-1, 1]
    x, w = special.roots_jacobi(int(npoints), a1, a0)
    nodes = (1.0 + x) / 2.0
    weights = w * 2.0 ** (-(a0 + a1 + 1.0))
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights)) and np.all(weights > 0)):
        logger.error(f"Gauss-Jacobi node solve failed for npoints={npoints}, exponents=({a0}, {a1})")
        raise ConvergenceError(f"Gauss-Jacobi node solve failed for npoints={npoints}")
    return QuadRule(nodes, weights, (float(a0), float(a1)))


def _mapped_rule(lo: float, hi: float, npoints: int, e_lo: float, e_hi: float):
    """Nodes/weights for the weight (x-lo)^e_lo (hi-x)^e_hi on [lo, hi]."""
    base = gauss_jacobi_rule(npoints, e_lo, e_hi)
    length = hi - lo
    return lo + length * base.nodes, base.weights * length ** (1.0 + e_lo + e_hi)


def graded_rule(lo: float, hi: float, depth: int, order: int = None,
                e_lo: float = 0.0, e_hi: float = 0.0) -> QuadRule:
    """
    Composite rule for g(x) (x-lo)^e_lo (hi-x)^e_hi on [lo, hi], panels halving toward ``hi``.

    The first panel absorbs the ``lo`` singularity and the last the ``hi``
    singularity by Gauss-Jacobi; the panels in between are Gauss-Legendre with
    the weight multiplied into the weights.
    """
    order = order or CONFIG["GRADED_ORDER"]
    length = hi - lo
    edges = [lo] + [hi - length * 2.0 ** (-j) for j in range(1, depth + 1)] + [hi]
    nodes, weights = [], []
    last = len(edges) - 2
    for j, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        left = e_lo if j == 0 else 0.0
        right = e_hi if j == last else 0.0
        x, w = _mapped_rule(a, b, order, left, right)
        if j != 0:
            w = w * (x - lo) ** e_lo
        if j != last:
            w = w * (hi - x) ** e_hi
        nodes.append(x)
        weights.append(w)
    return QuadRule(np.concatenate(nodes), np.concatenate(weights), (float(e_lo), float(e_hi)), (lo, hi))


def radial_measure_rule(n: int, beta: float, depth: int, order: int = None) -> QuadRule:
    """Graded rule on [0, 1] for the probability measure n r^(n-1) (1-r^2)^beta dr / V_beta."""
    rule = graded_rule(0.0, 1.0, depth, order, float(n - 1), beta)
    volume = 0.5 * n * special.beta(0.5 * n, beta + 1.0)
    weights = rule.weights * (1.0 + rule.nodes) ** beta * n / volume
    return QuadRule(rule.nodes, weights, (float(n - 1), float(beta)))


def angular_measure_rule(n: int, depth: int, order: int = None) -> QuadRule:
    """Graded rule on [-1, 1] toward t = 1 for the normalized zonal weight of S^(n-1)."""
    exponent = 0.5 * (n - 3)
    rule = graded_rule(-1.0, 1.0, depth, order, exponent, exponent)
    norm = special.beta(0.5, 0.5 * (n - 1))
    return QuadRule(rule.nodes, rule.weights / norm, (exponent, exponent), (-1.0, 1.0))


def zonal_sphere_rule(n: int, npoints: int) -> QuadRule:
    """Gauss-Jacobi rule for t = <zeta, pole> against the normalized zonal weight."""
    exponent = 0.5 * (n - 3)
    base = gauss_jacobi_rule(npoints, exponent, exponent)
    norm = special.beta(0.5, 0.5 * (n - 1))
    weights = base.weights * 2.0 ** (2.0 * exponent + 1.0) / norm
    return QuadRule(2.0 * base.nodes - 1.0, weights, (exponent, exponent), (-1.0, 1.0))


def _orthonormal_complement(pole: np.ndarray) -> np.ndarray:
    basis = np.eye(pole.size)[int(np.argmin(np.abs(pole)))]
    other = basis - np.dot(basis, pole) * pole
    return other / np.linalg.norm(other)


def _sphere_points(n: int, npoints: int, pole: Optional[np.ndarray]):
    """Points and weights of a sphere rule of resolution ``npoints``."""
    if pole is not None:
        rule = zonal_sphere_rule(n, npoints)
        pole = np.asarray(pole, dtype=float)
        pole = pole / np.linalg.norm(pole)
        side = _orthonormal_complement(pole)
        t = rule.nodes
        points = t[:, None] * pole[None, :] + np.sqrt(1.0 - t ** 2)[:, None] * side[None, :]
        return points, rule.weights
    if n != 3:
        raise UnsupportedError(f"sphere integration in dimension {n} needs a zonal integrand and a pole")
    # Gauss-Legendre in cos(theta) on [-1, 0] and [0, 1], trapezoid in phi
    half = gauss_jacobi_rule(max(2, npoints // 2))
    cos_theta = np.concatenate([half.nodes - 1.0, half.nodes])
    w_theta = np.concatenate([half.weights, half.weights]) / 2.0
    n_phi = 2 * npoints
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    sin_theta = np.sqrt(1.0 - cos_theta ** 2)
    points = np.stack([
        np.repeat(cos_theta, n_phi),
        np.outer(sin_theta, np.cos(phi)).ravel(),
        np.outer(sin_theta, np.sin(phi)).ravel(),
    ], axis=1)
    weights = np.repeat(w_theta, n_phi) / n_phi
    return points, weights


def sphere_integrate(g: Field, n: int, tol: float = 1e-10, pole=None,
                     start: int = 16, max_points: int = 512) -> float:
    """
    Integral of g over the unit sphere S^(n-1) against normalized surface measure.

    For n = 3 without a pole, a Gauss-Legendre x trapezoid product grid.
    With ``pole``, g must depend only on <zeta, pole>, and the 1-D zonal
    reduction is used in any dimension. Resolution doubles until two
    successive values agree to ``tol``.

    Raises:
        UnsupportedError: n > 3 without a pole.
        QuadratureError: no agreement up to ``max_points``.
    """
    if n < 3:
        raise DomainError(f"dimension must be at least 3, got {n}")
    npoints = start
    points, weights = _sphere_points(n, npoints, pole)
    previous = float(np.dot(weights, g(points)))
    while npoints < max_points:
        npoints *= 2
        points, weights = _sphere_points(n, npoints, pole)
        current = float(np.dot(weights, g(points)))
        if abs(current - previous) <= tol:
            return current
        previous = current
    logger.error(f"sphere integral did not settle to {tol} with {max_points} points per direction")
    raise QuadratureError(f"sphere integral did not reach tolerance {tol}")


def _ball_value(f: Field, n: int, beta: float, npoints: int, pole) -> float:
    radial = gauss_jacobi_rule(npoints, 0.5 * n - 1.0, beta)
    radial_weights = radial.weights / special.beta(0.5 * n, beta + 1.0)
    points, weights = _sphere_points(n, npoints, pole)
    total = 0.0
    for u, w in zip(radial.nodes, radial_weights):
        total += w * float(np.dot(weights, f(np.sqrt(u) * points)))
    return total


def ball_integrate(f: Field, params, weight_beta: float = 0.0, tol: float = 1e-10, pole=None,
                   start: int = 16, max_points: int = 256) -> float:
    """
    Integral of f over the ball against the normalized measure d nu_beta.

    Polar coordinates with u = r^2: a Gauss-Jacobi rule for u^(n/2-1)(1-u)^beta
    in the radius and a sphere rule (see ``sphere_integrate``) in the angle.
    f is called once per radial node with all points of that sphere.

    Raises:
        DomainError: weight_beta <= -1.
        QuadratureError: the doubling estimate stays above ``tol``.
    """
    if weight_beta <= -1:
        raise DomainError(f"weight exponent must exceed -1, got {weight_beta}")
    n = params.n
    npoints = start
    previous = _ball_value(f, n, weight_beta, npoints, pole)
    while npoints < max_points:
        npoints *= 2
        current = _ball_value(f, n, weight_beta, npoints, pole)
        logger.debug(f"ball integral with {npoints} nodes: {current!r} (change {abs(current - previous):.3e})")
        if abs(current - previous) <= tol:
            return current
        previous = current
    logger.error(f"ball integral did not settle to {tol} with {max_points} nodes per direction")
    raise QuadratureError(f"ball integral did not reach tolerance {tol}")


def zonal_ball_integrate(profile: Callable[[float, np.ndarray], np.ndarray],
                         radial_rule: QuadRule, angular_rule: QuadRule) -> np.ndarray:
    """
    Integral of a function of (|y|, <y/|y|, e_1>) over the ball.

    ``profile(rho, t)`` returns values for the cosines ``t``; extra leading
    axes are integrated independently.
    """
    total = 0.0
    for rho, weight in zip(radial_rule.nodes, radial_rule.weights):
        total = total + weight * angular_rule.integrate(profile(float(rho), angular_rule.nodes))
    return total


# === Growth fits ===

@dataclass(frozen=True)
class GrowthFit:
    abscissae: np.ndarray
    ordinates: np.ndarray
    fitted_exponent: float
    r_squared: float
    model: str = "power"
    intercept: float = 0.0


def growth_fit(samples: Sequence[Tuple[float, float]], model: str = "power") -> GrowthFit:
    """
    Least-squares growth rate as the abscissa tends to 0.

    ``power``: slope of log(value) against log(1/abscissa).
    ``log``: slope of value against log(1/abscissa).

    Raises:
        DegenerateFitError: fewer than 4 samples, abscissae spanning less than
            one decade, or nonpositive values for the power model.
    """
    if model not in ("power", "log"):
        raise DomainError(f"unknown growth model {model!r}")
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[0] < 4:
        raise DegenerateFitError("growth fit needs at least 4 samples")
    abscissae, ordinates = data[:, 0], data[:, 1]
    if np.any(abscissae <= 0) or abscissae.max() / abscissae.min() < 10.0:
        raise DegenerateFitError("growth fit abscissae must be positive and span at least one decade")
    if model == "power" and np.any(ordinates <= 0):
        raise DegenerateFitError("power-law fit needs positive values")
    features = np.log(1.0 / abscissae).reshape(-1, 1)
    target = np.log(ordinates) if model == "power" else ordinates
    regression = LinearRegression().fit(features, target)
    r_squared = float(np.clip(r2_score(target, regression.predict(features)), 0.0, 1.0))
    return GrowthFit(
        abscissae=abscissae,
        ordinates=ordinates,
        fitted_exponent=float(regression.coef_[0]),
        r_squared=r_squared,
        model=model,
        intercept=float(regression.intercept_),
    )
