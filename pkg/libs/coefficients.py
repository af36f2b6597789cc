"""
Kernel coefficients of the weighted H-harmonic Bergman spaces.

Pipeline
--------
- S_m(r): the radial factor, by the 2F1 series (``s_factor``) or, for many m
  at once, by the Beta-type integral on a graded rule (``s_factor_table``).
- I_m: the weighted radial integral of S_m^2, computed by graded
  Gauss-Jacobi quadrature; c_m = 1/I_m.
- A_k -> B_k -> D_k: the asymptotic expansion of I_m in inverse Pochhammer
  symbols, its re-expansion in 1/m, and the reciprocal series giving c_m.
- gamma_m: the Euclidean coefficients, closed form and quadrature oracle.

``build_coef_table`` assembles a CoefTable, immutable after construction.
"""
import os
import sys
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as poly
from scipy import special

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils import get_logger
from config_hbergman import CONFIG
from libs.errors import DomainError, QuadratureError
from libs.geometry import Params
from libs.quadrature import gauss_jacobi_rule, graded_rule
from libs.specfun import (
    GammaRatioSpec,
    HypParams21,
    HypParams32,
    gamma_ratio,
    hyp2f1,
    hyp3f2_unit,
    pochhammer,
)

logger = get_logger(__name__)

IntArray = Union[int, np.ndarray]

# rows of m processed at once when forming t^(m-1) matrices
M_CHUNK = 2048


def _check_radius(r: float) -> None:
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"radius must lie in [0, 1], got {r}")


# === S_m(r) ===

def s_factor(m: int, r: float, params: Params) -> float:
    """S_m(r) = B(m, n/2)/B(m, n-1) F(m, 1-n/2; m+n/2; r^2), with S_0 = 1."""
    _check_radius(r)
    if m < 0:
        raise DomainError(f"degree must be nonnegative, got {m}")
    if m == 0 or r == 1.0:
        return 1.0
    n = params.n
    prefactor = gamma_ratio(GammaRatioSpec((m + n - 1.0, 0.5 * n), (m + 0.5 * n, n - 1.0)))
    return prefactor * hyp2f1(HypParams21(m, 1.0 - 0.5 * n, m + 0.5 * n), r * r)


def s_factor_derivative(m: int, r: float, params: Params) -> float:
    """dS_m/dr from d/dz F(a, b; c; z) = (ab/c) F(a+1, b+1; c+1; z)."""
    _check_radius(r)
    if m <= 0 or r == 0.0:
        return 0.0
    n = params.n
    a, b, c = float(m), 1.0 - 0.5 * n, m + 0.5 * n
    prefactor = gamma_ratio(GammaRatioSpec((m + n - 1.0, 0.5 * n), (m + 0.5 * n, n - 1.0)))
    return prefactor * 2.0 * r * (a * b / c) * hyp2f1(HypParams21(a + 1.0, b + 1.0, c + 1.0), r * r)


def s_factor_at_zero(m: IntArray, n: int) -> np.ndarray:
    """S_m(0) = Gamma(n/2)Gamma(m+n-1)/(Gamma(m+n/2)Gamma(n-1)); equals 1 at m = 0."""
    m = np.asarray(m, dtype=float)
    return np.exp(special.gammaln(0.5 * n) + special.gammaln(m + n - 1.0)
                  - special.gammaln(m + 0.5 * n) - special.gammaln(n - 1.0))


def s_factor_bound(m: IntArray, r: float, n: int) -> np.ndarray:
    """
    Majorant of S_m(r).

    With q = n/2-1 and eps = 1-r^2, S_m(r) = S_m(0) E[(eps + (1-eps)s)^q] for
    s ~ Beta(q+1, m); Jensen gives the bound for q <= 1 and
    2^(q-1)(S_m(0) eps^q + 1) covers q > 1.
    """
    m = np.asarray(m, dtype=float)
    at_zero = s_factor_at_zero(m, n)
    q = 0.5 * n - 1.0
    eps = 1.0 - r * r
    if q <= 1.0:
        mean = 0.5 * n / (m + 0.5 * n)
        return at_zero * (eps + (1.0 - eps) * mean) ** q
    return np.minimum(at_zero, 2.0 ** (q - 1.0) * (at_zero * eps ** q + 1.0))


@lru_cache(maxsize=4096)
def _moment_rule(r: float, n: int, depth: int, order: int):
    """
    Nodes log(t_i) and weights for S_m(r) B(m, n-1) = int t^(m-1)(1-t)^q(1-r^2 t)^q dt
    and for its r-derivative.
    """
    q = 0.5 * n - 1.0
    z = r * r
    rule = graded_rule(0.0, 1.0, depth, order, 0.0, q)
    t = rule.nodes
    base = 1.0 - z * t
    value_weights = rule.weights * base ** q
    slope_weights = -2.0 * r * q * rule.weights * t * base ** (q - 1.0)
    log_t = np.log(t)
    for array in (log_t, value_weights, slope_weights):
        array.flags.writeable = False
    return log_t, value_weights, slope_weights


def _moment_depth(r: float, m_top: int) -> int:
    z = r * r
    gap = (1.0 - z) / z if z > 0 else np.inf
    length = min(0.5, 0.5 * gap, 0.5 / max(m_top, 1))
    return int(np.ceil(np.log2(1.0 / length)))


def _power_rows(exponents: np.ndarray, log_t: np.ndarray) -> np.ndarray:
    """t**e for each exponent (rows) and node (columns); consecutive exponents use a running product."""
    if exponents.size > 1 and np.all(np.diff(exponents) == 1):
        steps = np.repeat(np.exp(log_t)[None, :], exponents.size, axis=0)
        steps[0] = np.exp(exponents[0] * log_t)
        return np.cumprod(steps, axis=0)
    return np.exp(np.outer(exponents, log_t))


def s_factor_table(m_values, r: float, n: int, derivative: bool = False, order: int = None):
    """
    S_m(r) (and dS_m/dr when ``derivative``) for an array of degrees.

    Uses S_m(r) = (1/B(m, n-1)) int_0^1 t^(m-1)(1-t)^(n/2-1)(1-r^2 t)^(n/2-1) dt on
    a composite Gauss-Jacobi rule graded toward t = 1, fine enough to resolve
    both 1-r^2 and 1/max(m).
    """
    _check_radius(r)
    m = np.asarray(m_values, dtype=np.int64)
    if np.any(m < 0):
        raise DomainError("degrees must be nonnegative")
    order = order or CONFIG["S_PANEL_ORDER"]
    values = np.ones(m.shape)
    slopes = np.zeros(m.shape)
    if r == 0.0:
        values = s_factor_at_zero(m, n)
    elif r == 1.0:
        if derivative:
            raise DomainError("dS_m/dr is only evaluated inside the ball")
    else:
        positive = m > 0
        degrees = m[positive]
        if degrees.size:
            # depth follows the next power of two above max(m) so nearby calls share a rule
            m_top = 1 << int(np.ceil(np.log2(max(int(degrees.max()), 1))))
            log_t, value_weights, slope_weights = _moment_rule(float(r), n, _moment_depth(r, m_top), order)
            log_beta = special.betaln(degrees, n - 1.0)
            out_values = np.empty(degrees.size)
            out_slopes = np.empty(degrees.size)
            for start in range(0, degrees.size, M_CHUNK):
                block = slice(start, start + M_CHUNK)
                powers = _power_rows(degrees[block] - 1.0, log_t)
                out_values[block] = np.exp(np.log(powers @ value_weights) - log_beta[block])
                if derivative:
                    out_slopes[block] = (powers @ slope_weights) * np.exp(-log_beta[block])
            values[positive] = out_values
            slopes[positive] = out_slopes
    if derivative:
        return values, slopes
    return values


# === I_m and c_m ===

def _radial_integrals(m_values: np.ndarray, params: Params, depth: int, order: int) -> np.ndarray:
    """(1/B(n/2, alpha+1)) int_0^1 u^(m+n/2-1)(1-u)^alpha S_m(sqrt u)^2 du for each m."""
    n, alpha = params.n, params.alpha
    rule = graded_rule(0.0, 1.0, depth, order, 0.5 * n - 1.0, alpha)
    weights = rule.weights / special.beta(0.5 * n, alpha + 1.0)
    total = np.zeros(m_values.size)
    for u, weight in zip(rule.nodes, weights):
        s_values = s_factor_table(m_values, float(np.sqrt(u)), n)
        total += weight * np.exp(m_values * np.log(u)) * s_values ** 2
    return total


def radial_integrals(m_values, params: Params, tol: float = None, max_doublings: int = None) -> Tuple[np.ndarray, float]:
    """
    I_m for an array of degrees with a relative error estimate.

    The rule is graded toward u = 1 (deeper for larger m); each refinement adds
    panels and nodes until two successive estimates agree to ``tol``.

    Raises:
        QuadratureError: no agreement after ``max_doublings`` refinements.
    """
    tol = tol or CONFIG["IM_TOL"]
    max_doublings = CONFIG["IM_MAX_DOUBLINGS"] if max_doublings is None else max_doublings
    m = np.asarray(m_values, dtype=np.int64)
    depth = int(np.ceil(np.log2(max(int(m.max()), 2)))) + 10
    order = 16
    previous = _radial_integrals(m, params, depth, order)
    for _ in range(max_doublings):
        depth, order = depth + 4, order + 8
        current = _radial_integrals(m, params, depth, order)
        error = float(np.max(np.abs(current - previous) / np.abs(current)))
        logger.debug(f"I_m refinement depth={depth} order={order}: relative change {error:.3e}")
        if error <= tol:
            current[m == 0] = 1.0
            return current, error
        previous = current
    logger.error(f"I_m quadrature for {params} stalled at relative change {error:.3e} > {tol}")
    raise QuadratureError(f"I_m quadrature did not reach tolerance {tol} (last change {error:.3e})")


def i_m_exact(m: int, params: Params, tol: float = None) -> float:
    """I_m by graded Gauss-Jacobi quadrature; I_0 = 1."""
    if m < 0:
        raise DomainError(f"degree must be nonnegative, got {m}")
    if m == 0:
        return 1.0
    values, _ = radial_integrals(np.array([m]), params, tol)
    return float(values[0])


def euclid_gamma(m: IntArray, params: Params) -> np.ndarray:
    """gamma_m with 1/gamma_m = Gamma(alpha+n/2+1)Gamma(m+n/2)/(Gamma(n/2)Gamma(m+alpha+n/2+1))."""
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr < 0):
        raise DomainError("degrees must be nonnegative")
    half, alpha = 0.5 * params.n, params.alpha
    value = np.exp(special.gammaln(half) + special.gammaln(m_arr + alpha + half + 1.0)
                   - special.gammaln(alpha + half + 1.0) - special.gammaln(m_arr + half))
    return float(value) if np.ndim(m) == 0 else value


def euclid_gamma_quadrature(m: int, params: Params, npoints: int = None) -> float:
    """gamma_m from the normalized integral of |x|^(2m) against d nu_alpha (Gauss-Jacobi, exact)."""
    half, alpha = 0.5 * params.n, params.alpha
    rule = gauss_jacobi_rule(npoints or max(2, m // 2 + 2), half - 1.0, alpha)
    moment = rule.apply(lambda u: u ** m) / special.beta(half, alpha + 1.0)
    return 1.0 / moment


# === Asymptotic expansion ===

def coef_A(k: int, params: Params) -> float:
    """
    A_k = G (alpha+1)_k (alpha+n)_k (1-n/2)_k / ((alpha+n/2+1)_k k!)
          3F2(n/2, alpha+n, 1-n/2; alpha+n/2+1+k, alpha+3n/2; 1),
    G = Gamma(n/2)Gamma(alpha+n)Gamma(alpha+2n-1)/(Gamma(n-1)^2 Gamma(alpha+3n/2)).
    """
    if k < 0:
        raise DomainError(f"expansion order must be nonnegative, got {k}")
    n, alpha = params.n, params.alpha
    half = 0.5 * n
    pochhammer_part = (pochhammer(alpha + 1.0, k) * pochhammer(alpha + n, k) * pochhammer(1.0 - half, k)
                       / (pochhammer(alpha + half + 1.0, k) * pochhammer(1.0, k)))
    if pochhammer_part == 0.0:
        return 0.0
    prefactor = gamma_ratio(GammaRatioSpec((alpha + 2.0 * n - 1.0, alpha + n, half),
                                           (alpha + 3.0 * half, n - 1.0, n - 1.0)))
    series = hyp3f2_unit(HypParams32(half, alpha + n, 1.0 - half, alpha + half + 1.0 + k, alpha + 3.0 * half))
    return prefactor * pochhammer_part * series


def coef_A0_closed_form(params: Params) -> float:
    """A_0 as a single Gamma product (Dixon's sum applied to the k = 0 series)."""
    n, alpha = params.n, params.alpha
    half = 0.5 * n
    return gamma_ratio(GammaRatioSpec(
        (alpha + 2.0 * n - 1.0, alpha + half + 1.0, 0.5 * (alpha + n) + 1.0, 0.5 * (alpha + n), half),
        (alpha + n + 1.0, 0.5 * alpha + n, 0.5 * alpha + 1.0, n - 1.0, n - 1.0),
    ))


def laurent_coefficients(K: int, params: Params) -> np.ndarray:
    """
    C[k, j] with 1/(m+alpha+n)_j = sum_{k>=j} C_k(j)/m^k, for 0 <= j <= k < K.

    (m+a)_j = m^j prod_i (1 + (a+i)/m); the product is inverted as a power
    series in 1/m.
    """
    if K < 1:
        raise DomainError(f"expansion order K must be at least 1, got {K}")
    shift = params.alpha + params.n
    table = np.zeros((K, K))
    for j in range(K):
        factors = np.array([1.0])
        for i in range(j):
            factors = poly.polymul(factors, [1.0, shift + i])
        inverse = np.zeros(K - j)
        inverse[0] = 1.0
        for l in range(1, K - j):
            top = min(l, factors.size - 1)
            inverse[l] = -np.dot(factors[1:top + 1], inverse[l - 1::-1][:top])
        table[j:, j] = inverse
    return table


def coef_B(K: int, params: Params, A: np.ndarray = None) -> np.ndarray:
    """B_k = sum_{j<=k} A_j C_k(j) for k < K."""
    if K < 1:
        raise DomainError(f"expansion order K must be at least 1, got {K}")
    A = np.array([coef_A(k, params) for k in range(K)]) if A is None else np.asarray(A, dtype=float)
    return laurent_coefficients(K, params) @ A[:K]


def coef_D(K: int, params: Params, B: np.ndarray = None) -> np.ndarray:
    """Reciprocal series: D_0 = 1/B_0 and D_k B_0 + D_(k-1) B_1 + ... + D_0 B_k = 0."""
    B = coef_B(K, params) if B is None else np.asarray(B, dtype=float)
    D = np.zeros(K)
    D[0] = 1.0 / B[0]
    for k in range(1, K):
        D[k] = -np.dot(B[1:k + 1], D[k - 1::-1]) / B[0]
    return D


def c_m_asymptotic(m: IntArray, params: Params, D: np.ndarray) -> np.ndarray:
    """Gamma(m+alpha+n)/Gamma(m+n-1) sum_k D_k/m^k for m >= 1."""
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr < 1):
        raise DomainError("asymptotic coefficients need m >= 1")
    n, alpha = params.n, params.alpha
    ratio = np.exp(special.gammaln(m_arr + alpha + n) - special.gammaln(m_arr + n - 1.0))
    series = np.zeros_like(m_arr)
    for k in range(len(D) - 1, -1, -1):
        series = series / m_arr + D[k]
    value = ratio * series
    return float(value) if np.ndim(m) == 0 else value


def c_m(m: int, params: Params, mode: str = "exact", K: int = None) -> float:
    """c_m(alpha) = 1/I_m (``exact``) or its asymptotic series with K terms (``asymptotic``)."""
    if mode == "exact":
        return 1.0 / i_m_exact(m, params)
    if mode == "asymptotic":
        K = K or CONFIG["K"]
        return c_m_asymptotic(m, params, coef_D(K, params))
    raise DomainError(f"unknown coefficient mode {mode!r}")


# === Coefficient table ===

@dataclass(frozen=True, eq=False)
class CoefTable:
    """Exact c_m for m <= m_max and the expansion constants A, B, D of order K."""
    params: Params
    m_max: int
    K: int
    c_exact: np.ndarray
    A: np.ndarray
    B: np.ndarray
    D: np.ndarray
    quadrature_error: float = 0.0

    def __post_init__(self):
        for name in ("c_exact", "A", "B", "D"):
            array = np.array(getattr(self, name), dtype=float)
            array.flags.writeable = False
            object.__setattr__(self, name, array)

    def c(self, m: int) -> float:
        return float(self.c_array(np.array([m]))[0])

    def c_array(self, m_values) -> np.ndarray:
        """Exact coefficients up to m_max, asymptotic ones beyond."""
        m = np.asarray(m_values, dtype=np.int64)
        out = np.empty(m.shape)
        inside = m <= self.m_max
        out[inside] = self.c_exact[m[inside]]
        if np.any(~inside):
            out[~inside] = c_m_asymptotic(m[~inside], self.params, self.D)
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "alpha": self.params.alpha,
            "m_max": self.m_max,
            "K": self.K,
            "c_exact": self.c_exact.tolist(),
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "D": self.D.tolist(),
        }


@lru_cache(maxsize=32)
def build_coef_table(params: Params, m_max: int = None, K: int = None, tol: float = None) -> CoefTable:
    """Compute (and memoize) the coefficient table for ``params``."""
    m_max = CONFIG["M_MAX"] if m_max is None else m_max
    K = K or CONFIG["K"]
    if m_max < 1:
        raise DomainError(f"m_max must be at least 1, got {m_max}")
    started = time.perf_counter()
    logger.info(f"Building coefficient table for n={params.n}, alpha={params.alpha}, m_max={m_max}, K={K}")
    integrals, error = radial_integrals(np.arange(m_max + 1), params, tol)
    A = np.array([coef_A(k, params) for k in range(K)])
    B = coef_B(K, params, A)
    D = coef_D(K, params, B)
    table = CoefTable(params=params, m_max=m_max, K=K, c_exact=1.0 / integrals, A=A, B=B, D=D,
                      quadrature_error=error)
    logger.info(f"Coefficient table ready in {time.perf_counter() - started:.2f}s "
                f"(A_0={A[0]:.6g}, c_{m_max}={table.c_exact[-1]:.6g}, quadrature change {error:.2e})")
    return table
