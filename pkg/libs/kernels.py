"""
Zonal harmonics and truncated-series kernels.

Every kernel here has the form sum_m a_m s_m(|x|) s_m(|y|) Z_m(x, y):

    bergman  a_m = c_m(alpha)  s_m = S_m      (H-harmonic Bergman kernel R_alpha)
    hardy    a_m = 1           s_m = S_m      (H-harmonic Hardy kernel K)
    euclid   a_m = gamma_m     s_m = 1        (Euclidean harmonic Bergman kernel)

The truncation index M is fixed before summing, from an explicit majorant of
the terms: |Z_m(x, y)| <= dim H_m |x|^m |y|^m and the S_m bound of
``coefficients.s_factor_bound``. The returned tail_bound is that majorant's
tail, so the true series lies in [value - tail_bound, value + tail_bound].
"""
import os
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils import get_logger
from config_hbergman import CONFIG
from libs.errors import DomainError, TruncationError
from libs.coefficients import CoefTable, euclid_gamma, s_factor_bound, s_factor_table
from libs.geometry import Params, PointLike, as_point
from libs.specfun import gegenbauer, gegenbauer_at_one, gegenbauer_sequence

logger = get_logger(__name__)

# above this many (degree, cosine) pairs the Gegenbauer sum runs the recurrence in place
SEQUENCE_LIMIT = 2_000_000


@dataclass(frozen=True)
class KernelValue:
    value: float
    tail_bound: float
    terms_used: int

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")


@dataclass(frozen=True)
class ZonalEval:
    m: int
    value: float
    partials: Optional[np.ndarray] = None


def zonal_scale(m, n: int):
    """K_m = (n+2m-2)/(n-2), so that Z_m = K_m |x|^m |y|^m C_m^(n/2-1)(cos angle)."""
    return (n + 2.0 * np.asarray(m, dtype=float) - 2.0) / (n - 2.0)


def zonal_dimension(m, n: int):
    """dim H_m = Z_m(zeta, zeta) = K_m C_m^(n/2-1)(1)."""
    return zonal_scale(m, n) * gegenbauer_at_one(m, 0.5 * n - 1.0)


def zonal(m: int, x: PointLike, y: PointLike, want_partials: bool = False) -> ZonalEval:
    """
    Zonal harmonic Z_m(x, y) extended homogeneously to the ball.

    Partials are taken in x:
    dZ_m/dx_i = K_m |x|^(m-1) |y|^m (m zeta_i C_m^lam(t) + (n-2)(eta_i - t zeta_i) C_(m-1)^(lam+1)(t)).
    """
    if m < 0 or int(m) != m:
        raise DomainError(f"degree must be a nonnegative integer, got {m}")
    x, y = as_point(x), as_point(y)
    n = x.n
    if y.n != n:
        raise DomainError(f"points live in different dimensions ({n} and {y.n})")
    lam = 0.5 * n - 1.0
    if m == 0:
        return ZonalEval(0, 1.0, np.zeros(n) if want_partials else None)
    if x.norm == 0.0 or y.norm == 0.0:
        partials = None
        if want_partials:
            # only Z_1(x, y) = n <x, y> has a nonzero gradient at x = 0
            partials = n * y.coords.copy() if (m == 1 and x.norm == 0.0) else np.zeros(n)
        return ZonalEval(m, 0.0, partials)
    zeta, eta = x.direction(), y.direction()
    t = float(np.clip(np.dot(zeta, eta), -1.0, 1.0))
    scale = float(zonal_scale(m, n))
    value = scale * x.norm ** m * y.norm ** m * gegenbauer(m, lam, t)
    if not want_partials:
        return ZonalEval(m, value)
    shifted = gegenbauer(m - 1, lam + 1.0, t)
    partials = scale * x.norm ** (m - 1) * y.norm ** m * (
        m * zeta * gegenbauer(m, lam, t) + (n - 2.0) * (eta - t * zeta) * shifted)
    return ZonalEval(m, value, partials)


# === Kernel families and the truncation engine ===

@dataclass(frozen=True, eq=False)
class KernelFamily:
    """Coefficients a_m and radial factors s_m of one kernel series."""
    kind: str
    params: Params
    table: Optional[CoefTable] = None

    @classmethod
    def bergman(cls, table: CoefTable) -> "KernelFamily":
        return cls("bergman", table.params, table)

    @classmethod
    def hardy(cls, n: int) -> "KernelFamily":
        return cls("hardy", Params(n, 0.0))

    @classmethod
    def euclid(cls, params: Params) -> "KernelFamily":
        return cls("euclid", params)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def growth_degree(self) -> float:
        """Polynomial degree dominating the term majorant."""
        return max(self.params.alpha + 2.0 * self.n - 3.0, 1.0)

    def coefficients(self, m: np.ndarray) -> np.ndarray:
        if self.kind == "bergman":
            return self.table.c_array(m)
        if self.kind == "hardy":
            return np.ones(m.shape)
        return euclid_gamma(m, self.params)

    def radial(self, m: np.ndarray, r: float, derivative: bool = False):
        if self.kind == "euclid":
            ones = np.ones(m.shape)
            return (ones, np.zeros(m.shape)) if derivative else ones
        return s_factor_table(m, r, self.n, derivative=derivative)

    def radial_bound(self, m: np.ndarray, r: float) -> np.ndarray:
        if self.kind == "euclid":
            return np.ones(m.shape)
        return s_factor_bound(m, r, self.n)


def _family_for(table_or_family) -> KernelFamily:
    if isinstance(table_or_family, KernelFamily):
        return table_or_family
    if isinstance(table_or_family, CoefTable):
        return KernelFamily.bergman(table_or_family)
    raise DomainError(f"expected a CoefTable or KernelFamily, got {type(table_or_family).__name__}")


def _value_majorant(family: KernelFamily, m: np.ndarray, r: float, rho: float) -> np.ndarray:
    """Bound on |a_m s_m(r) s_m(rho) Z_m(x, y)| for |x| = r, |y| = rho."""
    product = r * rho
    powers = np.exp(m * np.log(product))
    return (np.abs(family.coefficients(m)) * family.radial_bound(m, r) * family.radial_bound(m, rho)
            * zonal_dimension(m, family.n) * powers)


def _gradient_majorant(family: KernelFamily, m: np.ndarray, r: float, rho: float) -> np.ndarray:
    """Bound on the Euclidean norm of the x-gradient of the m-th term, with |x| = r > 0."""
    n = family.n
    lam = 0.5 * n - 1.0
    product = r * rho
    powers = np.exp(m * np.log(product))
    at_one = gegenbauer_at_one(m, lam)
    shifted_at_one = np.where(m > 0, gegenbauer_at_one(np.maximum(m - 1, 0), lam + 1.0), 0.0)
    zonal_part = (m * at_one + (n - 2.0) * shifted_at_one) / r
    radial_slope = 0.0 if family.kind == "euclid" else 2.0 * lam * r / (1.0 - r * r)
    return (np.abs(family.coefficients(m)) * family.radial_bound(m, r) * family.radial_bound(m, rho)
            * zonal_scale(m, n) * powers * (radial_slope * at_one + zonal_part))


def choose_truncation(majorant, product: float, degree: float, tol: float, cap: int,
                      rel_tol: float = 0.0) -> Tuple[int, float]:
    """
    Smallest M whose majorant tail is below tol.

    With ``rel_tol > 0`` the tail may instead stay below rel_tol times the
    majorant partial sum; boundary sweeps use this where the kernel itself
    is of size (1-|x|^2)^-(alpha+n). ``majorant(m)`` returns term bounds for
    an integer array m. Terms past the computed window are bounded
    geometrically with ratio product * (1 + 1/last)^(degree + 1).

    Raises:
        TruncationError: M would exceed ``cap``.
    """
    length = min(cap + 1, int(np.ceil(np.log(tol) / np.log(product))) + 64)
    while True:
        m = np.arange(length)
        terms = majorant(m)
        last = length - 1
        ratio = product * (1.0 + 1.0 / max(last, 1)) ** (degree + 1.0)
        remainder = terms[-1] * ratio / (1.0 - ratio) if ratio < 1.0 else np.inf
        tails = np.concatenate([np.cumsum(terms[::-1])[::-1][1:], [0.0]]) + remainder
        bound = np.maximum(tol, rel_tol * np.cumsum(terms))
        good = np.nonzero(tails < bound)[0]
        if good.size:
            index = int(good[0])
            return index, float(tails[index])
        if length >= cap + 1:
            logger.warning(f"series truncation exceeds {cap} terms at |x||y|={product}")
            raise TruncationError(f"kernel series needs more than {cap} terms at |x||y|={product}")
        length = min(cap + 1, 2 * length)


def _check_product(r: float, rho: float) -> float:
    product = r * rho
    if product > CONFIG["BOUNDARY_PRODUCT_CAP"]:
        raise TruncationError(
            f"|x||y|={product} exceeds the direct-series cap {CONFIG['BOUNDARY_PRODUCT_CAP']}")
    return product


def _gegenbauer_sum(weights: np.ndarray, lam: float, t) -> np.ndarray:
    """sum_m weights[m] C_m^lam(t), elementwise in t."""
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
    if t.size * weights.size <= SEQUENCE_LIMIT:
        return np.tensordot(weights, gegenbauer_sequence(weights.size - 1, lam, t), axes=1)
    prev = np.ones_like(t)
    total = weights[0] * prev
    if weights.size == 1:
        return total
    cur = 2.0 * lam * t
    total = total + weights[1] * cur
    for k in range(1, weights.size - 1):
        prev, cur = cur, (2.0 * (k + lam) * t * cur - (k + 2.0 * lam - 1.0) * prev) / (k + 1.0)
        total = total + weights[k + 1] * cur
    return total


def _series_weights(family: KernelFamily, r: float, rho: float, tol: float, cap: int, radial_r=None,
                    rel_tol: float = 0.0):
    """Degree weights a_m s_m(r) s_m(rho) K_m (r rho)^m for m <= M, the tail bound and M."""
    product = _check_product(r, rho)
    M, tail = choose_truncation(lambda m: _value_majorant(family, m, r, rho),
                                product, family.growth_degree, tol, cap, rel_tol)
    m = np.arange(M + 1)
    at_r = family.radial(m, r) if radial_r is None else radial_r(M)
    weights = (family.coefficients(m) * at_r * family.radial(m, rho)
               * zonal_scale(m, family.n) * np.exp(m * np.log(product)))
    return weights, tail, M


@dataclass(frozen=True, eq=False)
class ProfileSeries:
    """Truncated kernel series at fixed radii, callable on cosines t."""
    weights: np.ndarray
    lam: float
    tail_bound: float
    terms_used: int

    def __call__(self, t) -> np.ndarray:
        return _gegenbauer_sum(self.weights, self.lam, t)


def _check_radii(r: float, rho: float) -> None:
    if not (0.0 <= r < 1.0 and 0.0 <= rho < 1.0):
        raise DomainError(f"radii must lie in [0, 1), got {r} and {rho}")


def profile_series(r: float, rho: float, table_or_family, tol: float = None, cap: int = None,
                   rel_tol: float = 0.0) -> ProfileSeries:
    """The series of a kernel at x = r e_1, y = rho eta as a function of t = <eta, e_1>."""
    family = _family_for(table_or_family)
    _check_radii(r, rho)
    if r == 0.0 or rho == 0.0:
        return ProfileSeries(np.ones(1), family.params.lam, 0.0, 1)
    weights, tail, M = _series_weights(family, r, rho, tol or CONFIG["KERNEL_TOL"], cap or CONFIG["TERM_CAP"],
                                       rel_tol=rel_tol)
    return ProfileSeries(weights, family.params.lam, tail, M + 1)


def kernel_profile(r: float, rho: float, t, table_or_family, tol: float = None, cap: int = None,
                   rel_tol: float = 0.0):
    """
    Kernel values at x = r e_1 and y = rho eta for every cosine t = <eta, e_1>.

    Returns ``(values, tail_bound, terms_used)``; the tail bound holds for
    every entry.
    """
    series = profile_series(r, rho, table_or_family, tol, cap, rel_tol)
    return series(np.asarray(t, dtype=float)), series.tail_bound, series.terms_used


class ZonalProfile:
    """
    Kernel values on a fixed set of cosines for many radius pairs.

    Gegenbauer values on the cosines and S_m(r) for each first radius r are
    kept and extended on demand, so sweeping rho costs one matrix product per call.
    """

    def __init__(self, table_or_family, cosines, tol: float = None, cap: int = None, rel_tol: float = 0.0):
        self.family = _family_for(table_or_family)
        self.cosines = np.clip(np.asarray(cosines, dtype=float), -1.0, 1.0)
        self.tol = tol or CONFIG["KERNEL_TOL"]
        self.cap = cap or CONFIG["TERM_CAP"]
        self.rel_tol = rel_tol
        self._gegenbauer = np.ones((1,) + self.cosines.shape)
        self._radial = {}

    def _gegenbauer_rows(self, count: int) -> np.ndarray:
        if self._gegenbauer.shape[0] < count:
            size = min(max(count, 2 * self._gegenbauer.shape[0]), self.cap + 1)
            self._gegenbauer = gegenbauer_sequence(size - 1, self.family.params.lam, self.cosines)
        return self._gegenbauer[:count]

    def _radial_rows(self, r: float, M: int) -> np.ndarray:
        cached = self._radial.get(r)
        if cached is None or cached.size < M + 1:
            size = min(max(M + 1, 2 * (0 if cached is None else cached.size)), self.cap + 1)
            cached = self.family.radial(np.arange(size), r)
            self._radial[r] = cached
        return cached[:M + 1]

    def __call__(self, r: float, rho: float) -> Tuple[np.ndarray, float, int]:
        _check_radii(r, rho)
        if r == 0.0 or rho == 0.0:
            return np.ones(self.cosines.shape), 0.0, 1
        weights, tail, M = _series_weights(self.family, r, rho, self.tol, self.cap,
                                           radial_r=lambda top: self._radial_rows(r, top), rel_tol=self.rel_tol)
        values = np.tensordot(weights, self._gegenbauer_rows(M + 1), axes=1)
        return values, tail, M + 1


def _evaluate(x: PointLike, y: PointLike, family: KernelFamily, tol: float, cap: int,
              rel_tol: float = 0.0) -> KernelValue:
    x, y = as_point(x), as_point(y)
    if x.n != family.n or y.n != family.n:
        raise DomainError(f"points must lie in dimension {family.n}")
    if x.norm == 0.0 or y.norm == 0.0:
        return KernelValue(1.0, 0.0, 1)
    t = float(np.dot(x.direction(), y.direction()))
    values, tail, terms = kernel_profile(x.norm, y.norm, np.array([t]), family, tol, cap, rel_tol)
    return KernelValue(float(values[0]), tail, terms)


def bergman_kernel(x: PointLike, y: PointLike, table: CoefTable, tol: float = None, cap: int = None,
                   rel_tol: float = 0.0) -> KernelValue:
    """
    R_alpha(x, y) = sum_m c_m(alpha) S_m(|x|) S_m(|y|) Z_m(x, y).

    The returned tail bound is below ``tol`` unless ``rel_tol`` allows a tail
    up to rel_tol times the majorant sum.
    """
    return _evaluate(x, y, KernelFamily.bergman(table), tol or CONFIG["KERNEL_TOL"], cap or CONFIG["TERM_CAP"],
                     rel_tol)


def hardy_kernel(x: PointLike, y: PointLike, tol: float = None, cap: int = None,
                 rel_tol: float = 0.0) -> KernelValue:
    """K(x, y) = sum_m S_m(|x|) S_m(|y|) Z_m(x, y)."""
    family = KernelFamily.hardy(as_point(x).n)
    return _evaluate(x, y, family, tol or CONFIG["KERNEL_TOL"], cap or CONFIG["TERM_CAP"], rel_tol)


def euclid_kernel(x: PointLike, y: PointLike, params: Params, tol: float = None, cap: int = None,
                  rel_tol: float = 0.0) -> KernelValue:
    """Euclidean harmonic Bergman kernel sum_m gamma_m(alpha) Z_m(x, y)."""
    return _evaluate(x, y, KernelFamily.euclid(params), tol or CONFIG["KERNEL_TOL"], cap or CONFIG["TERM_CAP"],
                     rel_tol)


def kernel_gradient(x: PointLike, y: PointLike, table_or_family, tol: float = None,
                    cap: int = None, rel_tol: float = 0.0) -> Tuple[np.ndarray, float, int]:
    """
    Gradient in x of a kernel series, as ``(vector, tail_bound, terms_used)``.

    grad = (sum G1_m) zeta + (sum G2_m)(eta - t zeta) with
    G1_m = a_m s_m(|y|) K_m |y|^m (s_m'(r) r^m + s_m(r) m r^(m-1)) C_m^lam(t),
    G2_m = a_m s_m(|y|) s_m(r) K_m r^(m-1) |y|^m (n-2) C_(m-1)^(lam+1)(t).
    The tail bound applies to the Euclidean norm of the gradient.
    """
    family = _family_for(table_or_family)
    tol = tol or CONFIG["KERNEL_TOL"]
    cap = cap or CONFIG["TERM_CAP"]
    x, y = as_point(x), as_point(y)
    n = family.n
    if x.n != n or y.n != n:
        raise DomainError(f"points must lie in dimension {n}")
    if y.norm == 0.0:
        return np.zeros(n), 0.0, 1
    if x.norm == 0.0:
        # only the m = 1 term is linear in x
        one = np.array([1])
        coefficient = family.coefficients(one)[0] * family.radial(one, 0.0)[0] * family.radial(one, y.norm)[0]
        return coefficient * n * y.coords, 0.0, 2
    r, rho = x.norm, y.norm
    product = _check_product(r, rho)
    M, tail = choose_truncation(lambda m: _gradient_majorant(family, m, r, rho),
                                product, family.growth_degree + 2.0, tol, cap, rel_tol)
    m = np.arange(M + 1)
    lam = family.params.lam
    zeta, eta = x.direction(), y.direction()
    t = float(np.clip(np.dot(zeta, eta), -1.0, 1.0))
    values_x, slopes_x = family.radial(m, r, derivative=True)
    common = family.coefficients(m) * family.radial(m, rho) * zonal_scale(m, n) * np.exp(m * np.log(product))
    first = common * (slopes_x + values_x * m / r)
    radial_sum = float(_gegenbauer_sum(first, lam, t))
    if M >= 1:
        second = (common * values_x * (n - 2.0) / r)[1:]
        angular_sum = float(_gegenbauer_sum(second, lam + 1.0, t))
    else:
        angular_sum = 0.0
    return radial_sum * zeta + angular_sum * (eta - t * zeta), tail, M + 1


def bergman_kernel_grad(x: PointLike, y: PointLike, table: CoefTable, tol: float = None,
                        cap: int = None) -> Tuple[KernelValue, ...]:
    """Partials dR_alpha/dx_i, one KernelValue per coordinate sharing the gradient tail bound."""
    vector, tail, terms = kernel_gradient(x, y, KernelFamily.bergman(table), tol, cap)
    return tuple(KernelValue(float(component), tail, terms) for component in vector)
