"""
Special-function substrate for the kernel pipeline.

Gamma ratios are evaluated in log domain with explicit sign tracking, the Gauss
function 2F1 on real z <= 1, the generalized 3F2 at unit argument with tail
extrapolation, and Gegenbauer polynomials by their three-term recurrence.

All functions are pure and safe to call from several processes at once.
"""
import os
import sys
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import special

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils import get_logger
from config_hbergman import CONFIG
from libs.errors import ConvergenceError, DivergenceError, DomainError, PoleError

logger = get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

# |term| below this fraction of the partial sum counts as negligible
SERIES_EPS = 1e-16


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


# === Gamma ratios ===

@dataclass(frozen=True)
class GammaRatioSpec:
    """
    Offsets of the ratio prod Gamma(a_i + k) / prod Gamma(b_i + k).

    Numerator and denominator offsets are paired in order when evaluating, so
    listing the offsets of similar size side by side keeps the ratio accurate
    for large arguments.
    """
    numerator_offsets: Tuple[float, ...] = ()
    denominator_offsets: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "numerator_offsets", tuple(float(a) for a in self.numerator_offsets))
        object.__setattr__(self, "denominator_offsets", tuple(float(b) for b in self.denominator_offsets))


def _log_gamma_quotient(a: float, b: float) -> Tuple[float, float]:
    """Sign and log-magnitude of Gamma(a)/Gamma(b)."""
    if a == b:
        return 1.0, 0.0
    if a > 0 and b > 0:
        value = special.poch(b, a - b)
        if np.isfinite(value) and value > 0:
            return 1.0, float(np.log(value))
    sign = float(special.gammasgn(a) * special.gammasgn(b))
    return sign, float(special.gammaln(a) - special.gammaln(b))


def log_gamma_ratio(spec: GammaRatioSpec, k: float = 0.0) -> Tuple[float, float]:
    """
    Sign and log|.| of prod Gamma(a_i + k) / prod Gamma(b_i + k).

    Raises:
        PoleError: if any shifted argument is a nonpositive integer.
    """
    num = [a + k for a in spec.numerator_offsets]
    den = [b + k for b in spec.denominator_offsets]
    for x in num + den:
        if is_nonpositive_integer(x):
            raise PoleError(f"Gamma argument {x} is a nonpositive integer")
    sign, log_value = 1.0, 0.0
    paired = min(len(num), len(den))
    for a, b in zip(num[:paired], den[:paired]):
        s, lv = _log_gamma_quotient(a, b)
        sign *= s
        log_value += lv
    for a in num[paired:]:
        sign *= float(special.gammasgn(a))
        log_value += float(special.gammaln(a))
    for b in den[paired:]:
        sign *= float(special.gammasgn(b))
        log_value -= float(special.gammaln(b))
    return sign, log_value


def gamma_ratio(spec: GammaRatioSpec, k: float = 0.0) -> float:
    """prod Gamma(a_i + k) / prod Gamma(b_i + k)."""
    sign, log_value = log_gamma_ratio(spec, k)
    return sign * float(np.exp(log_value))


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a(a+1)...(a+k-1)."""
    if k < 0 or int(k) != k:
        raise DomainError(f"Pochhammer order must be a nonnegative integer, got {k}")
    k = int(k)
    if k == 0:
        return 1.0
    if is_nonpositive_integer(a) and k > -a:
        return 0.0
    if k <= 200 or is_nonpositive_integer(a):
        return float(np.prod(a + np.arange(k, dtype=float)))
    return gamma_ratio(GammaRatioSpec((a + k,), (a,)))


def beta_fn(a: float, b: float) -> float:
    """Euler Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b)."""
    return gamma_ratio(GammaRatioSpec((a, b), (a + b,)))


# === Gauss hypergeometric function ===

@dataclass(frozen=True)
class HypParams21:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if is_nonpositive_integer(self.c):
            raise DomainError(f"2F1 lower parameter c={self.c} is a nonpositive integer")


@dataclass(frozen=True)
class HypParams32:
    a: float
    b: float
    c: float
    d: float
    e: float

    def __post_init__(self):
        for name in ("d", "e"):
            value = getattr(self, name)
            if is_nonpositive_integer(value):
                raise DomainError(f"3F2 lower parameter {name}={value} is a nonpositive integer")

    @property
    def excess(self) -> float:
        return self.d + self.e - self.a - self.b - self.c


def _series_2f1(a: float, b: float, c: float, z: float, max_terms: int, block: int = 256) -> float:
    """Direct series; stops after three consecutive negligible terms."""
    total, term, k0, small_run = 1.0, 1.0, 0, 0
    while k0 < max_terms:
        k = np.arange(k0, k0 + block, dtype=float)
        terms = term * np.cumprod((a + k) * (b + k) / ((c + k) * (k + 1.0)) * z)
        partial = total + np.cumsum(terms)
        small = np.abs(terms) <= SERIES_EPS * np.abs(partial)
        padded = np.concatenate([np.ones(small_run, dtype=bool), small])
        runs = padded[2:] & padded[1:-1] & padded[:-2]
        if runs.any():
            return float(partial[int(np.argmax(runs)) + 2 - small_run])
        total, term = float(partial[-1]), float(terms[-1])
        small_run = 2 if (small[-1] and small[-2]) else int(small[-1])
        k0 += block
    logger.error(f"2F1 series ({a}, {b}; {c}; {z}) did not settle within {max_terms} terms")
    raise ConvergenceError(f"2F1 series did not converge within {max_terms} terms at z={z}")


def _gauss_unit_value(a: float, b: float, c: float) -> float:
    excess = c - a - b
    if excess <= 0:
        raise DivergenceError(f"2F1({a}, {b}; {c}; 1) diverges: c-a-b={excess} <= 0")
    if is_nonpositive_integer(c - a) or is_nonpositive_integer(c - b):
        return 0.0
    return gamma_ratio(GammaRatioSpec((c, excess), (c - a, c - b)))


def hyp2f1(p: HypParams21, z: float, max_terms: int = None) -> float:
    """
    Gauss hypergeometric function F(a, b; c; z) for real z <= 1.

    On (0, 1) the direct series is used when c-a-b > 0 (or z <= 1/2), otherwise
    the Euler transform (1-z)^(c-a-b) F(c-a, c-b; c; z). Negative z below -1/2
    is mapped into (0, 1) by the Pfaff transform. At z = 1 the Gauss value is
    returned.

    Raises:
        DomainError: for z > 1.
        DivergenceError: at z = 1 when c-a-b <= 0.
    """
    max_terms = max_terms or CONFIG["HYP_MAX_TERMS"]
    a, b, c = p.a, p.b, p.c
    if z > 1:
        raise DomainError(f"2F1 is only evaluated for z <= 1, got z={z}")
    if z == 1:
        return _gauss_unit_value(a, b, c)
    if z == 0 or a == 0 or b == 0:
        return 1.0
    if z < -0.5:
        w = z / (z - 1.0)
        return (1.0 - z) ** (-a) * hyp2f1(HypParams21(a, c - b, c), w, max_terms)
    excess = c - a - b
    if z <= 0.5 or excess >= 0:
        return _series_2f1(a, b, c, z, max_terms)
    return (1.0 - z) ** excess * _series_2f1(c - a, c - b, c, z, max_terms)


# === 3F2 at unit argument ===

def _terminating_3f2(p: HypParams32, length: int) -> float:
    if length == 0:
        return 1.0
    k = np.arange(length, dtype=float)
    ratios = (p.a + k) * (p.b + k) * (p.c + k) / ((p.d + k) * (p.e + k) * (k + 1.0))
    return float(1.0 + np.sum(np.cumprod(ratios)))


def hyp3f2_unit(p: HypParams32, block: int = None, levels: int = 5) -> float:
    """
    Sum of 3F2(a, b, c; d, e; 1).

    Terminating series are summed exactly. Otherwise partial sums at
    J, 2J, ..., 2^(levels-1) J are combined to eliminate the tail terms
    N^(-s), N^(-s-1), ... where s = d+e-a-b-c is the parameter excess.

    Raises:
        DivergenceError: when s <= 0.
    """
    block = block or CONFIG["HYP_TAIL_BLOCK"]
    s = p.excess
    if s <= 0:
        raise DivergenceError(f"3F2 at unit argument diverges: excess d+e-a-b-c={s} <= 0")
    poles = [-u for u in (p.a, p.b, p.c) if is_nonpositive_integer(u)]
    if poles:
        return _terminating_3f2(p, int(min(poles)))

    length = block * 2 ** (levels - 1)
    k = np.arange(length - 1, dtype=float)
    ratios = (p.a + k) * (p.b + k) * (p.c + k) / ((p.d + k) * (p.e + k) * (k + 1.0))
    terms = np.concatenate([[1.0], np.cumprod(ratios)])
    sizes = [block * 2 ** i for i in range(levels)]
    partials = np.array([np.sum(terms[:size]) for size in sizes])
    scale = max(1.0, abs(partials[-1]))
    if abs(partials[-1] - partials[-2]) <= SERIES_EPS * scale:
        return float(partials[-1])

    # P(N) = S - sum_i C_i (N/J)^(-s-i), unknowns rescaled by J
    system = np.ones((levels, levels))
    for row, size in enumerate(sizes):
        system[row, 1:] = -float(size // block) ** (-s - np.arange(levels - 1))
    solution = np.linalg.solve(system, partials)
    value = float(solution[0])
    if not np.isfinite(value):
        logger.error(f"3F2 tail extrapolation produced a non-finite value for {p}")
        raise ConvergenceError(f"3F2 tail extrapolation failed for {p}")
    return value


def kummer_transform(p: HypParams32) -> Tuple[float, HypParams32]:
    """
    Kummer's relation for 3F2 at 1:
    3F2(a,b,c; d,e; 1) = G(e)G(s)/(G(e-a)G(s+a)) 3F2(a, d-b, d-c; d, s+a; 1), s = d+e-a-b-c.

    Returns the Gamma prefactor and the transformed parameters.

    Raises:
        DomainError: unless s > 0 and e - a > 0.
    """
    s = p.excess
    if s <= 0 or p.e - p.a <= 0:
        raise DomainError(f"Kummer's relation needs d+e-a-b-c > 0 and e-a > 0, got {p}")
    prefactor = gamma_ratio(GammaRatioSpec((p.e, s), (p.e - p.a, s + p.a)))
    return prefactor, HypParams32(p.a, p.d - p.b, p.d - p.c, p.d, s + p.a)


def dixon_sum(a: float, b: float, c: float) -> float:
    """
    Closed form of the well-poised 3F2(a, b, c; a-b+1, a-c+1; 1) (Dixon), valid for a-2b-2c > -2.
    """
    if a - 2.0 * b - 2.0 * c <= -2.0:
        raise DivergenceError(f"Dixon's sum needs a-2b-2c > -2, got a={a}, b={b}, c={c}")
    return gamma_ratio(GammaRatioSpec(
        (0.5 * a + 1.0, a - b + 1.0, a - c + 1.0, 0.5 * a - b - c + 1.0),
        (a + 1.0, 0.5 * a - b + 1.0, 0.5 * a - c + 1.0, a - b - c + 1.0),
    ))


# === Gegenbauer polynomials ===

def _validate_gegenbauer(m: int, lam: float, t: np.ndarray) -> None:
    if m < 0 or int(m) != m:
        raise DomainError(f"Gegenbauer degree must be a nonnegative integer, got {m}")
    if lam <= -0.5:
        raise DomainError(f"Gegenbauer parameter must exceed -1/2, got {lam}")
    if np.any(np.abs(t) > 1.0 + 1e-12):
        raise DomainError("Gegenbauer argument must lie in [-1, 1]")


def gegenbauer_sequence(m_max: int, lam: float, t: ArrayLike) -> np.ndarray:
    """C_0^lam(t), ..., C_m_max^lam(t) stacked along the first axis."""
    t = np.asarray(t, dtype=float)
    _validate_gegenbauer(m_max, lam, t)
    out = np.empty((m_max + 1,) + t.shape)
    out[0] = 1.0
    if m_max >= 1:
        out[1] = 2.0 * lam * t
    for k in range(1, m_max):
        out[k + 1] = (2.0 * (k + lam) * t * out[k] - (k + 2.0 * lam - 1.0) * out[k - 1]) / (k + 1.0)
    return out


def gegenbauer(m: int, lam: float, t: ArrayLike, derivative: bool = False):
    """
    C_m^lam(t) by the three-term recurrence.

    With ``derivative=True`` returns ``(value, d/dt value)`` using
    d/dt C_m^lam = 2 lam C_{m-1}^{lam+1}.
    """
    t_arr = np.asarray(t, dtype=float)
    _validate_gegenbauer(m, lam, t_arr)
    prev = np.ones_like(t_arr)
    cur = prev if m == 0 else 2.0 * lam * t_arr
    for k in range(1, m):
        prev, cur = cur, (2.0 * (k + lam) * t_arr * cur - (k + 2.0 * lam - 1.0) * prev) / (k + 1.0)
    value = cur if t_arr.ndim else float(cur)
    if not derivative:
        return value
    if m == 0:
        slope = np.zeros_like(t_arr) if t_arr.ndim else 0.0
    else:
        slope = 2.0 * lam * gegenbauer(m - 1, lam + 1.0, t)
    return value, slope


def gegenbauer_at_one(m: ArrayLike, lam: float) -> np.ndarray:
    """C_m^lam(1) = (2 lam)_m / m!, also the sup of |C_m^lam| on [-1, 1]."""
    m = np.asarray(m, dtype=float)
    return np.exp(special.gammaln(m + 2.0 * lam) - special.gammaln(2.0 * lam) - special.gammaln(m + 1.0))


def gegenbauer_weighted_integral(m_max: int, lam: float, t0: ArrayLike, t1: ArrayLike) -> np.ndarray:
    """
    Integrals of C_m^lam(t) against the normalized weight (1-t^2)^(lam-1/2)/B(1/2, lam+1/2).

    Returns an array of shape (m_max + 1, len(t0)) holding the integrals over
    [t0_j, t1_j]. Uses (1-t^2)^(lam-1/2) C_m^lam = -2lam/(m(m+2lam)) d/dt[(1-t^2)^(lam+1/2) C_{m-1}^(lam+1)]
    for m >= 1 and the regularized incomplete Beta function for m = 0.
    """
    t0 = np.clip(np.atleast_1d(np.asarray(t0, dtype=float)), -1.0, 1.0)
    t1 = np.clip(np.atleast_1d(np.asarray(t1, dtype=float)), -1.0, 1.0)
    out = np.empty((m_max + 1, t0.size))
    half = lam + 0.5
    out[0] = special.betainc(half, half, (1.0 + t1) / 2.0) - special.betainc(half, half, (1.0 + t0) / 2.0)
    if m_max == 0:
        return out
    ends = np.concatenate([t0, t1])
    envelope = (1.0 - ends ** 2) ** half
    phi = envelope * gegenbauer_sequence(m_max - 1, lam + 1.0, ends)
    m = np.arange(1, m_max + 1, dtype=float)[:, None]
    norm = special.beta(0.5, half)
    scale = -2.0 * lam / (m * (m + 2.0 * lam) * norm)
    out[1:] = scale * (phi[:, t0.size:] - phi[:, :t0.size])
    return out


__all__: Sequence[str] = [
    "GammaRatioSpec", "HypParams21", "HypParams32",
    "log_gamma_ratio", "gamma_ratio", "pochhammer", "beta_fn",
    "hyp2f1", "hyp3f2_unit", "kummer_transform", "dixon_sum",
    "gegenbauer", "gegenbauer_sequence", "gegenbauer_at_one", "gegenbauer_weighted_integral",
    "is_nonpositive_integer",
]
