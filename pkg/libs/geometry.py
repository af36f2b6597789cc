"""
Geometry of the unit ball: parameters, points, Ahlfors bracket, Mobius
involutions and finite-difference versions of the hyperbolic Laplacian and
the invariant gradient.
"""
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils import get_logger
from config_hbergman import CONFIG
from libs.errors import DomainError, StencilError
from libs.specfun import beta_fn

logger = get_logger(__name__)


@dataclass(frozen=True)
class Params:
    """Dimension n >= 3 and weight exponent alpha > -1."""
    n: int
    alpha: float = 0.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 3:
            raise DomainError(f"dimension n must be an integer >= 3, got {self.n}")
        if not self.alpha > -1:
            raise DomainError(f"weight alpha must exceed -1, got {self.alpha}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def lam(self) -> float:
        """Gegenbauer index n/2 - 1 of the zonal harmonics."""
        return 0.5 * self.n - 1.0

    def with_alpha(self, alpha: float) -> "Params":
        return Params(self.n, alpha)

    def as_dict(self) -> dict:
        return {"n": self.n, "alpha": self.alpha}


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A point of the open unit ball with its cached Euclidean norm."""
    coords: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float).ravel()
        coords.flags.writeable = False
        norm = float(np.linalg.norm(coords))
        if not norm < 1.0:
            raise DomainError(f"point {coords.tolist()} is not inside the open unit ball (|x|={norm})")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "norm", norm)

    @property
    def n(self) -> int:
        return self.coords.size

    def direction(self) -> np.ndarray:
        """x/|x|, or e_1 at the origin."""
        if self.norm == 0.0:
            unit = np.zeros(self.n)
            unit[0] = 1.0
            return unit
        return self.coords / self.norm

    @classmethod
    def on_axis(cls, radius: float, n: int, axis: int = 0) -> "BallPoint":
        coords = np.zeros(n)
        coords[axis] = radius
        return cls(coords)

    def __repr__(self) -> str:
        return f"BallPoint({self.coords.tolist()})"


PointLike = Union[BallPoint, np.ndarray, list, tuple]


def as_point(x: PointLike) -> BallPoint:
    return x if isinstance(x, BallPoint) else BallPoint(np.asarray(x, dtype=float))


def _closure_coords(x) -> np.ndarray:
    coords = x.coords if isinstance(x, BallPoint) else np.asarray(x, dtype=float)
    if np.any(np.linalg.norm(coords, axis=-1) > 1.0 + 1e-12):
        raise DomainError("Ahlfors bracket is defined on the closed unit ball only")
    return coords


def ahlfors_bracket(x, y) -> Union[float, np.ndarray]:
    """
    [x, y] = sqrt(1 - 2<x, y> + |x|^2 |y|^2) on the closed ball.

    Accepts BallPoints or coordinate arrays; arrays of shape (k, n) broadcast.
    """
    xc, yc = _closure_coords(x), _closure_coords(y)
    inner = np.sum(xc * yc, axis=-1)
    value = 1.0 - 2.0 * inner + np.sum(xc ** 2, axis=-1) * np.sum(yc ** 2, axis=-1)
    result = np.sqrt(np.maximum(value, 0.0))
    return float(result) if np.ndim(result) == 0 else result


def mobius_map(a: PointLike, x: PointLike) -> BallPoint:
    """The involution phi_a exchanging a and 0."""
    a, x = as_point(a), as_point(x)
    diff = x.coords - a.coords
    bracket_sq = ahlfors_bracket(x, a) ** 2
    image = (a.coords * np.dot(diff, diff) - (1.0 - a.norm ** 2) * diff) / bracket_sq
    return BallPoint(image)


def weighted_volume(n: int, alpha: float) -> float:
    """V_alpha = (n/2) B(n/2, alpha+1), so that d nu_alpha = (1-|x|^2)^alpha d nu / V_alpha."""
    return 0.5 * n * beta_fn(0.5 * n, alpha + 1.0)


# === Finite differences ===

ScalarField = Callable[[np.ndarray], float]


def _check_stencil(x: BallPoint, h: float) -> None:
    if h <= 0:
        raise DomainError(f"finite-difference step must be positive, got {h}")
    if 1.0 - x.norm <= h * x.n:
        raise StencilError(f"stencil of step {h} around |x|={x.norm} leaves the ball")


def _central_differences(f: ScalarField, x: BallPoint, h: float):
    """Euclidean Laplacian and gradient of f at x by central differences."""
    center = x.coords
    f0 = float(f(center))
    laplacian, gradient = 0.0, np.zeros(x.n)
    for i in range(x.n):
        step = np.zeros(x.n)
        step[i] = h
        forward, backward = float(f(center + step)), float(f(center - step))
        laplacian += (forward - 2.0 * f0 + backward) / h ** 2
        gradient[i] = (forward - backward) / (2.0 * h)
    return laplacian, gradient


def hyperbolic_laplacian_fd(f: ScalarField, x: PointLike, h: float = None, richardson: bool = False) -> float:
    """
    Delta_h f(x) = (1-|x|^2)[(1-|x|^2) Delta f(x) + 2(n-2) <x, grad f(x)>].

    Central differences of step h; ``richardson`` combines h and h/2.

    Raises:
        StencilError: x closer than n*h to the boundary.
    """
    x = as_point(x)
    h = h or CONFIG["FD_STEP"]
    _check_stencil(x, h)

    def estimate(step: float) -> float:
        laplacian, gradient = _central_differences(f, x, step)
        weight = 1.0 - x.norm ** 2
        return weight * (weight * laplacian + 2.0 * (x.n - 2) * float(np.dot(x.coords, gradient)))

    if richardson:
        return (4.0 * estimate(0.5 * h) - estimate(h)) / 3.0
    return estimate(h)


def invariant_gradient_fd(f: ScalarField, x: PointLike, h: float = None, richardson: bool = False) -> float:
    """(1-|x|^2)|grad f(x)| with a central-difference gradient."""
    x = as_point(x)
    h = h or CONFIG["FD_STEP"]
    _check_stencil(x, h)
    gradient = _central_differences(f, x, h)[1]
    if richardson:
        gradient = (4.0 * _central_differences(f, x, 0.5 * h)[1] - gradient) / 3.0
    return (1.0 - x.norm ** 2) * float(np.linalg.norm(gradient))
