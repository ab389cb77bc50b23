"""Curvature-unified trigonometry for the three model spaces.

A single runtime curvature value k selects between the sphere (k > 0),
Euclidean space (k = 0) and hyperbolic space (k < 0). The only geometric
fact needed downstream is the right-triangle relation
cos_k(hypotenuse) = cos_k(leg1) * cos_k(leg2), which gives the map between
a ball radius and the radius of its slice by a hyperplane at offset h.

All functions accept scalars or numpy arrays and are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SLACK = 1e-12


@dataclass(frozen=True)
class Curvature:
    """Sectional curvature k, units 1/length**2."""

    k: float

    def __post_init__(self):
        if not math.isfinite(self.k):
            raise ValueError("curvature must be finite")

    @property
    def sign(self) -> int:
        return (self.k > 0) - (self.k < 0)

    @property
    def scale(self) -> float:
        """sqrt(|k|); the inverse length scale of the space (0 when flat)."""
        return math.sqrt(abs(self.k))

    @property
    def l_max(self) -> float:
        """Largest admissible ball radius: pi/(2 sqrt(k)) on the sphere."""
        if self.k > 0:
            return math.pi / (2.0 * math.sqrt(self.k))
        return math.inf


def as_curvature(k) -> Curvature:
    if isinstance(k, Curvature):
        return k
    return Curvature(float(k))


@dataclass(frozen=True)
class SpaceParams:
    """Ambient model space: curvature plus dimension d >= 2."""

    curvature: Curvature
    d: int

    def __post_init__(self):
        object.__setattr__(self, "curvature", as_curvature(self.curvature))
        if int(self.d) != self.d or self.d < 2:
            raise ValueError("dimension d must be an integer >= 2")
        object.__setattr__(self, "d", int(self.d))

    @property
    def k(self) -> float:
        return self.curvature.k

    @property
    def l_max(self) -> float:
        return self.curvature.l_max


def _ret(x):
    """Collapse 0-d arrays back to python floats."""
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def cos_k(curv, x):
    """The unified cosine: cos(sqrt(k) x), 1, or cosh(sqrt(-k) x) by sign(k)."""
    curv = as_curvature(curv)
    x = np.asarray(x, dtype=float)
    if curv.k > 0:
        return _ret(np.cos(curv.scale * x))
    if curv.k < 0:
        return _ret(np.cosh(curv.scale * x))
    return _ret(np.ones_like(x))


def alpha(curv, t, h):
    """Slice radius of a ball of radius t centred at offset h from the plane.

    Solves cos_k(result) = cos_k(t)/cos_k(h); reduces to sqrt(t**2 - h**2)
    when flat. Requires |h| <= t <= l_max. The sign of h is orientation only.
    """
    curv = as_curvature(curv)
    t = np.asarray(t, dtype=float)
    h = np.abs(np.asarray(h, dtype=float))
    if np.any(h > t * (1.0 + _SLACK) + _SLACK):
        raise ValueError("alpha requires |h| <= t (plane misses the ball)")
    if np.any(t > curv.l_max * (1.0 + _SLACK)):
        raise ValueError("alpha requires t <= l_max(k)")
    h = np.minimum(h, t)
    if curv.k == 0:
        return _ret(np.sqrt((t - h) * (t + h)))
    s = curv.scale
    if curv.k > 0:
        a, b = s * t, s * h
        # cos^2 b - cos^2 a = sin(a+b) sin(a-b), stable near t = |h|
        num = np.maximum(np.sin(a + b) * np.sin(a - b), 0.0)
        return _ret(np.arctan2(np.sqrt(num), np.cos(a)) / s)
    a, b = s * t, s * h
    rm1 = 2.0 * np.sinh(0.5 * (a + b)) * np.sinh(0.5 * (a - b)) / np.cosh(b)
    rm1 = np.maximum(rm1, 0.0)
    return _ret(np.log1p(rm1 + np.sqrt(rm1 * (rm1 + 2.0))) / s)


def beta(curv, t, h):
    """Ball radius producing slice radius t at offset h; inverse of alpha.

    cos_k(result) = cos_k(t) cos_k(h); beta(0, h) = |h|.
    """
    curv = as_curvature(curv)
    t = np.asarray(t, dtype=float)
    h = np.abs(np.asarray(h, dtype=float))
    if np.any(t < 0):
        raise ValueError("beta requires t >= 0")
    if curv.k == 0:
        return _ret(np.hypot(t, h))
    s = curv.scale
    if curv.k > 0:
        if np.any(t > curv.l_max * (1.0 + _SLACK)) or \
           np.any(h > curv.l_max * (1.0 + _SLACK)):
            raise ValueError("beta requires t, |h| <= l_max(k) for k > 0")
        a, b = s * t, s * h
        # 1 - cos a cos b through versines; arccos(p) = 2 asin(sqrt((1-p)/2))
        va = 2.0 * np.sin(0.5 * a) ** 2
        vb = 2.0 * np.sin(0.5 * b) ** 2
        q = va + vb - va * vb
        return _ret(2.0 * np.arcsin(np.sqrt(np.clip(0.5 * q, 0.0, 1.0))) / s)
    a, b = s * t, s * h
    pm1 = 2.0 * np.sinh(0.5 * a) ** 2 + np.cosh(a) * 2.0 * np.sinh(0.5 * b) ** 2
    return _ret(np.log1p(pm1 + np.sqrt(pm1 * (pm1 + 2.0))) / s)


def volume_weight(space: SpaceParams, h):
    """Equidistant-decomposition volume factor cos_k(h)**(d-1)."""
    h = np.asarray(h, dtype=float)
    if np.any(np.abs(h) > space.l_max * (1.0 + _SLACK)):
        raise ValueError("offset |h| exceeds l_max(k)")
    return _ret(cos_k(space.curvature, h) ** (space.d - 1))


def embed_check(curv, t, h):
    """Hypotenuse length recomputed from explicit ambient coordinates.

    Places the right triangle with legs |h| and alpha(t, h) on the embedded
    sphere/hyperboloid in R^3 (the triangle spans a totally geodesic
    2-subspace, so three coordinates suffice) and measures the hypotenuse
    with the ambient scalar product. Must return t up to roundoff; serves
    as an independent oracle for the curved Pythagorean relation.
    """
    curv = as_curvature(curv)
    if curv.k == 0:
        raise ValueError("embed_check is defined for curved spaces only")
    t, h = float(t), abs(float(h))
    leg = float(alpha(curv, t, h))
    s = curv.scale
    rho = 1.0 / s
    if curv.k > 0:
        b, c = s * h, s * leg
        a_pt = rho * np.array([math.cos(b), math.sin(b), 0.0])
        c_pt = rho * np.array([math.cos(c), 0.0, math.sin(c)])
        inner = curv.k * float(a_pt @ c_pt)
        return math.acos(min(max(inner, -1.0), 1.0)) / s
    b, c = s * h, s * leg
    a_pt = rho * np.array([math.sinh(b), 0.0, math.cosh(b)])
    c_pt = rho * np.array([0.0, math.sinh(c), math.cosh(c)])
    lorentz = a_pt[0] * c_pt[0] + a_pt[1] * c_pt[1] - a_pt[2] * c_pt[2]
    return math.acosh(max(curv.k * lorentz, 1.0)) / s
