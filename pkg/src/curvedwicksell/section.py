"""Forward operator: from the ball process to the induced slice process.

The induced intensity and slice-radius law are double integrals of the
equidistant volume weight cos_k(h)**(d-1) against the ball-radius law. The
inner h-integral is available in closed form (incomplete beta on the
sphere, a binomial exponential sum in hyperbolic space), which the slice
kernels use; ``intensity_ratio`` deliberately keeps a purely numerical
inner quadrature so the closed forms can be cross-checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .geometry import SpaceParams, alpha, cos_k
from .measures import AtomMixture, RadiusDistribution, TabulatedDensity
from .quadrature import (QuadratureSpec, SINGULARITY_INV_SQRT_AT_LOWER,
                         _gk_batch)

_SLACK = 1e-12


def _check_support(space: SpaceParams, dist: RadiusDistribution, what):
    if dist.support_max() > space.l_max * (1.0 + _SLACK):
        raise ValueError(f"{what} support exceeds l_max(k)")


@dataclass(frozen=True)
class BallProcess:
    """Stationary ball process: ambient space, centre intensity, radius law."""

    space: SpaceParams
    intensity: float
    radii: RadiusDistribution

    def __post_init__(self):
        if not self.intensity > 0:
            raise ValueError("intensity must be positive")
        _check_support(self.space, self.radii, "radius law")


@dataclass(frozen=True)
class SectionProfile:
    """Tabulated law of a process on the slicing hyperplane."""

    intensity: float
    grid: np.ndarray
    tail_values: np.ndarray
    density_values: np.ndarray | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        tails = np.asarray(self.tail_values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "tail_values", tails)
        if self.density_values is not None:
            object.__setattr__(self, "density_values",
                               np.asarray(self.density_values, dtype=float))
        if not self.intensity > 0:
            raise ValueError("induced intensity must be positive")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("profile grid must be strictly increasing")
        if np.any(np.diff(tails) > 1e-9):
            raise ValueError("tail values must be nonincreasing")


def cumulative_weight(space: SpaceParams, x):
    """Closed form of W(x) = integral_0^x cos_k(h)**(d-1) dh.

    Sphere: an incomplete beta function; hyperbolic: binomial expansion of
    cosh**(d-1) integrated termwise (the zero-exponent term degenerates to
    a linear one); flat: x itself.
    """
    k, d = space.k, space.d
    x = np.asarray(x, dtype=float)
    if k == 0:
        out = x.copy()
        return float(out) if out.ndim == 0 else out
    s = space.curvature.scale
    if k > 0:
        y = np.sin(np.minimum(s * x, 0.5 * math.pi)) ** 2
        bfun = special.beta(0.5, 0.5 * d)
        out = special.betainc(0.5, 0.5 * d, y) * bfun / (2.0 * s)
        return float(out) if out.ndim == 0 else out
    out = np.zeros_like(x)
    for i in range(d):
        m = d - 1 - 2 * i
        coeff = special.comb(d - 1, i, exact=True)
        if m == 0:
            out = out + coeff * s * x
        else:
            out = out + coeff * np.expm1(m * s * x) / m
    out = out / (2.0 ** (d - 1) * s)
    return float(out) if out.ndim == 0 else out


def _numeric_weight(space: SpaceParams, upper):
    """W(x) by composite Gauss-Kronrod panels; vectorized over x."""
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    out = np.zeros_like(upper)
    pos = upper > 0
    if pos.any():
        up = upper[pos]
        span = max(space.curvature.scale * float(up.max()), 1.0)
        n_panels = max(2, int(math.ceil(span / 0.5)))
        edges = np.linspace(0.0, 1.0, n_panels + 1)
        acc = np.zeros_like(up)
        for j in range(n_panels):
            lo = edges[j] * up
            hi = edges[j + 1] * up
            vals, _ = _gk_batch(
                lambda h: cos_k(space.curvature, h) ** (space.d - 1), lo, hi)
            acc += vals
        out[pos] = acc
    return out if out.shape != (1,) else out


def intensity_ratio(proc: BallProcess, quad: QuadratureSpec | None = None):
    """N_{d-1}/N_d = integral over R of 2 W(R), with W evaluated numerically."""
    if quad is None:
        quad = QuadratureSpec()
    sup = proc.radii.support_max()

    def f(radii):
        return 2.0 * _numeric_weight(proc.space, radii)

    return proc.radii.integrate(f, 0.0, sup, quad)


def intensity_ratio_closed_form(proc: BallProcess):
    """Intensity ratio via the special-function closed forms (k != 0 only)."""
    if proc.space.k == 0:
        raise ValueError("closed forms are defined for curved spaces only")
    sup = proc.radii.support_max()
    return proc.radii.integrate(
        lambda radii: 2.0 * cumulative_weight(proc.space, radii), 0.0, sup,
        QuadratureSpec())


def section_tail(proc: BallProcess, r, quad: QuadratureSpec | None = None,
                 ratio: float | None = None):
    """Slice-law tail at r: mass of slice radii exceeding r."""
    if quad is None:
        quad = QuadratureSpec()
    r = float(r)
    if not 0.0 <= r < proc.space.l_max:
        raise ValueError("r must lie in [0, l_max(k))")
    if ratio is None:
        ratio = intensity_ratio(proc, quad)
    sup = proc.radii.support_max()
    if r >= sup:
        return 0.0
    curv = proc.space.curvature

    def f(radii):
        return 2.0 * cumulative_weight(proc.space, alpha(curv, radii, r))

    return proc.radii.integrate(f, r, sup, quad) / ratio


def _density_kernel(space: SpaceParams, radii, r):
    """Integrand of the exact slice-law density: -d/dr of the tail kernel."""
    k, d = space.k, space.d
    if k == 0:
        return r / np.sqrt((radii - r) * (radii + r))
    s = space.curvature.scale
    if k > 0:
        num = np.cos(s * radii) ** d * math.sin(s * r)
        den = math.cos(s * r) ** d * np.sqrt(
            np.maximum(np.sin(s * (radii + r)) * np.sin(s * (radii - r)),
                       0.0))
        return num / den
    num = np.cosh(s * radii) ** d * math.sinh(s * r)
    den = math.cosh(s * r) ** d * np.sqrt(
        np.maximum(np.sinh(s * (radii + r)) * np.sinh(s * (radii - r)), 0.0))
    return num / den


def section_density(proc: BallProcess, r, quad: QuadratureSpec | None = None,
                    ratio: float | None = None):
    """Exact density of the slice law at r (integrable blow-ups at atoms)."""
    if quad is None:
        quad = QuadratureSpec()
    r = float(r)
    if r <= 0.0:
        return 0.0
    if ratio is None:
        ratio = intensity_ratio(proc, quad)
    sup = proc.radii.support_max()
    if r >= sup:
        return 0.0
    spec = QuadratureSpec(quad.abs_tol, quad.rel_tol, quad.max_subdivisions,
                          SINGULARITY_INV_SQRT_AT_LOWER)
    val = proc.radii.integrate(
        lambda radii: _density_kernel(proc.space, radii, r), r, sup, spec)
    return 2.0 * val / ratio


def section_profile(proc: BallProcess, grid,
                    quad: QuadratureSpec | None = None) -> SectionProfile:
    """Tail values on a grid plus a finite-difference density estimate."""
    if quad is None:
        quad = QuadratureSpec()
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if grid[0] < 0 or grid[-1] >= proc.space.l_max:
        raise ValueError("grid must lie within [0, l_max(k))")
    ratio = intensity_ratio(proc, quad)
    tails = np.array([section_tail(proc, r, quad, ratio=ratio)
                      for r in grid])
    if len(grid) >= 3:
        density = np.clip(-np.gradient(tails, grid), 0.0, None)
    else:
        density = np.zeros_like(tails)
    return SectionProfile(intensity=ratio * proc.intensity, grid=grid,
                          tail_values=np.minimum.accumulate(
                              np.clip(tails, 0.0, 1.0)),
                          density_values=density)


def section_expect(proc: BallProcess, f, quad: QuadratureSpec | None = None):
    """Mean of f under the slice law, via the change-of-variables identity."""
    if quad is None:
        quad = QuadratureSpec()
    curv = proc.space.curvature
    d = proc.space.d
    sup = proc.radii.support_max()
    from .quadrature import integrate_1d

    def inner(radius):
        if radius <= 0:
            return 0.0

        def g(h):
            return (np.asarray(f(alpha(curv, radius, h)), dtype=float)
                    * cos_k(curv, h) ** (d - 1))

        val, _ = integrate_1d(g, 0.0, radius, quad)
        return 2.0 * val

    def outer(radii):
        return np.array([inner(float(radius))
                         for radius in np.atleast_1d(radii)])

    numerator = proc.radii.integrate(outer, 0.0, sup, quad)
    return numerator / intensity_ratio(proc, quad)


def _refined_grid(sup, targets, n_base=800, ratio=1.25, w_min_frac=1e-9):
    """Uniform grid on [0, sup] plus geometric clusters below each target.

    Slice-law densities blow up like an inverse square root just below each
    atom of the ball-radius law; the clusters keep the piecewise-linear
    representation accurate through the blow-up.
    """
    pieces = [np.linspace(0.0, sup, n_base)]
    w_min = w_min_frac * sup
    for r0 in targets:
        w = 0.05 * sup
        offs = []
        while w > w_min:
            offs.append(w)
            w /= ratio
        pts = r0 - np.array(offs)
        pieces.append(pts[pts > 0])
        pieces.append(np.array([r0]))
    grid = np.unique(np.concatenate(pieces))
    return grid[(grid >= 0) & (grid <= sup)]


def section_distribution(proc: BallProcess,
                         quad: QuadratureSpec | None = None,
                         n_base=800) -> TabulatedDensity:
    """The slice law as a TabulatedDensity on a singularity-refined grid."""
    if quad is None:
        quad = QuadratureSpec()
    sup = proc.radii.support_max()
    if isinstance(proc.radii, AtomMixture):
        targets = list(proc.radii.radii)
    else:
        targets = [sup]
    grid = _refined_grid(sup, targets, n_base=n_base)
    ratio = intensity_ratio(proc, quad)
    dens = np.array([section_density(proc, r, quad, ratio=ratio)
                     for r in grid])
    return TabulatedDensity(grid, dens)
