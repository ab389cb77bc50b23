"""Inverse operator: recover the ball-radius law from the slice law.

The Abel-type inversion has two parts: a weighted integral with an
inverse-square-root singularity where the slice radius meets the query
radius, and a smooth correction term whose inner angular integral is a
power of sine/cosine. The angular antiderivatives are evaluated by exact
reduction formulas, so only the outer integral against the slice law is
numerical.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import SpaceParams
from .measures import RadiusDistribution
from .quadrature import (QuadratureSpec, SINGULARITY_INV_SQRT_AT_LOWER)
from .section import SectionProfile, _check_support

DEFAULT_CLAMP_TOL = 1e-2


class UnfoldInconsistencyError(ValueError):
    """Raised when an unfolded tail lands far outside [0, 1].

    Not every probability law on the slicing plane arises from a ball
    process; grossly negative or >1 outputs indicate a non-realizable
    input rather than numerical noise.
    """


@dataclass(frozen=True)
class UnfoldInput:
    """Observed slice data: ambient space, intensity ratio, slice law."""

    space: SpaceParams
    ratio: float          # N_{d-1} / N_d, supplied or from the forward path
    slice_radii: RadiusDistribution

    def __post_init__(self):
        if not (self.ratio > 0 and math.isfinite(self.ratio)):
            raise ValueError("intensity ratio must be positive and finite")
        _check_support(self.space, self.slice_radii, "slice law")


def _csc_power_antiderivative(n, theta):
    """Antiderivative of csc**n via the standard reduction formula."""
    theta = np.asarray(theta, dtype=float)
    if n == 0:
        return theta
    sin_t = np.sin(theta)
    cos_t = np.cos(theta)
    if n == 1:
        return np.log(np.abs(np.tan(0.5 * theta)))
    prev2 = _csc_power_antiderivative(n - 2, theta)
    return (-cos_t / ((n - 1) * sin_t ** (n - 1))
            + (n - 2) / (n - 1) * prev2)


def _cos_power_antiderivative(m, theta):
    """Antiderivative of cos**m via the standard reduction formula."""
    theta = np.asarray(theta, dtype=float)
    if m == 0:
        return theta
    sin_t = np.sin(theta)
    cos_t = np.cos(theta)
    if m == 1:
        return sin_t
    prev2 = _cos_power_antiderivative(m - 2, theta)
    return cos_t ** (m - 1) * sin_t / m + (m - 1) / m * prev2


def _clamped(raw, clamp_tol, what):
    if raw < -clamp_tol or raw > 1.0 + clamp_tol:
        raise UnfoldInconsistencyError(
            f"{what} produced {raw:.6g}, outside [0, 1] beyond tolerance "
            f"{clamp_tol:g}; the slice law is likely not realizable")
    if raw < 0.0 or raw > 1.0:
        warnings.warn(f"{what} clamped {raw:.6g} into [0, 1]",
                      RuntimeWarning, stacklevel=3)
    return min(max(raw, 0.0), 1.0)


def unfold_tail_negative(inp: UnfoldInput, a,
                         quad: QuadratureSpec | None = None,
                         clamp_tol=DEFAULT_CLAMP_TOL):
    """Ball-law tail at a for negative curvature."""
    if inp.space.k >= 0:
        raise ValueError("negative-curvature inversion requires k < 0")
    return _unfold_curved(inp, float(a), quad, clamp_tol)


def unfold_tail_positive(inp: UnfoldInput, a,
                         quad: QuadratureSpec | None = None,
                         clamp_tol=DEFAULT_CLAMP_TOL):
    """Ball-law tail at a for positive curvature."""
    if inp.space.k <= 0:
        raise ValueError("positive-curvature inversion requires k > 0")
    return _unfold_curved(inp, float(a), quad, clamp_tol)


def _unfold_curved(inp, a, quad, clamp_tol):
    if quad is None:
        quad = QuadratureSpec()
    space = inp.space
    k, d = space.k, space.d
    if not 0.0 < a < space.l_max:
        raise ValueError("query radius must lie in (0, l_max(k))")
    sup = min(inp.slice_radii.support_max(), space.l_max)
    if a >= sup:
        return 0.0
    s = space.curvature.scale
    singular_spec = QuadratureSpec(quad.abs_tol, quad.rel_tol,
                                   quad.max_subdivisions,
                                   SINGULARITY_INV_SQRT_AT_LOWER)
    if k < 0:
        ca = math.cosh(s * a)

        def weighted(y):
            # cosh^2(sy) - cosh^2(sa) = sinh(s(y+a)) sinh(s(y-a))
            den = np.sqrt(np.maximum(
                np.sinh(s * (y + a)) * np.sinh(s * (y - a)), 0.0))
            return np.cosh(s * y) ** (d - 1) / den

        def correction(y):
            root = np.sqrt(np.maximum(
                np.sinh(s * (y + a)) * np.sinh(s * (y - a)), 0.0))
            theta_lo = np.arctan2(ca, root)     # arcsin(ca/cy), stable
            upper = _csc_power_antiderivative(d - 1,
                                              np.full_like(y, 0.5 * math.pi))
            return upper - _csc_power_antiderivative(d - 1, theta_lo)

        t1 = inp.slice_radii.integrate(weighted, a, sup, singular_spec)
        t1 /= ca ** (d - 2)
        t2 = inp.slice_radii.integrate(correction, a, sup, quad)
        # hyperbolic correction enters with a minus sign: the tail
        # telescopes as m(a)/a^{d-2} minus the moment remainder (for a
        # point mass both pieces reduce to powers of cosh and the
        # difference collapses to exactly 1)
        t2 = -t2
    else:
        ca = math.cos(s * a)

        def weighted(y):
            # cos^2(sa) - cos^2(sy) = sin(s(y+a)) sin(s(y-a))
            den = np.sqrt(np.maximum(
                np.sin(s * (y + a)) * np.sin(s * (y - a)), 0.0))
            return np.cos(s * y) ** (d - 1) / den

        def correction(y):
            cy = np.cos(s * y)
            root = np.sqrt(np.maximum(
                np.sin(s * (y + a)) * np.sin(s * (y - a)), 0.0))
            theta_hi = np.arctan2(root, cy)     # arccos(cy/ca), stable
            if d == 2:
                return theta_hi
            return _cos_power_antiderivative(d - 2, theta_hi)

        t1 = inp.slice_radii.integrate(weighted, a, sup, singular_spec)
        t1 /= ca ** (d - 2)
        t2 = inp.slice_radii.integrate(correction, a, sup, quad)
    raw = inp.ratio * s / math.pi * (t1 + (d - 1) * t2)
    return _clamped(raw, clamp_tol, "unfold")


def unfold_tail_flat(inp: UnfoldInput, a,
                     quad: QuadratureSpec | None = None,
                     clamp_tol=DEFAULT_CLAMP_TOL):
    """Ball-law tail at a for the flat case (classical Abel inversion)."""
    if inp.space.k != 0:
        raise ValueError("flat inversion requires k = 0")
    if quad is None:
        quad = QuadratureSpec()
    a = float(a)
    if a <= 0:
        raise ValueError("query radius must be positive")
    sup = inp.slice_radii.support_max()
    if a >= sup:
        return 0.0
    spec = QuadratureSpec(quad.abs_tol, quad.rel_tol, quad.max_subdivisions,
                          SINGULARITY_INV_SQRT_AT_LOWER)
    val = inp.slice_radii.integrate(
        lambda y: 1.0 / np.sqrt((y - a) * (y + a)), a, sup, spec)
    return _clamped(inp.ratio / math.pi * val, clamp_tol, "unfold")


def unfold_tail(inp: UnfoldInput, a, quad: QuadratureSpec | None = None,
                clamp_tol=DEFAULT_CLAMP_TOL):
    """Curvature dispatch for the inversion formula."""
    if inp.space.k > 0:
        return unfold_tail_positive(inp, a, quad, clamp_tol)
    if inp.space.k < 0:
        return unfold_tail_negative(inp, a, quad, clamp_tol)
    return unfold_tail_flat(inp, a, quad, clamp_tol)


def _pav_nonincreasing(values):
    """Pool-adjacent-violators projection onto nonincreasing sequences."""
    vals = list(map(float, values))
    blocks = []                      # (sum, count)
    for v in vals:
        cur_sum, cur_n = v, 1
        while blocks and blocks[-1][0] / blocks[-1][1] < cur_sum / cur_n:
            prev_sum, prev_n = blocks.pop()
            cur_sum += prev_sum
            cur_n += prev_n
        blocks.append((cur_sum, cur_n))
    out = []
    for block_sum, block_n in blocks:
        out.extend([block_sum / block_n] * block_n)
    return np.array(out)


def unfold_profile(inp: UnfoldInput, grid,
                   quad: QuadratureSpec | None = None,
                   clamp_tol=DEFAULT_CLAMP_TOL):
    """Unfolded tails on a grid, projected to a monotone curve.

    Returns (profile, max_adjustment) where max_adjustment is the largest
    change the isotonic projection applied to any raw value. The profile's
    intensity field carries N_d per unit N_{d-1}, i.e. 1/ratio.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    raw = np.array([unfold_tail(inp, a, quad, clamp_tol) for a in grid])
    fitted = _pav_nonincreasing(raw)
    max_adjustment = float(np.max(np.abs(fitted - raw)))
    profile = SectionProfile(intensity=1.0 / inp.ratio, grid=grid,
                             tail_values=np.clip(fitted, 0.0, 1.0))
    return profile, max_adjustment
