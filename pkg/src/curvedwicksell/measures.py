"""Radius laws and their functionals.

Three concrete representations cover everything the section/unfold kernels
need: finite atom mixtures, tabulated (piecewise-linear) densities and raw
empirical samples. All tails are over open-left intervals (r, sup], so an
atom sitting exactly at r does not count.
"""

from __future__ import annotations

import abc
import json

import numpy as np

from .quadrature import (QuadratureSpec, SINGULARITY_INV_SQRT_AT_LOWER,
                         integrate_piecewise)

_ATOM_WEIGHT_TOL = 1e-12


class RadiusDistribution(abc.ABC):
    """A probability measure on (0, infinity)."""

    @abc.abstractmethod
    def tail(self, r):
        """Mass of the open interval (r, infinity)."""

    @abc.abstractmethod
    def mean(self) -> float:
        """First moment."""

    @abc.abstractmethod
    def integrate(self, f, lower, upper, spec=None) -> float:
        """Integral of f over (lower, upper] against this measure.

        f must be vectorized over numpy arrays. An inverse-square-root
        singularity of f at ``lower`` is handled when flagged in ``spec``.
        """

    @abc.abstractmethod
    def sample(self, n, rng) -> np.ndarray:
        """n i.i.d. draws using the given numpy Generator."""

    @abc.abstractmethod
    def support_max(self) -> float:
        """Essential supremum of the support (finite for all variants)."""

    @abc.abstractmethod
    def to_dict(self) -> dict:
        """JSON-schema representation."""

    def cdf(self, r):
        return 1.0 - self.tail(r)


class AtomMixture(RadiusDistribution):
    """Finite mixture of point masses; weights must sum to one."""

    def __init__(self, points):
        pts = sorted((float(r), float(w)) for r, w in points)
        if not pts:
            raise ValueError("atom mixture needs at least one atom")
        self.radii = np.array([r for r, _ in pts])
        self.weights = np.array([w for _, w in pts])
        if np.any(self.radii <= 0):
            raise ValueError("atom radii must be positive")
        if np.any(self.weights <= 0):
            raise ValueError("atom weights must be positive")
        if abs(self.weights.sum() - 1.0) > _ATOM_WEIGHT_TOL:
            raise ValueError("atom weights must sum to 1 within 1e-12")
        self._cumw = np.cumsum(self.weights)

    @classmethod
    def delta(cls, r):
        return cls([(r, 1.0)])

    def tail(self, r):
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(self.radii, r, side="right")
        tails = np.concatenate([[1.0], 1.0 - self._cumw])
        out = tails[idx]
        return float(out) if out.ndim == 0 else out

    def mean(self):
        return float(self.radii @ self.weights)

    def integrate(self, f, lower, upper, spec=None):
        mask = (self.radii > lower) & (self.radii <= upper)
        if not mask.any():
            return 0.0
        vals = np.asarray(f(self.radii[mask]), dtype=float)
        return float(vals @ self.weights[mask])

    def sample(self, n, rng):
        idx = np.searchsorted(self._cumw, rng.random(n), side="right")
        idx = np.minimum(idx, len(self.radii) - 1)
        return self.radii[idx]

    def support_max(self):
        return float(self.radii[-1])

    def to_dict(self):
        return {"type": "atoms",
                "points": [[float(r), float(w)]
                           for r, w in zip(self.radii, self.weights)]}


class TabulatedDensity(RadiusDistribution):
    """Piecewise-linear density on a strictly increasing grid.

    Renormalized to unit trapezoid mass at construction, so histogram-level
    input drift is absorbed rather than rejected. Zero outside the grid.
    """

    def __init__(self, grid, values):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or len(grid) < 2 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal "
                             "length >= 2")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if grid[0] < 0:
            raise ValueError("grid must be nonnegative")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("density values must be finite and nonnegative")
        total = np.trapezoid(values, grid)
        if total <= 0:
            raise ValueError("density must have positive mass")
        self.grid = grid
        self.values = values / total
        widths = np.diff(grid)
        cell_mass = 0.5 * (self.values[:-1] + self.values[1:]) * widths
        self._cum = np.concatenate([[0.0], np.cumsum(cell_mass)])
        self._cum[-1] = 1.0

    @classmethod
    def uniform(cls, lo, hi):
        return cls([lo, hi], [1.0, 1.0])

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.grid, self.values, left=0.0, right=0.0)
        return float(out) if out.ndim == 0 else out

    def cdf(self, r):
        r = np.asarray(r, dtype=float)
        rc = np.clip(r, self.grid[0], self.grid[-1])
        idx = np.clip(np.searchsorted(self.grid, rc, side="right") - 1,
                      0, len(self.grid) - 2)
        x0 = self.grid[idx]
        v0 = self.values[idx]
        slope = (self.values[idx + 1] - v0) / (self.grid[idx + 1] - x0)
        t = rc - x0
        out = self._cum[idx] + v0 * t + 0.5 * slope * t * t
        out = np.clip(out, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out

    def tail(self, r):
        return 1.0 - self.cdf(r)

    def mean(self):
        x0, x1 = self.grid[:-1], self.grid[1:]
        v0, v1 = self.values[:-1], self.values[1:]
        # exact first moment of the linear interpolant per cell
        return float(np.sum((x1 - x0) * (v0 * (2 * x0 + x1)
                                         + v1 * (x0 + 2 * x1)) / 6.0))

    def integrate(self, f, lower, upper, spec=None):
        if spec is None:
            spec = QuadratureSpec()
        lo = max(float(lower), float(self.grid[0]))
        hi = min(float(upper), float(self.grid[-1]))
        if lo >= hi:
            return 0.0
        interior = self.grid[(self.grid > lo) & (self.grid < hi)]
        edges = np.concatenate([[lo], interior, [hi]])
        singular = None
        if spec.singularity == SINGULARITY_INV_SQRT_AT_LOWER:
            singular = float(lower)

        def integrand(x):
            return np.asarray(f(x), dtype=float) * self.pdf(x)

        value, _ = integrate_piecewise(integrand, edges, spec,
                                       singular_point=singular)
        return value

    def sample(self, n, rng):
        u = rng.random(n)
        idx = np.clip(np.searchsorted(self._cum, u, side="right") - 1,
                      0, len(self.grid) - 2)
        x0 = self.grid[idx]
        v0 = self.values[idx]
        slope = (self.values[idx + 1] - v0) / (self.grid[idx + 1] - x0)
        rem = u - self._cum[idx]
        disc = np.sqrt(np.maximum(v0 * v0 + 2.0 * slope * rem, 0.0))
        denom = v0 + disc
        t = np.where(denom > 0, 2.0 * rem / np.where(denom > 0, denom, 1.0),
                     0.0)
        return x0 + np.minimum(t, self.grid[idx + 1] - x0)

    def support_max(self):
        return float(self.grid[-1])

    def to_dict(self):
        return {"type": "density",
                "grid": self.grid.tolist(),
                "values": self.values.tolist()}


class EmpiricalSample(RadiusDistribution):
    """Uniform law on an observed sample of radii."""

    def __init__(self, radii):
        radii = np.sort(np.asarray(radii, dtype=float))
        if len(radii) == 0:
            raise ValueError("sample must be nonempty")
        if radii[0] <= 0:
            raise ValueError("sample radii must be positive")
        self.radii = radii

    def tail(self, r):
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(self.radii, r, side="right")
        out = 1.0 - idx / len(self.radii)
        return float(out) if out.ndim == 0 else out

    def mean(self):
        return float(self.radii.mean())

    def integrate(self, f, lower, upper, spec=None):
        mask = (self.radii > lower) & (self.radii <= upper)
        if not mask.any():
            return 0.0
        vals = np.asarray(f(self.radii[mask]), dtype=float)
        return float(vals.sum() / len(self.radii))

    def sample(self, n, rng):
        return self.radii[rng.integers(0, len(self.radii), size=n)]

    def support_max(self):
        return float(self.radii[-1])

    def to_dict(self):
        return {"type": "sample", "radii": self.radii.tolist()}


def distribution_from_dict(data: dict) -> RadiusDistribution:
    kind = data.get("type")
    if kind == "atoms":
        return AtomMixture(data["points"])
    if kind == "density":
        return TabulatedDensity(data["grid"], data["values"])
    if kind == "sample":
        return EmpiricalSample(data["radii"])
    raise ValueError(f"unknown distribution type {kind!r}")


def load_distribution(path) -> RadiusDistribution:
    with open(path) as fh:
        return distribution_from_dict(json.load(fh))


def save_distribution(dist: RadiusDistribution, path) -> None:
    with open(path, "w") as fh:
        json.dump(dist.to_dict(), fh)
