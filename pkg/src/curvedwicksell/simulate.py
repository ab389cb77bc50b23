"""Monte Carlo oracle for the forward operator.

By stationarity only the joint law of (centre offset h, ball radius R)
matters for slice statistics, so the simulator never realizes positions on
the hyperplane. Draws are importance-weighted by the equidistant volume
factor: h is proposed uniformly on a slab [-H, H] and each accepted pair
carries weight 2H cos_k(h)**(d-1). The mean weight estimates the intensity
ratio; weighted slice radii are materialized into an unweighted sample by
systematic resampling.

Randomness is counter-based: chunk i of draws uses a Philox generator
keyed by (seed, i), so results depend on (seed, n_samples) only, never on
the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import alpha, cos_k
from .measures import EmpiricalSample
from .section import BallProcess

_CHUNK = 1 << 16
_RESAMPLE_KEY = 1 << 62        # reserved substream index, never a chunk id
_MAX_CHUNKS = 100_000
_OVERSAMPLE = 4                # accepted draws per emitted sample point


class SimulationResult(NamedTuple):
    slice_sample: EmpiricalSample
    ratio_estimate: float
    std_err: float


@dataclass(frozen=True)
class SimulationConfig:
    seed: int
    n_samples: int
    slab_halfwidth: float
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not self.slab_halfwidth > 0:
            raise ValueError("slab halfwidth must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def _chunk_rng(seed, index):
    key = np.array([np.uint64(seed % (1 << 64)), np.uint64(index)])
    return np.random.Generator(np.random.Philox(key=key))


def _run_chunk(proc, cfg, index, h_sampler):
    rng = _chunk_rng(cfg.seed, index)
    halfwidth = cfg.slab_halfwidth
    radii = proc.radii.sample(_CHUNK, rng)
    if h_sampler is None:
        offsets = rng.uniform(-halfwidth, halfwidth, _CHUNK)
    else:
        offsets = np.asarray(h_sampler(rng, _CHUNK), dtype=float)
    accept = np.abs(offsets) < radii
    weights = np.where(
        accept,
        2.0 * halfwidth * cos_k(proc.space.curvature, offsets)
        ** (proc.space.d - 1),
        0.0)
    slice_radii = alpha(proc.space.curvature, radii[accept],
                        offsets[accept])
    return (float(weights.sum()), float((weights ** 2).sum()),
            int(accept.sum()), slice_radii, weights[accept])


def simulate_sections(proc: BallProcess, cfg: SimulationConfig,
                      h_sampler=None) -> SimulationResult:
    """Sample slice radii and estimate the intensity ratio.

    ``h_sampler(rng, n)`` overrides the uniform offset proposal (test hook
    only; it biases the estimates unless it matches the uniform law).
    """
    if cfg.slab_halfwidth < proc.radii.support_max() * (1 - 1e-12):
        raise ValueError("slab halfwidth must cover the radius support")
    if cfg.slab_halfwidth > proc.space.l_max * (1 + 1e-12):
        raise ValueError("slab halfwidth exceeds l_max(k)")

    target_accepted = _OVERSAMPLE * cfg.n_samples
    chunks = []
    accepted_total = 0
    next_index = 0
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        while accepted_total < target_accepted:
            if next_index >= _MAX_CHUNKS:
                raise RuntimeError("acceptance mass is numerically zero")
            batch = list(range(next_index,
                               min(next_index + cfg.workers, _MAX_CHUNKS)))
            results = list(pool.map(
                lambda i: _run_chunk(proc, cfg, i, h_sampler), batch))
            # consume chunks strictly in index order so the cut-off point
            # is independent of the worker count
            for res in results:
                chunks.append(res)
                accepted_total += res[2]
                next_index += 1
                if accepted_total >= target_accepted:
                    break

    n_draws = len(chunks) * _CHUNK
    w_sum = sum(c[0] for c in chunks)
    w2_sum = sum(c[1] for c in chunks)
    if w_sum <= 0:
        raise RuntimeError("acceptance mass is numerically zero")
    ratio_estimate = w_sum / n_draws
    variance = max(w2_sum / n_draws - ratio_estimate ** 2, 0.0)
    std_err = math.sqrt(variance / n_draws)

    slice_radii = np.concatenate([c[3] for c in chunks])
    weights = np.concatenate([c[4] for c in chunks])
    resampled = _systematic_resample(slice_radii, weights, cfg.n_samples,
                                     _chunk_rng(cfg.seed, _RESAMPLE_KEY))
    resampled = resampled[resampled > 0]
    return SimulationResult(EmpiricalSample(resampled), ratio_estimate,
                            std_err)


def _systematic_resample(values, weights, n, rng):
    cum = np.cumsum(weights)
    targets = (rng.random() + np.arange(n)) / n * cum[-1]
    idx = np.minimum(np.searchsorted(cum, targets, side="right"),
                     len(values) - 1)
    return np.sort(values[idx])


def ks_distance(sample: EmpiricalSample, tail_fn) -> float:
    """Kolmogorov-Smirnov distance between a sample and a reference tail.

    tail_fn must be a valid tail (nonincreasing, values in [0, 1]) and
    vectorized over numpy arrays.
    """
    x = sample.radii
    n = len(x)
    ref = np.asarray(tail_fn(x), dtype=float)
    emp_right = (n - 1.0 - np.arange(n)) / n      # tail just right of x_i
    emp_left = (n - np.arange(n)) / n             # tail just left of x_i
    return float(np.max(np.maximum(np.abs(emp_right - ref),
                                   np.abs(emp_left - ref))))
