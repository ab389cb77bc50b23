"""Tests for the Monte Carlo slice sampler."""

import math

import numpy as np
import pytest

from curvedwicksell import (AtomMixture, BallProcess, Curvature,
                            EmpiricalSample, SimulationConfig, SpaceParams,
                            TabulatedDensity, intensity_ratio, ks_distance,
                            section_tail, simulate_sections)


def make_proc(k=0.0, d=3, dist=None):
    dist = dist or AtomMixture.delta(1.0)
    return BallProcess(SpaceParams(Curvature(k), d), 1.0, dist)


def test_flat_point_mass_ratio_is_exact():
    # with H = R every flat draw is accepted at constant weight 2H, so the
    # ratio estimate is exact and has zero variance
    cfg = SimulationConfig(seed=3, n_samples=5000, slab_halfwidth=1.0)
    res = simulate_sections(make_proc(), cfg)
    assert res.ratio_estimate == pytest.approx(2.0, abs=1e-12)
    assert res.std_err == 0.0
    assert len(res.slice_sample.radii) <= 5000


def test_worker_count_does_not_change_results():
    proc = make_proc(k=-1.0)
    base = None
    for workers in (1, 2, 5):
        cfg = SimulationConfig(seed=42, n_samples=2000,
                               slab_halfwidth=1.0, workers=workers)
        res = simulate_sections(proc, cfg)
        if base is None:
            base = res
        else:
            assert np.array_equal(res.slice_sample.radii,
                                  base.slice_sample.radii)
            assert res.ratio_estimate == base.ratio_estimate


def test_seed_changes_results():
    proc = make_proc(k=1.0)
    r1 = simulate_sections(proc, SimulationConfig(1, 2000, 1.0))
    r2 = simulate_sections(proc, SimulationConfig(2, 2000, 1.0))
    assert not np.array_equal(r1.slice_sample.radii, r2.slice_sample.radii)


def test_ratio_estimate_consistent():
    proc = make_proc(k=1.0, d=3)
    cfg = SimulationConfig(seed=7, n_samples=200_000, slab_halfwidth=1.0)
    res = simulate_sections(proc, cfg)
    exact = intensity_ratio(proc)
    assert abs(res.ratio_estimate - exact) < 4.0 * res.std_err
    assert res.std_err > 0


def test_sample_matches_section_tail():
    proc = make_proc(k=-1.0, d=2, dist=TabulatedDensity.uniform(0.2, 1.0))
    cfg = SimulationConfig(seed=11, n_samples=100_000, slab_halfwidth=1.0)
    res = simulate_sections(proc, cfg)
    ratio = intensity_ratio(proc)
    grid = np.linspace(0.0, 1.0, 400)
    tails = np.array([section_tail(proc, r, ratio=ratio)
                      for r in grid[:-1]] + [0.0])
    ks = ks_distance(res.slice_sample,
                     lambda x: np.interp(x, grid, tails))
    assert ks < 1.95 / math.sqrt(100_000) * 1.5


def test_slab_must_cover_support():
    proc = make_proc()
    with pytest.raises(ValueError):
        simulate_sections(proc, SimulationConfig(1, 100, 0.5))


def test_slab_must_respect_l_max():
    proc = make_proc(k=1.0)
    with pytest.raises(ValueError):
        simulate_sections(proc, SimulationConfig(1, 100, 2.0))


def test_config_validation():
    with pytest.raises(ValueError):
        SimulationConfig(seed=1, n_samples=0, slab_halfwidth=1.0)
    with pytest.raises(ValueError):
        SimulationConfig(seed=1, n_samples=10, slab_halfwidth=0.0)
    with pytest.raises(ValueError):
        SimulationConfig(seed=1, n_samples=10, slab_halfwidth=1.0, workers=0)


def test_biased_offsets_shift_the_ratio():
    # the h_sampler hook exists to prove the importance weights matter:
    # proposing only near the centre inflates the acceptance weight mass
    proc = make_proc(k=0.0)
    cfg = SimulationConfig(seed=5, n_samples=5000, slab_halfwidth=1.0)
    biased = simulate_sections(
        proc, cfg, h_sampler=lambda rng, n: rng.uniform(-0.1, 0.1, n))
    assert biased.ratio_estimate == pytest.approx(2.0, abs=1e-12)
    # all proposals accepted, so every slice radius is large
    assert np.min(biased.slice_sample.radii) > math.sqrt(1 - 0.01) - 1e-12


class TestKsDistance:

    def test_perfect_fit(self):
        n = 999
        x = (np.arange(n) + 0.5) / n
        sample = EmpiricalSample(x)
        # midpoint grid against the uniform tail: off by half a step
        ks = ks_distance(sample, lambda v: 1.0 - v)
        assert ks == pytest.approx(0.5 / n, abs=1e-12)

    def test_gross_mismatch(self):
        sample = EmpiricalSample(np.full(100, 0.5))
        ks = ks_distance(sample, lambda v: np.where(v < 1.0, 1.0, 0.0))
        assert ks == pytest.approx(1.0)
