"""Tests for the radius-law representations."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvedwicksell.measures import (AtomMixture, EmpiricalSample,
                                     TabulatedDensity, distribution_from_dict,
                                     load_distribution, save_distribution)


class TestAtomMixture:

    def test_delta(self):
        d = AtomMixture.delta(2.0)
        assert d.tail(1.9) == 1.0
        assert d.tail(2.0) == 0.0          # open interval (r, inf)
        assert d.mean() == 2.0
        assert d.support_max() == 2.0

    def test_two_atoms(self):
        m = AtomMixture([(1.0, 0.5), (0.5, 0.5)])
        assert m.radii[0] == 0.5           # sorted on construction
        assert m.tail(0.2) == 1.0
        assert m.tail(0.5) == 0.5
        assert m.tail(0.75) == 0.5
        assert m.tail(1.0) == 0.0
        assert m.mean() == pytest.approx(0.75)

    def test_integrate_respects_open_lower(self):
        m = AtomMixture([(0.5, 0.5), (1.0, 0.5)])
        # atom at the lower limit is excluded, at the upper included
        assert m.integrate(lambda r: np.ones_like(r), 0.5, 1.0) == 0.5
        assert m.integrate(lambda r: r, 0.0, 1.0) == pytest.approx(0.75)

    def test_sample_frequencies(self):
        m = AtomMixture([(1.0, 0.25), (2.0, 0.75)])
        rng = np.random.default_rng(5)
        draws = m.sample(40_000, rng)
        assert np.mean(draws == 2.0) == pytest.approx(0.75, abs=0.01)

    def test_validation(self):
        with pytest.raises(ValueError):
            AtomMixture([])
        with pytest.raises(ValueError):
            AtomMixture([(1.0, 0.7), (2.0, 0.7)])
        with pytest.raises(ValueError):
            AtomMixture([(-1.0, 1.0)])


class TestTabulatedDensity:

    def test_uniform_basics(self):
        u = TabulatedDensity.uniform(0.2, 1.0)
        assert u.tail(0.2) == pytest.approx(1.0)
        assert u.tail(0.6) == pytest.approx(0.5)
        assert u.tail(1.0) == 0.0
        assert u.mean() == pytest.approx(0.6)

    def test_triangular_cdf_is_quadratic(self):
        t = TabulatedDensity([0.0, 1.0], [0.0, 2.0])
        x = np.linspace(0.0, 1.0, 11)
        assert np.allclose(t.cdf(x), x ** 2, atol=1e-14)
        assert t.mean() == pytest.approx(2.0 / 3.0)

    def test_renormalization(self):
        t = TabulatedDensity([0.0, 1.0], [3.0, 3.0])
        assert t.tail(0.0) == pytest.approx(1.0)
        assert t.pdf(0.5) == pytest.approx(1.0)

    def test_integrate_matches_closed_form(self):
        u = TabulatedDensity.uniform(0.0, 2.0)
        val = u.integrate(lambda x: x ** 2, 0.0, 2.0)
        assert val == pytest.approx(4.0 / 3.0, abs=1e-10)

    def test_sampling_ks(self):
        t = TabulatedDensity([0.0, 1.0], [0.0, 2.0])
        rng = np.random.default_rng(11)
        draws = np.sort(t.sample(20_000, rng))
        emp = np.arange(1, len(draws) + 1) / len(draws)
        assert np.max(np.abs(emp - draws ** 2)) < 0.015

    def test_validation(self):
        with pytest.raises(ValueError):
            TabulatedDensity([0.0, 0.0], [1.0, 1.0])
        with pytest.raises(ValueError):
            TabulatedDensity([0.0, 1.0], [-1.0, 1.0])
        with pytest.raises(ValueError):
            TabulatedDensity([0.0, 1.0], [0.0, 0.0])


class TestEmpiricalSample:

    def test_tail_and_mean(self):
        s = EmpiricalSample([3.0, 1.0, 2.0])
        assert s.tail(0.5) == 1.0
        assert s.tail(1.0) == pytest.approx(2.0 / 3.0)
        assert s.tail(3.0) == 0.0
        assert s.mean() == 2.0

    def test_integrate(self):
        s = EmpiricalSample([1.0, 2.0, 3.0, 4.0])
        assert s.integrate(lambda r: r, 1.0, 3.0) == pytest.approx(1.25)

    def test_validation(self):
        with pytest.raises(ValueError):
            EmpiricalSample([])
        with pytest.raises(ValueError):
            EmpiricalSample([0.0, 1.0])


def test_json_round_trip(tmp_path):
    for dist in (AtomMixture([(0.5, 0.25), (1.5, 0.75)]),
                 TabulatedDensity([0.1, 0.6, 1.0], [0.2, 1.0, 0.3]),
                 EmpiricalSample([0.4, 0.9, 1.7])):
        path = tmp_path / "dist.json"
        save_distribution(dist, path)
        back = load_distribution(path)
        assert type(back) is type(dist)
        r = np.linspace(0.0, 2.0, 23)
        assert np.allclose(back.tail(r), dist.tail(r), atol=1e-12)


def test_unknown_type_rejected():
    with pytest.raises(ValueError):
        distribution_from_dict({"type": "gamma", "shape": 2.0})


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(0.01, 5.0), st.integers(1, 10)),
                min_size=1, max_size=6))
def test_atom_tail_is_valid_cdf_complement(raw):
    total = sum(w for _, w in raw)
    mix = AtomMixture([(r, w / total) for r, w in raw])
    grid = np.linspace(0.0, 6.0, 40)
    tails = mix.tail(grid)
    assert tails[0] == 1.0
    assert np.all(np.diff(tails) <= 0)
    assert np.all((tails >= 0) & (tails <= 1))
