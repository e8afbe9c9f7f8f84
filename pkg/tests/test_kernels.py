"""Compiled and fallback kernels must return bit-identical results."""

import numpy as np
import pytest

from mmkit.kernels import COMPILED, _fallback

if COMPILED:
    from mmkit.kernels import _core
else:
    _core = None

pytestmark = pytest.mark.skipif(not COMPILED, reason="compiled extension unavailable")


def _random_instance(seed, n):
    rng = np.random.default_rng(seed)
    mu = rng.dirichlet(np.ones(n))
    dist = rng.uniform(0.2, 2.0, size=(n, n))
    dist = np.triu(dist, 1)
    dist = dist + dist.T
    return mu, dist


def _masks_from(dist, predicate):
    n = len(dist)
    out = np.zeros(n, dtype=np.int64)
    for x in range(n):
        row = np.flatnonzero(predicate(dist[x]))
        out[x] = int(np.sum(np.int64(1) << row.astype(np.int64)))
    return out


@pytest.mark.parametrize("seed", range(8))
def test_subset_measures_identical(seed):
    mu, _ = _random_instance(seed, 9)
    a = _fallback.subset_measures(mu)
    b = _core.subset_measures(mu)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("seed", range(8))
def test_max_complement_measure_identical(seed):
    mu, dist = _random_instance(seed, 8)
    meas = _fallback.subset_measures(mu)
    for r in (0.4, 0.9, 1.4):
        balls = _masks_from(dist, lambda row: row < r)
        va, ma = _fallback.max_complement_measure(balls, mu, meas, 0.5 - 1e-12)
        vb, mb = _core.max_complement_measure(balls, mu, meas, 0.5 - 1e-12)
        assert va == vb and ma == mb


@pytest.mark.parametrize("seed", range(8))
def test_max_coverage_deficit_identical(seed):
    rng = np.random.default_rng(seed + 100)
    mu, dist = _random_instance(seed, 8)
    nu = rng.dirichlet(np.ones(8))
    nu_meas = _fallback.subset_measures(nu)
    for d in (0.0, 0.5, 1.0):
        cballs = _masks_from(dist, lambda row: row <= d)
        assert _fallback.max_coverage_deficit(cballs, mu, nu_meas) == _core.max_coverage_deficit(
            cballs, mu, nu_meas
        )


@pytest.mark.parametrize("seed", range(10))
def test_sep_feasible_identical(seed):
    mu, dist = _random_instance(seed, 8)
    meas = _fallback.subset_measures(mu)
    for kappas in ([0.2, 0.2], [0.15, 0.15, 0.15], [0.3, 0.1]):
        kap = np.asarray(kappas)
        for r in (0.5, 1.0, 1.5):
            compat = _masks_from(dist, lambda row: row >= r)
            a = _fallback.sep_feasible(compat, mu, meas, kap, 1e-12)
            b = _core.sep_feasible(compat, mu, meas, kap, 1e-12)
            assert a == b
