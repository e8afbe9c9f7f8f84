"""Separation distance, medians, Lévy bounds, concentration, lemma checks."""

import numpy as np
import pytest

from mmkit import (
    check_neighborhood_bound,
    conc_sep_checks,
    concentration_function,
    family,
    levy_radius_bounds,
    lm,
    median_interval,
    separation_distance,
    set_distance,
)
from mmkit.errors import BadKappa, PreconditionViolated, TooLargeForExact
from mmkit.harness import random_space
from oracles import brute_concentration, brute_sep

X2 = family("two_point", d=1.0)
C4 = family("cycle", n=4)
P3 = family("path", n=3)


# -- medians ----------------------------------------------------------------


def test_median_interval_two_point():
    assert median_interval(X2, [0.0, 1.0]) == (0.0, 1.0)
    assert lm(X2, [0.0, 1.0]) == 0.5


def test_median_interval_path_midpoint():
    assert median_interval(P3, [0.0, 1.0, 2.0]) == (1.0, 1.0)
    assert lm(P3, [0.0, 1.0, 2.0]) == 1.0


def test_median_interval_constant():
    assert median_interval(C4, [3.25] * 4) == (3.25, 3.25)
    assert lm(C4, [3.25] * 4) == 3.25


# -- separation distance ----------------------------------------------------


def test_sep_two_point():
    cert = separation_distance(X2, (0.5, 0.5))
    assert cert.value == 1.0  # oracle: brute force over the 9 subset pairs
    assert [s.members for s in cert.sets] == [(0,), (1,)]
    assert cert.exact


def test_sep_pigeonhole_zero():
    cert = separation_distance(X2, (0.5, 0.5, 0.5))
    assert cert.value == 0.0
    assert cert.sets == ()


def test_sep_cycle_antipodal():
    cert = separation_distance(C4, (0.25, 0.25))
    assert cert.value == 2.0  # oracle: exhaustive subset-pair search
    assert [s.members for s in cert.sets] == [(0,), (2,)]


def test_sep_matches_brute_oracle_pairs():
    for seed in range(12):
        space = random_space(5 + (seed % 2), seed=seed, random_mu=(seed % 3 == 0))
        for kappas in [(0.2, 0.2), (0.35, 0.15), (0.5, 0.3)]:
            cert = separation_distance(space, kappas)
            assert cert.value == pytest.approx(brute_sep(space, kappas), abs=1e-12)


def test_sep_matches_brute_oracle_triples():
    for seed in range(6):
        space = random_space(5, seed=100 + seed)
        for kappas in [(0.2, 0.2, 0.2), (0.2, 0.2, 0.4)]:
            cert = separation_distance(space, kappas)
            assert cert.value == pytest.approx(brute_sep(space, kappas), abs=1e-12)


def test_sep_certificate_invariants():
    for seed in range(10):
        space = random_space(6, seed=200 + seed)
        cert = separation_distance(space, (0.3, 0.2))
        for sub, kappa in zip(cert.sets, cert.kappas):
            assert sub.measure >= kappa - 1e-12
        if cert.value > 0:
            cross = min(
                set_distance(space, cert.sets[i], cert.sets[j])
                for i in range(len(cert.sets))
                for j in range(i + 1, len(cert.sets))
            )
            assert abs(cross - cert.value) <= 1e-12


def test_sep_monotone_in_kappas():
    for seed in range(10):
        space = random_space(6, seed=300 + seed, random_mu=True)
        lo = separation_distance(space, (0.15, 0.2)).value
        hi = separation_distance(space, (0.3, 0.35)).value
        assert hi <= lo


def test_sep_permutation_invariant():
    for seed in range(6):
        space = random_space(6, seed=400 + seed, random_mu=True)
        a = separation_distance(space, (0.1, 0.25, 0.4)).value
        b = separation_distance(space, (0.4, 0.1, 0.25)).value
        assert a == b


def test_sep_scaling_covariance():
    for seed in range(6):
        space = random_space(6, seed=500 + seed)
        base = separation_distance(space, (0.25, 0.25)).value
        assert separation_distance(space.scale(2.0), (0.25, 0.25)).value == 2.0 * base
        scaled = separation_distance(space.scale(3.0), (0.25, 0.25)).value
        assert scaled == pytest.approx(3.0 * base, rel=1e-12)


def test_sep_heuristic_is_sound_lower_bound():
    for seed in range(10):
        space = random_space(7, seed=600 + seed, random_mu=(seed % 2 == 0))
        exact = separation_distance(space, (0.25, 0.25), mode="exact")
        heur = separation_distance(space, (0.25, 0.25), mode="heuristic")
        assert not heur.exact
        assert heur.value <= exact.value + 1e-12
        for sub, kappa in zip(heur.sets, heur.kappas):
            assert sub.measure >= kappa - 1e-12
        if heur.value > 0:
            cross = min(
                set_distance(space, heur.sets[i], heur.sets[j])
                for i in range(len(heur.sets))
                for j in range(i + 1, len(heur.sets))
            )
            assert abs(cross - heur.value) <= 1e-12


def test_sep_argument_validation():
    with pytest.raises(BadKappa):
        separation_distance(X2, (0.5,))
    with pytest.raises(BadKappa):
        separation_distance(X2, (0.5, 1.5))
    with pytest.raises(BadKappa):
        separation_distance(X2, (0.5, 0.0))
    with pytest.raises(TooLargeForExact):
        separation_distance(family("cycle", n=16), (0.2, 0.2))
    with pytest.raises(TooLargeForExact):
        separation_distance(C4, (0.1,) * 6)
    # heuristic mode has no size limit
    cert = separation_distance(family("cycle", n=16), (0.2, 0.2), mode="heuristic")
    assert cert.value > 0


# -- neighborhood union bound -----------------------------------------------


def test_neighborhood_bound_two_point():
    report = check_neighborhood_bound(X2, (0.5, 0.5), [[0]])
    assert report.passed
    assert report.checks[0].measured["r"] == 1.0
    assert report.checks[0].measured["union_measure"] == 1.0


def test_neighborhood_bound_cycle():
    # r = Sep(C4; .25,.25,.25) = 1 by exhaustive search; sets at distance 2
    report = check_neighborhood_bound(C4, (0.25, 0.25, 0.25), [[0], [2]])
    assert report.passed
    assert report.checks[0].measured["r"] == 1.0


def test_neighborhood_bound_preconditions():
    with pytest.raises(PreconditionViolated):
        check_neighborhood_bound(C4, (0.25, 0.25, 0.25), [[0], [1], [2]])
    with pytest.raises(PreconditionViolated):
        check_neighborhood_bound(C4, (0.5, 0.25, 0.25), [[0], [2]])
    with pytest.raises(PreconditionViolated):
        # adjacent sets sit at distance 1 = r, not strictly above it
        check_neighborhood_bound(C4, (0.25, 0.25, 0.25), [[0], [1]])


# -- Lévy radius ------------------------------------------------------------


def test_levy_two_point():
    interval = levy_radius_bounds(X2, 0.25)
    assert interval.lower == 0.5  # oracle: f = dist(., {a}) deviates by 1/2
    assert interval.upper == 1.0


def test_levy_path():
    interval = levy_radius_bounds(P3, 0.3)
    assert interval.upper == 2.0  # sep(P3; 0.15, 0.15) by exhaustive search
    assert interval.lower <= interval.upper


def test_levy_bad_kappa():
    with pytest.raises(BadKappa):
        levy_radius_bounds(X2, 1.0)
    with pytest.raises(BadKappa):
        levy_radius_bounds(X2, 0.0)


def test_levy_bracket_on_random_spaces():
    for seed in range(10):
        space = random_space(6, seed=700 + seed, random_mu=(seed % 2 == 0))
        for kappa in (0.1, 0.25, 0.4):
            interval = levy_radius_bounds(space, kappa)
            assert 0.0 <= interval.lower <= interval.upper + 1e-12


def test_levy_scaling():
    interval = levy_radius_bounds(X2, 0.25)
    scaled = levy_radius_bounds(family("two_point", d=10.0), 0.25)
    assert scaled.lower == 10.0 * interval.lower
    assert scaled.upper == 10.0 * interval.upper


def test_levy_reduced_candidate_family_stays_sound():
    # small subset_limit forces the singleton/greedy family; the lower
    # bound can only shrink and the bracket stays valid
    for seed in range(5):
        space = random_space(8, seed=750 + seed)
        full = levy_radius_bounds(space, 0.25)
        reduced = levy_radius_bounds(space, 0.25, subset_limit=2)
        assert reduced.lower <= full.lower + 1e-12
        assert reduced.lower <= reduced.upper + 1e-12
        assert reduced.upper == full.upper


# -- concentration function -------------------------------------------------


def test_concentration_two_point():
    res = concentration_function(X2, 0.5)
    assert res.value == 0.5
    assert res.witness.members == (0,)
    assert concentration_function(X2, 1.5).value == 0.0
    # open neighborhood: at r = 1 the complement of {a} still has mass 1/2
    assert concentration_function(X2, 1.0).value == 0.5


def test_concentration_cycle_matches_oracle():
    # brute force over the 11 subsets with mu >= 1/2 gives 0 at r = 1.5:
    # every point of C4 sits within distance 1 of any half-measure set
    for r in (0.5, 1.0, 1.5, 2.0, 2.5):
        assert concentration_function(C4, r).value == brute_concentration(C4, r)
    assert concentration_function(C4, 1.5).value == 0.0
    assert concentration_function(C4, 1.0).value == 0.5


def test_concentration_random_matches_oracle():
    for seed in range(8):
        space = random_space(6, seed=800 + seed, random_mu=(seed % 2 == 0))
        grid = np.unique(space.dist[np.triu_indices(space.n, 1)])
        for r in (grid[0] / 2, grid[0], (grid[0] + grid[-1]) / 2, grid[-1]):
            got = concentration_function(space, float(r)).value
            assert got == pytest.approx(brute_concentration(space, float(r)), abs=1e-12)


def test_concentration_size_guard():
    with pytest.raises(TooLargeForExact):
        concentration_function(family("cycle", n=24), 1.0, limit=20)


# -- conc/sep equivalence checks ---------------------------------------------


def test_conc_sep_checks_fixed_spaces():
    for space in (X2, C4, family("two_point", d=10.0), P3):
        report = conc_sep_checks(space)
        assert report.passed, report.to_jsonable()


def test_conc_sep_checks_random_spaces():
    for seed in range(15):
        space = random_space(3 + (seed % 6), seed=900 + seed, random_mu=(seed % 2 == 0))
        report = conc_sep_checks(space)
        assert report.passed, report.to_jsonable()
