"""Transport distances, entropy, interpolation, convexity diagnostics."""

import numpy as np
import pytest

from mmkit import (
    cd_convexity_check,
    family,
    interpolate,
    prohorov,
    relative_entropy,
    restrict_normalize,
    strassen_gap,
    transportation_distance,
    wasserstein2,
)
from mmkit.errors import (
    BadLambda,
    BadParameter,
    MissingPathTable,
    NullSet,
    PreconditionViolated,
)
from mmkit.harness import random_measure, random_space
from mmkit.space import build_space
from mmkit.transport import (
    Measure,
    dirac,
    endpoint_path_table,
    plan_residuals,
    space_measure,
)
from oracles import brute_prohorov

X2 = family("two_point", d=1.0)
C4 = family("cycle", n=4)
P3 = family("path", n=3)


# -- measures -----------------------------------------------------------------


def test_restrict_normalize():
    assert restrict_normalize(X2, [0]).weights.tolist() == [1.0, 0.0]
    assert restrict_normalize(C4, range(4)).weights.tolist() == C4.mu.tolist()
    assert restrict_normalize(C4, [0, 1]).weights.tolist() == [0.5, 0.5, 0.0, 0.0]
    with pytest.raises(NullSet):
        restrict_normalize(C4, [])


def test_measure_validation():
    with pytest.raises(BadParameter):
        Measure(np.array([0.5, 0.4]))
    with pytest.raises(BadParameter):
        Measure(np.array([1.5, -0.5]))


# -- Wasserstein --------------------------------------------------------------


def test_w2_forced_couplings():
    value, plan = wasserstein2(X2, dirac(X2, 0), dirac(X2, 1))
    assert value == pytest.approx(1.0, abs=1e-12)
    assert plan.mass[0, 1] == pytest.approx(1.0, abs=1e-12)
    value, plan = wasserstein2(X2, dirac(X2, 0), space_measure(X2))
    assert value == pytest.approx(np.sqrt(0.5), abs=1e-9)
    assert plan.mass[0, 0] == pytest.approx(0.5, abs=1e-10)
    assert plan.mass[0, 1] == pytest.approx(0.5, abs=1e-10)


def test_w2_identity():
    for seed in range(5):
        space = random_space(5, seed=seed)
        nu = random_measure(space, np.random.default_rng(seed))
        value, _ = wasserstein2(space, nu, nu)
        assert value <= 1e-8


def test_w2_metric_axioms():
    for seed in range(8):
        space = random_space(5, seed=40 + seed)
        rng = np.random.default_rng(seed)
        a, b, c = (random_measure(space, rng) for _ in range(3))
        dab, _ = wasserstein2(space, a, b)
        dba, _ = wasserstein2(space, b, a)
        dac, _ = wasserstein2(space, a, c)
        dcb, _ = wasserstein2(space, c, b)
        assert dab == pytest.approx(dba, abs=1e-9)
        assert dab <= dac + dcb + 1e-9
        assert dab >= 0.0


def test_w2_plan_invariants():
    for seed in range(6):
        space = random_space(6, seed=60 + seed)
        rng = np.random.default_rng(100 + seed)
        nu0, nu1 = random_measure(space, rng), random_measure(space, rng)
        _, plan = wasserstein2(space, nu0, nu1)
        res = plan_residuals(space, plan, nu0, nu1)
        assert res["row_equality_gap"] <= 1e-10
        assert res["col_equality_gap"] <= 1e-10
        assert res["deficiency_gap"] <= 1e-10
        assert res["support_excess"] <= 1e-12


# -- Prohorov -----------------------------------------------------------------


def test_prohorov_two_point_examples():
    assert prohorov(X2, dirac(X2, 0), dirac(X2, 1), 1.0) == 1.0
    assert prohorov(X2, dirac(X2, 0), space_measure(X2), 1.0) == 0.5
    assert prohorov(X2, space_measure(X2), space_measure(X2), 1.0) == 0.0


def test_prohorov_matches_definition_oracle():
    for seed in range(8):
        space = random_space(5, seed=80 + seed)
        rng = np.random.default_rng(200 + seed)
        mu_m, nu_m = random_measure(space, rng), random_measure(space, rng)
        for lam in (0.5, 1.0, 2.0):
            got = prohorov(space, mu_m, nu_m, lam)
            want = brute_prohorov(space, mu_m.weights, nu_m.weights, lam)
            assert got == pytest.approx(want, abs=1e-9)


def test_prohorov_bad_lambda():
    with pytest.raises(BadLambda):
        prohorov(X2, dirac(X2, 0), dirac(X2, 1), 0.0)


# -- transportation distance --------------------------------------------------


def test_transportation_two_point_examples():
    value, plan = transportation_distance(X2, dirac(X2, 0), dirac(X2, 1), 1.0)
    assert value == 1.0
    assert plan.deficiency == pytest.approx(0.0, abs=1e-10)
    assert plan.mass[0, 1] == pytest.approx(1.0, abs=1e-10)
    value, plan = transportation_distance(X2, dirac(X2, 0), space_measure(X2), 1.0)
    assert value == pytest.approx(0.5, abs=1e-9)
    assert plan.deficiency == pytest.approx(0.5, abs=1e-9)
    assert plan.mass[0, 0] == pytest.approx(0.5, abs=1e-9)
    value, _ = transportation_distance(X2, space_measure(X2), space_measure(X2), 1.0)
    assert value == 0.0


def test_transportation_plan_invariants():
    for seed in range(6):
        space = random_space(6, seed=120 + seed)
        rng = np.random.default_rng(300 + seed)
        mu_m, nu_m = random_measure(space, rng), random_measure(space, rng)
        value, plan = transportation_distance(space, mu_m, nu_m, 1.0)
        res = plan_residuals(space, plan, mu_m, nu_m)
        assert res["row_excess"] <= 1e-10
        assert res["col_excess"] <= 1e-10
        assert res["deficiency_gap"] <= 1e-10
        assert res["support_excess"] <= 1e-12
        assert plan.deficiency <= 1.0 * value + 1e-9


def test_distances_nonincreasing_in_lambda():
    for seed in range(5):
        space = random_space(5, seed=160 + seed)
        rng = np.random.default_rng(400 + seed)
        mu_m, nu_m = random_measure(space, rng), random_measure(space, rng)
        tra = [transportation_distance(space, mu_m, nu_m, lam)[0] for lam in (0.5, 1.0, 2.0)]
        di = [prohorov(space, mu_m, nu_m, lam) for lam in (0.5, 1.0, 2.0)]
        assert tra[0] >= tra[1] - 1e-10 and tra[1] >= tra[2] - 1e-10
        assert di[0] >= di[1] - 1e-10 and di[1] >= di[2] - 1e-10


# -- Strassen duality ---------------------------------------------------------


def test_strassen_gap_examples():
    assert strassen_gap(X2, dirac(X2, 0), space_measure(X2), 1.0) <= 1e-12
    assert strassen_gap(X2, space_measure(X2), space_measure(X2), 1.0) == 0.0


def test_strassen_gap_random():
    space = random_space(6, seed=999)
    rng = np.random.default_rng(999)
    mu_m, nu_m = random_measure(space, rng), random_measure(space, rng)
    assert strassen_gap(space, mu_m, nu_m, 2.0) <= 1e-6


# -- relative entropy ---------------------------------------------------------


def test_entropy_examples():
    assert relative_entropy(X2, dirac(X2, 0)) == pytest.approx(np.log(2.0), abs=1e-12)
    assert relative_entropy(X2, space_measure(X2)) == 0.0
    nu = restrict_normalize(C4, [0, 1])
    assert relative_entropy(C4, nu) == pytest.approx(np.log(2.0), abs=1e-12)


def test_entropy_nonnegative_zero_iff_mu():
    for seed in range(10):
        space = random_space(6, seed=240 + seed, random_mu=(seed % 2 == 0))
        rng = np.random.default_rng(500 + seed)
        nu = random_measure(space, rng)
        ent = relative_entropy(space, nu)
        assert ent >= 0.0
        if np.max(np.abs(nu.weights - space.mu)) > 1e-6:
            assert ent > 1e-10
        assert relative_entropy(space, space_measure(space)) <= 1e-15


# -- interpolation ------------------------------------------------------------


def test_interpolate_endpoints_exact():
    value, plan = wasserstein2(C4, restrict_normalize(C4, [0, 1]), restrict_normalize(C4, [2, 3]))
    nu0 = interpolate(C4, plan, 0.0)
    nu1 = interpolate(C4, plan, 1.0)
    assert np.allclose(nu0.weights, [0.5, 0.5, 0.0, 0.0], atol=1e-10)
    assert np.allclose(nu1.weights, [0.0, 0.0, 0.5, 0.5], atol=1e-10)


def test_interpolate_path_midpoint():
    value, plan = wasserstein2(P3, dirac(P3, 0), dirac(P3, 2))
    mid = interpolate(P3, plan, 0.5)
    assert mid.weights.tolist() == [0.0, 1.0, 0.0]


def test_interpolate_conserves_mass():
    for t in (0.0, 0.2, 0.5, 0.8, 1.0):
        space = family("cycle", n=8)
        nu0 = restrict_normalize(space, [0, 1])
        nu1 = restrict_normalize(space, [4, 5])
        _, plan = wasserstein2(space, nu0, nu1)
        nut = interpolate(space, plan, t)
        assert abs(float(nut.weights.sum()) - 1.0) <= 1e-12


def test_interpolate_needs_paths_on_metric_only_spaces():
    metric_only = build_space(["a", "b"], [[0, 1], [1, 0]], [0.5, 0.5])
    _, plan = wasserstein2(metric_only, dirac(metric_only, 0), dirac(metric_only, 1))
    with pytest.raises(MissingPathTable):
        interpolate(metric_only, plan, 0.5)
    # endpoint snapping is available on request, and t = 0, 1 always work
    assert interpolate(metric_only, plan, 0.0).weights.tolist() == [1.0, 0.0]
    snapped = interpolate(metric_only, plan, 0.5, path_table=endpoint_path_table(metric_only))
    assert float(snapped.weights.sum()) == pytest.approx(1.0, abs=1e-12)


def test_interpolate_rejects_partial_plans():
    _, plan = transportation_distance(X2, dirac(X2, 0), space_measure(X2), 1.0)
    with pytest.raises(PreconditionViolated):
        interpolate(X2, plan, 0.5)


# -- convexity diagnostics ----------------------------------------------------


def test_cd_check_path_endpoints():
    report = cd_convexity_check(P3, dirac(P3, 0), dirac(P3, 2), 0.0, (0.5,))
    measured = report.checks[0].measured
    assert measured["max_cd_defect"] == pytest.approx(0.0, abs=1e-12)
    assert measured["max_jensen_defect"] == pytest.approx(0.0, abs=1e-12)


def test_cd_check_identical_measures():
    for space in (C4, P3):
        mu_m = space_measure(space)
        report = cd_convexity_check(space, mu_m, mu_m, 0.0, (0.0, 0.25, 0.5, 0.75, 1.0))
        measured = report.checks[0].measured
        assert measured["max_cd_defect"] <= 1e-12
        assert measured["max_jensen_defect"] <= 1e-12
        assert report.checks[0].status == "diagnostic"
