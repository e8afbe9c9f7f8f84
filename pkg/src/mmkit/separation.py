"""Separation distance, medians, Lévy radius bounds, concentration function.

The separation distance of a finite space is found exactly by sweeping
candidate thresholds r over the distinct pairwise distances in descending
order and asking, per threshold, whether points can be assigned to classes
meeting the measure quotas with all cross-class distances >= r. The sweep
returns the first feasible threshold, so the witness family realizes the
reported value exactly.

Concentration and the finite-space concentration/separation inequalities
operate on the grid of distinct distances and their midpoints, where both
functions are piecewise constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    BadKappa,
    BadParameter,
    PreconditionViolated,
    TooLargeForExact,
)
from .report import FAIL, PASS, Check, CheckReport
from .space import Space, Subset, neighborhood, set_distance, subset_from_mask, subset_of

SLACK = 1e-12
EXACT_LIMIT = 14
MAX_CLASSES = 5
CONC_LIMIT = 20


# ---------------------------------------------------------------------------
# Medians
# ---------------------------------------------------------------------------


def median_interval(space: Space, f) -> tuple[float, float]:
    """Endpoints [a, b] of the closed interval of medians of f under mu.

    m is a median when mu(f >= m) >= 1/2 and mu(f <= m) >= 1/2; on a finite
    space the endpoints are attained among the values of f.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (space.n,):
        raise BadParameter(f"f must have length {space.n}")
    vals = np.unique(f)
    le = (f[None, :] <= vals[:, None]) @ space.mu
    ge = (f[None, :] >= vals[:, None]) @ space.mu
    ok = (le >= 0.5 - SLACK) & (ge >= 0.5 - SLACK)
    medians = vals[ok]
    return float(medians.min()), float(medians.max())


def lm(space: Space, f) -> float:
    """Midpoint of the median interval."""
    a, b = median_interval(space, f)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# Separation distance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationCertificate:
    """A witnessing family for a separation value.

    sets[i] has measure >= kappas[i], and when value > 0 the minimum
    pairwise set distance equals value. exact=True means the value is the
    true maximum (exhaustive search); heuristic certificates are valid
    lower bounds. An empty sets tuple is the placeholder for value 0.
    """

    kappas: tuple[float, ...]
    sets: tuple[Subset, ...]
    value: float
    exact: bool

    def to_jsonable(self) -> dict:
        return {
            "value": self.value,
            "exact": self.exact,
            "sets": [list(s.members) for s in self.sets],
            "kappas": list(self.kappas),
        }


def _check_kappas(kappas) -> tuple[float, ...]:
    kappas = tuple(float(k) for k in kappas)
    if len(kappas) < 2:
        raise BadKappa("need at least two kappas (k >= 1 subsets pairs)")
    for k in kappas:
        if not (0.0 < k <= 1.0):
            raise BadKappa(f"kappa {k} outside (0, 1]")
    return kappas


def _zero_certificate(kappas, exact: bool) -> SeparationCertificate:
    return SeparationCertificate(kappas=kappas, sets=(), value=0.0, exact=exact)


def _threshold_values(space: Space) -> np.ndarray:
    n = space.n
    iu = np.triu_indices(n, k=1)
    return np.unique(space.dist[iu]) if n > 1 else np.array([])


def _exact_search(space: Space, kappas) -> SeparationCertificate:
    mu = np.asarray(space.mu, dtype=float)
    meas = kernels.subset_measures(mu)
    kap = np.asarray(kappas, dtype=float)
    for r in _threshold_values(space)[::-1]:
        compat = kernels.row_masks(space.dist >= r)
        found = kernels.sep_feasible(compat, mu, meas, kap, SLACK)
        if found is not None:
            sets = tuple(subset_from_mask(space, m) for m in found)
            return SeparationCertificate(kappas=kappas, sets=sets, value=float(r), exact=True)
    return _zero_certificate(kappas, exact=True)


def _farthest_point_order(space: Space) -> list[int]:
    d = space.dist
    order = [int(np.argmax(d.max(axis=1)))]
    while len(order) < space.n:
        gap = d[:, order].min(axis=1)
        gap[order] = -1.0
        order.append(int(np.argmax(gap)))
    return order


def _min_cross_pair(space: Space, clusters: list[list[int]]):
    best = None
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            for p in clusters[i]:
                for q in clusters[j]:
                    d = space.dist[p, q]
                    if best is None or d < best[0]:
                        best = (float(d), i, j, p, q)
    return best


def _heuristic_search(space: Space, kappas) -> SeparationCertificate:
    nclass = len(kappas)
    if nclass > space.n:
        return _zero_certificate(kappas, exact=False)
    seeds = _farthest_point_order(space)[:nclass]
    clusters: list[list[int]] = [[s] for s in seeds]
    unassigned = [p for p in range(space.n) if p not in seeds]
    for c, kappa in enumerate(kappas):
        while float(space.mu[clusters[c]].sum()) < kappa - SLACK:
            if not unassigned:
                return _zero_certificate(kappas, exact=False)
            dists = [min(space.dist[p, m] for m in clusters[c]) for p in unassigned]
            pick = unassigned.pop(int(np.argmin(dists)))
            clusters[c].append(pick)
    # local moves: shed a point realizing the bottleneck while quotas allow
    for _ in range(2 * space.n):
        current = _min_cross_pair(space, clusters)
        value, i, j, p, q = current
        improved = False
        for cls, point in ((i, p), (j, q)):
            trial = [list(c) for c in clusters]
            trial[cls].remove(point)
            if not trial[cls]:
                continue
            if float(space.mu[trial[cls]].sum()) < kappas[cls] - SLACK:
                continue
            if _min_cross_pair(space, trial)[0] > value:
                clusters = trial
                improved = True
                break
        if not improved:
            break
    sets = tuple(subset_of(space, c) for c in clusters)
    value = _min_cross_pair(space, clusters)[0]
    return SeparationCertificate(kappas=kappas, sets=sets, value=value, exact=False)


def separation_distance(
    space: Space, kappas, mode: str = "exact", limit: int = EXACT_LIMIT
) -> SeparationCertificate:
    """Sep(X; kappa_0, ..., kappa_k) with a witnessing family.

    The value is the largest achievable minimum pairwise distance among
    len(kappas) subsets whose measures meet the quotas. Exact mode requires
    n <= limit and at most five kappas; heuristic mode (greedy seeding plus
    local moves) returns a valid lower-bound certificate on any size.
    """
    kappas = _check_kappas(kappas)
    if mode not in ("exact", "heuristic"):
        raise BadParameter(f"unknown mode {mode!r}")
    if sum(kappas) > 1.0 + SLACK:
        # pigeonhole: some pair of subsets must intersect
        return _zero_certificate(kappas, exact=(mode == "exact"))
    if mode == "heuristic":
        return _heuristic_search(space, kappas)
    if space.n > limit:
        raise TooLargeForExact(f"exact separation needs n <= {limit}, got {space.n}")
    if len(kappas) > MAX_CLASSES:
        raise TooLargeForExact(f"exact separation needs at most {MAX_CLASSES} kappas")
    return _exact_search(space, kappas)


# ---------------------------------------------------------------------------
# Neighborhood union bound for separation certificates
# ---------------------------------------------------------------------------


def check_neighborhood_bound(space: Space, kappas, sets) -> CheckReport:
    """Check mu(union of C_r(A_i)) >= 1 - kappa_k for r = Sep(X; kappas).

    Requires len(sets) = len(kappas) - 1, mu(A_i) >= kappa_i, and pairwise
    set distances strictly above r; violations of these hypotheses raise
    PreconditionViolated. The inequality itself is unconditional, so a
    failing check indicates a bug and carries a reproduction witness.
    """
    kappas = _check_kappas(kappas)
    subsets = [s if isinstance(s, Subset) else subset_of(space, s) for s in sets]
    if len(subsets) != len(kappas) - 1:
        raise PreconditionViolated("need one set per kappa except the last")
    for i, (sub, kappa) in enumerate(zip(subsets, kappas)):
        if sub.measure < kappa - SLACK:
            raise PreconditionViolated(f"mu(sets[{i}]) = {sub.measure} < {kappa}")
    r = separation_distance(space, kappas).value
    for i in range(len(subsets)):
        for j in range(i + 1, len(subsets)):
            if set_distance(space, subsets[i], subsets[j]) <= r:
                raise PreconditionViolated(
                    f"dist(sets[{i}], sets[{j}]) must exceed r = {r}"
                )
    union: set[int] = set()
    for sub in subsets:
        union.update(neighborhood(space, sub, r, closed=True).members)
    union_measure = float(space.mu[sorted(union)].sum())
    bound = 1.0 - kappas[-1]
    ok = union_measure >= bound - SLACK
    check = Check(
        name="neighborhood_union_bound",
        status=PASS if ok else FAIL,
        measured={"r": r, "union_measure": union_measure, "bound": bound},
        witness=None
        if ok
        else {
            "space": space.to_jsonable(),
            "kappas": list(kappas),
            "sets": [list(s.members) for s in subsets],
        },
    )
    return CheckReport(suite="neighborhood_bound", checks=[check])


# ---------------------------------------------------------------------------
# Lévy radius
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevyInterval:
    """Certified bracket lower <= LeRad(X; -kappa) <= upper."""

    kappa: float
    lower: float
    upper: float

    def to_jsonable(self) -> dict:
        return {"kappa": self.kappa, "lower": self.lower, "upper": self.upper}


def _deviation_radius(f: np.ndarray, space: Space, kappa: float) -> float:
    """inf{rho : mu(|f - lm(f)| >= rho) <= kappa} for one function f."""
    center = lm(space, f)
    g = np.abs(f - center)
    order = np.argsort(g, kind="stable")
    gs = g[order]
    w = space.mu[order]
    tail = np.concatenate([np.cumsum(w[::-1])[::-1], [0.0]])
    prev = 0.0
    for j in range(len(gs) + 1):
        # tail[j] = mu(g >= gs[j]) at the first index of each value group
        if j < len(gs) and j > 0 and gs[j] == gs[j - 1]:
            continue
        if tail[j] <= kappa + SLACK:
            return prev
        if j < len(gs):
            prev = float(gs[j])
    return float(gs[-1])


def _distance_function_rows(space: Space, subset_limit: int) -> np.ndarray:
    """Candidate 1-Lipschitz functions x -> dist(x, S), one row per S."""
    n = space.n
    if n <= subset_limit:
        rows = np.full((1, n), np.inf)
        for i in range(n):
            rows = np.vstack([rows, np.minimum(rows, space.dist[i])])
        return rows[1:]
    order = _farthest_point_order(space)
    candidates = [space.dist[i] for i in range(n)]
    grown = np.full(n, np.inf)
    for s in order:
        grown = np.minimum(grown, space.dist[s])
        candidates.append(grown.copy())
    return np.array(candidates)


def levy_radius_bounds(
    space: Space,
    kappa: float,
    subset_limit: int = EXACT_LIMIT,
    sep_limit: int = EXACT_LIMIT,
) -> LevyInterval:
    """Bracket the Lévy radius LeRad(X; -kappa).

    The upper bound is Sep(X; kappa/2, kappa/2). The lower bound maximizes
    the deviation radius over distance functions of subsets (all subsets
    for n <= subset_limit, else singletons and greedy farthest-point sets),
    each of which is 1-Lipschitz, so the bound is certified. Raising
    sep_limit opts a larger space into the exact separation search.
    """
    if not (0.0 < kappa < 1.0):
        raise BadKappa(f"kappa {kappa} outside (0, 1)")
    upper = separation_distance(space, (kappa / 2.0, kappa / 2.0), limit=sep_limit).value
    lower = 0.0
    for row in _distance_function_rows(space, subset_limit):
        lower = max(lower, _deviation_radius(row, space, kappa))
    return LevyInterval(kappa=kappa, lower=lower, upper=upper)


# ---------------------------------------------------------------------------
# Concentration function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConcentrationResult:
    r: float
    value: float
    witness: Subset

    def to_jsonable(self) -> dict:
        return {"r": self.r, "value": self.value, "witness": list(self.witness.members)}


def concentration_function(space: Space, r: float, limit: int = CONC_LIMIT) -> ConcentrationResult:
    """alpha_X(r): worst measure outside the open r-neighborhood of a
    half-measure set, by exhaustive scan over subsets with mu(A) >= 1/2."""
    if r <= 0:
        raise BadParameter("concentration radius must be positive")
    if space.n > limit:
        raise TooLargeForExact(f"concentration scan needs n <= {limit}")
    mu = np.asarray(space.mu, dtype=float)
    balls = kernels.row_masks(space.dist < r)
    meas = kernels.subset_measures(mu)
    value, mask = kernels.max_complement_measure(balls, mu, meas, 0.5 - SLACK)
    return ConcentrationResult(r=float(r), value=value, witness=subset_from_mask(space, mask))


def distance_grid(space: Space) -> np.ndarray:
    """Distinct distances, their midpoints, and one point past the maximum.

    alpha_X and the subset constraints are piecewise constant with
    breakpoints at distances, so this grid samples every regime; the point
    past the diameter (where alpha vanishes) keeps the kappa sweep of
    conc_sep_checks non-vacuous for small kappa.
    """
    d = _threshold_values(space)
    if len(d) == 0:
        return np.array([])
    padded = np.concatenate([[0.0], d])
    mids = 0.5 * (padded[:-1] + padded[1:])
    beyond = d[-1] + 0.5 * d[0]
    return np.unique(np.concatenate([d, mids, [beyond]]))


def conc_sep_checks(space: Space) -> CheckReport:
    """Exact finite-space forms of the concentration/separation equivalence.

    (i)  r <= Sep(X; alpha_X(r), 1/2) whenever alpha_X(r) > 0, and
    (ii) Sep(X; kappa, kappa) <= 2 min{r in grid : alpha_X(r) < kappa},
    for every r in the distance grid and kappa in the atom partial-sum
    grid. Both inequalities hold unconditionally; failures carry witnesses.
    """
    grid = distance_grid(space)
    alphas = {float(r): concentration_function(space, float(r)).value for r in grid}
    sep_cache: dict[tuple[float, ...], float] = {}

    def sep_value(kappas: tuple[float, ...]) -> float:
        if kappas not in sep_cache:
            sep_cache[kappas] = separation_distance(space, kappas).value
        return sep_cache[kappas]

    checks = []
    cases_i = 0
    worst_i = np.inf
    fail_i = None
    for r, alpha in alphas.items():
        if alpha <= 0.0:
            continue
        cases_i += 1
        margin = sep_value((alpha, 0.5)) - r
        if margin < worst_i:
            worst_i = margin
        if margin < -SLACK and fail_i is None:
            fail_i = {"space": space.to_jsonable(), "r": r, "alpha": alpha}
    measured = {"cases": cases_i}
    if cases_i:
        measured["worst_margin"] = float(worst_i)
    checks.append(
        Check(
            name="conc_to_sep",
            status=FAIL if fail_i else PASS,
            measured=measured,
            witness=fail_i,
        )
    )
    kappa_grid = np.unique(np.cumsum(np.sort(space.mu)))
    kappa_grid = kappa_grid[(kappa_grid > 0.0) & (kappa_grid < 1.0)]
    cases_ii = 0
    worst_ii = np.inf
    fail_ii = None
    for kappa in kappa_grid:
        kappa = float(kappa)
        admissible = [float(r) for r, alpha in alphas.items() if alpha < kappa]
        if not admissible:
            continue
        cases_ii += 1
        margin = 2.0 * min(admissible) - sep_value((kappa, kappa))
        if margin < worst_ii:
            worst_ii = margin
        if margin < -SLACK and fail_ii is None:
            fail_ii = {"space": space.to_jsonable(), "kappa": kappa}
    measured = {"cases": cases_ii}
    if cases_ii:
        measured["worst_margin"] = float(worst_ii)
    checks.append(
        Check(
            name="sep_to_conc",
            status=FAIL if fail_ii else PASS,
            measured=measured,
            witness=fail_ii,
        )
    )
    return CheckReport(suite="conc_sep", checks=checks)
