"""Optimal transport on finite spaces.

Couplings and partial transportations are dense nonnegative matrices. The
L2-Wasserstein distance and the max-mass subproblems of the transportation
distance are linear programs solved with scipy's HiGHS backend; the
Prohorov distance is computed independently by exhaustive subset
enumeration, so the Strassen identity tra_lambda = di_lambda is a genuine
cross-check of two routes.

Both tra_lambda and di_lambda reduce to finitely many candidates because
the constraint data is piecewise constant in epsilon with breakpoints at
the distinct pairwise distances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import (
    BadLambda,
    BadParameter,
    MissingPathTable,
    NoGraphData,
    NullSet,
    PreconditionViolated,
    SolverFailure,
    TooLargeForExact,
)
from .report import DIAGNOSTIC, Check, CheckReport
from . import kernels
from .space import Space, Subset, subset_of

MEASURE_TOL = 1e-12
PLAN_TOL = 1e-10
SUPPORT_EPS = 1e-15
PATH_TOL = 1e-9
PROHOROV_LIMIT = 14


@dataclass(frozen=True)
class Measure:
    """A probability vector over a space's points."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise BadParameter("measure weights must be finite and nonnegative")
        if abs(float(w.sum()) - 1.0) > MEASURE_TOL:
            raise BadParameter(f"measure weights sum to {w.sum():.15g}, not 1")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def to_jsonable(self) -> list:
        return [float(v) for v in self.weights]


def as_measure(space: Space, weights) -> Measure:
    w = np.asarray(weights, dtype=float)
    if w.shape != (space.n,):
        raise BadParameter(f"measure must have length {space.n}")
    return Measure(w)


def space_measure(space: Space) -> Measure:
    return Measure(np.array(space.mu, dtype=float))


def dirac(space: Space, i: int) -> Measure:
    w = np.zeros(space.n)
    w[i] = 1.0
    return Measure(w)


def restrict_normalize(space: Space, A) -> Measure:
    """The conditional measure mu_A = mu|_A / mu(A)."""
    sub = A if isinstance(A, Subset) else subset_of(space, A)
    if sub.measure <= 0.0:
        raise NullSet("cannot condition on a null set")
    w = np.zeros(space.n)
    idx = list(sub.members)
    w[idx] = space.mu[idx] / sub.measure
    return Measure(w)


@dataclass(frozen=True)
class TransportPlan:
    """A nonnegative mass matrix with marginal bounds.

    kind "full_coupling" has marginals equal to the endpoint measures and
    deficiency 0; kind "partial" dominates neither marginal and is
    supported on pairs within distance epsilon.
    """

    mass: np.ndarray
    deficiency: float
    epsilon: float
    kind: str

    def __post_init__(self):
        self.mass.flags.writeable = False

    def total(self) -> float:
        return float(self.mass.sum())

    def to_jsonable(self) -> dict:
        rows, cols = np.nonzero(self.mass > SUPPORT_EPS)
        triplets = [[int(i), int(j), float(self.mass[i, j])] for i, j in zip(rows, cols)]
        return {
            "epsilon": self.epsilon,
            "deficiency": self.deficiency,
            "mass": triplets,
        }


def plan_residuals(space: Space, plan: TransportPlan, source: Measure, target: Measure) -> dict:
    """Worst-case violations of the plan invariants, for tests and reports."""
    row = plan.mass.sum(axis=1) - source.weights
    col = plan.mass.sum(axis=0) - target.weights
    supported = plan.mass > SUPPORT_EPS
    support_excess = 0.0
    if np.any(supported):
        support_excess = float((space.dist[supported] - plan.epsilon).max())
    return {
        "row_excess": float(row.max()),
        "col_excess": float(col.max()),
        "row_equality_gap": float(np.abs(row).max()),
        "col_equality_gap": float(np.abs(col).max()),
        "deficiency_gap": abs(plan.deficiency - (1.0 - plan.total())),
        "support_excess": support_excess,
    }


# ---------------------------------------------------------------------------
# Wasserstein distance
# ---------------------------------------------------------------------------


def wasserstein2(space: Space, nu0: Measure, nu1: Measure) -> tuple[float, TransportPlan]:
    """L2-Wasserstein distance and an optimal full coupling.

    Solves min sum d(x,y)^2 pi(x,y) over couplings of nu0 and nu1 as a
    dense transportation LP; the reported value is the square root.
    """
    n = space.n
    cost = (space.dist ** 2).ravel()
    a_eq = np.zeros((2 * n - 1, n * n))
    for i in range(n):
        a_eq[i, i * n : (i + 1) * n] = 1.0
    for j in range(n - 1):
        a_eq[n + j, j::n] = 1.0
    b_eq = np.concatenate([nu0.weights, nu1.weights[:-1]])
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise SolverFailure(f"wasserstein LP failed: {res.message}")
    mass = np.maximum(res.x.reshape(n, n), 0.0)
    supported = mass > SUPPORT_EPS
    epsilon = float(space.dist[supported].max()) if np.any(supported) else 0.0
    plan = TransportPlan(
        mass=mass,
        deficiency=max(0.0, 1.0 - float(mass.sum())),
        epsilon=epsilon,
        kind="full_coupling",
    )
    value = float(np.sqrt(max(float(res.fun), 0.0)))
    return value, plan


# ---------------------------------------------------------------------------
# Prohorov distance (exhaustive subset route)
# ---------------------------------------------------------------------------


def _distance_levels(space: Space) -> np.ndarray:
    n = space.n
    if n < 2:
        return np.array([0.0])
    iu = np.triu_indices(n, k=1)
    return np.concatenate([[0.0], np.unique(space.dist[iu])])


def prohorov(space: Space, mu: Measure, nu: Measure, lam: float, limit: int = PROHOROV_LIMIT) -> float:
    """di_lambda(mu, nu): least epsilon with mu(C_eps(A)) >= nu(A) - lambda*eps
    for every subset A (one-sided form; the reverse inequality follows).

    For each distance level d the subset sweep yields the worst deficit
    max_A nu(A) - mu(C_d(A)); the least feasible epsilon on the segment
    [d, next) is max(d, deficit/lambda).
    """
    if lam <= 0:
        raise BadLambda("lambda must be positive")
    if space.n > limit:
        raise TooLargeForExact(f"prohorov subset sweep needs n <= {limit}")
    nu_meas = kernels.subset_measures(nu.weights)
    levels = _distance_levels(space)
    best = np.inf
    for seg, d in enumerate(levels):
        cballs = kernels.row_masks(space.dist <= d)
        deficit = kernels.max_coverage_deficit(cballs, mu.weights, nu_meas)
        candidate = max(float(d), deficit / lam)
        if seg + 1 < len(levels) and candidate >= levels[seg + 1]:
            continue
        best = min(best, candidate)
    return float(max(best, 0.0))


# ---------------------------------------------------------------------------
# Transportation distance (LP route)
# ---------------------------------------------------------------------------


def _max_mass_plan(space: Space, mu: Measure, nu: Measure, d: float) -> tuple[float, np.ndarray]:
    """Largest partial-transportation mass supported on pairs within d."""
    n = space.n
    pairs = [(i, j) for i in range(n) for j in range(n) if space.dist[i, j] <= d]
    m = len(pairs)
    cost = -np.ones(m)
    a_ub = np.zeros((2 * n, m))
    for col, (i, j) in enumerate(pairs):
        a_ub[i, col] = 1.0
        a_ub[n + j, col] = 1.0
    b_ub = np.concatenate([mu.weights, nu.weights])
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    if res.status != 0:
        raise SolverFailure(f"max-mass LP failed: {res.message}")
    mass = np.zeros((n, n))
    for col, (i, j) in enumerate(pairs):
        mass[i, j] = max(float(res.x[col]), 0.0)
    return min(float(-res.fun), 1.0), mass


def transportation_distance(
    space: Space, mu: Measure, nu: Measure, lam: float
) -> tuple[float, TransportPlan]:
    """tra_lambda(mu, nu): least epsilon admitting an epsilon-transportation
    with deficiency at most lambda*epsilon, with the witnessing plan.

    Per distance level d the support is fixed, the max transportable mass
    M(d) comes from a linear program, and the least feasible epsilon on the
    segment is max(d, (1 - M(d))/lambda).
    """
    if lam <= 0:
        raise BadLambda("lambda must be positive")
    levels = _distance_levels(space)
    best = np.inf
    best_plan = None
    for seg, d in enumerate(levels):
        mass_total, mass = _max_mass_plan(space, mu, nu, float(d))
        candidate = max(float(d), (1.0 - mass_total) / lam)
        in_segment = seg + 1 >= len(levels) or candidate < levels[seg + 1]
        if in_segment and candidate < best:
            best = candidate
            best_plan = TransportPlan(
                mass=mass,
                deficiency=max(0.0, 1.0 - mass_total),
                epsilon=float(best),
                kind="partial",
            )
        if mass_total >= 1.0 - MEASURE_TOL:
            break
    if best_plan is None:
        raise SolverFailure("no feasible transportation segment")
    return float(max(best, 0.0)), best_plan


def strassen_gap(space: Space, mu: Measure, nu: Measure, lam: float) -> float:
    """|tra_lambda - di_lambda|; Strassen duality forces this to zero."""
    tra, _ = transportation_distance(space, mu, nu, lam)
    di = prohorov(space, mu, nu, lam)
    return abs(tra - di)


# ---------------------------------------------------------------------------
# Relative entropy
# ---------------------------------------------------------------------------


def relative_entropy(space: Space, nu: Measure) -> float:
    """Ent_mu(nu) = sum rho log rho dmu with rho = nu/mu and 0 log 0 = 0.

    Finite for every nu because mu has full support.
    """
    w = nu.weights
    pos = w > 0
    return float(np.sum(w[pos] * np.log(w[pos] / space.mu[pos])))


# ---------------------------------------------------------------------------
# Displacement interpolation (path-snapping surrogate)
# ---------------------------------------------------------------------------


def shortest_path_table(space: Space) -> dict[tuple[int, int], tuple[int, ...]]:
    """One shortest path per unordered pair on a graph space.

    Paths are built greedily along tight edges, always taking the
    smallest-index next vertex, which selects the lexicographically least
    shortest vertex sequence.
    """
    if space.edges is None:
        raise NoGraphData("path table needs a graph space")
    n = space.n
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i, j, length in space.edges:
        adj[i].append((j, length))
        adj[j].append((i, length))
    for row in adj:
        row.sort()
    d = space.dist
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            path = [i]
            u = i
            while u != j:
                for v, length in adj[u]:
                    tight = abs(d[i, u] + length - d[i, v]) <= PATH_TOL
                    through = abs(d[i, v] + d[v, j] - d[i, j]) <= PATH_TOL
                    if tight and through and d[i, v] > d[i, u]:
                        path.append(v)
                        u = v
                        break
                else:
                    raise SolverFailure(f"no tight path from {i} to {j}")
            table[(i, j)] = tuple(path)
    return table


def endpoint_path_table(space: Space) -> dict[tuple[int, int], tuple[int, ...]]:
    """Straight pairs: snapping falls back to the nearer endpoint."""
    return {(i, j): (i, j) for i in range(space.n) for j in range(i + 1, space.n)}


def interpolate(space: Space, plan: TransportPlan, t: float, path_table=None) -> Measure:
    """Place each mass atom pi(x, y) at the path vertex nearest to the
    fraction-t position between x and y; t = 0 and 1 return the marginals.

    Graph spaces get a default shortest-path table; metric-only spaces
    need an explicit table (e.g. endpoint_path_table) when 0 < t < 1.
    """
    if plan.kind != "full_coupling":
        raise PreconditionViolated("interpolate needs a full coupling")
    if not (0.0 <= t <= 1.0):
        raise BadParameter("t must lie in [0, 1]")
    if t == 0.0:
        return Measure(plan.mass.sum(axis=1))
    if t == 1.0:
        return Measure(plan.mass.sum(axis=0))
    if path_table is None:
        if space.edges is None:
            raise MissingPathTable("metric-only space: pass a path table for 0 < t < 1")
        path_table = shortest_path_table(space)
    out = np.zeros(space.n)
    rows, cols = np.nonzero(plan.mass > 0)
    for x, y in zip(rows, cols):
        m = float(plan.mass[x, y])
        if x == y:
            out[x] += m
            continue
        path = path_table[(x, y)] if x < y else tuple(reversed(path_table[(y, x)]))
        target_pos = t * space.dist[x, y]
        best_v = path[0]
        best_err = abs(space.dist[x, path[0]] - target_pos)
        for v in path[1:]:
            err = abs(space.dist[x, v] - target_pos)
            if err < best_err:
                best_err = err
                best_v = v
        out[best_v] += m
    return Measure(out)


# ---------------------------------------------------------------------------
# Entropy convexity diagnostics
# ---------------------------------------------------------------------------


def cd_convexity_check(
    space: Space,
    nu0: Measure,
    nu1: Measure,
    K: float,
    t_grid,
    tol: float = 1e-9,
    path_table=None,
) -> CheckReport:
    """Defects of the entropy-convexity inequality and its Jensen corollary
    along the path-snapped interpolation. Diagnostic only: the snapped
    curve is not a true Wasserstein geodesic, so positive defects are
    reported, never asserted. Expect defects to shrink as cycle or torus
    refinements grow, since those approximate nonnegatively-curved spaces.
    """
    t_grid = [float(t) for t in t_grid]
    for t in t_grid:
        if not (0.0 <= t <= 1.0):
            raise BadParameter("t grid must lie in [0, 1]")
    w2, plan = wasserstein2(space, nu0, nu1)
    ent0 = relative_entropy(space, nu0)
    ent1 = relative_entropy(space, nu1)
    if path_table is None and space.edges is not None and any(0.0 < t < 1.0 for t in t_grid):
        path_table = shortest_path_table(space)
    rows = []
    max_cd = -np.inf
    max_jensen = -np.inf
    for t in t_grid:
        nut = interpolate(space, plan, t, path_table=path_table)
        ent_t = relative_entropy(space, nut)
        chord = (1.0 - t) * ent0 + t * ent1 - 0.5 * K * (1.0 - t) * t * w2 ** 2
        cd_defect = ent_t - chord
        supp = float(space.mu[nut.weights > 0].sum())
        jensen_defect = -chord - np.log(supp)
        max_cd = max(max_cd, cd_defect)
        max_jensen = max(max_jensen, jensen_defect)
        rows.append(
            {
                "t": t,
                "entropy": ent_t,
                "cd_defect": float(cd_defect),
                "jensen_defect": float(jensen_defect),
                "support_measure": supp,
            }
        )
    check = Check(
        name="cd_convexity",
        status=DIAGNOSTIC,
        measured={
            "K": float(K),
            "w2": w2,
            "max_cd_defect": float(max_cd),
            "max_jensen_defect": float(max_jensen),
            "defects_above_tol": int(
                sum(1 for row in rows if row["cd_defect"] > tol or row["jensen_defect"] > tol)
            ),
        },
        witness={"table": rows},
    )
    return CheckReport(suite="cd_convexity", checks=[check])
