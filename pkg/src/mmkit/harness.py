"""Verification suites, the separation-reduction probe, and seeded families.

Suites compose the other modules into named batteries of checks over
seeded random spaces. Hard checks (statements that hold exactly on finite spaces) report
pass/fail; continuous-space estimates and empirical constants report
status "diagnostic" and never fail a suite. Reports are deterministic
given (suite, config): reruns differ only in runtime_ms.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import BadGrid, BadParameter, UnknownSuite
from .report import DIAGNOSTIC, FAIL, PASS, Check, CheckReport
from .separation import (
    check_neighborhood_bound,
    conc_sep_checks,
    levy_radius_bounds,
    separation_distance,
)
from .space import Space, build_space, family, subset_of
from .spectral import (
    cgy_constant,
    davies_gaffney_check,
    eigen_ratio_probe,
    heat_kernel,
    spectrum,
)
from .transport import (
    Measure,
    cd_convexity_check,
    restrict_normalize,
    strassen_gap,
)

# c_emp of cycle(4) with antipodal singletons: lambda_1 * 2^2 / log(16)^2
CGY_C4_ORACLE = 8.0 / math.log(16.0) ** 2

SUITE_NAMES = (
    "strassen",
    "separation_lemmas",
    "conc_sep",
    "spectral_sanity",
    "cgy_family",
    "cd_diagnostic",
)


@dataclass
class VerifyConfig:
    """Knobs shared by the suites; seeds=None keeps each suite's default."""

    seeds: int | None = None
    base_seed: int = 0
    lambdas: tuple[float, ...] = (0.5, 1.0, 2.0)
    levy_kappas: tuple[float, ...] = (0.1, 0.25, 0.4)
    cycle_sizes: tuple[int, ...] = (8, 16, 32)


# ---------------------------------------------------------------------------
# Seeded families
# ---------------------------------------------------------------------------


def random_space(n: int, seed: int, random_mu: bool = False) -> Space:
    """Seeded random space; optionally with a seeded non-uniform mu."""
    base = family("random", n=n, seed=seed)
    if not random_mu:
        return base
    rng = np.random.default_rng(seed + 777)
    # floor keeps full support comfortably away from zero
    mu = rng.dirichlet(np.ones(n)) + 0.2 / n
    mu = mu / mu.sum()
    return build_space(base.labels, base.dist, mu, edges=base.edges, name=base.name + "+mu")


def random_measure(space: Space, rng: np.random.Generator) -> Measure:
    """A seeded random measure, sometimes supported on a strict subset."""
    w = rng.dirichlet(np.ones(space.n))
    if space.n > 2 and rng.random() < 0.3:
        drop = rng.integers(0, space.n)
        w[drop] = 0.0
        w = w / w.sum()
    return Measure(w)


def default_kappa_grid(space: Space, bound: float = 0.5) -> list[float]:
    """Partial sums of the ascending mu atoms below the bound.

    Separation as a function of kappa changes value only at achievable
    measures, so this grid hits every regime.
    """
    sums = np.unique(np.cumsum(np.sort(space.mu)))
    return [float(v) for v in sums if 0.0 < v < bound]


# ---------------------------------------------------------------------------
# Separation-reduction probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    """Empirical constants for the separation-reduction statement.

    D_emp is the largest D with sep(kappa x (k+1)) <= (1/D) log(1/kappa)
    on the grid (math.inf when every (k+1)-separation vanishes), and c_emp
    is the smallest c with sep(kappa x k) <= (c/D_emp) log(1/kappa); c_emp
    is None when D_emp is infinite.
    """

    k: int
    kappa_grid: tuple[float, ...]
    D_emp: float
    c_emp: float | None

    def to_jsonable(self) -> dict:
        return {
            "k": self.k,
            "kappa_grid": list(self.kappa_grid),
            "D_emp": None if math.isinf(self.D_emp) else self.D_emp,
            "c_emp": self.c_emp,
        }


def sep_reduction_probe(space: Space, k: int, kappa_grid) -> ProbeResult:
    if k < 2:
        raise BadParameter("the reduction probe needs k >= 2")
    grid = tuple(float(v) for v in kappa_grid)
    if not grid:
        raise BadGrid("empty kappa grid")
    for v in grid:
        if not (0.0 < v < 0.5):
            raise BadGrid(f"kappa {v} outside (0, 1/2)")
    d_emp = math.inf
    for kappa in grid:
        wide = separation_distance(space, (kappa,) * (k + 1)).value
        if wide > 0.0:
            d_emp = min(d_emp, math.log(1.0 / kappa) / wide)
    if math.isinf(d_emp):
        return ProbeResult(k=k, kappa_grid=grid, D_emp=d_emp, c_emp=None)
    c_emp = 0.0
    for kappa in grid:
        narrow = separation_distance(space, (kappa,) * k).value
        c_emp = max(c_emp, narrow * d_emp / math.log(1.0 / kappa))
    return ProbeResult(k=k, kappa_grid=grid, D_emp=d_emp, c_emp=c_emp)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _suite_strassen(config: VerifyConfig) -> list[Check]:
    count = config.seeds if config.seeds is not None else 50
    checks = []
    for s in range(count):
        n = 3 + (s % 6)
        space = random_space(n, seed=config.base_seed + 1000 + s)
        rng = np.random.default_rng(config.base_seed + 5000 + s)
        nu_a = random_measure(space, rng)
        nu_b = random_measure(space, rng)
        worst = 0.0
        for lam in config.lambdas:
            worst = max(worst, strassen_gap(space, nu_a, nu_b, lam))
        ok = worst <= 1e-6
        checks.append(
            Check(
                name=f"strassen[seed={s}]",
                status=PASS if ok else FAIL,
                measured={"max_gap": worst, "n": n},
                witness=None
                if ok
                else {
                    "space": space.to_jsonable(),
                    "nu0": nu_a.to_jsonable(),
                    "nu1": nu_b.to_jsonable(),
                    "lambdas": list(config.lambdas),
                },
            )
        )
    return checks


def _union_bound_sets(space: Space, kappas: tuple[float, ...]):
    """A family meeting the hypotheses of the neighborhood union bound.

    For a single set any quota-meeting subset works; for more, the
    certificate of the shorter separation works whenever its value
    strictly exceeds r = Sep(X; kappas), which fails only on ties.
    """
    k = len(kappas) - 1
    r = separation_distance(space, kappas).value
    if k == 1:
        order = np.argsort(-space.mu, kind="stable")
        chosen: list[int] = []
        total = 0.0
        for idx in order:
            chosen.append(int(idx))
            total += float(space.mu[idx])
            if total >= kappas[0] - 1e-12:
                return [subset_of(space, chosen)]
        return None
    cert = separation_distance(space, kappas[:k])
    if cert.value > r and cert.sets:
        return list(cert.sets)
    return None


def _suite_separation_lemmas(config: VerifyConfig) -> list[Check]:
    count = config.seeds if config.seeds is not None else 100
    checks = []
    for s in range(count):
        n = 3 + (s % 8)
        space = random_space(n, seed=config.base_seed + 100 + s, random_mu=(s % 2 == 1))
        grid = default_kappa_grid(space)
        kappa_choices = [grid[0], grid[-1]] if grid else []
        cases = 0
        vacuous = 0
        worst = np.inf
        failure = None
        for k in (1, 2):
            for kappa in kappa_choices:
                kappas = (kappa,) * (k + 1)
                sets = _union_bound_sets(space, kappas)
                if sets is None:
                    vacuous += 1
                    continue
                report = check_neighborhood_bound(space, kappas, sets)
                check = report.checks[0]
                cases += 1
                margin = check.measured["union_measure"] - check.measured["bound"]
                worst = min(worst, margin)
                if check.status == FAIL and failure is None:
                    failure = check.witness
        measured = {"cases": cases, "vacuous": vacuous}
        if cases:
            measured["worst_margin"] = float(worst)
        checks.append(
            Check(
                name=f"union_bound[seed={s}]",
                status=FAIL if failure else PASS,
                measured=measured,
                witness=failure,
            )
        )
        worst_gap = np.inf
        levy_fail = None
        for kappa in config.levy_kappas:
            interval = levy_radius_bounds(space, kappa)
            gap = interval.upper - interval.lower
            worst_gap = min(worst_gap, gap)
            if gap < -1e-12 and levy_fail is None:
                levy_fail = {"space": space.to_jsonable(), "kappa": kappa}
        checks.append(
            Check(
                name=f"levy_bracket[seed={s}]",
                status=FAIL if levy_fail else PASS,
                measured={"worst_gap": float(worst_gap)},
                witness=levy_fail,
            )
        )
    return checks


def _suite_conc_sep(config: VerifyConfig) -> list[Check]:
    count = config.seeds if config.seeds is not None else 100
    spaces = [family("two_point", d=1.0), family("cycle", n=4), family("two_point", d=10.0)]
    names = ["X2", "C4", "two_point(10)"]
    for s in range(count):
        n = 3 + (s % 8)
        spaces.append(random_space(n, seed=config.base_seed + 300 + s, random_mu=(s % 2 == 0)))
        names.append(f"seed={s}")
    checks = []
    for name, space in zip(names, spaces):
        report = conc_sep_checks(space)
        for check in report.checks:
            checks.append(
                Check(
                    name=f"{check.name}[{name}]",
                    status=check.status,
                    measured=check.measured,
                    witness=check.witness,
                )
            )
    return checks


def _suite_spectral_sanity(config: VerifyConfig) -> list[Check]:
    checks = []
    x2 = family("two_point", d=1.0)
    c4 = family("cycle", n=4)
    for label, space, expected in (
        ("X2", x2, np.array([0.0, 2.0])),
        ("C4", c4, np.array([0.0, 2.0, 2.0, 4.0])),
    ):
        got = spectrum(space).eigenvalues
        err = float(np.max(np.abs(got - expected)))
        checks.append(
            Check(
                name=f"golden_eigenvalues[{label}]",
                status=PASS if err <= 1e-9 else FAIL,
                measured={"max_error": err},
                witness=None if err <= 1e-9 else {"space": space.to_jsonable()},
            )
        )
    for t in (0.1, 1.0, 10.0):
        worst = 0.0
        for space in (x2, c4):
            kernel = heat_kernel(space, t).values
            stoch = float(np.max(np.abs(kernel @ space.mu - 1.0)))
            sym = float(np.max(np.abs(kernel - kernel.T)))
            half = heat_kernel(space, t / 2.0).values
            semi = float(np.max(np.abs((half * space.mu) @ half - kernel)))
            worst = max(worst, stoch, sym, semi)
        checks.append(
            Check(
                name=f"heat_kernel_invariants[t={t:g}]",
                status=PASS if worst <= 1e-8 else FAIL,
                measured={"worst_residual": worst},
            )
        )
    dg = davies_gaffney_check(x2, [0], [1], (0.1, 1.0))
    checks.extend(dg.checks)
    return checks


def _suite_cgy_family(config: VerifyConfig) -> list[Check]:
    checks = []
    for n in config.cycle_sizes:
        space = family("cycle", n=n)
        sets = [[0], [n // 2]]
        c_emp = cgy_constant(space, sets)
        in_band = 0.1 <= c_emp <= 16.0
        checks.append(
            Check(
                name=f"cgy_band[cycle({n})]",
                status=PASS if in_band else FAIL,
                measured={"c_emp": c_emp},
                witness=None if in_band else {"space": space.to_jsonable(), "sets": sets},
            )
        )
        scaled = space.scale(3.0)
        c_scaled = cgy_constant(scaled, sets, edge_weight=(1.0 / n) / 9.0)
        drift = abs(c_scaled - c_emp)
        checks.append(
            Check(
                name=f"cgy_scale_invariance[cycle({n})]",
                status=PASS if drift <= 1e-9 else FAIL,
                measured={"drift": drift},
            )
        )
    c4 = cgy_constant(family("cycle", n=4), [[0], [2]])
    err = abs(c4 - CGY_C4_ORACLE)
    checks.append(
        Check(
            name="cgy_golden[C4]",
            status=PASS if err <= 1e-4 else FAIL,
            measured={"c_emp": c4, "oracle": CGY_C4_ORACLE, "error": err},
        )
    )
    ratios = eigen_ratio_probe(family("cycle", n=16), kmax=6)
    checks.append(
        Check(
            name="eigen_ratios[cycle(16)]",
            status=DIAGNOSTIC,
            measured={f"ratio_{j + 1}": v for j, v in enumerate(ratios)},
        )
    )
    return checks


def _suite_cd_diagnostic(config: VerifyConfig) -> list[Check]:
    checks = []
    for n in config.cycle_sizes:
        space = family("cycle", n=n)
        quarter = n // 4
        nu0 = restrict_normalize(space, range(quarter))
        nu1 = restrict_normalize(space, range(n // 2, n // 2 + quarter))
        report = cd_convexity_check(space, nu0, nu1, K=0.0, t_grid=(0.0, 0.25, 0.5, 0.75, 1.0))
        check = report.checks[0]
        checks.append(
            Check(
                name=f"cd_convexity[cycle({n})]",
                status=DIAGNOSTIC,
                measured=check.measured,
                witness=check.witness,
            )
        )
    return checks


_SUITES = {
    "strassen": _suite_strassen,
    "separation_lemmas": _suite_separation_lemmas,
    "conc_sep": _suite_conc_sep,
    "spectral_sanity": _suite_spectral_sanity,
    "cgy_family": _suite_cgy_family,
    "cd_diagnostic": _suite_cd_diagnostic,
}


def verify_suite(name: str, config: VerifyConfig | None = None) -> CheckReport:
    """Run a named suite (or "all") and aggregate a CheckReport.

    The report passes iff every non-diagnostic check passes.
    """
    config = config or VerifyConfig()
    if name == "all":
        runners = [_SUITES[s] for s in SUITE_NAMES]
    elif name in _SUITES:
        runners = [_SUITES[name]]
    else:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {SUITE_NAMES + ('all',)}")
    start = time.monotonic()
    checks: list[Check] = []
    for run in runners:
        checks.extend(run(config))
    runtime_ms = int((time.monotonic() - start) * 1000)
    return CheckReport(suite=name, checks=checks, seed=config.base_seed, runtime_ms=runtime_ms)
