"""Independent brute-force oracles used to freeze expected test values.

These deliberately avoid the package's kernels and candidate reductions:
separation enumerates whole subset families, concentration enumerates
subsets directly from the definition, and the Prohorov oracle tests the
defining feasibility predicate over an explicit candidate list.
"""

from itertools import combinations, product

import numpy as np


def nonempty_subsets(n):
    pts = range(n)
    for size in range(1, n + 1):
        yield from combinations(pts, size)


def set_dist(space, A, B):
    return min(space.dist[a, b] for a in A for b in B)


def brute_sep(space, kappas):
    """Definition-level separation: max over families of min cross distance."""
    admissible = [
        [A for A in nonempty_subsets(space.n) if space.mu[list(A)].sum() >= kappa - 1e-12]
        for kappa in kappas
    ]
    best = -1.0
    for fam in product(*admissible):
        worst = min(
            set_dist(space, fam[i], fam[j])
            for i in range(len(fam))
            for j in range(i + 1, len(fam))
        )
        best = max(best, worst)
    return max(best, 0.0)


def brute_concentration(space, r):
    """Definition-level concentration function at radius r > 0."""
    best = 0.0
    for A in nonempty_subsets(space.n):
        if space.mu[list(A)].sum() < 0.5 - 1e-12:
            continue
        outside = [x for x in range(space.n) if min(space.dist[x, a] for a in A) >= r]
        best = max(best, float(space.mu[outside].sum()) if outside else 0.0)
    return best


def brute_prohorov(space, mu_w, nu_w, lam):
    """Definition-level Prohorov distance (one-sided form).

    Feasibility of epsilon is checked against every subset; the infimum is
    searched over the candidate values where feasibility can change.
    """
    subsets = list(nonempty_subsets(space.n))

    def feasible(eps):
        for A in subsets:
            ngh = [x for x in range(space.n) if min(space.dist[x, a] for a in A) <= eps]
            if float(mu_w[ngh].sum()) < float(nu_w[list(A)].sum()) - lam * eps - 1e-12:
                return False
        return True

    levels = sorted(set([0.0] + [float(d) for d in np.unique(space.dist)]))
    candidates = set(levels)
    for d in levels:
        for A in subsets:
            ngh = [x for x in range(space.n) if min(space.dist[x, a] for a in A) <= d]
            deficit = float(nu_w[list(A)].sum()) - float(mu_w[ngh].sum())
            if deficit > 0:
                candidates.add(deficit / lam)
    return min(c for c in sorted(candidates) if feasible(c))
