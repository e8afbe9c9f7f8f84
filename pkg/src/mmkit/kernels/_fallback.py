"""Numpy / pure-Python kernels for the exhaustive subset scans.

These are the reference semantics for the compiled extension in _core.pyx:
both backends must return bit-identical results (same summation order,
same tie-breaking) so the import-time backend choice is unobservable.

Subsets of an n-point space (n <= 20) are bitmasks; mask measures are
tabulated once per call with the low-bit-first doubling recurrence.
"""

from __future__ import annotations

import numpy as np

_ARANGE_CACHE: dict[int, np.ndarray] = {}


def _masks(n: int) -> np.ndarray:
    if n not in _ARANGE_CACHE:
        _ARANGE_CACHE[n] = np.arange(1 << n, dtype=np.int64)
    return _ARANGE_CACHE[n]


def subset_measures(mu: np.ndarray) -> np.ndarray:
    """meas[mask] = sum of mu over the set bits, bit index ascending."""
    meas = np.zeros(1, dtype=np.float64)
    for i in range(len(mu)):
        meas = np.concatenate([meas, meas + mu[i]])
    return meas


def max_complement_measure(
    balls: np.ndarray, mu: np.ndarray, meas: np.ndarray, threshold: float
) -> tuple[float, int]:
    """Scan all masks A with meas[A] >= threshold for the largest measure
    of {x : A does not meet balls[x]}; first maximizer in mask order wins.

    balls[x] is the bitmask of the (open or closed) ball around x.
    """
    n = len(mu)
    masks = _masks(n)
    outside = np.zeros(1 << n, dtype=np.float64)
    for x in range(n):
        outside[(masks & int(balls[x])) == 0] += mu[x]
    outside[meas < threshold] = -1.0
    best = int(np.argmax(outside))
    return float(outside[best]), best


def max_coverage_deficit(
    cballs: np.ndarray, mu: np.ndarray, nu_meas: np.ndarray
) -> float:
    """max over masks A of nu(A) - mu(union of closed balls over A).

    cballs[x] is the closed ball around x at the current threshold, so the
    union-of-balls measure is the mass of {x : A meets cballs[x]}.
    """
    n = len(mu)
    masks = _masks(n)
    covered = np.zeros(1 << n, dtype=np.float64)
    for x in range(n):
        covered[(masks & int(cballs[x])) != 0] += mu[x]
    return float(np.max(nu_meas - covered))


def sep_feasible(
    compat: np.ndarray,
    mu: np.ndarray,
    meas: np.ndarray,
    kappas: np.ndarray,
    slack: float,
) -> list[int] | None:
    """Branch-and-bound assignment of points to len(kappas) classes.

    compat[p] is the bitmask of points q with d(p, q) >= r. A feasible
    result is one class bitmask per kappa with class measures meeting the
    quotas and every cross-class pair compatible. Points are branched in
    index order, classes tried in ascending order before "unassigned", and
    the search stops at the first solution, which makes the witness
    deterministic. Returns None when no assignment exists.
    """
    n = len(mu)
    nclass = len(kappas)
    full = (1 << n) - 1
    suffix = [0.0] * (n + 1)
    for p in range(n - 1, -1, -1):
        suffix[p] = suffix[p + 1] + float(mu[p])
    compat_int = [int(c) for c in compat]
    kap = [float(k) for k in kappas]
    got = [0.0] * nclass
    allowed = [full] * nclass
    class_masks = [0] * nclass

    def descend(p: int) -> bool:
        if all(got[c] >= kap[c] - slack for c in range(nclass)):
            return True
        if p == n:
            return False
        need = 0.0
        for c in range(nclass):
            deficit = kap[c] - got[c]
            if deficit > 0.0:
                need += deficit
        if need > suffix[p] + slack:
            return False
        suffix_mask = (full >> p) << p
        for c in range(nclass):
            if got[c] < kap[c] - slack:
                if got[c] + float(meas[allowed[c] & suffix_mask]) < kap[c] - slack:
                    return False
        for c in range(nclass):
            if (allowed[c] >> p) & 1:
                saved = allowed.copy()
                for c2 in range(nclass):
                    if c2 != c:
                        allowed[c2] &= compat_int[p]
                got[c] += float(mu[p])
                class_masks[c] |= 1 << p
                if descend(p + 1):
                    return True
                class_masks[c] &= ~(1 << p)
                got[c] -= float(mu[p])
                allowed[:] = saved
        return descend(p + 1)

    if descend(0):
        return list(class_masks)
    return None
