# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the exhaustive subset scans.

Mirrors _fallback.py operation for operation; summation orders and
tie-breaking are kept identical so both backends return the same bits.
"""

import numpy as np


def subset_measures(const double[::1] mu):
    """meas[mask] = sum of mu over the set bits, bit index ascending."""
    cdef int n = mu.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    out = np.zeros(size, dtype=np.float64)
    cdef double[::1] m = out
    cdef int i
    cdef Py_ssize_t mask, lo
    for i in range(n):
        lo = (<Py_ssize_t>1) << i
        for mask in range(lo, lo << 1):
            m[mask] = m[mask - lo] + mu[i]
    return out


def max_complement_measure(const long long[::1] balls, const double[::1] mu,
                           const double[::1] meas, double threshold):
    """First mask A with meas[A] >= threshold maximizing the mass of
    {x : A does not meet balls[x]}."""
    cdef int n = mu.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t A, best_mask = 0
    cdef long long Amask
    cdef double best = -1.0, acc
    cdef int x
    for A in range(size):
        if meas[A] >= threshold:
            acc = 0.0
            Amask = <long long>A
            for x in range(n):
                if (Amask & balls[x]) == 0:
                    acc += mu[x]
        else:
            acc = -1.0
        if acc > best:
            best = acc
            best_mask = A
    return float(best), int(best_mask)


def max_coverage_deficit(const long long[::1] cballs, const double[::1] mu,
                         const double[::1] nu_meas):
    """max over masks A of nu(A) - mu(union of closed balls over A)."""
    cdef int n = mu.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t A
    cdef long long Amask
    cdef double best = -1e300, acc, d
    cdef int x
    for A in range(size):
        acc = 0.0
        Amask = <long long>A
        for x in range(n):
            if (Amask & cballs[x]) != 0:
                acc += mu[x]
        d = nu_meas[A] - acc
        if d > best:
            best = d
    return float(best)


cdef bint _descend(int p, int n, int nclass, long long full,
                   const long long[::1] compat, const double[::1] mu,
                   const double[::1] meas, const double[::1] kap,
                   double slack, double[::1] suffix,
                   double[::1] got, long long[::1] allowed,
                   long long[::1] class_masks, long long[:, ::1] stack):
    cdef int c, c2
    cdef double need, deficit
    cdef long long suffix_mask, bit
    cdef bint met = True
    for c in range(nclass):
        if got[c] < kap[c] - slack:
            met = False
            break
    if met:
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
            if got[c] + meas[<Py_ssize_t>(allowed[c] & suffix_mask)] < kap[c] - slack:
                return False
    bit = (<long long>1) << p
    for c in range(nclass):
        if (allowed[c] >> p) & 1:
            for c2 in range(nclass):
                stack[p, c2] = allowed[c2]
            for c2 in range(nclass):
                if c2 != c:
                    allowed[c2] = allowed[c2] & compat[p]
            got[c] += mu[p]
            class_masks[c] |= bit
            if _descend(p + 1, n, nclass, full, compat, mu, meas, kap, slack,
                        suffix, got, allowed, class_masks, stack):
                return True
            class_masks[c] &= ~bit
            got[c] -= mu[p]
            for c2 in range(nclass):
                allowed[c2] = stack[p, c2]
    return _descend(p + 1, n, nclass, full, compat, mu, meas, kap, slack,
                    suffix, got, allowed, class_masks, stack)


def sep_feasible(const long long[::1] compat, const double[::1] mu, const double[::1] meas,
                 const double[::1] kappas, double slack):
    """Branch-and-bound class assignment; see _fallback.sep_feasible."""
    cdef int n = mu.shape[0]
    cdef int nclass = kappas.shape[0]
    cdef long long full = ((<long long>1) << n) - 1
    suffix_arr = np.zeros(n + 1, dtype=np.float64)
    cdef double[::1] suffix = suffix_arr
    cdef int p
    for p in range(n - 1, -1, -1):
        suffix[p] = suffix[p + 1] + mu[p]
    got_arr = np.zeros(nclass, dtype=np.float64)
    allowed_arr = np.full(nclass, full, dtype=np.int64)
    masks_arr = np.zeros(nclass, dtype=np.int64)
    stack_arr = np.zeros((n + 1, nclass), dtype=np.int64)
    cdef double[::1] got = got_arr
    cdef long long[::1] allowed = allowed_arr
    cdef long long[::1] class_masks = masks_arr
    cdef long long[:, ::1] stack = stack_arr
    if _descend(0, n, nclass, full, compat, mu, meas, kappas, slack, suffix,
                got, allowed, class_masks, stack):
        return [int(class_masks[c]) for c in range(nclass)]
    return None
