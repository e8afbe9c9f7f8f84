"""Weighted graph Laplacian, spectra, heat kernels, and eigenvalue probes.

The weighted Laplacian of a graph space acts by
    (Lf)(x) = (1/mu(x)) * sum_{y ~ x} w (f(x) - f(y)),
with a uniform conductance w = 1/n per edge unless overridden. The
operator is self-adjoint in L2(mu); substituting g = sqrt(mu) f makes the
eigenproblem symmetric, so a dense symmetric eigensolve gives eigenvalues
and mu-orthonormal eigenfunctions. With the default conductance the
n-cycle has eigenvalues 2 - 2 cos(2 pi j / n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadOrder,
    BadParameter,
    BadTime,
    DegenerateSets,
    EmptySubset,
    NoGraphData,
    PreconditionViolated,
    ZeroGap,
)
from .report import DIAGNOSTIC, Check, CheckReport
from .space import Space, Subset, set_distance, subset_of

SIGN_TOL = 1e-12


def _conductance(space: Space, edge_weight: float | None) -> float:
    if edge_weight is None:
        return 1.0 / space.n
    if edge_weight <= 0:
        raise BadParameter("edge_weight must be positive")
    return float(edge_weight)


def laplacian(space: Space, edge_weight: float | None = None) -> np.ndarray:
    """Matrix of the weighted Laplacian on a graph space.

    Nonnegative and self-adjoint in L2(mu); rows scale by 1/mu(x).
    """
    if space.edges is None:
        raise NoGraphData("laplacian needs a graph space")
    w = _conductance(space, edge_weight)
    n = space.n
    L = np.zeros((n, n))
    for i, j, _length in space.edges:
        L[i, i] += w
        L[j, j] += w
        L[i, j] -= w
        L[j, i] -= w
    return L / space.mu[:, None]


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with mu-orthonormal eigenfunction columns."""

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    conductance_convention: str = "edge=1/n"

    def to_jsonable(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "conductance_convention": self.conductance_convention,
        }


def spectrum(space: Space, edge_weight: float | None = None) -> Spectrum:
    """Dense eigensolve of the mu-symmetrized Laplacian.

    Eigenfunction signs follow a fixed convention (first entry above the
    noise floor made positive) so repeated runs agree.
    """
    if space.edges is None:
        raise NoGraphData("spectrum needs a graph space")
    w = _conductance(space, edge_weight)
    n = space.n
    sqrt_mu = np.sqrt(space.mu)
    sym = np.zeros((n, n))
    for i, j, _length in space.edges:
        sym[i, i] += w / space.mu[i]
        sym[j, j] += w / space.mu[j]
        coupling = w / (sqrt_mu[i] * sqrt_mu[j])
        sym[i, j] -= coupling
        sym[j, i] -= coupling
    vals, vecs = np.linalg.eigh(sym)
    funcs = vecs / sqrt_mu[:, None]
    for col in range(n):
        scale = np.max(np.abs(funcs[:, col]))
        for entry in funcs[:, col]:
            if abs(entry) > SIGN_TOL * scale:
                if entry < 0:
                    funcs[:, col] = -funcs[:, col]
                break
    convention = "edge=1/n" if edge_weight is None else f"edge={w:.17g}"
    return Spectrum(eigenvalues=vals, eigenfunctions=funcs, conductance_convention=convention)


@dataclass(frozen=True)
class HeatKernel:
    """p_t(x, y) from the eigen-expansion; symmetric and mu-stochastic."""

    t: float
    values: np.ndarray

    def to_jsonable(self) -> dict:
        return {"t": self.t, "values": [[float(v) for v in row] for row in self.values]}


def heat_kernel(space: Space, t: float, edge_weight: float | None = None) -> HeatKernel:
    if t <= 0:
        raise BadTime("heat-kernel time must be positive")
    spec = spectrum(space, edge_weight)
    decay = np.exp(-spec.eigenvalues * t)
    values = (spec.eigenfunctions * decay) @ spec.eigenfunctions.T
    return HeatKernel(t=float(t), values=values)


def davies_gaffney_check(space: Space, A, B, t_grid, edge_weight: float | None = None) -> CheckReport:
    """Compare int_A int_B p_t dmu dmu against the Gaussian-type bound
    sqrt(mu(A) mu(B)) exp(-dist(A,B)^2 / 4t) for each t.

    Diagnostic: the continuous-space estimate can fail on coarse graphs at
    small t, so violations are reported with margins, never asserted.
    """
    sub_a = A if isinstance(A, Subset) else subset_of(space, A)
    sub_b = B if isinstance(B, Subset) else subset_of(space, B)
    if not sub_a.members or not sub_b.members:
        raise EmptySubset("davies_gaffney needs nonempty subsets")
    if set(sub_a.members) & set(sub_b.members):
        raise PreconditionViolated("davies_gaffney needs disjoint subsets")
    d_ab = set_distance(space, sub_a, sub_b)
    bound_scale = float(np.sqrt(sub_a.measure * sub_b.measure))
    ia = list(sub_a.members)
    ib = list(sub_b.members)
    checks = []
    for t in (float(t) for t in t_grid):
        kernel = heat_kernel(space, t, edge_weight).values
        lhs = float(np.einsum("x,y,xy->", space.mu[ia], space.mu[ib], kernel[np.ix_(ia, ib)]))
        rhs = bound_scale * float(np.exp(-d_ab ** 2 / (4.0 * t)))
        checks.append(
            Check(
                name=f"davies_gaffney[t={t!r}]",
                status=DIAGNOSTIC,
                measured={"t": t, "lhs": lhs, "rhs": rhs, "margin": rhs - lhs},
                witness={"A": list(sub_a.members), "B": list(sub_b.members)},
            )
        )
    return CheckReport(suite="davies_gaffney", checks=checks)


def _validated_disjoint_sets(space: Space, sets) -> list[Subset]:
    subsets = [s if isinstance(s, Subset) else subset_of(space, s) for s in sets]
    if len(subsets) < 2:
        raise BadParameter("need at least two subsets")
    seen: set[int] = set()
    for sub in subsets:
        if not sub.members:
            raise EmptySubset("subsets must be nonempty")
        if seen & set(sub.members):
            raise PreconditionViolated("subsets must be pairwise disjoint")
        seen.update(sub.members)
    return subsets


def _cgy_ratio(space: Space, subsets: list[Subset], k: int, edge_weight: float | None) -> float:
    min_d = np.inf
    max_log = 0.0
    for i in range(len(subsets)):
        for j in range(i + 1, len(subsets)):
            min_d = min(min_d, set_distance(space, subsets[i], subsets[j]))
            max_log = max(max_log, float(np.log(1.0 / (subsets[i].measure * subsets[j].measure))))
    if max_log <= 0.0:
        raise DegenerateSets("every measure product equals 1")
    lam_k = float(spectrum(space, edge_weight).eigenvalues[k])
    return lam_k * min_d ** 2 / max_log ** 2


def cgy_constant(space: Space, sets, edge_weight: float | None = None) -> float:
    """Empirical constant of the k = l eigenvalue bound: the smallest c with
    lambda_k <= c / min dist(A_i, A_j)^2 * (max log 1/(mu_i mu_j))^2
    on this instance, where k + 1 = len(sets).
    """
    subsets = _validated_disjoint_sets(space, sets)
    k = len(subsets) - 1
    return _cgy_ratio(space, subsets, k, edge_weight)


def thm1_constant(space: Space, sets, k: int, edge_weight: float | None = None) -> float:
    """Per-iteration empirical constant of the subset-reduction bound:
    the k = l ratio raised to 1/(k - l + 1), where l + 1 = len(sets)."""
    subsets = _validated_disjoint_sets(space, sets)
    l = len(subsets) - 1
    if l > k:
        raise BadOrder(f"need l <= k, got l={l}, k={k}")
    if k >= space.n:
        raise BadParameter(f"eigenvalue index k={k} needs k < n={space.n}")
    ratio = _cgy_ratio(space, subsets, k, edge_weight)
    return float(ratio ** (1.0 / (k - l + 1)))


def eigen_ratio_probe(space: Space, kmax: int, edge_weight: float | None = None) -> list[float]:
    """Consecutive eigenvalue ratios [lambda_2/lambda_1, ...], kmax entries.

    Diagnostic data for the universal-ratio conjecture; all entries are
    >= 1 because the eigenvalues ascend.
    """
    if kmax < 1 or kmax + 1 >= space.n:
        raise BadParameter(f"need 1 <= kmax <= n-2, got kmax={kmax}, n={space.n}")
    vals = spectrum(space, edge_weight).eigenvalues
    if vals[1] <= 1e-9:
        raise ZeroGap("lambda_1 vanishes (disconnected graph)")
    return [float(vals[j + 1] / vals[j]) for j in range(1, kmax + 1)]
