"""Finite metric measure spaces: construction, validation, subsets, file I/O.

A Space is a finite point set with a symmetric distance matrix satisfying
the triangle inequality and a strictly positive probability vector mu.
Spaces built from edge lists keep the edges so the spectral module can
assemble a weighted graph Laplacian.

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    AsymmetricDistance,
    BadParameter,
    DisconnectedGraph,
    EmptySubset,
    NonpositiveEdgeLength,
    NotProbability,
    SchemaError,
    TriangleViolation,
    ValidationError,
)
from .jsonio import dumps_canonical

TRIANGLE_TOL = 1e-9
MU_SUM_TOL = 1e-9
METRIC_MATCH_TOL = 1e-9

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Space:
    """A finite metric measure space.

    Attributes:
        labels: point names, length n.
        dist: (n, n) symmetric distance matrix, zero diagonal.
        mu: length-n strictly positive weights summing to 1.
        edges: optional tuple of (i, j, length) edges whose shortest-path
            metric equals dist; present iff the space was built from a graph.
        name: free-form identifier carried through serialization.
    """

    labels: tuple[str, ...]
    dist: np.ndarray
    mu: np.ndarray
    edges: tuple[Edge, ...] | None = None
    name: str = ""

    def __post_init__(self):
        self.dist.flags.writeable = False
        self.mu.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.labels)

    def subset(self, members: Iterable[int]) -> "Subset":
        return subset_of(self, members)

    def scale(self, s: float) -> "Space":
        """Return the space with all distances multiplied by s > 0."""
        if s <= 0:
            raise BadParameter("scale factor must be positive")
        edges = None
        if self.edges is not None:
            edges = tuple((i, j, l * s) for i, j, l in self.edges)
        return Space(
            labels=self.labels,
            dist=np.array(self.dist * s, dtype=float),
            mu=np.array(self.mu, dtype=float),
            edges=edges,
            name=f"{self.name}*{s:g}" if self.name else "",
        )

    def to_jsonable(self) -> dict:
        doc = {
            "name": self.name,
            "labels": list(self.labels),
            "dist": [[float(v) for v in row] for row in self.dist],
            "mu": [float(v) for v in self.mu],
        }
        if self.edges is not None:
            doc["edges"] = [[i, j, float(l)] for i, j, l in self.edges]
        return doc


@dataclass(frozen=True)
class Subset:
    """A point subset with its measure under the ambient space's mu."""

    members: tuple[int, ...]
    measure: float

    @property
    def size(self) -> int:
        return len(self.members)

    def bitmask(self) -> int:
        m = 0
        for i in self.members:
            m |= 1 << i
        return m


def subset_of(space: Space, members: Iterable[int]) -> Subset:
    idx = sorted(set(int(i) for i in members))
    if idx and (idx[0] < 0 or idx[-1] >= space.n):
        raise BadParameter(f"subset indices out of range for n={space.n}")
    measure = float(space.mu[idx].sum()) if idx else 0.0
    return Subset(members=tuple(idx), measure=measure)


def subset_from_mask(space: Space, mask: int) -> Subset:
    return subset_of(space, [i for i in range(space.n) if (mask >> i) & 1])


def _as_indices(space: Space, A) -> list[int]:
    if isinstance(A, Subset):
        return list(A.members)
    return sorted(set(int(i) for i in A))


def build_space(
    labels: Sequence[str],
    dist,
    mu,
    edges: Sequence[Edge] | None = None,
    name: str = "",
) -> Space:
    """Validate inputs and return an immutable Space.

    Raises AsymmetricDistance, TriangleViolation (with witness triple),
    NotProbability, or ValidationError on malformed input. When edges are
    supplied, their shortest-path metric must reproduce dist within 1e-9.
    """
    labels = tuple(str(s) for s in labels)
    n = len(labels)
    if n == 0:
        raise ValidationError("a space needs at least one point")
    dist = np.array(dist, dtype=float)
    mu = np.array(mu, dtype=float)
    if dist.shape != (n, n):
        raise ValidationError(f"dist must be {n}x{n}, got {dist.shape}")
    if mu.shape != (n,):
        raise ValidationError(f"mu must have length {n}, got {mu.shape}")
    if not np.all(np.isfinite(dist)) or not np.all(np.isfinite(mu)):
        raise ValidationError("dist and mu must be finite")
    if np.any(dist != dist.T):
        i, j = np.argwhere(dist != dist.T)[0]
        raise AsymmetricDistance(f"dist[{i}][{j}] != dist[{j}][{i}]")
    if np.any(np.diag(dist) != 0.0):
        raise ValidationError("dist must vanish on the diagonal")
    off = ~np.eye(n, dtype=bool)
    if n > 1 and np.any(dist[off] <= 0.0):
        i, j = np.argwhere((dist <= 0.0) & off)[0]
        raise ValidationError(f"off-diagonal distance dist[{i}][{j}] must be positive")
    # d(i,k) <= min_j d(i,j) + d(j,k), checked in one broadcast sweep
    through = (dist[:, :, None] + dist[None, :, :]).min(axis=1)
    excess = dist - through
    worst = np.unravel_index(np.argmax(excess), excess.shape)
    if excess[worst] > TRIANGLE_TOL:
        i, k = map(int, worst)
        j = int(np.argmin(dist[i, :] + dist[:, k]))
        raise TriangleViolation(i, j, k, float(excess[worst]))
    if np.any(mu <= 0.0):
        raise NotProbability("mu must be strictly positive (full support)")
    if abs(float(mu.sum()) - 1.0) > MU_SUM_TOL:
        raise NotProbability(f"mu sums to {mu.sum():.12g}, not 1")
    clean_edges = None
    if edges is not None:
        clean_edges = _validate_edges(n, edges)
        metric = _shortest_path_metric(n, clean_edges)
        if not np.all(np.isfinite(metric)):
            raise DisconnectedGraph("edge list does not connect all points")
        if np.max(np.abs(metric - dist)) > METRIC_MATCH_TOL:
            raise ValidationError("dist does not match the shortest-path metric of edges")
    return Space(labels=labels, dist=dist, mu=mu, edges=clean_edges, name=str(name))


def _validate_edges(n: int, edges: Sequence[Edge]) -> tuple[Edge, ...]:
    seen = set()
    clean = []
    for e in edges:
        if len(e) != 3:
            raise SchemaError(f"edge {e!r} is not an (i, j, length) triple")
        i, j, length = int(e[0]), int(e[1]), float(e[2])
        if i < 0 or j < 0 or i >= n or j >= n:
            raise ValidationError(f"edge ({i},{j}) out of range for n={n}")
        if i == j:
            raise ValidationError(f"self-loop at point {i}")
        if length <= 0 or not np.isfinite(length):
            raise NonpositiveEdgeLength(f"edge ({i},{j}) has length {length}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValidationError(f"duplicate edge {key}")
        seen.add(key)
        clean.append((i, j, length))
    return tuple(clean)


def _shortest_path_metric(n: int, edges: Sequence[Edge]) -> np.ndarray:
    rows = [e[0] for e in edges] + [e[1] for e in edges]
    cols = [e[1] for e in edges] + [e[0] for e in edges]
    vals = [e[2] for e in edges] * 2
    graph = csr_matrix((vals, (rows, cols)), shape=(n, n))
    metric = shortest_path(graph, method="D", directed=False)
    # Dijkstra may differ by an ulp between directions; the metric is symmetric
    return np.minimum(metric, metric.T)


def build_graph_space(
    labels: Sequence[str],
    edges: Sequence[Edge],
    mu,
    name: str = "",
) -> Space:
    """Build a space whose metric is the shortest-path metric of edges."""
    n = len(labels)
    clean = _validate_edges(n, edges)
    metric = _shortest_path_metric(n, clean)
    if not np.all(np.isfinite(metric)):
        raise DisconnectedGraph("edge list does not connect all points")
    return build_space(labels, metric, mu, edges=clean, name=name)


# ---------------------------------------------------------------------------
# Named families
# ---------------------------------------------------------------------------


def _uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


def _two_point(d: float = 1.0) -> Space:
    if d <= 0:
        raise BadParameter("two_point needs d > 0")
    return build_graph_space(
        ["a", "b"], [(0, 1, float(d))], _uniform(2), name=f"two_point({d:g})"
    )


def _cycle(n: int) -> Space:
    if n < 3:
        raise BadParameter("cycle needs n >= 3")
    edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    return build_graph_space([str(i) for i in range(n)], edges, _uniform(n), name=f"cycle({n})")


def _path(n: int) -> Space:
    if n < 2:
        raise BadParameter("path needs n >= 2")
    edges = [(i, i + 1, 1.0) for i in range(n - 1)]
    return build_graph_space([str(i) for i in range(n)], edges, _uniform(n), name=f"path({n})")


def _torus(n1: int, n2: int) -> Space:
    if n1 < 3 or n2 < 3:
        raise BadParameter("torus needs n1, n2 >= 3")
    def pid(a, b):
        return a * n2 + b
    edges = []
    for a in range(n1):
        for b in range(n2):
            edges.append((pid(a, b), pid((a + 1) % n1, b), 1.0))
            edges.append((pid(a, b), pid(a, (b + 1) % n2), 1.0))
    labels = [f"{a},{b}" for a in range(n1) for b in range(n2)]
    return build_graph_space(labels, edges, _uniform(n1 * n2), name=f"torus({n1},{n2})")


def _hypercube(d: int) -> Space:
    if d < 1:
        raise BadParameter("hypercube needs d >= 1")
    n = 1 << d
    edges = []
    for v in range(n):
        for bit in range(d):
            w = v ^ (1 << bit)
            if v < w:
                edges.append((v, w, 1.0))
    labels = [format(v, f"0{d}b") for v in range(n)]
    return build_graph_space(labels, edges, _uniform(n), name=f"hypercube({d})")


def _random(n: int, seed: int) -> Space:
    """Shortest-path metric of a seeded random connected weighted graph.

    The construction guarantees the metric axioms; identical seeds give
    byte-identical canonical JSON across runs and platforms.
    """
    if n < 2:
        raise BadParameter("random needs n >= 2")
    rng = np.random.default_rng(int(seed))
    edges = []
    present = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.append((u, v, float(rng.uniform(0.5, 1.5))))
        present.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) in present:
                continue
            if rng.random() < 0.3:
                edges.append((u, v, float(rng.uniform(0.5, 1.5))))
    return build_graph_space(
        [str(i) for i in range(n)], edges, _uniform(n), name=f"random({n},{seed})"
    )


_FAMILIES = {
    "two_point": _two_point,
    "cycle": _cycle,
    "path": _path,
    "torus": _torus,
    "hypercube": _hypercube,
    "random": _random,
}


def family(kind: str, **params) -> Space:
    """Construct a named space family member, uniform mu unless overridden.

    Kinds: two_point(d), cycle(n), path(n), torus(n1, n2), hypercube(d),
    random(n, seed).
    """
    if kind not in _FAMILIES:
        raise BadParameter(f"unknown family kind {kind!r}")
    mu = params.pop("mu", None)
    try:
        space = _FAMILIES[kind](**params)
    except TypeError as exc:
        raise BadParameter(f"bad parameters for {kind}: {exc}") from None
    if mu is not None:
        space = build_space(space.labels, space.dist, mu, edges=space.edges, name=space.name)
    return space


# ---------------------------------------------------------------------------
# Subset geometry
# ---------------------------------------------------------------------------


def neighborhood(space: Space, A, r: float, closed: bool = True) -> Subset:
    """Closed (d <= r) or open (d < r) r-neighborhood of a subset."""
    idx = _as_indices(space, A)
    if not idx:
        raise EmptySubset("neighborhood of the empty set")
    if r < 0:
        raise BadParameter("radius must be >= 0")
    d = space.dist[:, idx].min(axis=1)
    members = np.flatnonzero(d <= r) if closed else np.flatnonzero(d < r)
    return subset_of(space, members)


def set_distance(space: Space, A, B) -> float:
    """dist(A, B) = min over pairs; zero when the subsets intersect."""
    a = _as_indices(space, A)
    b = _as_indices(space, B)
    if not a or not b:
        raise EmptySubset("set_distance of an empty set")
    return float(space.dist[np.ix_(a, b)].min())


# ---------------------------------------------------------------------------
# Canonical file format
# ---------------------------------------------------------------------------


def space_to_json(space: Space) -> str:
    return dumps_canonical(space.to_jsonable())


def space_from_document(doc) -> Space:
    if not isinstance(doc, dict):
        raise SchemaError("space document must be a JSON object")
    for key in doc:
        if key not in {"name", "labels", "dist", "edges", "mu"}:
            raise SchemaError(f"unknown key {key!r}")
    if "labels" not in doc or not isinstance(doc["labels"], list):
        raise SchemaError('missing or malformed "labels"')
    if "mu" not in doc:
        raise SchemaError('missing "mu"')
    labels = [str(s) for s in doc["labels"]]
    n = len(labels)
    mu = doc["mu"]
    if not isinstance(mu, list) or len(mu) != n:
        raise SchemaError('"mu" must be a list matching labels')
    edges = doc.get("edges")
    if edges is not None:
        if not isinstance(edges, list) or any(
            not isinstance(e, list) or len(e) != 3 for e in edges
        ):
            raise SchemaError('"edges" must be a list of [i, j, length] triples')
        edges = [(int(e[0]), int(e[1]), float(e[2])) for e in edges]
    dist = doc.get("dist")
    if dist is None and edges is None:
        raise SchemaError('need "dist" or "edges"')
    if dist is not None:
        if not isinstance(dist, list) or len(dist) != n or any(
            not isinstance(row, list) or len(row) != n for row in dist
        ):
            raise SchemaError(f'"dist" must be an {n}x{n} matrix')
        return build_space(labels, dist, mu, edges=edges, name=str(doc.get("name", "")))
    return build_graph_space(labels, edges, mu, name=str(doc.get("name", "")))


def loads_space(text: str) -> Space:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return space_from_document(doc)


def read_space(path) -> Space:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_space(fh.read())


def write_space(space: Space, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(space_to_json(space))
