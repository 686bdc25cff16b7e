"""Undirected weighted collaboration network and centrality measures.

Distances for closeness and betweenness are unweighted hop counts, computed
per connected component. The heavy all-source traversals live in
``patmine._accel`` so they can run under numba.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .ingest import CoRegistrationEdge


@dataclass
class CollabNetwork:
    """CSR-stored undirected graph over contributor names."""

    names: list[str]
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    edge_count: int
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        if not self._index:
            self._index.update({nm: i for i, nm in enumerate(self.names)})
        return self._index[name]

    def strengths(self) -> np.ndarray:
        """Sum of incident edge weights per node."""
        out = np.zeros(self.n)
        np.add.at(out, self.indices, self.weights)
        return out

    def degrees(self) -> np.ndarray:
        """Neighbor count per node."""
        return np.diff(self.indptr).astype(np.float64)


@dataclass
class CentralityScores:
    measure: str
    names: list[str]
    values: np.ndarray
    normalization: str
    converged: bool = True

    def as_dict(self) -> dict[str, float]:
        return {nm: float(v) for nm, v in zip(self.names, self.values)}


def build_network(edges: list[CoRegistrationEdge]) -> CollabNetwork:
    """Assemble the CSR network from canonical co-registration edges.

    Nodes are exactly the names appearing in edges; duplicate pairs are
    aggregated by weight summation. Self-loops are rejected.
    """
    agg: dict[tuple[str, str], float] = {}
    for e in edges:
        if e.source == e.target:
            raise ValueError(f"self-loop edge on node {e.source!r}")
        a, b = (e.source, e.target) if e.source < e.target else (e.target, e.source)
        agg[(a, b)] = agg.get((a, b), 0.0) + float(e.weight)

    names = sorted({n for pair in agg for n in pair})
    index = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    m = len(agg)
    us = np.empty(2 * m, np.int64)
    vs = np.empty(2 * m, np.int64)
    ws = np.empty(2 * m, np.float64)
    for i, ((a, b), w) in enumerate(agg.items()):
        ua, ub = index[a], index[b]
        us[2 * i], vs[2 * i], ws[2 * i] = ua, ub, w
        us[2 * i + 1], vs[2 * i + 1], ws[2 * i + 1] = ub, ua, w
    order = np.lexsort((vs, us))
    us, vs, ws = us[order], vs[order], ws[order]
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, us + 1, 1)
    indptr = np.cumsum(indptr)
    net = CollabNetwork(names, indptr, vs, ws, edge_count=m)
    net._index = index
    return net


def average_degree(n: int, edge_count: int) -> float:
    return 2.0 * edge_count / n if n else 0.0


def density(n: int, edge_count: int) -> float:
    if n < 2:
        return 0.0
    return 2.0 * edge_count / (n * (n - 1))


def degree_stats(net: CollabNetwork) -> dict[str, float]:
    n = net.n
    return {
        "average_degree": average_degree(n, net.edge_count),
        "average_weighted_degree": float(net.strengths().sum() / n) if n else 0.0,
        "density": density(n, net.edge_count),
    }


def degree(net: CollabNetwork) -> CentralityScores:
    return CentralityScores("degree", net.names, net.degrees(), "raw neighbor count")


def weighted_degree(net: CollabNetwork) -> CentralityScores:
    return CentralityScores("weighted_degree", net.names, net.strengths(),
                            "sum of incident weights")


def closeness(net: CollabNetwork, weighted: bool = False) -> CentralityScores:
    """(n-1)/sum-of-distances within each node's component.

    Distances are unweighted hop counts by default; with ``weighted`` they
    are shortest-path sums of inverse edge weights (heavier collaborations
    sit closer).
    """
    mode = "inverse-weight lengths" if weighted else "hop counts"
    norm_desc = f"per-component (n-1)/sum_dist, {mode}"
    if net.n == 0:
        return CentralityScores("closeness", [], np.zeros(0), norm_desc)
    if weighted:
        sumdist, reach = _accel.dijkstra_closeness_sums(
            net.indptr, net.indices, 1.0 / net.weights, net.n)
    else:
        sumdist, reach = _accel.closeness_sums(net.indptr, net.indices, net.n)
    values = np.zeros(net.n)
    mask = reach > 1
    values[mask] = (reach[mask] - 1) / sumdist[mask]
    return CentralityScores("closeness", net.names, values, norm_desc)


def betweenness(net: CollabNetwork, normalized: bool = True,
                weighted: bool = False) -> CentralityScores:
    """Exact shortest-path betweenness, summed over unordered pairs.

    When ``normalized`` each node's value is divided by (n-1)(n-2)/2 with n
    the size of its connected component. ``weighted`` switches shortest
    paths from hop counts to inverse-weight lengths.
    """
    if net.n == 0:
        return CentralityScores("betweenness", [], np.zeros(0), "empty")
    if weighted:
        values = _accel.betweenness_weighted(
            net.indptr, net.indices, 1.0 / net.weights, net.n)
    else:
        values = _accel.betweenness(net.indptr, net.indices, net.n)
    mode = "inverse-weight lengths" if weighted else "hop counts"
    if normalized:
        comp_ids, sizes = connected_components(net)
        comp_n = np.array([sizes[c] for c in comp_ids], np.float64)
        denom = (comp_n - 1) * (comp_n - 2) / 2.0
        values = np.where(denom > 0, values / np.maximum(denom, 1.0), 0.0)
        norm_desc = f"pairs (n-1)(n-2)/2 per component, {mode}"
    else:
        norm_desc = f"raw pair fractions, {mode}"
    return CentralityScores("betweenness", net.names, values, norm_desc)


def eigenvector(net: CollabNetwork, max_iter: int = 1000,
                tol: float = 1e-9) -> CentralityScores:
    """Dominant eigenvector of the weighted adjacency, per component.

    Power iteration with a spectral shift (x + Ax/smax) so bipartite
    components cannot oscillate; the shift also makes the iteration
    invariant to uniform weight scaling. Each component is rescaled to a
    maximum entry of 1.
    """
    n = net.n
    if n == 0:
        return CentralityScores("eigenvector", [], np.zeros(0), "max entry 1")
    comp_ids, sizes = connected_components(net)
    ncomp = len(sizes)
    strengths = net.strengths()
    smax = np.zeros(ncomp)
    np.maximum.at(smax, comp_ids, strengths)
    scale = smax[comp_ids]
    scale[scale == 0] = 1.0

    x = np.ones(n)
    converged = False
    for _ in range(max_iter):
        y = x + _accel.matvec(net.indptr, net.indices, net.weights, x) / scale
        cmax = np.zeros(ncomp)
        np.maximum.at(cmax, comp_ids, y)
        y = y / cmax[comp_ids]
        diff = np.abs(y - x).max()
        x = y
        if diff < tol:
            converged = True
            break
    return CentralityScores("eigenvector", net.names, x,
                            "per-component max entry 1", converged=converged)


def connected_components(net: CollabNetwork) -> tuple[np.ndarray, list[int]]:
    """Per-node component id plus component sizes.

    Ids are dense 0..c-1, ordered by decreasing size, ties broken by the
    lexicographically smallest member name.
    """
    n = net.n
    raw = np.full(n, -1, np.int64)
    nraw = 0
    stack = []
    for s in range(n):
        if raw[s] >= 0:
            continue
        raw[s] = nraw
        stack.append(s)
        while stack:
            v = stack.pop()
            for ei in range(net.indptr[v], net.indptr[v + 1]):
                w = net.indices[ei]
                if raw[w] < 0:
                    raw[w] = nraw
                    stack.append(w)
        nraw += 1
    sizes = np.bincount(raw, minlength=nraw) if n else np.zeros(0, np.int64)
    min_name = [None] * nraw
    for i, nm in enumerate(net.names):
        c = raw[i]
        if min_name[c] is None or nm < min_name[c]:
            min_name[c] = nm
    order = sorted(range(nraw), key=lambda c: (-int(sizes[c]), min_name[c]))
    relabel = np.empty(nraw, np.int64)
    for new, old in enumerate(order):
        relabel[old] = new
    ids = relabel[raw] if n else raw
    return ids, [int(sizes[c]) for c in order]


def top_k(scores: CentralityScores, k: int) -> list[tuple[str, float]]:
    """Top-k (name, value), descending value, ties by ascending name."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(zip(scores.names, scores.values),
                    key=lambda nv: (-nv[1], nv[0]))
    return [(nm, float(v)) for nm, v in ranked[:k]]


def internal_edge_counts(net: CollabNetwork, assignment: np.ndarray) -> dict[int, int]:
    """Number of edges whose endpoints share an assignment label."""
    counts: dict[int, int] = defaultdict(int)
    for u in range(net.n):
        for ei in range(net.indptr[u], net.indptr[u + 1]):
            v = net.indices[ei]
            if u < v and assignment[u] == assignment[v]:
                counts[int(assignment[u])] += 1
    return dict(counts)
