"""Community detection by greedy modularity maximization (Louvain scheme).

Weighted local moves followed by graph aggregation, repeated until no move
improves modularity. Node visit order is shuffled from the seed, so a fixed
seed gives a byte-identical partition; equal-gain moves go to the lowest
community id.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import CollabNetwork, internal_edge_counts


@dataclass
class Partition:
    assignment: np.ndarray
    modularity: float
    resolution: float
    seed: int

    @property
    def community_count(self) -> int:
        return int(self.assignment.max()) + 1 if len(self.assignment) else 0


@dataclass
class CommunityStats:
    community: int
    node_count: int
    node_share_pct: float
    edge_count: int
    edge_share_pct: float
    internal_density: float
    top_members: list[str]


def modularity(net: CollabNetwork, assignment, resolution: float = 1.0) -> float:
    """Weighted Newman modularity of the given node-to-community assignment.

    Q = (1/2W) * sum_uv [w_uv - gamma * s_u * s_v / (2W)] * delta(c_u, c_v),
    evaluated via per-community internal weights and strength totals.
    """
    assignment = np.asarray(assignment)
    if len(assignment) != net.n:
        raise ValueError(
            f"assignment length {len(assignment)} != node count {net.n}")
    if net.n == 0:
        return 0.0
    strengths = net.strengths()
    w2 = strengths.sum()
    if w2 == 0:
        return 0.0
    ncomm = int(assignment.max()) + 1
    tot = np.zeros(ncomm)
    np.add.at(tot, assignment, strengths)
    internal = 0.0
    for u in range(net.n):
        cu = assignment[u]
        for ei in range(net.indptr[u], net.indptr[u + 1]):
            if assignment[net.indices[ei]] == cu:
                internal += net.weights[ei]
    gamma = resolution
    return float(internal / w2 - gamma * np.sum((tot / w2) ** 2))


def detect_communities(net: CollabNetwork, resolution: float = 1.0,
                       seed: int = 42) -> Partition:
    """Partition the network by repeated local moves plus aggregation."""
    if net.n == 0:
        raise ValueError("cannot detect communities in an empty network")
    rng = np.random.default_rng(seed)

    # current level graph: CSR without self-loops + separate self-weights
    indptr = net.indptr.copy()
    indices = net.indices.copy()
    weights = net.weights.copy()
    selfw = np.zeros(net.n)
    node2comm = np.arange(net.n)  # original node -> current-level node

    while True:
        m = len(indptr) - 1
        order = rng.permutation(m)
        comm = _local_moves(indptr, indices, weights, selfw, resolution, order)
        labels, comm = np.unique(comm, return_inverse=True)
        if len(labels) == m:
            break
        node2comm = comm[node2comm]
        indptr, indices, weights, selfw = _aggregate(
            indptr, indices, weights, selfw, comm, len(labels))

    assignment = _canonical_relabel(node2comm)
    q = modularity(net, assignment, resolution)
    return Partition(assignment, q, resolution, seed)


def _local_moves(indptr, indices, weights, selfw, resolution, order):
    m = len(indptr) - 1
    strengths = np.zeros(m)
    np.add.at(strengths, np.repeat(np.arange(m), np.diff(indptr)), weights)
    strengths += 2.0 * selfw
    w2 = strengths.sum()
    comm = np.arange(m)
    comm_tot = strengths.copy()
    if w2 == 0:
        return comm

    moved = True
    while moved:
        moved = False
        for u in order:
            cu = comm[u]
            comm_tot[cu] -= strengths[u]
            neigh: dict[int, float] = {}
            for ei in range(indptr[u], indptr[u + 1]):
                v = indices[ei]
                if v == u:
                    continue
                cv = comm[v]
                neigh[cv] = neigh.get(cv, 0.0) + weights[ei]
            stay = neigh.get(cu, 0.0) - resolution * strengths[u] * comm_tot[cu] / w2
            best_c, best_g = cu, stay
            for c in sorted(neigh):
                if c == cu:
                    continue
                g = neigh[c] - resolution * strengths[u] * comm_tot[c] / w2
                # move only on strict improvement; equal gains keep the
                # lowest community id encountered first
                if g > best_g + 1e-12:
                    best_c, best_g = c, g
            comm[u] = best_c
            comm_tot[best_c] += strengths[u]
            if best_c != cu:
                moved = True
    return comm


def _aggregate(indptr, indices, weights, selfw, comm, ncomm):
    new_self = np.zeros(ncomm)
    cross: dict[tuple[int, int], float] = {}
    m = len(indptr) - 1
    for u in range(m):
        cu = comm[u]
        new_self[cu] += selfw[u]
        for ei in range(indptr[u], indptr[u + 1]):
            v = indices[ei]
            if v < u:
                continue
            w = weights[ei]
            cv = comm[v]
            if cu == cv:
                new_self[cu] += w
            else:
                key = (cu, cv) if cu < cv else (cv, cu)
                cross[key] = cross.get(key, 0.0) + w
    ne = len(cross)
    us = np.empty(2 * ne, np.int64)
    vs = np.empty(2 * ne, np.int64)
    ws = np.empty(2 * ne, np.float64)
    for i, ((a, b), w) in enumerate(cross.items()):
        us[2 * i], vs[2 * i], ws[2 * i] = a, b, w
        us[2 * i + 1], vs[2 * i + 1], ws[2 * i + 1] = b, a, w
    sort = np.lexsort((vs, us))
    us, vs, ws = us[sort], vs[sort], ws[sort]
    new_indptr = np.zeros(ncomm + 1, np.int64)
    np.add.at(new_indptr, us + 1, 1)
    return np.cumsum(new_indptr), vs, ws, new_self


def _canonical_relabel(assignment: np.ndarray) -> np.ndarray:
    """Dense ids in order of first appearance along the node index."""
    mapping: dict[int, int] = {}
    out = np.empty_like(assignment)
    for i, c in enumerate(assignment):
        if c not in mapping:
            mapping[c] = len(mapping)
        out[i] = mapping[c]
    return out


def community_stats(net: CollabNetwork, part: Partition,
                    top_n: int = 10, min_size: int = 1) -> list[CommunityStats]:
    """Per-community node/edge counts, shares, density and top members.

    Communities are sorted by node count descending (ties by community id);
    shares are percentages of whole-network totals. ``min_size`` drops
    smaller communities from the report (the partition itself is untouched).
    """
    assignment = part.assignment
    if len(assignment) != net.n:
        raise ValueError("partition does not match network")
    ncomm = part.community_count
    node_counts = np.bincount(assignment, minlength=ncomm)
    internal = internal_edge_counts(net, assignment)
    degrees = net.degrees()
    members: list[list[int]] = [[] for _ in range(ncomm)]
    for i, c in enumerate(assignment):
        members[c].append(i)

    out = []
    order = sorted(range(ncomm), key=lambda c: (-int(node_counts[c]), c))
    for c in order:
        nc = int(node_counts[c])
        if nc < min_size:
            continue
        ie = internal.get(c, 0)
        dens = 2.0 * ie / (nc * (nc - 1)) if nc >= 2 else 0.0
        tops = sorted(members[c], key=lambda i: (-degrees[i], net.names[i]))
        out.append(CommunityStats(
            community=int(c),
            node_count=nc,
            node_share_pct=100.0 * nc / net.n,
            edge_count=ie,
            edge_share_pct=100.0 * ie / net.edge_count if net.edge_count else 0.0,
            internal_density=dens,
            top_members=[net.names[i] for i in tops[:top_n]],
        ))
    return out
