"""Independent brute-force oracles for the test suite.

Everything here deliberately avoids the library's algorithms: shortest
paths come from Floyd-Warshall plus explicit path enumeration, components
from union-find, modularity from the dense double-ordered-pair sum, and so
on. Only usable on small inputs.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

INF = float("inf")


def adjacency_sets(n, pairs):
    adj = [set() for _ in range(n)]
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def floyd_warshall(n, pairs, lengths=None):
    dist = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for idx, (u, v) in enumerate(pairs):
        d = 1 if lengths is None else lengths[idx]
        dist[u][v] = dist[v][u] = d
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik == INF:
                continue
            for j in range(n):
                alt = dik + dist[k][j]
                if alt < dist[i][j]:
                    dist[i][j] = alt
    return dist


def _length_lookup(pairs, lengths):
    table = {}
    for idx, (u, v) in enumerate(pairs):
        d = 1 if lengths is None else lengths[idx]
        table[(u, v)] = table[(v, u)] = d
    return table


def enumerate_shortest_paths(adj, dist, j, k, length=None):
    """Every shortest path from j to k, as node tuples."""
    if dist[j][k] == INF:
        return []
    if j == k:
        return [(j,)]
    out = []
    for m in adj[j]:
        step = 1 if length is None else length[(j, m)]
        if step + dist[m][k] == dist[j][k]:
            out.extend((j,) + p
                       for p in enumerate_shortest_paths(adj, dist, m, k, length))
    return out


def closeness_oracle(n, pairs, lengths=None):
    dist = floyd_warshall(n, pairs, lengths)
    values = []
    for i in range(n):
        ds = [dist[i][j] for j in range(n) if j != i and dist[i][j] < INF]
        values.append(len(ds) / sum(ds) if ds else 0.0)
    return values


def betweenness_oracle(n, pairs, normalized=False, lengths=None):
    adj = adjacency_sets(n, pairs)
    dist = floyd_warshall(n, pairs, lengths)
    length = None if lengths is None else _length_lookup(pairs, lengths)
    values = [0.0] * n
    for j, k in itertools.combinations(range(n), 2):
        paths = enumerate_shortest_paths(adj, dist, j, k, length)
        if not paths:
            continue
        for i in range(n):
            if i in (j, k):
                continue
            through = sum(1 for p in paths if i in p)
            values[i] += through / len(paths)
    if normalized:
        comp = components_oracle(n, pairs)
        sizes = {}
        for c in comp:
            sizes[c] = sizes.get(c, 0) + 1
        for i in range(n):
            m = sizes[comp[i]]
            denom = (m - 1) * (m - 2) / 2
            values[i] = values[i] / denom if denom > 0 else 0.0
    return values


def components_oracle(n, pairs):
    """Union-find component labels (not canonically ordered)."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return [find(i) for i in range(n)]


def tree_betweenness_oracle(n, pairs):
    """For trees: pairs routed through i = C(n-1,2) - sum C(size_c,2)."""
    adj = adjacency_sets(n, pairs)
    values = []
    for i in range(n):
        seen = {i}
        sizes = []
        for start in adj[i]:
            if start in seen:
                continue
            stack = [start]
            seen.add(start)
            count = 0
            while stack:
                v = stack.pop()
                count += 1
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            sizes.append(count)
        total = math.comb(n - 1, 2)
        values.append(float(total - sum(math.comb(s, 2) for s in sizes)))
    return values


def modularity_oracle(weight_matrix, assignment, resolution=1.0):
    """Dense double loop over ordered node pairs (u == v included)."""
    A = np.asarray(weight_matrix, float)
    s = A.sum(axis=1)
    w2 = s.sum()
    q = 0.0
    n = len(A)
    for u in range(n):
        for v in range(n):
            if assignment[u] == assignment[v]:
                q += A[u, v] - resolution * s[u] * s[v] / w2
    return q / w2


def set_partitions(items):
    """All partitions of a list (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def best_modularity_oracle(weight_matrix, resolution=1.0):
    """Globally optimal modularity by exhaustive partition enumeration."""
    n = len(weight_matrix)
    best = -INF
    for partition in set_partitions(list(range(n))):
        assignment = [0] * n
        for cid, block in enumerate(partition):
            for node in block:
                assignment[node] = cid
        q = modularity_oracle(weight_matrix, assignment, resolution)
        best = max(best, q)
    return best


def tfidf_oracle(token_lists, min_df=1, max_terms=None):
    """Dict-based recomputation of the smoothed TF-IDF vectors."""
    n = len(token_lists)
    df = {}
    for tokens in token_lists:
        for t in set(tokens):
            df[t] = df.get(t, 0) + 1
    kept = [t for t, c in df.items() if c >= min_df]
    if max_terms is not None and len(kept) > max_terms:
        kept.sort(key=lambda t: (-df[t], t))
        kept = kept[:max_terms]
    kept.sort()
    idf = {t: math.log((1 + n) / (1 + df[t])) + 1.0 for t in kept}
    vectors = []
    for tokens in token_lists:
        vec = [0.0] * len(kept)
        if tokens:
            for i, t in enumerate(kept):
                tf = tokens.count(t) / len(tokens)
                vec[i] = tf * idf[t]
            norm = math.sqrt(sum(x * x for x in vec))
            if norm > 0:
                vec = [x / norm for x in vec]
        vectors.append(vec)
    return kept, vectors


def davies_bouldin_oracle(X, labels, centroids):
    X = np.asarray(X, float)
    k = len(centroids)
    s = []
    for c in range(k):
        members = X[np.asarray(labels) == c]
        s.append(float(np.mean([np.linalg.norm(m - centroids[c]) for m in members])))
    total = 0.0
    for i in range(k):
        worst = -INF
        for j in range(k):
            if i == j:
                continue
            d = float(np.linalg.norm(np.asarray(centroids[i]) - np.asarray(centroids[j])))
            worst = max(worst, (s[i] + s[j]) / d)
        total += worst
    return total / k


def best_bipartition_inertia(X):
    """Exhaustive optimal 2-means inertia for tiny point sets."""
    X = np.asarray(X, float)
    n = len(X)
    best = INF
    for mask in range(1, 2 ** (n - 1)):
        left = [i for i in range(n) if mask >> i & 1]
        right = [i for i in range(n) if not mask >> i & 1]
        if not left or not right:
            continue
        inertia = 0.0
        for side in (left, right):
            pts = X[side]
            center = pts.mean(axis=0)
            inertia += ((pts - center) ** 2).sum()
        best = min(best, inertia)
    return best


def pair_weight_oracle(corpus):
    """Brute-force unordered pair counting over canonicalized names."""
    weights = {}
    for record in corpus:
        names = sorted({" ".join(c.split()).casefold() for c in record.contributors})
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                key = (names[i], names[j])
                weights[key] = weights.get(key, 0) + 1
    return weights
