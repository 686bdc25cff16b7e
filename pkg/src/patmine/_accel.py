"""Hot numeric kernels.

Every kernel exists twice: a plain-Python/numpy reference version
(``*_py``) and, when numba is importable and not disabled, an ``@njit``
compiled twin. The module-level names (``closeness_sums``, ``betweenness``,
``matvec``, ``assign_points``, ``update_centroids``) point at whichever
variant is active.

Set ``PATMINE_NO_NUMBA=1`` in the environment to force the fallbacks.
``benchmarks/bench_kernels.py`` times both paths side by side.
"""

from __future__ import annotations

import os

import numpy as np


def _want_numba() -> bool:
    flag = os.environ.get("PATMINE_NO_NUMBA", "").strip().lower()
    if flag in {"1", "true", "yes", "on"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _want_numba()

if NUMBA_ENABLED:
    from numba import njit
else:  # pragma: no cover - exercised via PATMINE_NO_NUMBA runs
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(func):
            return func

        return deco


# ---------------------------------------------------------------------------
# Graph kernels (CSR adjacency: indptr int64[n+1], indices int64[2E])
# ---------------------------------------------------------------------------

def closeness_sums_py(indptr, indices, n):
    """Per-node (sum of hop distances, reachable count) via all-source BFS."""
    sumdist = np.zeros(n, np.int64)
    reach = np.zeros(n, np.int64)
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    for s in range(n):
        dist[:] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        while head < tail:
            v = queue[head]
            head += 1
            total += dist[v]
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue[tail] = w
                    tail += 1
        sumdist[s] = total
        reach[s] = tail
    return sumdist, reach


def betweenness_py(indptr, indices, n):
    """Unnormalized betweenness over unordered pairs, unweighted hops.

    Single-source BFS with reverse dependency accumulation; predecessors
    are recovered from the distance array instead of stored lists.
    """
    bc = np.zeros(n, np.float64)
    dist = np.empty(n, np.int64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    order = np.empty(n, np.int64)
    for s in range(n):
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for i in range(tail - 1, -1, -1):
            w = order[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
        for v in range(n):
            if v != s:
                bc[v] += delta[v]
    # each unordered pair was accumulated from both endpoints
    return bc * 0.5


def _heap_push(hd, hv, size, d, v):
    hd[size] = d
    hv[size] = v
    i = size
    while i > 0:
        parent = (i - 1) // 2
        if hd[i] < hd[parent]:
            hd[i], hd[parent] = hd[parent], hd[i]
            hv[i], hv[parent] = hv[parent], hv[i]
            i = parent
        else:
            break
    return size + 1


def _heap_pop(hd, hv, size):
    d = hd[0]
    v = hv[0]
    size -= 1
    hd[0] = hd[size]
    hv[0] = hv[size]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        smallest = i
        if left < size and hd[left] < hd[smallest]:
            smallest = left
        if right < size and hd[right] < hd[smallest]:
            smallest = right
        if smallest == i:
            break
        hd[i], hd[smallest] = hd[smallest], hd[i]
        hv[i], hv[smallest] = hv[smallest], hv[i]
        i = smallest
    return d, v, size


def dijkstra_closeness_sums_py(indptr, indices, lengths, n):
    """Per-node (sum of shortest-path lengths, reachable count)."""
    sumdist = np.zeros(n, np.float64)
    reach = np.zeros(n, np.int64)
    dist = np.empty(n, np.float64)
    cap = len(indices) + n + 1
    hd = np.empty(cap, np.float64)
    hv = np.empty(cap, np.int64)
    for s in range(n):
        dist[:] = np.inf
        dist[s] = 0.0
        size = _heap_push(hd, hv, 0, 0.0, s)
        total = 0.0
        count = 0
        while size > 0:
            d, v, size = _heap_pop(hd, hv, size)
            if d > dist[v]:
                continue
            total += d
            count += 1
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                nd = d + lengths[ei]
                if nd < dist[w]:
                    dist[w] = nd
                    size = _heap_push(hd, hv, size, nd, w)
        sumdist[s] = total
        reach[s] = count
    return sumdist, reach


def betweenness_weighted_py(indptr, indices, lengths, n):
    """Brandes accumulation over Dijkstra shortest paths.

    Path-count ties use exact float equality on accumulated lengths, so
    integer or power-of-two edge lengths behave exactly.
    """
    bc = np.zeros(n, np.float64)
    dist = np.empty(n, np.float64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    order = np.empty(n, np.int64)
    cap = len(indices) + n + 1
    hd = np.empty(cap, np.float64)
    hv = np.empty(cap, np.int64)
    for s in range(n):
        dist[:] = np.inf
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0.0
        sigma[s] = 1.0
        size = _heap_push(hd, hv, 0, 0.0, s)
        settled = 0
        while size > 0:
            d, v, size = _heap_pop(hd, hv, size)
            if d > dist[v]:
                continue
            order[settled] = v
            settled += 1
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                nd = d + lengths[ei]
                if nd < dist[w]:
                    dist[w] = nd
                    sigma[w] = sigma[v]
                    size = _heap_push(hd, hv, size, nd, w)
                elif nd == dist[w] and w != s:
                    sigma[w] += sigma[v]
        for i in range(settled - 1, -1, -1):
            w = order[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                if dist[v] + lengths[ei] == dist[w]:
                    delta[v] += sigma[v] * coeff
        for v in range(n):
            if v != s:
                bc[v] += delta[v]
    return bc * 0.5


def matvec_py(indptr, indices, weights, x):
    """y = A @ x for the CSR-stored weighted adjacency."""
    contrib = weights * x[indices]
    if len(contrib) == 0:
        return np.zeros(len(x))
    y = np.add.reduceat(contrib, indptr[:-1])
    # reduceat misreads empty rows; zero them explicitly
    empty = indptr[:-1] == indptr[1:]
    if empty.any():
        y = np.where(empty, 0.0, y)
    return y


def _matvec_loop(indptr, indices, weights, x):
    n = len(x)
    y = np.zeros(n, np.float64)
    for u in range(n):
        acc = 0.0
        for ei in range(indptr[u], indptr[u + 1]):
            acc += weights[ei] * x[indices[ei]]
        y[u] = acc
    return y


# ---------------------------------------------------------------------------
# k-means kernels
# ---------------------------------------------------------------------------

def assign_points_py(X, centroids):
    """Label each row of X with its nearest centroid; also squared distances."""
    d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    return labels.astype(np.int64), d2[np.arange(len(X)), labels]


def _assign_points_loop(X, centroids):
    n, d = X.shape
    k = centroids.shape[0]
    labels = np.empty(n, np.int64)
    best = np.empty(n, np.float64)
    for i in range(n):
        bj = 0
        bd = np.inf
        for j in range(k):
            s = 0.0
            for t in range(d):
                diff = X[i, t] - centroids[j, t]
                s += diff * diff
            if s < bd:
                bd = s
                bj = j
        labels[i] = bj
        best[i] = bd
    return labels, best


def update_centroids_py(X, labels, k, old):
    """Mean of each cluster's members; empty clusters keep their old centroid."""
    d = X.shape[1]
    sums = np.zeros((k, d), np.float64)
    np.add.at(sums, labels, X)
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    out = old.copy()
    nonempty = counts > 0
    out[nonempty] = sums[nonempty] / counts[nonempty, None]
    return out


def _update_centroids_loop(X, labels, k, old):
    n, d = X.shape
    sums = np.zeros((k, d), np.float64)
    counts = np.zeros(k, np.float64)
    for i in range(n):
        c = labels[i]
        counts[c] += 1.0
        for t in range(d):
            sums[c, t] += X[i, t]
    out = old.copy()
    for c in range(k):
        if counts[c] > 0.0:
            for t in range(d):
                out[c, t] = sums[c, t] / counts[c]
    return out


if NUMBA_ENABLED:
    _heap_push = njit(cache=True)(_heap_push)
    _heap_pop = njit(cache=True)(_heap_pop)
    closeness_sums = njit(cache=True)(closeness_sums_py)
    betweenness = njit(cache=True)(betweenness_py)
    dijkstra_closeness_sums = njit(cache=True)(dijkstra_closeness_sums_py)
    betweenness_weighted = njit(cache=True)(betweenness_weighted_py)
    matvec = njit(cache=True)(_matvec_loop)
    assign_points = njit(cache=True)(_assign_points_loop)
    update_centroids = njit(cache=True)(_update_centroids_loop)
else:
    closeness_sums = closeness_sums_py
    betweenness = betweenness_py
    dijkstra_closeness_sums = dijkstra_closeness_sums_py
    betweenness_weighted = betweenness_weighted_py
    matvec = matvec_py
    assign_points = assign_points_py
    update_centroids = update_centroids_py


def warmup():
    """Trigger JIT compilation of every kernel on toy inputs."""
    indptr = np.array([0, 1, 2], np.int64)
    indices = np.array([1, 0], np.int64)
    weights = np.array([1.0, 1.0])
    closeness_sums(indptr, indices, 2)
    betweenness(indptr, indices, 2)
    dijkstra_closeness_sums(indptr, indices, weights, 2)
    betweenness_weighted(indptr, indices, weights, 2)
    matvec(indptr, indices, weights, np.ones(2))
    X = np.array([[0.0, 0.0], [1.0, 1.0]])
    labels, _ = assign_points(X, X.copy())
    update_centroids(X, labels, 2, X.copy())
