"""k-means clustering with Davies-Bouldin driven selection of k.

Seeding is k-means++ from a seeded generator; Lloyd iterations run through
the kernels in ``patmine._accel``. For a fixed seed the whole module is
deterministic: restart r of a fit uses seed+r, and best-of-restarts keeps
the earliest restart on inertia ties.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import DegenerateClusteringError
from .textvec import TokenizedDoc, Vocabulary, vectorize_with_vocab

logger = logging.getLogger(__name__)


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignment: np.ndarray
    inertia: float
    iterations: int
    seed: int
    inertia_history: list[float] = field(default_factory=list, repr=False)


@dataclass
class KSelectionReport:
    scores: list[dict]  # {"k": int, "db": float | None, "inertia": float | None}
    chosen_k: int


def _as_matrix(vectors) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        X = np.asarray(vectors, np.float64)
        if X.ndim != 2:
            raise ValueError("expected a 2-d array of row vectors")
        return X
    dims = {v.dim for v in vectors}
    if len(dims) > 1:
        raise ValueError(f"mixed vector dimensions: {sorted(dims)}")
    return np.array([v.values for v in vectors], np.float64)


def kmeans(vectors, k: int, seed: int = 42, restarts: int = 10,
           max_iter: int = 300, tol: float = 1e-6) -> ClusterModel:
    """Best-of-restarts Lloyd's algorithm with k-means++ seeding.

    Empty clusters are repaired by re-seeding them at the point currently
    farthest from its centroid. Inertia is recorded once per iteration and
    asserted non-increasing.
    """
    X = _as_matrix(vectors)
    n = len(X)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"k={k} exceeds number of vectors ({n})")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best: ClusterModel | None = None
    for r in range(restarts):
        model = _lloyd_once(X, k, seed + r, max_iter, tol)
        if best is None or model.inertia < best.inertia:
            best = model
    best.seed = seed
    return best


def _kmeanspp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(X)
    centroids = np.empty((k, X.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = X[first]
    d2 = ((X - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            u = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), u))
            idx = min(idx, n - 1)
        centroids[j] = X[idx]
        d2 = np.minimum(d2, ((X - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _lloyd_once(X, k, seed, max_iter, tol) -> ClusterModel:
    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_init(X, k, rng)
    history: list[float] = []
    labels = np.zeros(len(X), np.int64)
    iterations = 0
    for it in range(1, max_iter + 1):
        iterations = it
        labels, d2 = _accel.assign_points(X, centroids)
        centroids, labels, d2 = _repair_empty(X, centroids, labels, d2, k)
        inertia = float(d2.sum())
        if history:
            assert inertia <= history[-1] * (1 + 1e-9) + 1e-12, \
                "Lloyd iteration increased inertia"
        history.append(inertia)
        new_centroids = _accel.update_centroids(X, labels, k, centroids)
        shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        if shift < tol:
            break
    labels, d2 = _accel.assign_points(X, centroids)
    centroids, labels, d2 = _repair_empty(X, centroids, labels, d2, k)
    return ClusterModel(k, centroids, labels, float(d2.sum()), iterations,
                        seed, history)


def _repair_empty(X, centroids, labels, d2, k):
    counts = np.bincount(labels, minlength=k)
    for c in np.flatnonzero(counts == 0):
        far = int(d2.argmax())
        centroids = centroids.copy()
        centroids[c] = X[far]
        labels[far] = c
        d2[far] = 0.0
        counts = np.bincount(labels, minlength=k)
    return centroids, labels, d2


def davies_bouldin(vectors, model: ClusterModel) -> float:
    """DB = mean over clusters of the worst (s_i+s_j)/d_ij ratio.

    s_i is the mean member-to-centroid distance, d_ij the centroid
    distance. Coincident centroids make the index undefined.
    """
    X = _as_matrix(vectors)
    k = model.k
    if k < 2:
        raise ValueError("Davies-Bouldin requires k >= 2")
    scatter = np.zeros(k)
    for c in range(k):
        members = X[model.assignment == c]
        scatter[c] = np.linalg.norm(members - model.centroids[c], axis=1).mean()
    sep = np.linalg.norm(
        model.centroids[:, None, :] - model.centroids[None, :, :], axis=2)
    total = 0.0
    for i in range(k):
        worst = 0.0
        for j in range(k):
            if i == j:
                continue
            if sep[i, j] == 0.0:
                raise DegenerateClusteringError(
                    f"clusters {i} and {j} have coincident centroids")
            worst = max(worst, (scatter[i] + scatter[j]) / sep[i, j])
        total += worst
    return total / k


def select_k(vectors, k_min: int = 2, k_max: int = 11, seed: int = 42,
             restarts: int = 10, max_iter: int = 300,
             tol: float = 1e-6) -> tuple[KSelectionReport, ClusterModel]:
    """Fit every k in [k_min, k_max], score DB, return the minimal-DB model.

    Ties pick the smaller k. A k whose clustering degenerates is skipped
    with a warning and excluded from the argmin; its row keeps db=None.
    """
    if k_min < 2 or k_max < k_min:
        raise ValueError("need 2 <= k_min <= k_max")
    X = _as_matrix(vectors)
    if len(X) <= k_max:
        raise ValueError(f"need more than k_max={k_max} vectors, got {len(X)}")
    scores = []
    models: dict[int, ClusterModel] = {}
    for k in range(k_min, k_max + 1):
        model = kmeans(X, k, seed=seed, restarts=restarts,
                       max_iter=max_iter, tol=tol)
        try:
            db = davies_bouldin(X, model)
        except DegenerateClusteringError as exc:
            logger.warning("k=%d skipped: %s", k, exc)
            scores.append({"k": k, "db": None, "inertia": model.inertia})
            continue
        models[k] = model
        scores.append({"k": k, "db": db, "inertia": model.inertia})
    valid = [s for s in scores if s["db"] is not None]
    if not valid:
        raise DegenerateClusteringError("every candidate k degenerated")
    chosen = min(valid, key=lambda s: (s["db"], s["k"]))["k"]
    return KSelectionReport(scores, chosen), models[chosen]


def representative_terms(model: ClusterModel, docs: list[TokenizedDoc],
                         vocab: Vocabulary, top_n: int = 12) -> list[list[str]]:
    """Per-cluster terms ranked by mean TF-IDF weight over member docs.

    Terms with zero mean weight are omitted; ties break by term name. For
    imported embeddings the TF-IDF weights exist solely for this report.
    """
    tfidf = vectorize_with_vocab(docs, vocab)
    W = np.array([v.values for v in tfidf])
    out = []
    for c in range(model.k):
        mean = W[model.assignment == c].mean(axis=0)
        idx = [i for i in range(len(vocab.terms)) if mean[i] > 0]
        idx.sort(key=lambda i: (-mean[i], vocab.terms[i]))
        out.append([vocab.terms[i] for i in idx[:top_n]])
    return out


def cluster_share(model: ClusterModel) -> list[float]:
    """Percentage of the corpus in each cluster, to one decimal place."""
    counts = np.bincount(model.assignment, minlength=model.k)
    n = counts.sum()
    return [round(100.0 * int(c) / int(n), 1) for c in counts]
