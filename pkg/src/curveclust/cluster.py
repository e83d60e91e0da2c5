"""Spectral clustering of learned affinities and clustering accuracy."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.cluster import KMeans

# degrees below this get floored to keep the normalized Laplacian finite
_DEGREE_FLOOR = 1e-12


def affinity(W: np.ndarray) -> np.ndarray:
    """Symmetric nonnegative affinity (|W| + |W|^T) / 2 from a coefficient matrix."""
    W = np.asarray(W, dtype=np.float64)
    if not np.all(np.isfinite(W)):
        raise ValueError("coefficient matrix must be finite")
    A = np.abs(W)
    return 0.5 * (A + A.T)


def spectral_cluster(A: np.ndarray, k: int, seed: int = 0) -> np.ndarray:
    """Normalized-cut style clustering of a symmetric nonnegative affinity.

    Embeds the rows of the k bottom eigenvectors of the symmetric normalized
    Laplacian, normalizes them to unit length and runs k-means with 20
    deterministic restarts.  Scaling A by a positive constant does not change
    the result.
    """
    A = np.asarray(A, dtype=np.float64)
    N = A.shape[0]
    if A.ndim != 2 or A.shape[1] != N:
        raise ValueError("affinity must be square")
    if k < 1 or k > N:
        raise ValueError(f"cluster count must be in [1, {N}], got {k}")
    if k == 1:
        return np.zeros(N, dtype=np.int64)

    deg = A.sum(axis=1)
    if np.any(deg <= _DEGREE_FLOOR):
        warnings.warn("affinity has (near-)isolated vertices; flooring their degree")
        deg = np.maximum(deg, _DEGREE_FLOOR)
    d_inv_sqrt = 1.0 / np.sqrt(deg)
    lap = np.eye(N) - d_inv_sqrt[:, None] * A * d_inv_sqrt[None, :]
    _, vecs = np.linalg.eigh(lap)
    emb = vecs[:, :k]
    row_norm = np.linalg.norm(emb, axis=1)
    row_norm[row_norm == 0.0] = 1.0
    emb = emb / row_norm[:, None]

    km = KMeans(n_clusters=k, n_init=20, max_iter=300, random_state=seed)
    return km.fit_predict(emb).astype(np.int64)


def sca(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Clustering accuracy as a percentage, maximized over label matchings.

    Builds the confusion matrix of the two labelings and finds the optimal
    one-to-one assignment of label names (Hungarian method), so any renaming
    of either side scores identically.
    """
    predicted = np.asarray(predicted, dtype=np.int64).reshape(-1)
    truth = np.asarray(truth, dtype=np.int64).reshape(-1)
    if predicted.shape != truth.shape:
        raise ValueError(f"label length mismatch: {predicted.size} vs {truth.size}")
    if predicted.size == 0:
        raise ValueError("empty labelings")
    k = int(max(predicted.max(), truth.max())) + 1
    confusion = np.zeros((k, k))
    np.add.at(confusion, (predicted, truth), 1.0)
    rows, cols = linear_sum_assignment(-confusion)
    return 100.0 * float(confusion[rows, cols].sum()) / predicted.size
