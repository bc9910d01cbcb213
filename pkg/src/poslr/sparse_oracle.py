"""Exact least squares on a fixed support and exhaustive best-k-subset search."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import EnumerationTooLarge

DEFAULT_CAP = 2_000_000
_RCOND = 1e-12


@dataclass(frozen=True)
class SubsetFit:
    support: tuple[int, ...]
    w: np.ndarray
    mean_loss: float
    n: int

    @property
    def total_loss(self) -> float:
        return self.mean_loss * self.n


def _psd_pinv_solve(G: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Minimum-norm solution of G w = c for symmetric PSD G (batched over leading axes)."""
    evals, evecs = np.linalg.eigh(G)
    top = np.max(np.abs(evals), axis=-1, keepdims=True)
    cutoff = _RCOND * np.maximum(top, np.finfo(float).tiny)
    inv = np.where(evals > cutoff, 1.0 / np.where(evals > cutoff, evals, 1.0), 0.0)
    proj = np.einsum("...ji,...j->...i", evecs, c)
    return np.einsum("...ij,...j->...i", evecs, inv * proj)


def least_squares_on_support(X: np.ndarray, y: np.ndarray, S) -> SubsetFit:
    """Minimum-norm minimiser of the mean squared loss over weights supported on S."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    S = tuple(sorted(int(i) for i in S))
    w = np.zeros(d)
    if S:
        XS = X[:, S]
        w[list(S)] = _psd_pinv_solve(XS.T @ XS, XS.T @ y)
    r = y - X @ w
    return SubsetFit(S, w, float(r @ r) / n, n)


def count_subsets(d: int, k: int) -> int:
    return math.comb(d, k)


def _subset_losses(G: np.ndarray, c: np.ndarray, yy: float, supports: np.ndarray) -> np.ndarray:
    """Total residual square sum for every row of ``supports`` (all of equal size)."""
    if supports.shape[1] == 0:
        return np.array([yy])
    idx = supports
    Gs = G[idx[:, :, None], idx[:, None, :]]
    cs = c[idx]
    w = _psd_pinv_solve(Gs, cs)
    return yy - np.einsum("ij,ij->i", cs, w)


def best_subset(X: np.ndarray, y: np.ndarray, k: int, cap: int = DEFAULT_CAP) -> SubsetFit:
    """Exhaustive minimum of the mean squared loss over supports of size <= k.

    Among supports whose losses agree to roundoff the lexicographically
    smallest (as sorted index tuples) wins.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    k = min(k, d)
    if count_subsets(d, k) > cap:
        raise EnumerationTooLarge(f"C({d},{k}) = {count_subsets(d, k)} exceeds cap {cap}")
    G = X.T @ X
    c = X.T @ y
    yy = float(y @ y)
    tol = 1e-12 * max(1.0, yy)

    all_losses, all_supports = [], []
    for size in range(k + 1):
        supports = np.array(list(itertools.combinations(range(d), size)), dtype=np.intp)
        supports = supports.reshape(len(supports), size)
        all_losses.append(_subset_losses(G, c, yy, supports))
        all_supports.append(supports)
    lo = min(float(l.min()) for l in all_losses)
    best_support = min(
        tuple(int(v) for v in sup[j])
        for losses, sup in zip(all_losses, all_supports)
        for j in np.flatnonzero(losses <= lo + tol)
    )
    return least_squares_on_support(X, y, best_support)


def prefix_best_subset_losses(X: np.ndarray, y: np.ndarray, k: int, ts, cap: int = DEFAULT_CAP) -> list[float]:
    """Best k-sparse total squared loss on the first t rows for each t in ``ts``."""
    out = []
    for t in ts:
        fit = best_subset(X[:t], y[:t], k, cap)
        out.append(fit.mean_loss * t)
    return out
