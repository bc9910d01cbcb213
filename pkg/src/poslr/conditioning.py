"""Brute-force restricted isometry and restricted condition number audits."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EnumerationTooLarge
from .sparse_oracle import DEFAULT_CAP

_CLAMP_TOL = 1e-10


@dataclass
class ConditioningReport:
    k: int
    epsilon: float
    kappa: float
    worst_support_min: tuple[int, ...]
    worst_support_max: tuple[int, ...]
    n: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "kappa": self.kappa if math.isfinite(self.kappa) else "inf",
            "worst_support_min": [i + 1 for i in self.worst_support_min],
            "worst_support_max": [i + 1 for i in self.worst_support_max],
            "n": self.n,
        }


def _extreme_singular_values(G: np.ndarray, k: int, cap: int):
    """Smallest and largest singular value over all size-k column subsets of a Gram matrix."""
    d = G.shape[0]
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    if math.comb(d, k) > cap:
        raise EnumerationTooLarge(f"C({d},{k}) = {math.comb(d, k)} exceeds cap {cap}")
    supports = np.array(list(itertools.combinations(range(d), k)), dtype=np.intp)
    evals = np.linalg.eigvalsh(G[supports[:, :, None], supports[:, None, :]])
    scale = max(float(np.max(evals)), 0.0)
    evals = np.where(evals < _CLAMP_TOL * max(scale, 1e-300), 0.0, evals)
    smin = np.sqrt(evals[:, 0])
    smax = np.sqrt(evals[:, -1])
    i_min = int(np.argmin(smin))
    i_max = int(np.argmax(smax))
    return (float(smin[i_min]), tuple(int(v) for v in supports[i_min]),
            float(smax[i_max]), tuple(int(v) for v in supports[i_max]))


def conditioning_report(X: np.ndarray, k: int, cap: int = DEFAULT_CAP) -> ConditioningReport:
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if n < 1:
        raise ValueError("need at least one row")
    G = X.T @ X / n
    smin, s_lo, smax, s_hi = _extreme_singular_values(G, k, cap)
    eps = max(1.0 - smin, smax - 1.0)
    kappa = smax / smin if smin > 0 else math.inf
    return ConditioningReport(k, eps, kappa, s_lo, s_hi, n)


def rip_epsilon(X: np.ndarray, k: int, cap: int = DEFAULT_CAP) -> float:
    """Smallest epsilon for which (1/sqrt(n)) X is a (epsilon, k) restricted isometry."""
    return conditioning_report(X, k, cap).epsilon


def restricted_condition_number(X: np.ndarray, k: int, cap: int = DEFAULT_CAP) -> float:
    """max_S sigma_max(X_S) / min_S sigma_min(X_S) over |S| = k; ``inf`` when singular."""
    return conditioning_report(X, k, cap).kappa


@dataclass
class WindowResult:
    start: int
    length: int
    kappa: float


@dataclass
class BbrcnpReport:
    k: int
    t0: int
    kappa_bound: float
    windows_checked: int
    failures: int
    worst: Optional[WindowResult]
    windows: list[WindowResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        def fmt(v):
            return v if math.isfinite(v) else "inf"
        worst = None if self.worst is None else {
            "start": self.worst.start + 1, "length": self.worst.length, "kappa": fmt(self.worst.kappa)}
        return {"k": self.k, "t0": self.t0, "kappa_bound": self.kappa_bound,
                "windows_checked": self.windows_checked, "failures": self.failures,
                "passed": self.passed, "worst_window": worst}


def audit_windows(n: int, t0: int, policy: str = "dyadic", batch_length: Optional[int] = None):
    """Yield (start, length) windows, 0-based start, according to ``policy``.

    ``dyadic``: lengths t0, 2 t0, 4 t0, ... with starts on multiples of t0,
    plus every batch window when ``batch_length`` is given.
    ``all``: every window of length >= t0 (quadratic).
    ``whole``: the whole stream only.
    """
    seen = set()

    def emit(s, l):
        if (s, l) not in seen and l >= 1 and s + l <= n:
            seen.add((s, l))
            return True
        return False

    if policy == "whole":
        if emit(0, n):
            yield 0, n
        return
    if policy == "all":
        for length in range(max(t0, 1), n + 1):
            for start in range(0, n - length + 1):
                if emit(start, length):
                    yield start, length
        return
    if policy != "dyadic":
        raise ValueError(f"unknown window policy {policy!r}")
    if t0 >= 1:
        length = t0
        while length <= n:
            for start in range(0, n - length + 1, t0):
                if emit(start, length):
                    yield start, length
            length *= 2
    if batch_length:
        for start in range(0, n, batch_length):
            length = min(batch_length, n - start)
            if emit(start, length):
                yield start, length


def bbrcnp_audit(X: np.ndarray, k: int, t0: int, kappa_bound: float,
                 window_policy: str = "dyadic", batch_length: Optional[int] = None,
                 cap: int = DEFAULT_CAP, keep_windows: bool = False) -> BbrcnpReport:
    """Check the restricted condition number of consecutive blocks against a bound."""
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    prefix = np.zeros((n + 1, d, d))
    np.cumsum(np.einsum("ti,tj->tij", X, X), axis=0, out=prefix[1:])
    worst = None
    checked = failures = 0
    kept = []
    for start, length in audit_windows(n, t0, window_policy, batch_length):
        G = prefix[start + length] - prefix[start]
        smin, _, smax, _ = _extreme_singular_values(G, k, cap)
        kappa = smax / smin if smin > 0 else math.inf
        res = WindowResult(start, length, kappa)
        checked += 1
        if not kappa <= kappa_bound:
            failures += 1
        if worst is None or kappa > worst.kappa:
            worst = res
        if keep_windows:
            kept.append(res)
    return BbrcnpReport(k, t0, kappa_bound, checked, failures, worst, kept)
