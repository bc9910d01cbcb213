"""Least-squares set functions over a batch and their weak-supermodularity audits."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import EnumerationTooLarge
from .sparse_oracle import DEFAULT_CAP, least_squares_on_support

AUDIT_TOL = 1e-8


def _key(S: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(int(i) for i in S)))


@dataclass
class BatchSetFunction:
    """g(S) = (1/B) min_{w on S} sum_batch (y - <x, w>)^2, memoised by sorted support."""

    X: np.ndarray
    y: np.ndarray
    memo: dict = field(default_factory=dict)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def B(self) -> int:
        return self.X.shape[0]

    def value(self, S) -> float:
        key = _key(S)
        if key not in self.memo:
            self.memo[key] = least_squares_on_support(self.X, self.y, key).mean_loss
        return self.memo[key]

    __call__ = value

    def clear(self) -> None:
        self.memo.clear()


@dataclass
class RestrictedSetFunction:
    """S -> g(U ∪ S) for a fixed set U."""

    base: BatchSetFunction
    U: tuple[int, ...]

    @property
    def d(self) -> int:
        return self.base.d

    def value(self, S) -> float:
        return self.base.value(set(S) | set(self.U))

    __call__ = value


def restrict(f: BatchSetFunction, U) -> RestrictedSetFunction:
    return RestrictedSetFunction(f, _key(U))


def eval_g(f, S) -> float:
    return f.value(S)


@dataclass(frozen=True)
class Violation:
    kind: str  # "monotonicity" | "marginal"
    S: tuple[int, ...]
    T: tuple[int, ...]
    lhs: float
    rhs: float


def _subsets_up_to(d: int, k: int, cap: int):
    total = sum(math.comb(d, j) for j in range(min(k, d) + 1))
    if total > cap:
        raise EnumerationTooLarge(f"{total} subsets of size <= {k} exceed cap {cap}")
    for size in range(min(k, d) + 1):
        yield from itertools.combinations(range(d), size)


def weak_supermodularity_audit(f, k: int, alpha: float, tol: float = AUDIT_TOL,
                               cap: int = DEFAULT_CAP) -> list[Violation]:
    """Check monotonicity and approximately decreasing marginal gain for all S ⊆ T, |T| <= k."""
    out = []
    for T in _subsets_up_to(f.d, k, cap):
        gT = f.value(T)
        for r in range(len(T) + 1):
            for S in itertools.combinations(T, r):
                gS = f.value(S)
                if gT > gS + tol:
                    out.append(Violation("monotonicity", S, T, gT, gS))
                extra = [i for i in T if i not in S]
                if not extra:
                    continue
                lhs = gS - gT
                rhs = alpha * sum(gS - f.value(S + (i,)) for i in extra)
                if lhs > rhs + tol:
                    out.append(Violation("marginal", S, T, lhs, rhs))
    return out


def greedy_best_singleton(f, candidates) -> int:
    """argmin_j g({j}) over ``candidates``; ties go to the smaller index."""
    candidates = sorted(int(j) for j in candidates)
    if not candidates:
        raise ValueError("no candidates")
    values = [f.value((j,)) for j in candidates]
    return candidates[int(np.argmin(values))]


def greedy_bound_audit(f, k: int, alpha: float, tol: float = AUDIT_TOL,
                       cap: int = DEFAULT_CAP) -> list[Violation]:
    """Check g({j*}) - g(V) <= (1 - 1/(alpha |V|)) (g(∅) - g(V)) for every 1 <= |V| <= k."""
    j_star = greedy_best_singleton(f, range(f.d))
    g_star = f.value((j_star,))
    g_empty = f.value(())
    out = []
    for V in _subsets_up_to(f.d, k, cap):
        if not V:
            continue
        gV = f.value(V)
        lhs = g_star - gV
        rhs = (1.0 - 1.0 / (alpha * len(V))) * (g_empty - gV)
        if lhs > rhs + tol:
            out.append(Violation("greedy", (j_star,), V, lhs, rhs))
    return out
