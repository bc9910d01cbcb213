"""Dense two-phase simplex for small linear programs.

Solves ``min c @ x  s.t.  A_ub @ x <= b_ub,  x >= 0`` on a full tableau.
Pivoting uses the most-negative reduced cost and falls back to Bland's rule
after a run of degenerate pivots, which rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PIVOT_TOL = 1e-11
_DEGENERATE_RUN = 50


@dataclass
class LPResult:
    x: np.ndarray
    fun: float
    status: str  # optimal | infeasible | unbounded | iteration_limit
    nit: int
    basis: np.ndarray


class _Tableau:
    def __init__(self, T: np.ndarray, basis: np.ndarray):
        self.T = T
        self.basis = basis

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] /= T[row, col]
        colvec = T[:, col].copy()
        colvec[row] = 0.0
        T -= np.outer(colvec, T[row])
        self.basis[row] = col

    def run(self, ncols: int, max_iter: int, nit: int) -> tuple[str, int]:
        """Iterate on objective row -1 over the first ``ncols`` columns."""
        T = self.T
        degenerate = 0
        while True:
            if nit >= max_iter:
                return "iteration_limit", nit
            reduced = T[-1, :ncols]
            if degenerate >= _DEGENERATE_RUN:
                candidates = np.flatnonzero(reduced < -_PIVOT_TOL)
                if candidates.size == 0:
                    return "optimal", nit
                col = int(candidates[0])
            else:
                col = int(np.argmin(reduced))
                if reduced[col] >= -_PIVOT_TOL:
                    return "optimal", nit
            column = T[:-1, col]
            positive = column > _PIVOT_TOL
            if not positive.any():
                return "unbounded", nit
            ratios = np.full(column.shape, np.inf)
            ratios[positive] = T[:-1, -1][positive] / column[positive]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, abs(best)))
            row = int(ties[np.argmin(self.basis[ties])])
            degenerate = degenerate + 1 if best <= 1e-12 else 0
            self.pivot(row, col)
            nit += 1


def linprog_simplex(c, A_ub, b_ub, max_iter: int | None = None) -> LPResult:
    c = np.asarray(c, dtype=float)
    A = np.asarray(A_ub, dtype=float)
    b = np.asarray(b_ub, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 50 * (m + n)

    # equality form [A | I] [x; s] = b, rows with b < 0 negated and given an artificial
    sign = np.where(b < 0, -1.0, 1.0)
    neg = np.flatnonzero(b < 0)
    n_art = neg.size
    width = n + m + n_art
    T = np.zeros((m + 1, width + 1))
    T[:m, :n] = sign[:, None] * A
    T[:m, n:n + m] = np.diag(sign)
    T[:m, -1] = sign * b
    basis = np.arange(n, n + m)
    for a, i in enumerate(neg):
        T[i, n + m + a] = 1.0
        basis[i] = n + m + a

    tab = _Tableau(T, basis)
    nit = 0
    if n_art:
        # phase 1: minimise the sum of artificials, expressed in non-basic terms
        T[-1, :] = 0.0
        T[-1, n + m:width] = 1.0
        for i in neg:
            T[-1] -= T[i]
        status, nit = tab.run(width, max_iter, nit)
        if status == "iteration_limit":
            return LPResult(np.zeros(n), np.nan, status, nit, basis)
        scale = max(1.0, np.abs(b).max())
        if -T[-1, -1] > 1e-9 * scale:
            return LPResult(np.zeros(n), np.nan, "infeasible", nit, basis)
        # drive zero-level artificials out of the basis
        for row in np.flatnonzero(tab.basis >= n + m):
            nonart = np.flatnonzero(np.abs(T[row, :n + m]) > 1e-9)
            if nonart.size:
                tab.pivot(int(row), int(nonart[0]))
        T = tab.T
        keep = tab.basis < n + m
        T = np.vstack([T[:-1][keep], T[-1:]])
        T = np.delete(T, np.s_[n + m:width], axis=1)
        tab = _Tableau(T, tab.basis[keep])

    T = tab.T
    T[-1, :] = 0.0
    T[-1, :n] = c
    for row, col in enumerate(tab.basis):
        if T[-1, col] != 0.0:
            T[-1] -= T[-1, col] * T[row]
    status, nit = tab.run(n + m, max_iter, nit)

    x_tab = np.zeros(n + m)
    x_tab[tab.basis] = T[:-1, -1]
    x_full = x_tab
    # recompute the basic solution from the original data to shed tableau roundoff
    E = np.hstack([A, np.eye(m)])
    B = E[:, tab.basis]
    if B.shape[0] == B.shape[1]:
        with np.errstate(all="ignore"):
            try:
                x_ref = np.zeros(n + m)
                x_ref[tab.basis] = np.linalg.solve(B, b)
                if _violation(A, b, x_ref[:n]) <= _violation(A, b, x_tab[:n]):
                    x_full = x_ref
            except np.linalg.LinAlgError:
                pass
    x = np.maximum(x_full[:n], 0.0)
    return LPResult(x, float(c @ x), status, nit, tab.basis.copy())


def _violation(A, b, x) -> float:
    x = np.maximum(x, 0.0)
    v = A @ x - b
    return float(v.max()) if v.size and np.all(np.isfinite(v)) else np.inf
