"""Regret against the best k-sparse predictor in hindsight, and log-log slope fits."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core_types import RegretLedger, as_stream
from .errors import DegenerateFit
from .sparse_oracle import DEFAULT_CAP, best_subset


def dyadic_checkpoints(T: int, t_min: int = 1) -> list[int]:
    """Powers of two in [t_min, T], plus T itself."""
    out = []
    t = 1
    while t <= T:
        if t >= t_min:
            out.append(t)
        t *= 2
    if not out or out[-1] != T:
        out.append(T)
    return out


def compute_regret(losses: Sequence[float], stream, k: int, checkpoints: Iterable[int],
                   cap: int = DEFAULT_CAP) -> RegretLedger:
    """Cumulative loss minus the full-information best k-sparse loss at each checkpoint."""
    stream = as_stream(stream)
    losses = np.asarray(losses, dtype=float)
    T = len(stream)
    if losses.shape != (T,):
        raise ValueError("trace and stream lengths differ")
    ledger = RegretLedger(losses)
    for t in sorted(set(int(c) for c in checkpoints)):
        if not 1 <= t <= T:
            raise ValueError(f"checkpoint {t} outside [1, {T}]")
        fit = best_subset(stream.X[:t], stream.y[:t], k, cap)
        ledger.add_checkpoint(t, fit.total_loss)
    return ledger


@dataclass
class SlopeFit:
    slope: float
    r_squared: float
    n_points: int


def slope_estimate(checkpoints, t_min: Optional[int] = None, min_points: int = 4) -> SlopeFit:
    """Least-squares slope of log(regret) on log(t).

    ``checkpoints`` holds (t, regret) pairs or full ledger rows
    (t, cum_loss, comparator_loss, regret). Rows before ``t_min`` or with
    non-positive regret are skipped.
    """
    ts, rs = [], []
    for row in checkpoints:
        t, r = row[0], row[-1]
        if t_min is not None and t < t_min:
            continue
        if r > 0:
            ts.append(t)
            rs.append(r)
    if len(ts) < min_points:
        raise DegenerateFit(f"only {len(ts)} checkpoints with positive regret (need {min_points})")
    lx, ly = np.log(ts), np.log(rs)
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return SlopeFit(float(slope), r2, len(ts))
