"""Vovk-Azoury-Warmuth forecaster on a fixed coordinate subset."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class VawState:
    dim: int
    a: float = 1.0
    A: np.ndarray = None
    b: np.ndarray = None

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("ridge parameter must be positive")
        if self.A is None:
            self.A = self.a * np.eye(self.dim)
        if self.b is None:
            self.b = np.zeros(self.dim)


def vaw_predict(state: VawState, x: np.ndarray) -> tuple[float, np.ndarray]:
    """Fold x into the second-moment matrix, then predict with A^{-1} b."""
    x = np.asarray(x, dtype=float)
    if x.shape != (state.dim,):
        raise ValueError(f"expected a length-{state.dim} feature vector")
    state.A += np.outer(x, x)
    if state.dim == 0:
        return 0.0, np.zeros(0)
    w = np.linalg.solve(state.A, state.b)
    return float(x @ w), w


def vaw_update(state: VawState, x: np.ndarray, y: float) -> VawState:
    state.b += y * np.asarray(x, dtype=float)
    return state
