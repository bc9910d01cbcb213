"""Unbiased Gram and moment estimates from masked feature observations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_types import MaskedObservation
from .errors import OffDiagonalUncorrectable


def sample_mask(rng: np.random.Generator, d: int, k0: int, mode: str = "exact-size") -> np.ndarray:
    """Draw a sorted 0-based query set.

    ``exact-size`` picks a uniform subset of exactly ``k0`` coordinates;
    ``bernoulli`` includes each coordinate independently with probability k0/d.
    """
    if not 1 <= k0 <= d:
        raise ValueError("need 1 <= k0 <= d")
    if mode == "exact-size":
        return np.sort(rng.choice(d, size=k0, replace=False))
    if mode == "bernoulli":
        return np.flatnonzero(rng.random(d) < k0 / d)
    raise ValueError(f"unknown mask mode {mode!r}")


def unbiased_estimate(obs: MaskedObservation, d: int, k0: int) -> np.ndarray:
    x_hat = np.zeros(d)
    x_hat[obs.mask] = (d / k0) * obs.values
    return x_hat


def offdiagonal_factor(d: int, k0: int, mode: str) -> float:
    """Multiplier that removes the co-inclusion bias of off-diagonal entries.

    Under exact-size sampling two distinct coordinates are observed together
    with probability k0(k0-1)/(d(d-1)) rather than (k0/d)^2.
    """
    if mode == "bernoulli" or d == 1:
        return 1.0
    if k0 == 1:
        raise OffDiagonalUncorrectable(
            "exact-size masks with k0=1 never observe two coordinates together")
    return k0 * (d - 1) / (d * (k0 - 1))


@dataclass
class EstimatorState:
    d: int
    k0: int
    mask_mode: str = "exact-size"
    t: int = 0
    G_hat: np.ndarray = None
    b_hat: np.ndarray = None
    D_hat: np.ndarray = None

    def __post_init__(self):
        if self.G_hat is None:
            self.G_hat = np.zeros((self.d, self.d))
        if self.b_hat is None:
            self.b_hat = np.zeros(self.d)
        if self.D_hat is None:
            self.D_hat = np.zeros(self.d)

    def copy(self) -> "EstimatorState":
        return EstimatorState(self.d, self.k0, self.mask_mode, self.t,
                              self.G_hat.copy(), self.b_hat.copy(), self.D_hat.copy())


def accumulate(state: EstimatorState, x_hat: np.ndarray, y: float) -> EstimatorState:
    """Fold one estimated row into the state (in place) and return it."""
    state.G_hat += np.outer(x_hat, x_hat)
    state.b_hat += y * x_hat
    state.D_hat = (1.0 - state.k0 / state.d) * np.diag(state.G_hat).copy()
    state.t += 1
    return state


def debiased_gram(state: EstimatorState) -> np.ndarray:
    """Plug-in unbiased estimate of X^T X (not normalized by t)."""
    rho = offdiagonal_factor(state.d, state.k0, state.mask_mode)
    G = rho * state.G_hat
    np.fill_diagonal(G, np.diag(state.G_hat) - state.D_hat)
    return G


def residual(state: EstimatorState, w: np.ndarray) -> np.ndarray:
    """(1/t)(b_hat - G w); the Dantzig constraint bounds its sup-norm."""
    return (state.b_hat - debiased_gram(state) @ w) / state.t
