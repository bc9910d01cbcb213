"""Seeded synthetic streams with Rademacher designs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core_types import ProblemConfig, SparseWeight, Stream
from .rng import substream


@dataclass(frozen=True)
class GroundTruth:
    w_star: SparseWeight
    sigma: float


def rademacher(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    return rng.integers(0, 2, size=(n, d)).astype(float) * 2.0 - 1.0


def random_sparse_unit_l1(rng: np.random.Generator, d: int, k: int) -> np.ndarray:
    """k-sparse vector with uniform support and signs, magnitudes in [0.5, 1) rescaled to unit l1 norm."""
    w = np.zeros(d)
    support = rng.choice(d, size=k, replace=False)
    mags = rng.uniform(0.5, 1.0, size=k)
    signs = rng.choice([-1.0, 1.0], size=k)
    w[support] = signs * mags / mags.sum()
    return w


def gen_realizable(cfg: ProblemConfig, seed: Optional[int] = None) -> tuple[Stream, GroundTruth]:
    """y_t = <x_t, w*> + N(0, sigma^2) with i.i.d. Rademacher x_t."""
    seed = cfg.seed if seed is None else seed
    w_star = random_sparse_unit_l1(substream(seed, "truth"), cfg.d, cfg.k)
    X = rademacher(substream(seed, "stream"), cfg.T, cfg.d)
    noise = substream(seed, "noise").standard_normal(cfg.T) * cfg.sigma
    y = X @ w_star + noise
    return Stream(X, y), GroundTruth(SparseWeight(w_star), cfg.sigma)


def phase_vectors(cfg: ProblemConfig, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Two k-sparse unit-l1 vectors on one support: same signs, magnitudes reversed."""
    w_a = random_sparse_unit_l1(substream(seed, "truth"), cfg.d, cfg.k)
    support = np.flatnonzero(w_a)
    w_b = np.zeros(cfg.d)
    w_b[support] = np.sign(w_a[support]) * np.abs(w_a[support[::-1]])
    return w_a, w_b


def gen_agnostic(cfg: ProblemConfig, seed: Optional[int] = None, switch: bool = True) -> Stream:
    """Rademacher features with labels from a phase-switching sparse model.

    The generating vector changes at the midpoint, and a fixed fraction of
    rounds (chosen obliviously, before the run) have their label sign
    flipped. Labels are clipped to [-1, 1].
    """
    seed = cfg.seed if seed is None else seed
    T = cfg.T
    w_a, w_b = phase_vectors(cfg, seed)
    if not switch:
        w_b = w_a
    X = rademacher(substream(seed, "stream"), T, cfg.d)
    clean = np.empty(T)
    half = T // 2
    clean[:half] = X[:half] @ w_a
    clean[half:] = X[half:] @ w_b
    adv = substream(seed, "adversary")
    n_flip = int(round(cfg.flip_fraction * T))
    flips = np.ones(T)
    if n_flip:
        flips[adv.choice(T, size=n_flip, replace=False)] = -1.0
    y = np.clip(flips * clean, -1.0, 1.0)
    return Stream(X, y)
