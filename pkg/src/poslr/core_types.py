"""Domain types and the round protocol shared by both learners.

Coordinates are 0-based internally. Everything that leaves the process
(trace files, reports, CLI output) is converted to 1-based indices.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

MASK_MODES = ("exact-size", "bernoulli")
MODES = ("realizable", "agnostic")


@dataclass(frozen=True)
class ProblemConfig:
    """All knobs of one experiment.

    ``t0``, ``B`` and ``k1`` may be left as ``None``; the learners then derive
    them from the horizon (see :func:`default_t0` and
    :func:`poslr.online_greedy.schedule_params`).
    """

    d: int
    k: int
    k0: int
    T: int
    sigma: float = 0.1
    delta: float = 0.1
    c_lambda: float = 1.0
    t0: Optional[int] = None
    k1: Optional[int] = None
    B: Optional[int] = None
    vaw_reg: float = 1.0
    mask_mode: str = "exact-size"
    seed: int = 0
    mode: str = "realizable"
    kappa: float = 2.0
    flip_fraction: float = 0.1

    def replace(self, **changes) -> "ProblemConfig":
        return dataclasses.replace(self, **changes)

    def resolved_t0(self) -> int:
        return default_t0(self.k, self.d, self.T) if self.t0 is None else self.t0


def default_t0(k: int, d: int, T: int) -> int:
    """Warm-up length ceil(2 k ln(d) ln(T + 1))."""
    return int(math.ceil(2.0 * k * math.log(d) * math.log(T + 1))) if d > 1 else 1


@dataclass
class ValidationReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [f"{name}: {rule}" for name, rule in self.violations]


def validate_config(cfg: ProblemConfig) -> ValidationReport:
    """Check every field invariant and collect (field, rule) violations."""
    report = ValidationReport()
    bad = report.violations.append
    for name in ("d", "k", "k0", "T"):
        if not isinstance(getattr(cfg, name), (int, np.integer)):
            bad((name, f"{name} must be an integer"))
    if report.violations:
        return report
    if cfg.k < 1:
        bad(("k", "1 ≤ k"))
    if cfg.k > cfg.k0:
        bad(("k0", "k ≤ k0"))
    if cfg.k0 > cfg.d:
        bad(("k0", "k0 ≤ d"))
    if cfg.T < 1:
        bad(("T", "T ≥ 1"))
    if not cfg.sigma >= 0:
        bad(("sigma", "sigma ≥ 0"))
    if not 0 < cfg.delta < 1:
        bad(("delta", "delta ∈ (0,1)"))
    if not cfg.c_lambda > 0:
        bad(("c_lambda", "c_lambda > 0"))
    if not cfg.vaw_reg > 0:
        bad(("vaw_reg", "vaw_reg > 0"))
    if cfg.t0 is not None and cfg.t0 < 0:
        bad(("t0", "t0 ≥ 0"))
    if cfg.k1 is not None and not 1 <= cfg.k1 <= cfg.k0:
        bad(("k1", "1 ≤ k1 ≤ k0"))
    if cfg.B is not None and cfg.B < 1:
        bad(("B", "B ≥ 1"))
    if cfg.mask_mode not in MASK_MODES:
        bad(("mask_mode", f"mask_mode ∈ {set(MASK_MODES)}"))
    if cfg.mode not in MODES:
        bad(("mode", f"mode ∈ {set(MODES)}"))
    if not cfg.kappa >= 1:
        bad(("kappa", "kappa ≥ 1"))
    if not 0 <= cfg.flip_fraction <= 1:
        bad(("flip_fraction", "flip_fraction ∈ [0,1]"))
    if not 0 <= cfg.seed < 2**64:
        bad(("seed", "seed is a 64-bit unsigned integer"))
    return report


def squared_loss(y: float, y_hat: float) -> float:
    return float((y - y_hat) ** 2)


@dataclass(frozen=True)
class LabeledExample:
    x: np.ndarray
    y: float


@dataclass(frozen=True)
class MaskedObservation:
    """What the learner sees in one round: x_t restricted to the mask, and y_t."""

    round: int
    mask: np.ndarray
    values: np.ndarray
    y: float

    def __post_init__(self):
        if len(self.mask) != len(self.values):
            raise ValueError("mask and values differ in length")
        if len(self.mask) > 1 and np.any(np.diff(self.mask) <= 0):
            raise ValueError("mask indices must be strictly increasing")

    @classmethod
    def observe(cls, t: int, x: np.ndarray, y: float, mask) -> "MaskedObservation":
        mask = np.asarray(mask, dtype=np.intp)
        return cls(t, mask, np.asarray(x, dtype=float)[mask], float(y))


@dataclass(frozen=True)
class SparseWeight:
    w: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.w)

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.w))

    @classmethod
    def zeros(cls, d: int) -> "SparseWeight":
        return cls(np.zeros(d))


@dataclass
class RegretLedger:
    """Per-round losses of a learner plus regret at selected checkpoints.

    ``checkpoints`` holds ``(t, cum_loss, comparator_loss, regret)`` tuples with
    ``t`` counted in rounds (1-based, inclusive).
    """

    losses: np.ndarray
    checkpoints: list[tuple[int, float, float, float]] = field(default_factory=list)

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.losses)

    def cum_loss(self, t: int) -> float:
        return float(np.sum(self.losses[:t]))

    def add_checkpoint(self, t: int, comparator_loss: float) -> None:
        cum = self.cum_loss(t)
        self.checkpoints.append((t, cum, float(comparator_loss), cum - float(comparator_loss)))

    def rebuilt(self) -> "RegretLedger":
        """Recompute every checkpoint from the per-round losses alone."""
        fresh = RegretLedger(self.losses.copy())
        for t, _, comp, _ in self.checkpoints:
            fresh.add_checkpoint(t, comp)
        return fresh


@dataclass
class Stream:
    """Materialised labelled examples; rows of ``X`` are x_1, ..., x_T."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.X.ndim != 2 or self.y.shape != (self.X.shape[0],):
            raise ValueError("X must be T x d and y of length T")

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.X.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Stream(self.X[i], self.y[i])
        return LabeledExample(self.X[i], float(self.y[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @classmethod
    def from_examples(cls, examples) -> "Stream":
        examples = list(examples)
        return cls(np.array([e.x for e in examples], dtype=float),
                   np.array([e.y for e in examples], dtype=float))


def as_stream(stream) -> Stream:
    return stream if isinstance(stream, Stream) else Stream.from_examples(stream)
