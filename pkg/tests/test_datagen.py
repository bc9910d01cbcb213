import math

import numpy as np
import pytest

from poslr.conditioning import rip_epsilon
from poslr.core_types import ProblemConfig
from poslr.datagen import gen_agnostic, gen_realizable, phase_vectors, random_sparse_unit_l1


def test_noiseless_labels_are_exact():
    stream, truth = gen_realizable(ProblemConfig(d=6, k=2, k0=3, T=200, sigma=0.0))
    np.testing.assert_array_equal(stream.y, stream.X @ truth.w_star.w)


def test_rademacher_entries():
    stream, _ = gen_realizable(ProblemConfig(d=6, k=2, k0=3, T=200))
    assert set(np.unique(stream.X).tolist()) == {-1.0, 1.0}
    assert np.all(np.abs(stream.X).max(axis=1) == 1.0)


def test_noise_mean_within_clt_band():
    cfg = ProblemConfig(d=5, k=2, k0=2, T=10_000, sigma=0.3, seed=9)
    stream, truth = gen_realizable(cfg)
    noise = stream.y - stream.X @ truth.w_star.w
    assert abs(noise.mean()) <= 4 * cfg.sigma / math.sqrt(cfg.T)
    assert noise.std() == pytest.approx(cfg.sigma, rel=0.05)


@pytest.mark.parametrize("seed", range(25))
def test_ground_truth_constraints(seed):
    w = random_sparse_unit_l1(np.random.default_rng(seed), 12, 3)
    assert np.count_nonzero(w) == 3
    assert np.abs(w).sum() == pytest.approx(1.0, abs=1e-15)
    assert np.abs(w).sum() <= 1.0 + 1e-15
    w_a, w_b = phase_vectors(ProblemConfig(d=12, k=3, k0=4, T=10), seed)
    assert np.array_equal(np.flatnonzero(w_a), np.flatnonzero(w_b))
    assert np.abs(w_b).sum() == pytest.approx(1.0)


def test_agnostic_labels_bounded_and_deterministic():
    cfg = ProblemConfig(d=8, k=2, k0=4, T=1000, seed=3, mode="agnostic")
    a, b = gen_agnostic(cfg), gen_agnostic(cfg)
    assert np.all(np.abs(a.y) <= 1.0)
    assert a.X.tobytes() == b.X.tobytes() and a.y.tobytes() == b.y.tobytes()
    assert gen_agnostic(cfg.replace(seed=4)).y.tobytes() != a.y.tobytes()


def test_agnostic_degenerates_to_clipped_realizable():
    cfg = ProblemConfig(d=8, k=2, k0=4, T=500, seed=3, flip_fraction=0.0, mode="agnostic")
    stream = gen_agnostic(cfg, switch=False)
    w_a, _ = phase_vectors(cfg, 3)
    np.testing.assert_array_equal(stream.y, np.clip(stream.X @ w_a, -1, 1))


def test_flip_count():
    cfg = ProblemConfig(d=8, k=2, k0=4, T=1000, seed=1, flip_fraction=0.1, mode="agnostic")
    w_a, _ = phase_vectors(cfg, 1)
    clean = gen_agnostic(cfg.replace(flip_fraction=0.0), switch=False).y
    flipped = gen_agnostic(cfg, switch=False).y
    changed = np.sum((clean != flipped) & (clean != 0))
    assert changed <= 100 and changed >= 100 - np.sum(clean == 0)


def test_realizable_generation_is_deterministic():
    cfg = ProblemConfig(d=6, k=2, k0=3, T=100, seed=11)
    (s1, t1), (s2, t2) = gen_realizable(cfg), gen_realizable(cfg)
    assert s1.X.tobytes() == s2.X.tobytes() and s1.y.tobytes() == s2.y.tobytes()
    assert np.array_equal(t1.w_star.w, t2.w_star.w)


def test_rademacher_designs_are_well_conditioned():
    d, k = 16, 3
    n = math.ceil(16 * k * math.log(d))
    good = 0
    for seed in range(40):
        stream, _ = gen_realizable(ProblemConfig(d=d, k=k, k0=4, T=n, seed=seed))
        good += rip_epsilon(stream.X, k) < 0.9
    assert good >= 38
