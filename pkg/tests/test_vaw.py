import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poslr.vaw import VawState, vaw_predict, vaw_update


def test_first_prediction_is_zero():
    s = VawState(3)
    y_hat, w = vaw_predict(s, np.array([1.0, -1.0, 0.5]))
    assert y_hat == 0.0
    np.testing.assert_array_equal(w, 0.0)


def test_one_dimensional_recursion():
    s = VawState(1, a=1.0)
    vaw_predict(s, np.array([1.0]))
    vaw_update(s, np.array([1.0]), 1.0)
    y_hat, _ = vaw_predict(s, np.array([1.0]))
    assert y_hat == pytest.approx(1 / 3)


def test_zero_label_leaves_b():
    s = VawState(2)
    vaw_update(s, np.array([1.0, 1.0]), 0.0)
    np.testing.assert_array_equal(s.b, 0.0)


def test_empty_support_predicts_zero():
    assert vaw_predict(VawState(0), np.zeros(0))[0] == 0.0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_coordinate_permutation_equivariance(seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, (15, 3))
    y = rng.uniform(-1, 1, 15)
    perm = rng.permutation(3)
    a, b = VawState(3), VawState(3)
    for x, yy in zip(X, y):
        pa, _ = vaw_predict(a, x)
        pb, _ = vaw_predict(b, x[perm])
        assert pa == pytest.approx(pb, abs=1e-10)
        vaw_update(a, x, yy)
        vaw_update(b, x[perm], yy)


@pytest.mark.parametrize("seed", range(5))
def test_regret_within_standard_bound(seed):
    # sum of losses <= a||u||^2 + sum (y - <u, x>)^2 + dim * ln(1 + B max||x||^2 / (a dim)), |y| <= 1
    rng = np.random.default_rng(seed)
    B, dim, a = 300, 4, 1.0
    X = rng.choice([-1.0, 1.0], size=(B, dim))
    y = np.clip(X @ rng.normal(size=dim) / dim + 0.3 * rng.normal(size=B), -1, 1)
    s = VawState(dim, a)
    total = 0.0
    for x, yy in zip(X, y):
        y_hat, _ = vaw_predict(s, x)
        total += (yy - y_hat) ** 2
        vaw_update(s, x, yy)
    u = np.linalg.solve(a * np.eye(dim) + X.T @ X, X.T @ y)
    bound = a * u @ u + np.sum((y - X @ u) ** 2) + dim * np.log(1 + B * dim / (a * dim))
    assert total <= bound + 1e-9
