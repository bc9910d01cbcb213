import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poslr.conditioning import (audit_windows, bbrcnp_audit, conditioning_report,
                                restricted_condition_number, rip_epsilon)


def _hadamard(n):
    H = np.array([[1.0]])
    while H.shape[0] < n:
        H = np.block([[H, H], [H, -H]])
    return H


def test_scaled_identity():
    X = math.sqrt(2) * np.eye(2)
    assert rip_epsilon(X, 1) == pytest.approx(0.0, abs=1e-15)
    assert restricted_condition_number(X, 1) == pytest.approx(1.0, abs=1e-15)


def test_diagonal_design():
    X = np.diag([2.0, 1.0])
    assert rip_epsilon(X, 1) == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
    assert restricted_condition_number(X, 1) == pytest.approx(2.0, abs=1e-12)


def test_full_sparsity_is_global_singular_values(rng):
    X = rng.normal(size=(15, 4))
    s = np.linalg.svd(X / math.sqrt(15), compute_uv=False)
    assert rip_epsilon(X, 4) == pytest.approx(max(s[0] - 1, 1 - s[-1]), abs=1e-10)
    assert restricted_condition_number(X, 4) == pytest.approx(s[0] / s[-1], rel=1e-10)


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_hadamard_designs_are_exact_isometries(n):
    H = _hadamard(n)
    for k in range(1, min(n, 4) + 1):
        assert rip_epsilon(H, k) == pytest.approx(0.0, abs=1e-12)
        assert restricted_condition_number(H, k) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_condition_number_bounded_by_rip(seed):
    rng = np.random.default_rng(seed)
    n, d = int(rng.integers(20, 80)), int(rng.integers(2, 7))
    X = rng.choice([-1.0, 1.0], size=(n, d))
    k = int(rng.integers(1, d + 1))
    eps = rip_epsilon(X, k)
    kappa = restricted_condition_number(X, k)
    assert kappa >= 1 - 1e-12
    if eps < 1:
        assert kappa <= (1 + eps) / (1 - eps) + 1e-9


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_invariances_and_sandwich(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(12, 5))
    k = int(rng.integers(1, 5))
    kappa = restricted_condition_number(X, k)
    assert restricted_condition_number(3.7 * X, k) == pytest.approx(kappa, rel=1e-9)
    assert restricted_condition_number(X[:, rng.permutation(5)], k) == pytest.approx(kappa, rel=1e-9)
    rep = conditioning_report(X, k)
    for S in (rep.worst_support_min, rep.worst_support_max):
        assert len(S) <= k
    # sandwich: every vector supported on any k-set obeys the extreme bounds
    G = X.T @ X / 12
    for _ in range(20):
        S = rng.choice(5, size=k, replace=False)
        v = np.zeros(5)
        v[S] = rng.normal(size=k)
        ratio = math.sqrt(v @ G @ v) / np.linalg.norm(v)
        assert 1 - rep.epsilon - 1e-9 <= ratio <= 1 + rep.epsilon + 1e-9


def test_duplicated_rows_window_is_infinite():
    X = np.tile(np.array([[1.0, 1.0]]), (4, 1))
    rep = bbrcnp_audit(X, k=2, t0=2, kappa_bound=10.0)
    assert not rep.passed
    assert math.isinf(rep.worst.kappa)
    assert rep.to_dict()["worst_window"]["kappa"] == "inf"


def test_whole_window_equals_global_condition_number(rng):
    X = rng.normal(size=(30, 3))
    rep = bbrcnp_audit(X, k=3, t0=30, kappa_bound=100.0, window_policy="whole")
    assert rep.windows_checked == 1
    assert rep.worst.kappa == pytest.approx(restricted_condition_number(X, 3), rel=1e-9)


def test_window_policies():
    assert list(audit_windows(8, 2, "dyadic")) == [(0, 2), (2, 2), (4, 2), (6, 2), (0, 4), (2, 4), (4, 4), (0, 8)]
    assert len(list(audit_windows(5, 2, "all"))) == 4 + 3 + 2 + 1
    assert (0, 3) in list(audit_windows(8, 4, "dyadic", batch_length=3))
    with pytest.raises(ValueError):
        list(audit_windows(8, 2, "random"))


def test_rademacher_stream_passes_loose_bound(rng):
    X = rng.choice([-1.0, 1.0], size=(512, 6))
    rep = bbrcnp_audit(X, k=2, t0=64, kappa_bound=3.0, keep_windows=True)
    assert rep.passed
    assert len(rep.windows) == rep.windows_checked
