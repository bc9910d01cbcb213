import numpy as np
import pytest

from poslr.core_types import ProblemConfig, Stream
from poslr.datagen import gen_agnostic
from poslr.online_greedy import run_algorithm2, schedule_params
from poslr.supermodular import BatchSetFunction


def test_schedule_examples():
    B, k1, budgets = schedule_params(ProblemConfig(d=16, k=2, k0=8, T=32000), kappa=1.0)
    assert B == 20
    assert (B, k1, budgets) == schedule_params(ProblemConfig(d=16, k=2, k0=8, T=32000, kappa=1.0))
    assert schedule_params(ProblemConfig(d=1, k=1, k0=1, T=1), kappa=1.0) == (1, 1, [1])
    _, k1, budgets = schedule_params(ProblemConfig(d=16, k=2, k0=8, T=100, k1=3))
    assert k1 == 3 and budgets == [3, 3, 2]
    with pytest.raises(ValueError):
        schedule_params(ProblemConfig(d=4, k=1, k0=2, T=10), kappa=0.5)


def test_toy_batch_feedback():
    cfg = ProblemConfig(d=2, k=1, k0=2, T=2, B=2, k1=1)
    trace = run_algorithm2(Stream(np.eye(2), np.array([1.0, -1.0])), cfg)
    batch = trace.batches[0]
    assert batch.sets[0].tolist() == [0, 1]
    assert batch.feedback[0] == pytest.approx({0: 0.5, 1: 0.5})


@pytest.fixture(scope="module")
def agnostic_trace():
    cfg = ProblemConfig(d=8, k=2, k0=4, T=403, B=10, k1=2, seed=4, mode="agnostic")
    stream = gen_agnostic(cfg)
    return stream, run_algorithm2(stream, cfg)


def test_budget_and_nesting_invariants(agnostic_trace):
    stream, trace = agnostic_trace
    assert len(trace.batches) == 41 and trace.batches[-1].length == 3
    for batch in trace.batches:
        assert sum(len(U) for U in batch.sets) <= 4
        assert len(batch.query) <= 4
        assert batch.nested[0] == ()
        for i, j in enumerate(batch.chosen, start=1):
            assert j in batch.sets[i - 1]
            assert set(batch.nested[i]) == set(batch.nested[i - 1]) | {j}
            assert len(batch.nested[i]) <= i
    for t in range(1, len(stream) + 1):
        batch = trace.batches[(t - 1) // trace.B]
        support = set(np.flatnonzero(trace.plays[t - 1]).tolist())
        assert support <= set(batch.nested[-1])
        assert len(trace.query_set(t)) <= 4


def test_feedback_recomputes_from_full_batch(agnostic_trace):
    stream, trace = agnostic_trace
    for batch in trace.batches:
        sl = slice(batch.start, batch.start + batch.length)
        g = BatchSetFunction(stream.X[sl], stream.y[sl])
        for i, observed in enumerate(batch.feedback):
            assert set(observed) == set(batch.sets[i].tolist())
            for j, val in observed.items():
                assert 0.0 <= val <= 1.0
                assert val == pytest.approx(g(set(batch.nested[i]) | {j}), abs=1e-12)
    assert trace.clipped_feedback == 0


def test_deterministic(agnostic_trace):
    stream, trace = agnostic_trace
    cfg = ProblemConfig(d=8, k=2, k0=4, T=403, B=10, k1=2, seed=4, mode="agnostic")
    again = run_algorithm2(stream, cfg)
    np.testing.assert_array_equal(trace.losses, again.losses)
