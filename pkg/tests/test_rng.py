import numpy as np

from scramble_lab.rng import RngSeed, default_seed, map_streams


def test_same_seed_same_stream():
    a = RngSeed(5, 3).generator().standard_normal(10)
    b = RngSeed(5, 3).generator().standard_normal(10)
    np.testing.assert_array_equal(a, b)


def test_streams_differ():
    a = RngSeed(5, 3).generator().standard_normal(1000)
    b = RngSeed(5, 4).generator().standard_normal(1000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.15


def test_children_stable_and_distinct():
    s = RngSeed(9)
    assert s.child(4) == s.child(4)
    assert len({c.stream for c in s.children(100)}) == 100


def test_worker_count_does_not_change_results():
    draw = lambda s: s.generator().standard_normal(3)
    one = map_streams(draw, RngSeed(1), 20, workers=1)
    four = map_streams(draw, RngSeed(1), 20, workers=4)
    np.testing.assert_array_equal(np.stack(one), np.stack(four))


def test_env_seed(monkeypatch):
    monkeypatch.setenv("SCRAMBLE_LAB_SEED", "77")
    assert default_seed() == RngSeed(77)
