import numpy as np
import pytest

from cnumrange.errors import ContractError
from cnumrange.linalg import INFINITE, as_operator, random_hermitian, random_matrix
from cnumrange.numrange import boundary, interval
from cnumrange.oracle import (
    SampleCloud,
    hull_compare,
    rank1_probe,
    sample_values,
    sampled_extremes,
    sampling_dimension,
)


def test_identity_samples_are_exact():
    cloud = sample_values(np.eye(3), (2, 1, -0.5), 1000, 0)
    assert np.allclose(cloud.points, 2.5, atol=1e-12)


def test_diag_samples_inside_interval():
    vals = sample_values(np.diag([3.0, 1.0]), (2, 1), 100_000, 0).points.real
    assert vals.min() >= 5 - 1e-9 and vals.max() <= 7 + 1e-9


def test_determinism_and_thread_independence(monkeypatch):
    A = random_matrix(3, 1)
    monkeypatch.setenv("CNR_THREADS", "1")
    one = sample_values(A, (1, 0, -1), 10_000, 5).points
    monkeypatch.setenv("CNR_THREADS", "4")
    four = sample_values(A, (1, 0, -1), 10_000, 5).points
    assert np.array_equal(one, four)
    assert not np.array_equal(one, sample_values(A, (1, 0, -1), 10_000, 6).points)


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("CNR_THREADS", "many")
    with pytest.raises(ContractError):
        sample_values(np.eye(2), (1, 0), 10, 0)


def test_sampling_dimension():
    assert sampling_dimension(as_operator(np.eye(2), INFINITE), (1, 0, -1)) == 2 + 3 + 4
    assert sampling_dimension(as_operator(np.eye(2), 5), (1, 0)) == 5
    with pytest.raises(ContractError):
        sample_values(np.eye(2), (1, 0), 0, 0)


def test_hull_compare():
    A = random_matrix(3, 2)
    c = (1, 0.5, -1)
    region = boundary(A, c)
    cloud = sample_values(A, c, 100_000, 1)
    inside, coverage = hull_compare(cloud, region)
    assert inside and 0.9 <= coverage <= 1.0
    shifted = SampleCloud(cloud.points + 0.5 * (1 + abs(cloud.points).max()), cloud.seed)
    assert hull_compare(shifted, region)[0] is False


def test_hull_compare_degenerate():
    seg = boundary(np.diag([3.0, 1.0]), (2, 1))
    inside, coverage = hull_compare(sample_values(np.diag([3.0, 1.0]), (2, 1), 20_000, 0), seg)
    assert inside and coverage > 0.9
    point = boundary(np.eye(2), (1, 0))
    assert hull_compare(sample_values(np.eye(2), (1, 0), 100, 0), point) == (True, 1.0)


def test_coverage_grows_with_samples():
    gains = []
    for seed in range(5):
        A = random_matrix(3, 10 + seed)
        region = boundary(A, (2, 1))
        cov = [hull_compare(sample_values(A, (2, 1), N, seed), region)[1] for N in (1000, 10_000)]
        gains.append(cov[1] - cov[0])
    assert np.mean(gains) >= 0


def test_sampled_extremes_reach_interval():
    for seed, amb in ((1, None), (2, INFINITE)):
        S = as_operator(random_hermitian(3, seed), amb)
        lo, hi = sampled_extremes(S, (2, 1, -1), 20_000, seed)
        iv = interval(S, (2, 1, -1))
        assert abs(lo - iv.lo) <= 1e-6 and abs(hi - iv.hi) <= 1e-6


def test_rank1_probe_examples():
    x, f = np.array([1.0, 1j, 0]), np.array([0.5, 2.0, 1.0])
    assert rank1_probe(np.outer(x, f.conj()), (2, 1)) == (True, None)
    ok, w = rank1_probe(np.eye(2), (2, 1))
    assert not ok and w.kind == "B1" and w.reason == "foci ratio"
    assert tuple(interval(w.product, (2, 1))) == pytest.approx((-1, 1))
    ok, w = rank1_probe(np.eye(3), (1, 0, -1))
    assert not ok and w.kind == "B4" and w.reason == "not an ellipse"
    ok, w = rank1_probe(np.eye(3), (1, 1, -1))
    assert w.kind == "B2"
    ok, w = rank1_probe(np.eye(2), (1, -1))
    assert w.kind == "B3" and w.reason == "singleton"
    with pytest.raises(ContractError):
        rank1_probe(np.zeros((2, 2)), (2, 1))
