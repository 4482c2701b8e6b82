import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnumrange.closedform import (
    EllipseDescriptor,
    is_ellipse,
    rank1_range,
    rank2_diag_range,
    rank2_ellipse,
    rank2_matrix,
    rank2_nonellipse_support,
    symmetry_predict,
    trace_candidates,
)
from cnumrange.errors import ContractError
from cnumrange.linalg import INFINITE, as_operator, random_matrix, random_unitary, trace
from cnumrange.numrange import boundary, grid, interval, is_symmetric, region_from_support, support_values
from cnumrange.oracle import sample_values
from cnumrange.prng import SplitMix64, stream_seed

from conftest import random_c

TH = grid(720)


def test_rank1_examples():
    e = rank1_range(np.array([[0, 1], [0, 0]]), (1, 0))
    assert e.focus1 == 0 and e.focus2 == 0 and e.semi_minor == pytest.approx(0.5)
    x = np.array([0.6, 0.8j])
    e = rank1_range(np.outer(x, x.conj()), (2, 1))
    assert e.degenerate == "segment" and {e.focus1, e.focus2} == {2, 1}
    T = as_operator(np.array([[0, 2], [0, 0]]), INFINITE)
    e = rank1_range(T, (1, -1))
    assert (e.focus1, e.focus2, e.semi_minor) == (0, 0, pytest.approx(2))
    with pytest.raises(ContractError):
        rank1_range(np.eye(2), (1, 0))


def test_rank1_nilpotent_against_frames():
    T = np.array([[0, 1], [0, 0]])
    pts = sample_values(T, (1, 0), 50_000, 3).points
    assert np.max(np.abs(pts)) <= 0.5 + 1e-12
    assert np.max(np.abs(pts)) > 0.49


def test_rank2_diag_examples():
    assert tuple(rank2_diag_range(2, -1, (1, -1), 3)) == (-3, 3)
    assert tuple(rank2_diag_range(3, 1, (2, 1), 2)) == (5, 7)
    assert tuple(rank2_diag_range(-1, -2, (2, 1), 2)) == (-5, -4)
    assert tuple(rank2_diag_range(-1, -3, (2, 1), 2)) == (-7, -5)
    assert tuple(interval(np.diag([-1.0, -2.0]), (2, 1))) == pytest.approx((-5, -4))
    for a, b in ((0, 1), (1, 0), (1, 2)):
        with pytest.raises(ContractError):
            rank2_diag_range(a, b, (2, 1), 2)


def test_rank2_diag_single_signed_at_k_plus_one():
    # the clipped weights are not valid with exactly one spare dimension
    with pytest.raises(ContractError):
        rank2_diag_range(3, 1, (2, 1), 3)
    with pytest.raises(ContractError):
        rank2_diag_range(-1, -3, (-1, -2), 3)
    assert tuple(interval(as_operator(np.diag([3.0, 1.0]), 3), (2, 1))) == pytest.approx((1, 7))
    assert tuple(rank2_diag_range(3, 1, (2, 1), 4)) == (0, 7)
    assert tuple(rank2_diag_range(3, 1, (2, -1), 3)) == tuple(interval(as_operator(np.diag([3.0, 1.0]), 3), (2, -1)))


def test_rank2_ellipse_examples():
    e = rank2_ellipse(0, 0, 2, (1, 0), 2)
    assert (e.focus1, e.focus2, e.semi_minor) == (0, 0, 1)
    e = rank2_ellipse(1, -1, 3, (1, 0), 2)
    assert (e.focus1, e.focus2, e.semi_minor) == (1, -1, 1.5)
    e = rank2_ellipse(1, -1, 3, (1, -1), 2)
    assert (e.focus1, e.focus2, e.semi_minor) == (2, -2, 3)
    with pytest.raises(ContractError):
        rank2_ellipse(1, 1, 1, (1, 0), 2)


def test_rank2_nonellipse_examples():
    assert rank2_nonellipse_support(2, 1, 1, (1, -1), 0.0) == pytest.approx((3 + math.sqrt(2)) / 2)
    assert rank2_nonellipse_support(2, 1, 1, (1, -1), math.pi / 2) == pytest.approx(1.0)
    vals = rank2_nonellipse_support(2, 1, 1.3, (1, 0, -1), TH)
    assert np.allclose(vals, np.roll(vals, -360))
    with pytest.raises(ContractError):
        rank2_nonellipse_support(2, 1, 1, (2, 1), 0.0)
    with pytest.raises(ContractError):
        rank2_nonellipse_support(2, 1, 3, (1, -1), 0.0)
    with pytest.raises(ContractError):
        rank2_nonellipse_support(2, 1, 1, (1, -1), 0.0, ambient=2)


def test_is_ellipse_examples():
    e = rank1_range(random_matrix(3, 4, rank=1), (2, 1))
    ok, fit, res = is_ellipse(region_from_support(TH, e.support(TH)))
    assert ok and res <= 1e-6
    A = as_operator(rank2_matrix(2, 1, 1), 3)
    ok, _, res = is_ellipse(boundary(A, (1, -1)))
    assert not ok and res > 1e-4
    ok, fit, res = is_ellipse(boundary(np.eye(2), (1, 0)))
    assert ok and fit.beta == pytest.approx(0, abs=1e-12) and fit.semi_minor == pytest.approx(0, abs=1e-12)


def test_trace_candidate_examples():
    assert trace_candidates(EllipseDescriptor(2 + 2j, 1 + 1j, 0), (2, 1)) == (1 + 1j,)
    assert set(trace_candidates(EllipseDescriptor(3, -3, 0), (1, -1))) == {3, -3}
    assert trace_candidates(EllipseDescriptor(0, 0, 1), (1, -1)) == (0,)
    with pytest.raises(ContractError):
        trace_candidates(EllipseDescriptor(1, 1, 0), (2, 1))


def test_symmetry_examples():
    assert symmetry_predict(np.diag([1.0, 0, 0]), (1, 1, -1)) is True
    assert symmetry_predict(np.diag([1.0, 1, 0]), (1, 1, -1)) is False
    assert symmetry_predict(np.diag([1.0, 1, -1, 0]), (1, 1, -1)) is None
    assert is_symmetric(boundary(np.diag([1.0, 0, 0]), (1, 1, -1)))
    assert not is_symmetric(boundary(np.diag([1.0, 1, 0]), (1, 1, -1)))
    with pytest.raises(ContractError):
        symmetry_predict(np.array([[0, 1], [0, 0]]), (1, 1, -1))
    with pytest.raises(ContractError):
        symmetry_predict(np.eye(3), (2, 1))


def test_descriptor_json_roundtrip():
    e = EllipseDescriptor(1 + 2j, -1, 0.25)
    assert EllipseDescriptor.from_json(e.to_json()).to_json() == e.to_json()
    assert e.to_json() == {"f1": [1.0, 2.0], "f2": [-1.0, 0.0], "semi_minor": 0.25}
    assert EllipseDescriptor(1, 1, 0).degenerate == "point"
    with pytest.raises(ContractError):
        EllipseDescriptor(0, 0, -1)


seeds = st.integers(0, 2**32)


@given(seeds, st.sampled_from([0, 1, 3, None]))
def test_rank1_support_agrees(seed, extra):
    n = 2 + seed % 5
    c = random_c(stream_seed(seed, 1), 2 + seed % 3, distinct=False)
    n = max(n, len(c))
    T = as_operator(random_matrix(n, seed, rank=1), INFINITE if extra is None else n + extra)
    e = rank1_range(T, c)
    assert np.max(np.abs(e.support(TH) - support_values(T, c, TH))) <= 1e-8
    assert any(abs(t - trace(T.block)) <= 1e-8 for t in trace_candidates(e, c, T.ambient))


@given(seeds)
def test_ellipse_round_trip(seed):
    rng = SplitMix64(seed)
    f1, f2 = complex(*rng.normal(2)), complex(*rng.normal(2))
    e = EllipseDescriptor(f1, f2, float(abs(rng.normal(1)[0])))
    ok, fit, res = is_ellipse(region_from_support(TH, e.support(TH)))
    assert ok and res <= 1e-8
    same = abs(fit.focus1 - f1) + abs(fit.focus2 - f2)
    swapped = abs(fit.focus1 - f2) + abs(fit.focus2 - f1)
    assert min(same, swapped) <= 1e-6
    assert fit.semi_minor == pytest.approx(e.semi_minor, abs=1e-6)


@given(seeds, st.sampled_from([(1, -1), (1, 0, -1), (1, 1, -1, -1), (2, 1, -1, -2)]),
       st.sampled_from([3, 5, INFINITE]))
def test_nonellipse_support_agrees(seed, c, ambient):
    rng = SplitMix64(seed)
    a, b = sorted(0.2 + 2 * rng.uniform(2), reverse=True)
    frac = 0.05 + 0.9 * rng.uniform(1)[0]
    d = math.sqrt(frac * 4 * a * b) * np.exp(1j * 2 * np.pi * rng.uniform(1)[0])
    ambient = max(ambient, len(c))
    A = as_operator(rank2_matrix(a, b, d), ambient)
    assert np.max(np.abs(rank2_nonellipse_support(a, b, d, c, TH, ambient) - support_values(A, c, TH))) <= 1e-9


@given(seeds)
def test_symmetry_prediction_matches(seed):
    rng = SplitMix64(seed)
    c = (1, 1, -1) if seed % 2 else (2, 1, 0.5, -1, -2)
    p = 2 if seed % 2 else 3
    n = 5
    rank = 1 + seed % (p + 1)
    U = random_unitary(n, stream_seed(seed, 1))
    sign = 1 if rng.uniform(1)[0] < 0.5 else -1
    lam = np.zeros(n)
    lam[:rank] = sign * (0.5 + rng.uniform(rank))
    if rank > p:
        lam[rank - 1] *= -1
    S = U @ np.diag(lam) @ U.conj().T
    prediction = symmetry_predict(S, c)
    if prediction is not None:
        assert prediction == is_symmetric(boundary(S, c))
