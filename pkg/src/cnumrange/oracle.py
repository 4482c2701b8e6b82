"""Brute-force ground truth by sampling random orthonormal frames.

Nothing here calls the eigensolver-based range code to produce values; the
region is only consulted when comparing against it.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import geometry
from .closedform import is_ellipse
from .coefficients import adjusted, as_coefficients, classify_regime
from .errors import ContractError, InconsistencyError
from .linalg import adjoint, as_operator, check_hermitian, jacobi_eigh, numerical_rank, orthonormalize
from .numrange import boundary, contains, radius
from .prng import SplitMix64, stream_seed

CHUNK = 4096
INFINITE_PADDING = 4


def thread_count():
    """Worker threads for sampling, capped by ``CNR_THREADS`` (default: CPU count, at most 8)."""
    env = os.environ.get("CNR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ContractError(f"CNR_THREADS must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True, eq=False)
class SampleCloud:
    points: np.ndarray
    seed: int

    @property
    def N(self):
        return len(self.points)

    def to_csv(self):
        return "".join(f"{z.real!r},{z.imag!r}\n" for z in self.points)


def sampling_dimension(A, c):
    """Frame dimension: the ambient one, or ``m + k + 4`` for an infinite ambient."""
    A = as_operator(A)
    c = as_coefficients(c)
    if A.is_infinite:
        return A.size + c.k + INFINITE_PADDING
    if A.ambient < c.k:
        raise ContractError(f"ambient dimension {A.ambient} < k = {c.k}")
    return A.ambient


def _frames(n, k, count, seed):
    G = SplitMix64(seed).complex_normal((count, n, k))
    Q, _ = np.linalg.qr(G)
    return Q


def _frame_values(block, weights, E):
    # Only the first m coordinates of each frame vector see the block.
    m = block.shape[0]
    top = E[:, :m, :]
    diag = np.einsum("bij,ik,bkj->bj", np.conj(top), block, top)
    return diag @ weights


def _chunks(N):
    return [(i, min(CHUNK, N - i * CHUNK)) for i in range((N + CHUNK - 1) // CHUNK)]


def _run_chunks(task, N):
    jobs = _chunks(N)
    workers = min(thread_count(), len(jobs))
    if workers <= 1:
        return [task(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, jobs))


def sample_values(A, c, N, seed):
    """``N`` values ``sum_j c_j <A e_j, e_j>`` over seeded random frames.

    Chunk ``i`` always draws from substream ``stream_seed(seed, i)``, so the
    result does not depend on the number of threads.
    """
    A = as_operator(A)
    c = as_coefficients(c)
    N = int(N)
    if N < 1:
        raise ContractError("sample count must be positive")
    n = sampling_dimension(A, c)
    weights = np.asarray(c.entries, dtype=np.complex128)

    def task(job):
        index, count = job
        E = _frames(n, c.k, count, stream_seed(seed, index))
        return _frame_values(A.block, weights, E)

    return SampleCloud(np.concatenate(_run_chunks(task, N)), seed)


# -- extremes of a Hermitian operator -----------------------------------------

def _frame_objective(S, weights, E):
    return float(np.real(np.einsum("ij,ik,kj->j", np.conj(E), S, E) @ weights))


def _polish(S, weights, E, sign, max_iter=500, gtol=1e-12):
    """Riemannian ascent of ``sign * f`` on the Stiefel manifold from frame ``E``.

    ``f(E) = Re tr(E* S E C)`` has Euclidean gradient ``2 S E C``. Steps use the
    tangent projection ``G - E sym(E* G)``, Gram-Schmidt retraction and an
    Armijo backtracking search started from a Barzilai-Borwein length.
    """
    C = np.diag(weights)
    value = sign * _frame_objective(S, weights, E)
    step = 0.5 / (1.0 + float(np.max(np.abs(S))) * float(np.max(np.abs(weights))))
    prev = None
    for _ in range(max_iter):
        G = sign * 2.0 * S @ E @ C
        EG = adjoint(E) @ G
        R = G - E @ (0.5 * (EG + adjoint(EG)))
        gnorm2 = float(np.sum(np.abs(R) ** 2))
        if gnorm2 <= gtol * gtol:
            break
        if prev is not None:
            dE, dR = E - prev[0], R - prev[1]
            denom = abs(float(np.real(np.vdot(dE, dR))))
            if denom > 0:
                step = float(np.sum(np.abs(dE) ** 2)) / denom
        for _ in range(60):
            trial = orthonormalize(E + step * R)
            tval = sign * _frame_objective(S, weights, trial)
            if tval >= value + 1e-4 * step * gnorm2:
                break
            step *= 0.5
        else:
            break
        prev = (E, R)
        E, value = trial, tval
    return sign * value


def sampled_extremes(S, c, N, seed):
    """``(min, max)`` of the frame functional for Hermitian ``S``.

    The best sampled frame for each end is refined by Stiefel-manifold ascent so
    the estimate is accurate well beyond what raw sampling can reach.
    """
    S = as_operator(S)
    c = as_coefficients(c)
    check_hermitian(S.block)
    n = sampling_dimension(S, c)
    weights = np.asarray(c.entries, dtype=np.complex128)

    def task(job):
        index, count = job
        E = _frames(n, c.k, count, stream_seed(seed, index))
        vals = np.real(_frame_values(S.block, weights, E))
        lo, hi = int(np.argmin(vals)), int(np.argmax(vals))
        return vals[lo], E[lo], vals[hi], E[hi]

    results = _run_chunks(task, int(N))
    lo_frame = min(results, key=lambda r: r[0])[1]
    hi_frame = max(results, key=lambda r: r[2])[3]
    full = np.zeros((n, n), dtype=np.complex128)
    m = S.size
    full[:m, :m] = S.block
    w = np.real(weights)
    return _polish(full, w, lo_frame, -1.0), _polish(full, w, hi_frame, 1.0)


# -- comparison against computed regions ---------------------------------------

def hull_compare(cloud, region, tol=1e-8):
    """``(containment, coverage)`` of a sample cloud against a computed region.

    Containment uses every sampled supporting half-plane with slack
    ``tol * (1 + r)``. Coverage is hull area over polygon area; segments compare
    cloud diameter with segment length, points report 1 when contained.
    """
    pts = np.asarray(cloud.points if isinstance(cloud, SampleCloud) else cloud)
    slack = tol * (1.0 + radius(region))
    inside = bool(np.all(contains(region, pts, slack)))
    if region.degenerate == "point":
        return inside, 1.0
    if region.degenerate == "segment":
        length = float(np.max(region.widths()))
        coverage = geometry.diameter(pts) / length if length > 0 else 1.0
    else:
        area = geometry.shoelace_area(region.vertices)
        coverage = geometry.shoelace_area(geometry.convex_hull(pts)) / area
    return inside, float(min(max(coverage, 0.0), 1.0))


# -- rank-one probe -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Witness:
    """Operator ``B`` for which ``W_c(AB)`` breaks the rank-one foci property."""

    kind: str
    B: np.ndarray
    product: object
    reason: str
    residual: float


def _isometric_pair(block):
    # x_i = v_i / sigma_i for the two leading right singular vectors, so that
    # A x_1, A x_2 are orthonormal.
    w, V = jacobi_eigh(adjoint(block) @ block, vectors=True)
    sig = np.sqrt(np.clip(w[:2], 0.0, None))
    X = V[:, :2] / sig
    Y = orthonormalize(block @ X)
    return X, Y


def foci_ratio_residual(fit, c, ambient):
    """Distance from the fitted foci to the nearest pair ``(cbar_1 t, ctilde_k t)``."""
    adj = adjusted(c, ambient)
    c1, ck = adj.cbar[0], adj.ctilde[-1]
    best = np.inf
    for f1, f2 in ((fit.focus1, fit.focus2), (fit.focus2, fit.focus1)):
        t = (c1 * f1 + ck * f2) / (c1 * c1 + ck * ck)
        best = min(best, abs(c1 * t - f1) + abs(ck * t - f2))
    return float(best)


def rank_one_violation(AB, c, N=720):
    """Why ``W_c(AB)`` cannot be the range of a rank-one operator, or ``None``.

    Returns ``(reason, residual)``: a singleton, a non-elliptical region, or
    foci not of the form ``cbar_1 t, ctilde_k t``.
    """
    region = boundary(AB, c, N)
    scale = 1.0 + float(np.max(np.abs(region.h)))
    if region.degenerate == "point":
        return "singleton", float(np.max(region.widths()))
    ok, fit, residual = is_ellipse(region)
    if not ok:
        return "not an ellipse", residual
    ratio = foci_ratio_residual(fit, c, AB.ambient)
    if ratio > 1e-6 * scale:
        return "foci ratio", ratio
    return None


def rank1_probe(A, c, N=720):
    """``(True, None)`` for rank-one ``A``; otherwise ``(False, witness)``.

    The witness ``B`` is built from ``x_1, x_2`` with ``A x_1 ⟂ A x_2`` unit
    vectors, and the product ``AB`` is checked numerically before returning.
    """
    A = as_operator(A)
    c = as_coefficients(c)
    rank = numerical_rank(A.block)
    if rank == 0:
        raise ContractError("rank1_probe needs a nonzero operator")
    if rank == 1:
        return True, None
    X, Y = _isometric_pair(A.block)
    x1, x2 = X[:, 0], X[:, 1]
    y1, y2 = Y[:, 0], Y[:, 1]
    k = c.k
    regime = classify_regime(c)
    if regime.case == 1:
        kind, B = "B1", np.outer(x1, y1.conj()) - np.outer(x2, y2.conj())
    elif c[1] + c[k - 2] != 0:
        kind, B = "B2", 2.0 * np.outer(x1, y1.conj()) + np.outer(x2, y2.conj())
    elif A.ambient == 2:
        kind, B = "B3", np.outer(x1, y1.conj()) + np.outer(x2, y2.conj())
    else:
        kind = "B4"
        B = 2.0 * np.outer(x1, y1.conj()) + np.outer(x2, y1.conj()) + np.outer(x2, y2.conj())
    product = A.with_block(A.block @ B)
    found = rank_one_violation(product, c, N)
    if found is None:
        raise InconsistencyError(
            f"{kind} witness for a rank-{rank} operator did not violate the rank-one foci property"
        )
    return False, Witness(kind, B, product, *found)
