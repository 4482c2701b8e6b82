"""c-numerical ranges as intervals (self-adjoint case) and support functions.

Conventions: the support function of a compact convex set ``K`` is
``h(theta) = max_{z in K} Re(e^{i theta} z)``. For ``K = W_c(A)`` this equals the
upper end ``M_c`` of ``W_c(Re(e^{i theta} A))``, so every closed-form and numeric
comparison in the package is made on ``h``.
"""

from dataclasses import dataclass

import numpy as np

from . import geometry
from .coefficients import as_coefficients, pad_to_dimension
from .errors import ContractError, DimensionError
from .linalg import (
    INFINITE,
    adjoint,
    as_operator,
    check_hermitian,
    jacobi_eigh,
    rotated_real_parts,
)

DEFAULT_GRID = 720
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ContractError(f"empty interval [{self.lo}, {self.hi}]")

    def __iter__(self):
        return iter((self.lo, self.hi))


# -- eigenvalue sums ---------------------------------------------------------

def _finite_sums(lam, c, n):
    """(hi, lo) for eigenvalue rows ``lam`` (non-increasing) of a block padded to ``n``."""
    batch, m = lam.shape
    # W_c(B (+) 0_{n-m}) no longer changes once n >= m + k.
    n_eff = int(min(n, m + c.k))
    full = np.concatenate([lam, np.zeros((batch, n_eff - m))], axis=1)
    full = -np.sort(-full, axis=1)
    d = np.asarray(pad_to_dimension(c, n_eff))
    hi = full @ d
    lo = full[:, ::-1] @ d
    return hi, lo


def _top_k(values, k):
    """Largest ``k`` entries of each row, non-increasing, zero-padded."""
    batch, m = values.shape
    if m < k:
        values = np.concatenate([values, np.zeros((batch, k - m))], axis=1)
    return -np.sort(-values, axis=1)[:, :k]


def _infinite_sums(lam, c):
    """(M_c, m_c) for the zero-tail model, by the explicit sup/inf over ``l``."""
    k = c.k
    cv = np.asarray(c.entries)
    pos = _top_k(np.clip(lam, 0.0, None), k)      # lambda_j(S)
    neg = _top_k(np.clip(-lam, 0.0, None), k)     # lambda_j(-S)
    zero = np.zeros((lam.shape[0], 1))
    head_pos = np.concatenate([zero, np.cumsum(cv * pos, axis=1)], axis=1)
    head_neg = np.concatenate([zero, np.cumsum(cv * neg, axis=1)], axis=1)
    tail_pos = np.concatenate([zero, np.cumsum(cv[::-1] * pos, axis=1)], axis=1)
    tail_neg = np.concatenate([zero, np.cumsum(cv[::-1] * neg, axis=1)], axis=1)
    ls = np.arange(k + 1)
    upper = head_pos[:, ls] - tail_neg[:, k - ls]
    lower = -head_neg[:, ls] + tail_pos[:, k - ls]
    return upper.max(axis=1), lower.min(axis=1)


def _eigen_sums(lam, c, ambient):
    if ambient == INFINITE:
        return _infinite_sums(lam, c)
    return _finite_sums(lam, c, ambient)


def selfadjoint_interval(S, c):
    """``W_c(S)`` for Hermitian ``S`` on a finite-dimensional space."""
    S = as_operator(S)
    c = as_coefficients(c)
    if S.is_infinite:
        raise ContractError("use selfadjoint_interval_infinite for infinite ambient")
    check_hermitian(S.block)
    if S.ambient < c.k:
        raise DimensionError(f"ambient dimension {S.ambient} < k = {c.k}")
    lam = jacobi_eigh(S.block)[None, :]
    hi, lo = _finite_sums(lam, c, S.ambient)
    return Interval(float(lo[0]), float(hi[0]))


def selfadjoint_interval_infinite(S, c):
    """Closure of ``W_c(S (+) 0)`` on an infinite-dimensional space."""
    S = as_operator(S)
    c = as_coefficients(c)
    if not S.is_infinite:
        raise ContractError("operator is not on an infinite-dimensional space")
    check_hermitian(S.block)
    lam = jacobi_eigh(S.block)[None, :]
    upper, lower = _infinite_sums(lam, c)
    return Interval(float(lower[0]), float(upper[0]))


def interval(S, c):
    """Dispatch on the ambient dimension of ``S``."""
    S = as_operator(S)
    if S.is_infinite:
        return selfadjoint_interval_infinite(S, c)
    return selfadjoint_interval(S, c)


# -- support functions -------------------------------------------------------

def support_envelopes(A, c, thetas):
    """Upper and lower support ``(M_c, m_c)`` of ``Re(e^{i theta} A)`` per angle."""
    A = as_operator(A)
    c = as_coefficients(c)
    if A.ambient < c.k:
        raise DimensionError(f"ambient dimension {A.ambient} < k = {c.k}")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    lam = jacobi_eigh(rotated_real_parts(A.block, thetas))
    return _eigen_sums(lam, c, A.ambient)


def support_values(A, c, thetas):
    return support_envelopes(A, c, thetas)[0]


def support_value(A, c, theta):
    """``h(theta) = M_c(Re(e^{i theta} A))``, the support of ``W_c(A)``."""
    return float(support_values(A, c, [theta])[0])


def lower_support_values(A, c, thetas):
    """``m_c(Re(e^{i theta} A)) = -h(theta + pi)``."""
    return support_envelopes(A, c, thetas)[1]


def grid(N):
    return 2.0 * np.pi * np.arange(N) / N


@dataclass(frozen=True, eq=False)
class SupportFunction:
    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.thetas) < 16:
            raise ContractError("support grids need at least 16 angles")
        if len(self.thetas) != len(self.values):
            raise ContractError("angles and support values differ in length")

    @property
    def N(self):
        return len(self.thetas)

    def opposite(self):
        """``h(theta + pi)`` on the same grid (requires even N)."""
        if self.N % 2:
            raise ContractError("grid size must be even to pair opposite angles")
        return np.roll(self.values, -self.N // 2)


@dataclass(frozen=True, eq=False)
class RangeRegion:
    """Sampled support function plus its circumscribed boundary polygon.

    ``degenerate`` is ``"point"``, ``"segment"`` or ``None``.
    """

    support: SupportFunction
    vertices: np.ndarray
    degenerate: str = None

    @property
    def thetas(self):
        return self.support.thetas

    @property
    def h(self):
        return self.support.values

    @property
    def N(self):
        return self.support.N

    def widths(self):
        return self.h + self.support.opposite()


def _width_at(A, c, theta):
    hi, lo = support_envelopes(A, c, [theta])
    return float(hi[0] - lo[0])


def _detect_degenerate(A, c, sf, tol):
    h = sf.values
    width = h + sf.opposite()
    scale = 1.0 + float(np.max(np.abs(h)))
    thresh = tol * scale
    if float(np.max(width)) <= thresh:
        return "point"
    i = int(np.argmin(width))
    if width[i] <= thresh:
        return "segment"
    if width[i] > 0.05 * float(np.max(width)) or A is None:
        return None
    # A segment has width L|sin(theta - psi)|; solve for psi from the two grid
    # neighbours of the minimum and test the exact width there.
    N = sf.N
    step = 2.0 * np.pi / N
    for j in ((i - 1) % N, (i + 1) % N):
        a, b = (j, i) if j == (i - 1) % N else (i, j)
        wa, wb = width[a], width[b]
        psi = sf.thetas[a] + np.arctan2(wa * np.sin(step), wb + wa * np.cos(step))
        if _width_at(A, c, psi) <= thresh:
            return "segment"
    return None


def region_from_support(thetas, h, operator=None, c=None, tol=DEGENERACY_TOL):
    sf = SupportFunction(np.asarray(thetas, dtype=float), np.asarray(h, dtype=float))
    vertices = geometry.support_line_vertices(sf.thetas, sf.values)
    degenerate = _detect_degenerate(operator, c, sf, tol) if sf.N % 2 == 0 else None
    return RangeRegion(sf, vertices, degenerate)


def boundary(A, c, N=DEFAULT_GRID):
    """Support-function representation of ``W_c(A)`` on ``N`` equally spaced angles."""
    if N < 16 or N % 2:
        raise ContractError(f"grid size must be even and at least 16, got {N}")
    A = as_operator(A)
    c = as_coefficients(c)
    thetas = grid(N)
    h = support_values(A, c, thetas)
    return region_from_support(thetas, h, A, c)


def radius(region):
    """``r_c = max_theta h(theta)``, evaluated on the grid.

    For a compact convex set ``max |z| = max_theta h(theta)``; the grid value is a
    lower bound exact for discs, segments whose direction is on the grid, and points.
    """
    return max(float(np.max(region.h)), 0.0)


def contains(region, z, tol=1e-9):
    """Whether ``z`` lies in every sampled supporting half-plane (within ``tol``)."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    proj = np.real(np.exp(1j * region.thetas)[None, :] * z[:, None])
    inside = np.all(proj <= region.h[None, :] + tol, axis=1)
    return bool(inside[0]) if inside.size == 1 else inside


def is_symmetric(region, tol=1e-8):
    """``K == -K`` tested as ``h(theta) == h(theta + pi)`` on the grid."""
    h = region.h
    dev = np.max(np.abs(h - region.support.opposite()))
    return bool(dev <= tol * (1.0 + np.max(np.abs(h))))


def max_deviation(r1, r2):
    if r1.N != r2.N or not np.allclose(r1.thetas, r2.thetas, rtol=0.0, atol=1e-15):
        raise ContractError("regions are sampled on different grids")
    return float(np.max(np.abs(r1.h - r2.h)))


def regions_equal(r1, r2, tol=1e-8):
    dev = max_deviation(r1, r2)
    return dev <= tol * (1.0 + float(np.max(np.abs(r1.h))))


def is_convex(region, slack=1e-9):
    scale = 1.0 + radius(region)
    return geometry.is_convex_polyline(region.vertices, slack * scale * scale)


def hermitian_part_deviation(A):
    A = as_operator(A).block
    return float(np.max(np.abs(A - adjoint(A)), initial=0.0))


def numerical_radius(A, c, N=DEFAULT_GRID):
    return radius(boundary(A, c, N))

