"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex128 arrays. The Hermitian eigensolver is a
batched cyclic Jacobi method; singular values come from Jacobi applied to the
Hermitian dilation ``[[0, A], [A*, 0]]``, which keeps tiny singular values
accurate to roughly machine epsilon times the largest one.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericError, ShapeError
from .prng import SplitMix64

INFINITE = math.inf

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
RANK_TOL = 1e-10


def as_matrix(A, square=False):
    """Coerce ``A`` to a finite 2-D complex128 array."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ShapeError("matrix has non-finite entries")
    if square and M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    return M


def adjoint(A):
    return np.conj(np.swapaxes(A, -1, -2))


@dataclass(frozen=True, eq=False)
class OperatorModel:
    """A square block ``B`` standing for ``B (+) 0`` on a larger space.

    ``ambient`` is the dimension of the whole space: an integer ``n >= m`` for
    ``B (+) 0_{n-m}``, or ``INFINITE`` for ``B (+) 0`` on an infinite-dimensional
    space (essential spectrum {0}).
    """

    block: np.ndarray
    ambient: float

    def __post_init__(self):
        block = as_matrix(self.block, square=True)
        block.setflags(write=False)
        object.__setattr__(self, "block", block)
        ambient = self.ambient
        if ambient != INFINITE:
            if int(ambient) != ambient:
                raise DimensionError(f"ambient dimension must be an integer, got {ambient}")
            ambient = int(ambient)
            if ambient < block.shape[0]:
                raise DimensionError(
                    f"ambient dimension {ambient} is smaller than block size {block.shape[0]}"
                )
        object.__setattr__(self, "ambient", ambient)

    @property
    def size(self):
        return self.block.shape[0]

    @property
    def is_infinite(self):
        return self.ambient == INFINITE

    def dense(self):
        """The full ``n x n`` matrix (finite ambient only)."""
        if self.is_infinite:
            raise DimensionError("an infinite-dimensional operator has no dense form")
        full = np.zeros((self.ambient, self.ambient), dtype=np.complex128)
        m = self.size
        full[:m, :m] = self.block
        return full

    def with_block(self, block):
        return OperatorModel(block, self.ambient)


def as_operator(A, ambient=None):
    """Wrap a matrix as an :class:`OperatorModel` (ambient defaults to its size)."""
    if isinstance(A, OperatorModel):
        if ambient is not None and ambient != A.ambient:
            return OperatorModel(A.block, ambient)
        return A
    M = as_matrix(A, square=True)
    return OperatorModel(M, M.shape[0] if ambient is None else ambient)


def check_hermitian(H, tol=HERMITIAN_TOL):
    """Raise :class:`ShapeError` unless ``H`` is Hermitian within ``tol``."""
    H = as_matrix(H, square=True)
    scale = max(1.0, float(np.max(np.abs(H), initial=0.0)))
    dev = float(np.max(np.abs(H - adjoint(H)), initial=0.0))
    if dev > tol * scale:
        raise ShapeError(f"matrix is not Hermitian (max |H - H*| = {dev:.3e})")
    return H


def jacobi_eigh(H, vectors=False, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Batched cyclic Jacobi eigensolver for Hermitian matrices.

    ``H`` has shape ``(..., n, n)`` and is assumed Hermitian; it is symmetrised
    before iterating. Returns eigenvalues sorted non-increasing along the last
    axis, and the matching unitary eigenvector matrices when ``vectors`` is set.
    """
    H = np.asarray(H, dtype=np.complex128)
    lead = H.shape[:-2]
    n = H.shape[-1]
    A = H.reshape((-1, n, n))
    A = 0.5 * (A + adjoint(A))
    V = np.broadcast_to(np.eye(n, dtype=np.complex128), A.shape).copy() if vectors else None

    fro = np.sqrt(np.sum(np.abs(A) ** 2, axis=(1, 2)))
    limit = tol * fro
    offmask = ~np.eye(n, dtype=bool)
    converged = n < 2
    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=1))
        if np.all(off <= limit):
            converged = True
            break
        if _ == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(A, V, p, q)
    if not converged:
        raise NumericError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.real(np.diagonal(A, axis1=1, axis2=2)).copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if vectors:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
        return w.reshape(lead + (n,)), V.reshape(lead + (n, n))
    return w.reshape(lead + (n,))


def _rotate(A, V, p, q):
    # A <- J* A J with J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on rows/cols p, q.
    apq = A[:, p, q]
    g = np.abs(apq)
    active = g > 0.0
    if not np.any(active):
        return
    app = A[:, p, p].real.copy()
    aqq = A[:, q, q].real.copy()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        phase = np.where(active, apq / np.where(active, g, 1.0), 1.0)
        tau = (aqq - app) / (2.0 * g)
        t = np.where(
            np.isfinite(tau),
            np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)),
            0.0,
        )
    t = np.where(tau == 0.0, 1.0, t)
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    d2 = np.conj(phase)
    jpp, jpq, jqp, jqq = c, s, -s * d2, c * d2

    colp = A[:, :, p].copy()
    colq = A[:, :, q]
    A[:, :, p] = colp * jpp[:, None] + colq * jqp[:, None]
    A[:, :, q] = colp * jpq[:, None] + colq * jqq[:, None]
    rowp = A[:, p, :].copy()
    rowq = A[:, q, :]
    A[:, p, :] = np.conj(jpp)[:, None] * rowp + np.conj(jqp)[:, None] * rowq
    A[:, q, :] = np.conj(jpq)[:, None] * rowp + np.conj(jqq)[:, None] * rowq
    A[:, p, q] = 0.0
    A[:, q, p] = 0.0
    A[:, p, p] = app - t * g
    A[:, q, q] = aqq + t * g

    if V is not None:
        vp = V[:, :, p].copy()
        vq = V[:, :, q]
        V[:, :, p] = vp * jpp[:, None] + vq * jqp[:, None]
        V[:, :, q] = vp * jpq[:, None] + vq * jqq[:, None]


def hermitian_eigenvalues(H):
    """Eigenvalues of a Hermitian matrix, sorted non-increasing.

    >>> hermitian_eigenvalues([[0, 1], [1, 0]]).round(12).tolist()
    [1.0, -1.0]
    """
    H = check_hermitian(H)
    return jacobi_eigh(H)


def hermitian_eigh(H):
    """Eigenvalues (non-increasing) and orthonormal eigenvectors (columns)."""
    H = check_hermitian(H)
    return jacobi_eigh(H, vectors=True)


def rotated_real_part(A, theta):
    """``(e^{i theta} A + e^{-i theta} A*) / 2``, exactly Hermitian."""
    A = as_matrix(A, square=True)
    return rotated_real_parts(A, np.array([theta], dtype=float))[0]


def rotated_real_parts(A, thetas):
    """Stack of rotated real parts, shape ``(len(thetas), m, m)``."""
    phase = np.exp(1j * np.asarray(thetas, dtype=float))[:, None, None]
    X = phase * A[None, :, :]
    return 0.5 * (X + adjoint(X))


def singular_values(A):
    """Singular values, non-increasing, from the Hermitian dilation."""
    A = as_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        return np.zeros(0)
    K = np.zeros((m + n, m + n), dtype=np.complex128)
    K[:m, m:] = A
    K[m:, :m] = adjoint(A)
    w = jacobi_eigh(K)
    return np.abs(w[: min(m, n)])


def operator_norm(A):
    sv = singular_values(A)
    return float(sv[0]) if sv.size else 0.0


def trace(A):
    A = as_matrix(A, square=True)
    return complex(np.trace(A))


def numerical_rank(A, tol=RANK_TOL):
    """Number of singular values above ``tol * sigma_max``."""
    sv = singular_values(A)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def rank_one(x, f):
    """The operator ``x (x) f`` acting as ``z -> <z, f> x``, i.e. ``x f*``."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    f = np.asarray(f, dtype=np.complex128).ravel()
    return np.outer(x, np.conj(f))


def orthonormalize(X):
    """Batched modified Gram-Schmidt with one re-orthogonalisation pass.

    Works on ``(..., n, k)`` arrays and returns matrices with orthonormal
    columns spanning the same flag of subspaces.
    """
    Q = np.array(X, dtype=np.complex128)
    k = Q.shape[-1]
    for _ in range(2):
        for j in range(k):
            v = Q[..., :, j]
            for i in range(j):
                u = Q[..., :, i]
                v = v - np.sum(np.conj(u) * v, axis=-1, keepdims=True) * u
            nrm = np.sqrt(np.sum(np.abs(v) ** 2, axis=-1, keepdims=True))
            if np.any(nrm == 0.0):
                raise NumericError("rank-deficient input to orthonormalize")
            Q[..., :, j] = v / nrm
    return Q


def random_frame(n, k, seed):
    """``k`` orthonormal columns in ``C^n``, deterministic in ``seed``."""
    if k > n:
        raise DimensionError(f"cannot fit {k} orthonormal vectors in dimension {n}")
    G = SplitMix64(seed).complex_normal((n, k))
    return orthonormalize(G)


def random_unitary(n, seed):
    return random_frame(n, n, seed)


def random_matrix(n, seed, rank=None, scale=1.0):
    """Random complex ``n x n`` matrix; with ``rank`` set, an exact low-rank product.

    Low-rank matrices are built as ``U diag(s) V*`` with singular values drawn
    from [0.5, 2].
    """
    rng = SplitMix64(seed)
    if rank is None:
        return scale * rng.complex_normal((n, n))
    if not 0 <= rank <= n:
        raise DimensionError(f"rank {rank} impossible in dimension {n}")
    U = orthonormalize(rng.complex_normal((n, n)))
    V = orthonormalize(rng.complex_normal((n, n)))
    s = 0.5 + 1.5 * rng.uniform(rank)
    return scale * (U[:, :rank] * s) @ adjoint(V[:, :rank])


def random_hermitian(n, seed, scale=1.0):
    G = SplitMix64(seed).complex_normal((n, n))
    return scale * 0.5 * (G + adjoint(G))


def null_vector(A):
    """Unit vector minimising ``||A x||`` and that minimum."""
    A = as_matrix(A)
    w, V = jacobi_eigh(adjoint(A) @ A, vectors=True)
    x = V[:, -1]
    return x, float(np.linalg.norm(A @ x))
